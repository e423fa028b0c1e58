"""
Proof transformations between the sequent and focusing calculi
--------------------------------------------------------------
``defocus`` forgets focus information. ``focalize`` goes the other way by
induction on the sequent proof, using the admissibility of identity,
invertibility of right implication and elimination of the mix rule.

Mix is never a proof constructor: ``eliminate_mix`` computes the mix-free
proof directly by induction on the cut formula and then on the right proof.
"""
import logging
from typing import Optional

from app.core.exceptions import InvalidProofError, ShapeMismatchError, UnsupportedConnectiveError
from app.models.enums import FrRule, LrRule
from app.models.formula import Atom, Formula, Imp, arguments, head, is_implicational
from app.models.proof import FrProof, LrProof
from app.models.sequent import FocusSequent, Sequent, mdiff, mremove, msum
from app.services.fr_prover import check_fr_proof
from app.services.lr_prover import check_lr_proof

logger = logging.getLogger(__name__)


def defocus(p: FrProof) -> LrProof:
    report = check_fr_proof(p)
    if not report:
        raise InvalidProofError(f"not a valid focusing proof: {report.message}", details={"path": report.path})
    return _defocus(p)


def _defocus(p: FrProof) -> LrProof:
    if p.rule == FrRule.FOCUS:
        return _defocus(p.premises[0])
    conclusion = p.conclusion.unfocused()
    premises = tuple(_defocus(q) for q in p.premises)
    if p.rule == FrRule.ATOMIC_ID:
        return LrProof(LrRule.ID, conclusion, (), p.conclusion.succedent)
    if p.rule == FrRule.CONTRACTION:
        return LrProof(LrRule.CONTRACTION, conclusion, premises, p.principal)
    if p.rule == FrRule.IMP_L:
        return LrProof(LrRule.IMP_L, conclusion, premises, p.conclusion.focus)
    return LrProof(LrRule.IMP_R, conclusion, premises, p.conclusion.succedent)


def _require_implicational(f: Formula) -> None:
    if not is_implicational(f):
        raise UnsupportedConnectiveError("focusing transformations cover implication only")


def focused_identity(a_formula: Formula) -> FrProof:
    """``A1, ..., An, [A] |- a`` for ``A = A1->...->An->a``."""
    _require_implicational(a_formula)
    if isinstance(a_formula, Atom):
        return FrProof(FrRule.ATOMIC_ID, FocusSequent((), a_formula, a_formula), (), a_formula)
    left = admissible_identity(a_formula.left)
    right = focused_identity(a_formula.right)
    context = msum(left.conclusion.antecedent, right.conclusion.antecedent)
    return FrProof(
        FrRule.IMP_L,
        FocusSequent(context, a_formula, right.conclusion.succedent),
        (left, right),
        a_formula,
    )


def admissible_identity(a_formula: Formula) -> FrProof:
    """A focusing proof of ``A |- A``."""
    _require_implicational(a_formula)
    inner = focused_identity(a_formula)
    node = FrProof(
        FrRule.FOCUS,
        FocusSequent(msum(inner.conclusion.antecedent, (a_formula,)), None, inner.conclusion.succedent),
        (inner,),
        a_formula,
    )
    return wrap_impr(node, arguments(a_formula))


def wrap_impr(p: FrProof, args) -> FrProof:
    """Discharge ``args`` (innermost last) with right implications."""
    node = p
    for arg in reversed(list(args)):
        context = mremove(node.conclusion.antecedent, arg)
        if context is None:
            raise ShapeMismatchError("cannot discharge a formula missing from the context")
        succedent = Imp(arg, node.conclusion.succedent)
        node = FrProof(FrRule.IMP_R, FocusSequent(context, None, succedent), (node,), succedent)
    return node


def invert_impr(p: FrProof) -> FrProof:
    c = p.conclusion
    if c.focus is not None or not isinstance(c.succedent, Imp):
        raise InvalidProofError("inversion needs an unfocused implication succedent")
    if p.rule != FrRule.IMP_R:
        raise InvalidProofError(f"proof of an implication ends with {p.rule.value}, not ImpRf")
    return p.premises[0]


def invert_all(p: FrProof) -> FrProof:
    while isinstance(p.conclusion.succedent, Imp):
        p = invert_impr(p)
    return p


def _contract(p: FrProof, copies) -> FrProof:
    """Contract one copy of every formula in ``copies`` below ``p``."""
    node = p
    for x in copies:
        c = node.conclusion
        context = mremove(c.antecedent, x)
        if context is None or x not in context:
            raise ShapeMismatchError("contraction target has a single copy")
        node = FrProof(FrRule.CONTRACTION, FocusSequent(context, c.focus, c.succedent), (node,), x)
    return node


def _mix(left: FrProof, right: FrProof, k: int) -> FrProof:
    """Cut ``k >= 1`` context copies of the left succedent out of ``right``."""
    cut = left.conclusion.succedent
    gamma = left.conclusion.antecedent
    c = right.conclusion
    if k < 1 or c.antecedent.count(cut) < k:
        raise ShapeMismatchError(f"right proof holds fewer than {k} copies of the cut formula")

    if right.rule == FrRule.IMP_R:
        premise = _mix(left, right.premises[0], k)
        pc = premise.conclusion
        arg = c.succedent.left
        return FrProof(FrRule.IMP_R, FocusSequent(mremove(pc.antecedent, arg), None, c.succedent), (premise,), c.succedent)

    if right.rule == FrRule.FOCUS:
        (premise,) = right.premises
        x = premise.conclusion.focus
        if x == cut:
            return _mix_focus(left, premise, k - 1)
        inner = _mix(left, premise, k)
        ic = inner.conclusion
        return FrProof(FrRule.FOCUS, FocusSequent(msum(ic.antecedent, (x,)), None, ic.succedent), (inner,), x)

    if right.rule == FrRule.CONTRACTION:
        (premise,) = right.premises
        x = right.principal
        if x == cut:
            return _mix(left, premise, k + 1)
        inner = _mix(left, premise, k)
        return _contract(inner, (x,))

    if right.rule == FrRule.IMP_L:
        p1, p2 = right.premises
        n1 = min(k, p1.conclusion.antecedent.count(cut))
        n2 = k - n1
        r1 = _mix(left, p1, n1) if n1 else p1
        r2 = _mix(left, p2, n2) if n2 else p2
        node = FrProof(
            FrRule.IMP_L,
            FocusSequent(msum(r1.conclusion.antecedent, r2.conclusion.antecedent), c.focus, c.succedent),
            (r1, r2),
            c.focus,
        )
        return _contract(node, gamma) if n1 and n2 else node

    raise ShapeMismatchError(f"cannot cut context copies out of a {right.rule.value} step")


def _mix_focus(left: FrProof, right: FrProof, n: int) -> FrProof:
    """Cut the focused occurrence and ``n`` context copies of the left succedent."""
    cut = left.conclusion.succedent
    gamma = left.conclusion.antecedent
    c = right.conclusion
    if c.focus != cut:
        raise ShapeMismatchError("right proof does not focus the cut formula")

    if right.rule == FrRule.ATOMIC_ID:
        if n:
            raise ShapeMismatchError("identity axiom has no context copies to cut")
        return left

    if right.rule == FrRule.CONTRACTION:
        (premise,) = right.premises
        x = right.principal
        if x == cut:
            return _mix_focus(left, premise, n + 1)
        inner = _mix_focus(left, premise, n)
        return _contract(inner, (x,))

    if right.rule == FrRule.IMP_L:
        p1, p2 = right.premises
        n1 = min(n, p1.conclusion.antecedent.count(cut))
        n2 = n - n1
        # consequent first: Gamma, A' |- B' against the focused B'
        inverted = invert_impr(left)
        r2 = _mix(left, p2, n2) if n2 else p2
        s1 = _mix_focus(inverted, r2, 0)
        if n2:
            s1 = _contract(s1, gamma)
        # then the argument A'
        r1 = _mix(left, p1, n1) if n1 else p1
        result = _mix(r1, s1, 1)
        return _contract(result, gamma) if n1 else result

    raise ShapeMismatchError(f"a focused {right.rule.value} step cannot carry the cut formula")


def eliminate_mix(left: FrProof, right: FrProof, occurrences: int, focused: bool = False) -> FrProof:
    """Mix-free proof of the conclusion of a mix between ``left`` and ``right``.

    With ``focused`` the right proof focuses the cut formula and
    ``occurrences`` counts the extra context copies (n >= 0); otherwise it
    counts context copies only (n >= 1).
    """
    if left.conclusion.focus is not None:
        raise ShapeMismatchError("left premise of mix must be unfocused")
    result = _mix_focus(left, right, occurrences) if focused else _mix(left, right, occurrences)
    logger.debug(f"mix on {occurrences} occurrences: {left.size()} + {right.size()} nodes -> {result.size()}")
    return result


def focalize(p: LrProof) -> FrProof:
    report = check_lr_proof(p)
    if not report:
        raise InvalidProofError(f"not a valid sequent proof: {report.message}", details={"path": report.path})
    result = _focalize(p)
    logger.info(f"focalize: {p.size()} sequent nodes -> {result.size()} focusing nodes")
    return result


def _focalize(p: LrProof) -> FrProof:
    c = p.conclusion
    if p.rule == LrRule.ID:
        return admissible_identity(c.succedent)

    if p.rule == LrRule.IMP_R:
        premise = _focalize(p.premises[0])
        return FrProof(FrRule.IMP_R, FocusSequent(c.antecedent, None, c.succedent), (premise,), c.succedent)

    if p.rule == LrRule.CONTRACTION:
        premise = invert_all(_focalize(p.premises[0]))
        contracted = _contract(premise, (p.principal,))
        return wrap_impr(contracted, arguments(c.succedent))

    if p.rule == LrRule.IMP_L:
        principal = p.principal
        a, b = principal.left, principal.right
        fa = _focalize(p.premises[0])
        fc = _focalize(p.premises[1])
        # Gamma, A->B |- B
        chain = FrProof(
            FrRule.IMP_L,
            FocusSequent(msum((a,), arguments(b)), principal, head(b)),
            (admissible_identity(a), focused_identity(b)),
            principal,
        )
        opened = FrProof(
            FrRule.FOCUS,
            FocusSequent(msum(chain.conclusion.antecedent, (principal,)), None, head(b)),
            (chain,),
            principal,
        )
        q = wrap_impr(_mix(fa, opened, 1), arguments(b))
        # Delta, B, C1..Cp |- c, then cut B against q
        joined = _mix(q, invert_all(fc), 1)
        return wrap_impr(joined, arguments(c.succedent))

    raise UnsupportedConnectiveError(f"{p.rule.value} is outside the implicational fragment")


def mix_conclusion(left: FrProof, right: FrProof, occurrences: int, focused: bool = False) -> Optional[FocusSequent]:
    """The sequent a mix of ``left`` and ``right`` should conclude, or None if ill-formed."""
    cut = left.conclusion.succedent
    c = right.conclusion
    removed = (cut,) * occurrences
    rest = mdiff(c.antecedent, removed)
    if rest is None:
        return None
    if focused:
        if c.focus != cut:
            return None
        return FocusSequent(msum(left.conclusion.antecedent, rest), None, c.succedent)
    return FocusSequent(msum(left.conclusion.antecedent, rest), c.focus, c.succedent)


def same_endsequent(lr: LrProof, fr: FrProof) -> bool:
    return fr.conclusion.focus is None and Sequent(fr.conclusion.antecedent, fr.conclusion.succedent) == lr.conclusion
