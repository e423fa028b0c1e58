"""
Focusing calculus
-----------------
Checker and decision procedure for the focused presentation of the
implicational fragment. Right implications are applied eagerly; at an
atomic succedent the search focuses on a context formula whose head is that
atom and decomposes it with focused left implications.

The search never enumerates context splits directly. Each goal carries a
box of admissible contexts, one ``[lo, hi]`` interval per subformula, and a
premise receives the part of the lower bounds it promises to consume. Any
member of a box may stand in for any other once contraction has collapsed
the surplus copies. Failures that relied on pruning against the current
path are kept together with the pruning boxes and replayed on later paths.
"""
import itertools
import logging
from collections import defaultdict
from typing import Dict, Iterator, List, Optional, Set, Tuple

from app.core.config import settings
from app.core.exceptions import ResourceLimitError, UnsupportedConnectiveError
from app.models.enums import FrRule
from app.models.formula import Atom, Formula, Imp, is_implicational
from app.models.proof import FrProof
from app.models.results import NOT_PROVABLE, ProofResult
from app.models.sequent import FocusSequent, msum
from app.schemas.common import CheckReport
from app.services.indexing import ATOM, IMP, NO_DEPENDENCIES, Counts, Dependencies, FormulaIndex, bump

logger = logging.getLogger(__name__)

# goal and box of a path entry
_Entry = Tuple[int, Counts, Counts]

_ARITY = {
    FrRule.ATOMIC_ID: 0,
    FrRule.FOCUS: 1,
    FrRule.CONTRACTION: 1,
    FrRule.IMP_L: 2,
    FrRule.IMP_R: 1,
}


def _check_node(node: FrProof) -> Optional[str]:
    c = node.conclusion
    ps = [p.conclusion for p in node.premises]
    if len(ps) != _ARITY[node.rule]:
        return f"expected {_ARITY[node.rule]} premises, found {len(ps)}"
    if c.focus is not None and not isinstance(c.succedent, Atom):
        return "focused sequent with a non-atomic succedent"

    if node.rule == FrRule.ATOMIC_ID:
        if c.antecedent or not isinstance(c.focus, Atom) or c.focus != c.succedent:
            return "conclusion is not [a] |- a"
    elif node.rule == FrRule.FOCUS:
        p = ps[0]
        if c.focus is not None:
            return "conclusion of a focus step must be unfocused"
        if p.focus is None or not isinstance(c.succedent, Atom) or p.succedent != c.succedent:
            return "premise must focus a formula under the same atomic succedent"
        if node.principal is not None and node.principal != p.focus:
            return "principal differs from the focused formula"
        if msum(p.antecedent, (p.focus,)) != c.antecedent:
            return "conclusion context is not the premise context plus the focus"
    elif node.rule == FrRule.CONTRACTION:
        p = ps[0]
        x = node.principal
        if not isinstance(c.succedent, Atom):
            return "contraction needs an atomic succedent"
        if x is None or x not in c.antecedent:
            return "contracted formula missing from the conclusion"
        if p != FocusSequent(msum(c.antecedent, (x,)), c.focus, c.succedent):
            return "premise is not the conclusion with one extra copy"
    elif node.rule == FrRule.IMP_L:
        x = c.focus
        if not isinstance(x, Imp):
            return "conclusion must focus an implication"
        if not isinstance(c.succedent, Atom):
            return "left implication needs an atomic succedent"
        left, right = ps
        if left.focus is not None or left.succedent != x.left:
            return "left premise must be an unfocused proof of the argument"
        if right.focus != x.right or right.succedent != c.succedent:
            return "right premise must focus the consequent under the same succedent"
        if msum(left.antecedent, right.antecedent) != c.antecedent:
            return "context split does not add up to the conclusion"
    elif node.rule == FrRule.IMP_R:
        if c.focus is not None or not isinstance(c.succedent, Imp):
            return "right implication needs an unfocused implication succedent"
        expected = FocusSequent(msum(c.antecedent, (c.succedent.left,)), None, c.succedent.right)
        if ps[0] != expected:
            return "premise does not move the argument to the antecedent"
    return None


def check_fr_proof(p: FrProof) -> CheckReport:
    stack: List[Tuple[FrProof, List[int]]] = [(p, [])]
    while stack:
        node, path = stack.pop()
        problem = _check_node(node)
        if problem:
            return CheckReport.fail(path, f"{node.rule.value}: {problem}")
        for i in reversed(range(len(node.premises))):
            stack.append((node.premises[i], path + [i]))
    return CheckReport.ok()


def compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


Box = Tuple[Counts, Counts]


class _FocusSearch:
    def __init__(self, index: FormulaIndex, budget: int):
        self.ix = index
        self.budget = budget
        self.nodes = 0
        self.proved: Dict[Tuple[int, Counts, Counts], Tuple[FrProof, Counts]] = {}
        self.refuted: Set[_Entry] = set()
        self.refuted_below: Dict[_Entry, Set[Tuple[_Entry, ...]]] = defaultdict(set)
        self.path: Dict[int, List[Tuple[Counts, Counts, int]]] = defaultdict(list)
        self.trail: List[_Entry] = []
        self._reach: Dict[Tuple[int, int], int] = {}

    # -- relevance filter -------------------------------------------------

    def goal_heads(self, goal: int, available: int) -> int:
        """Atoms that may become goals while proving ``goal`` from ``available``."""
        key = (goal, available)
        cached = self._reach.get(key)
        if cached is not None:
            return cached
        ix = self.ix
        heads = 0
        hyps = 0
        pending = [goal]
        done = set()
        while pending:
            g = pending.pop()
            if g in done:
                continue
            done.add(g)
            heads |= 1 << ix.heads[g]
            for a in ix.args[g]:
                hyps |= 1 << a
            pool = available | hyps
            for z in range(ix.n):
                if (pool >> z) & 1 and (heads >> ix.heads[z]) & 1:
                    pending.extend(b for b in ix.args[z] if b not in done)
        self._reach[key] = heads
        return heads

    def usable(self, goal: int, hi: Counts) -> int:
        available = sum(1 << i for i, h in enumerate(hi) if h)
        heads = self.goal_heads(goal, available)
        return sum(1 << i for i in range(self.ix.n) if hi[i] and (heads >> self.ix.heads[i]) & 1)

    def canonical(self, goal: int, lo: Counts, hi: Counts) -> Optional[Counts]:
        """Zero out formulas that cannot be consumed; None if an obligation is among them."""
        while True:
            mask = self.usable(goal, hi)
            changed = False
            new_hi = list(hi)
            for i in range(self.ix.n):
                if hi[i] and not (mask >> i) & 1:
                    if lo[i]:
                        return None
                    new_hi[i] = 0
                    changed = True
            if not changed:
                return hi
            hi = tuple(new_hi)

    # -- proof assembly ---------------------------------------------------

    def sequent(self, ctx: Counts, focus: Optional[int], goal: int) -> FocusSequent:
        ix = self.ix
        return FocusSequent(ix.multiset(ctx), None if focus is None else ix.formula(focus), ix.formula(goal))

    def focused_chain(self, x: int, goal: int, premises: List[Tuple[FrProof, Counts]]) -> FrProof:
        """``Pi, [x] |- goal`` from proofs of every argument of ``x``."""
        ix = self.ix
        spine = [x]
        while ix.kind[spine[-1]] == IMP:
            spine.append(ix.right[spine[-1]])
        zero = tuple([0] * ix.n)
        node = FrProof(FrRule.ATOMIC_ID, self.sequent(zero, spine[-1], goal), (), ix.formula(spine[-1]))
        context = zero
        for k in reversed(range(len(premises))):
            proof, ctx = premises[k]
            context = tuple(a + b for a, b in zip(context, ctx))
            node = FrProof(FrRule.IMP_L, self.sequent(context, spine[k], goal), (proof, node), ix.formula(spine[k]))
        return node

    def close(self, chain: FrProof, raw: Counts, target: Counts, x: int, goal: int) -> FrProof:
        ix = self.ix
        node = FrProof(FrRule.FOCUS, self.sequent(raw, None, goal), (chain,), ix.formula(x))
        current = list(raw)
        for i in range(ix.n):
            while current[i] > target[i]:
                current[i] -= 1
                node = FrProof(FrRule.CONTRACTION, self.sequent(tuple(current), None, goal), (node,), ix.formula(i))
        return node

    # -- search -----------------------------------------------------------

    @staticmethod
    def covers(earlier: Box, later: Box) -> bool:
        """Every member of ``later`` contracts to a member of ``earlier``."""
        alo, ahi = earlier
        lo, hi = later
        for i in range(len(lo)):
            if lo[i] == 0 and alo[i] != 0:
                return False
            if hi[i] and (ahi[i] == 0 or max(alo[i], 1) > max(lo[i], 1)):
                return False
        return True

    def covering(self, goal: int, lo: Counts, hi: Counts) -> Optional[int]:
        """Depth of the deepest path entry whose box covers ``(lo, hi)``."""
        for alo, ahi, adepth in reversed(self.path.get(goal, ())):
            if self.covers((alo, ahi), (lo, hi)):
                return adepth
        return None

    def recall(self, key: _Entry) -> Optional[Dependencies]:
        """Replays a failure whose pruning entries are all covered on the current path."""
        for entries in self.refuted_below.get(key, ()):
            depths = []
            for goal, lo, hi in entries:
                found = self.covering(goal, lo, hi)
                if found is None:
                    break
                depths.append(found)
            else:
                return frozenset(depths)
        return None

    def search(self, goal: int, lo: Counts, hi: Counts, depth: int) -> Tuple[Optional[Tuple[FrProof, Counts]], Dependencies]:
        hi = self.canonical(goal, lo, hi)
        if hi is None:
            return None, NO_DEPENDENCIES
        key = (goal, lo, hi)
        if key in self.proved:
            return self.proved[key], NO_DEPENDENCIES
        if key in self.refuted:
            return None, NO_DEPENDENCIES
        pruned_by = self.covering(goal, lo, hi)
        if pruned_by is not None:
            return None, frozenset((pruned_by,))
        recalled = self.recall(key)
        if recalled is not None:
            return None, recalled

        self.nodes += 1
        if self.nodes > self.budget:
            raise ResourceLimitError(self.budget)

        ancestors = self.path[goal]
        ancestors.append((lo, hi, depth))
        self.trail.append(key)
        try:
            found, needs = self.expand(goal, lo, hi, depth)
            if found is not None:
                self.proved[key] = found
                return found, NO_DEPENDENCIES
            outer = frozenset(d for d in needs if d < depth)
            if not outer:
                self.refuted.add(key)
                return None, NO_DEPENDENCIES
            self.refuted_below[key].add(tuple(self.trail[d] for d in sorted(outer)))
            return None, outer
        finally:
            ancestors.pop()
            self.trail.pop()

    def expand(self, goal: int, lo: Counts, hi: Counts, depth: int) -> Tuple[Optional[Tuple[FrProof, Counts]], Dependencies]:
        ix = self.ix
        if ix.kind[goal] == IMP:
            a = ix.left[goal]
            found, needs = self.search(ix.right[goal], bump(lo, a), bump(hi, a), depth + 1)
            if found is None:
                return None, needs
            premise, ctx = found
            ctx = bump(ctx, a, -1)
            return (FrProof(FrRule.IMP_R, self.sequent(ctx, None, goal), (premise,), ix.formula(goal)), ctx), NO_DEPENDENCIES

        needs: Set[int] = set()
        for x in range(ix.n):
            if not hi[x] or ix.heads[x] != goal:
                continue
            if ix.kind[x] == ATOM:
                if lo[x] <= 1 and all(lo[y] == 0 for y in range(ix.n) if y != x):
                    ctx = tuple(1 if y == x else 0 for y in range(ix.n))
                    chain = self.focused_chain(x, goal, [])
                    return (self.close(chain, ctx, ctx, x, goal), ctx), NO_DEPENDENCIES
                continue
            found, dependency = self.focus_on(x, goal, lo, hi, depth)
            if found is not None:
                return found, NO_DEPENDENCIES
            needs.update(dependency)
        return None, frozenset(needs)

    def focus_on(self, x: int, goal: int, lo: Counts, hi: Counts, depth: int) -> Tuple[Optional[Tuple[FrProof, Counts]], Dependencies]:
        ix = self.ix
        args = ix.args[x]
        premise_hi = []
        for a in args:
            mask = self.usable(a, hi)
            premise_hi.append(tuple(h if (mask >> i) & 1 else 0 for i, h in enumerate(hi)))
        owed = [max(0, lo[y] - (1 if y == x else 0)) for y in range(ix.n)]
        spread = []
        for y in range(ix.n):
            if not owed[y]:
                continue
            takers = [k for k in range(len(args)) if premise_hi[k][y]]
            if not takers:
                return None, NO_DEPENDENCIES
            spread.append([(y, takers, c) for c in compositions(owed[y], len(takers))])

        needs: Set[int] = set()
        for choice in itertools.product(*spread):
            premise_lo = [[0] * ix.n for _ in args]
            for y, takers, amounts in choice:
                for k, amount in zip(takers, amounts):
                    premise_lo[k][y] = amount
            results = []
            for k, a in enumerate(args):
                found, dependency = self.search(a, tuple(premise_lo[k]), premise_hi[k], depth + 1)
                if found is None:
                    needs.update(dependency)
                    break
                results.append(found)
            else:
                raw = bump(tuple(sum(col) for col in zip(*(ctx for _, ctx in results))), x)
                target = tuple(max(lo[y], 1) if raw[y] else 0 for y in range(ix.n))
                chain = self.focused_chain(x, goal, results)
                return (self.close(chain, raw, target, x, goal), target), NO_DEPENDENCIES
        return None, frozenset(needs)

    def focused_exact(self, ctx: Counts, x: int, goal: int) -> Optional[FrProof]:
        """Rigid search for ``ctx, [x] |- goal``: the context is split exactly."""
        ix = self.ix
        if ix.heads[x] != goal:
            return None
        args = ix.args[x]
        if not args:
            return self.focused_chain(x, goal, []) if not any(ctx) else None
        positions = [i for i, c in enumerate(ctx) if c]
        for choice in itertools.product(*(list(compositions(ctx[i], len(args))) for i in positions)):
            parts = [[0] * ix.n for _ in args]
            for i, amounts in zip(positions, choice):
                for k, amount in enumerate(amounts):
                    parts[k][i] = amount
            results = []
            for k, a in enumerate(args):
                exact = tuple(parts[k])
                found, _ = self.search(a, exact, exact, 0)
                if found is None:
                    break
                results.append(found)
            else:
                return self.focused_chain(x, goal, results)
        return None


def fr_prove(s: FocusSequent, budget: Optional[int] = None) -> ProofResult[FrProof]:
    formulas: List[Formula] = [s.succedent, *s.antecedent]
    if s.focus is not None:
        formulas.append(s.focus)
    for f in formulas:
        if not is_implicational(f):
            raise UnsupportedConnectiveError("the focusing calculus covers implication only")
    budget = budget or settings.FR_NODE_BUDGET
    index = FormulaIndex.of(*formulas)
    search = _FocusSearch(index, budget)
    ctx = index.counts(s.antecedent)
    goal = index.position(s.succedent)
    try:
        if s.focus is None:
            found, _ = search.search(goal, ctx, ctx, 0)
            proof = None if found is None else found[0]
        elif index.kind[goal] != ATOM:
            proof = None
        else:
            proof = search.focused_exact(ctx, index.position(s.focus), goal)
    except RecursionError:
        raise ResourceLimitError(budget, "search nodes (path too deep)")
    logger.debug(f"fr_prove explored {search.nodes} nodes, provable={proof is not None}")
    if proof is None:
        return NOT_PROVABLE
    return ProofResult.provable(proof, proof.height())
