"""
Sequent calculus for implicational relevance logic
--------------------------------------------------
Proof checking, a terminating decision procedure with irredundancy pruning,
and an unpruned depth-bounded search used as an independent oracle.

The decision procedure works with contraction absorbed into the branching
rules: a left implication or right fusion may hand every context formula to
both premises, and the surplus copies are contracted below the rule when the
proof object is assembled. A subgoal is pruned when an ancestor on the
current path has the same succedent, the same antecedent support and a
componentwise smaller antecedent. Sequents with a hypothesis that no
branch can ever use up are refuted without search.
"""
import itertools
import logging
from collections import defaultdict
from typing import Dict, Iterator, List, Optional, Set, Tuple

from app.core.config import settings
from app.core.exceptions import ResourceLimitError
from app.models.enums import LrRule
from app.models.formula import TRUTH, Fusion, Imp
from app.models.proof import LrProof
from app.models.results import NOT_PROVABLE, NOT_PROVABLE_WITHIN_DEPTH, ProofResult
from app.models.sequent import Sequent, mremove, msum
from app.schemas.common import CheckReport
from app.services.indexing import (
    FUSION, IMP, NO_DEPENDENCIES, TRUTH_KIND, Counts, Dependencies, FormulaIndex, bump, leq, support_mask,
)

logger = logging.getLogger(__name__)

# goal, support mask and antecedent of a path entry
_Entry = Tuple[int, int, Counts]

_ARITY = {
    LrRule.ID: 0,
    LrRule.CONTRACTION: 1,
    LrRule.IMP_L: 2,
    LrRule.IMP_R: 1,
    LrRule.TRUTH_L: 1,
    LrRule.TRUTH_R: 0,
    LrRule.FUSION_L: 1,
    LrRule.FUSION_R: 2,
}


def _check_node(node: LrProof) -> Optional[str]:
    c = node.conclusion
    ps = [p.conclusion for p in node.premises]
    if len(ps) != _ARITY[node.rule]:
        return f"expected {_ARITY[node.rule]} premises, found {len(ps)}"
    x = node.principal

    if node.rule == LrRule.ID:
        if c.antecedent != (c.succedent,):
            return "conclusion is not of the form A |- A"
    elif node.rule == LrRule.TRUTH_R:
        if c.antecedent or c.succedent != TRUTH:
            return "conclusion is not |- T"
    elif node.rule == LrRule.CONTRACTION:
        if x is None or x not in c.antecedent:
            return "contracted formula missing from the conclusion"
        if ps[0] != Sequent(msum(c.antecedent, (x,)), c.succedent):
            return "premise is not the conclusion with one extra copy"
    elif node.rule == LrRule.IMP_R:
        if not isinstance(c.succedent, Imp):
            return "succedent is not an implication"
        if ps[0] != Sequent(msum(c.antecedent, (c.succedent.left,)), c.succedent.right):
            return "premise does not move the argument to the antecedent"
    elif node.rule == LrRule.IMP_L:
        if not isinstance(x, Imp) or x not in c.antecedent:
            return "principal implication missing from the conclusion"
        left, right = ps
        if left.succedent != x.left or right.succedent != c.succedent:
            return "premise succedents do not match the principal formula"
        delta = mremove(right.antecedent, x.right)
        if delta is None:
            return "right premise lacks the consequent"
        if msum(left.antecedent, delta, (x,)) != c.antecedent:
            return "context split does not add up to the conclusion"
    elif node.rule == LrRule.TRUTH_L:
        rest = mremove(c.antecedent, TRUTH)
        if x != TRUTH or rest is None:
            return "no T in the antecedent"
        if ps[0] != Sequent(rest, c.succedent):
            return "premise does not drop one T"
    elif node.rule == LrRule.FUSION_L:
        if not isinstance(x, Fusion) or x not in c.antecedent:
            return "principal fusion missing from the conclusion"
        if ps[0] != Sequent(msum(mremove(c.antecedent, x), (x.left, x.right)), c.succedent):
            return "premise does not unpack the fusion"
    elif node.rule == LrRule.FUSION_R:
        if not isinstance(c.succedent, Fusion):
            return "succedent is not a fusion"
        left, right = ps
        if left.succedent != c.succedent.left or right.succedent != c.succedent.right:
            return "premise succedents do not match the fusion"
        if msum(left.antecedent, right.antecedent) != c.antecedent:
            return "context split does not add up to the conclusion"
    return None


def check_lr_proof(p: LrProof) -> CheckReport:
    stack: List[Tuple[LrProof, List[int]]] = [(p, [])]
    while stack:
        node, path = stack.pop()
        problem = _check_node(node)
        if problem:
            return CheckReport.fail(path, f"{node.rule.value}: {problem}")
        for i in reversed(range(len(node.premises))):
            stack.append((node.premises[i], path + [i]))
    return CheckReport.ok()


def _split_options(count: int, principal: int) -> List[Tuple[int, int]]:
    return [
        (g, d)
        for g in range(count + 1)
        for d in range(count + 1)
        if g + d >= count - principal
    ]


class _ProofBuilder:
    """Turns count vectors back into sequents and proof nodes."""

    def __init__(self, index: FormulaIndex):
        self.index = index

    def sequent(self, ctx: Counts, goal: int) -> Sequent:
        return Sequent(self.index.multiset(ctx), self.index.formula(goal))

    def contract_down(self, node: LrProof, raw: Counts, target: Counts, goal: int) -> LrProof:
        current = list(raw)
        for i in range(self.index.n):
            while current[i] > target[i]:
                current[i] -= 1
                node = LrProof(LrRule.CONTRACTION, self.sequent(tuple(current), goal), (node,), self.index.formula(i))
        return node


class _KripkeSearch(_ProofBuilder):
    """Depth-first search with irredundancy pruning.

    A failure that leaned on pruning against entries of the current path is
    stored with those entries and replayed on any later path whose entries
    prune at least as much.
    """

    def __init__(self, index: FormulaIndex, budget: int):
        super().__init__(index)
        self.budget = budget
        self.nodes = 0
        self.proved: Dict[Tuple[Counts, int], LrProof] = {}
        self.refuted: Set[Tuple[Counts, int]] = set()
        self.refuted_below: Dict[Tuple[Counts, int], Set[Tuple[_Entry, ...]]] = defaultdict(set)
        self.path: Dict[Tuple[int, int], List[Tuple[Counts, int]]] = defaultdict(list)
        self.trail: List[_Entry] = []

    def covering(self, goal: int, mask: int, ctx: Counts) -> Optional[int]:
        """Depth of the deepest path entry that prunes ``ctx |- goal``."""
        for earlier, earlier_depth in reversed(self.path.get((goal, mask), ())):
            if leq(earlier, ctx):
                return earlier_depth
        return None

    def recall(self, key: Tuple[Counts, int]) -> Optional[Dependencies]:
        for entries in self.refuted_below.get(key, ()):
            depths = []
            for goal, mask, ctx in entries:
                found = self.covering(goal, mask, ctx)
                if found is None:
                    break
                depths.append(found)
            else:
                return frozenset(depths)
        return None

    def candidates(self, ctx: Counts, goal: int) -> Iterator[Tuple[str, int, List[Tuple[Counts, int]]]]:
        ix = self.index
        if ix.kind[goal] == IMP:
            yield "imp_r", goal, [(bump(ctx, ix.left[goal]), ix.right[goal])]
            return
        # fusion and T on the left are invertible
        for i, c in enumerate(ctx):
            if c and ix.kind[i] == FUSION:
                yield "fusion_l", i, [(bump(bump(bump(ctx, i, -1), ix.left[i]), ix.right[i]), goal)]
                return
        if ix.truth is not None and ctx[ix.truth]:
            yield "truth_l", ix.truth, [(bump(ctx, ix.truth, -1), goal)]
            return
        if sum(ctx) == 1 and ctx[goal] == 1:
            yield "id", goal, []
        if ix.kind[goal] == TRUTH_KIND and not any(ctx):
            yield "truth_r", goal, []
        for i, c in enumerate(ctx):
            if c and ix.kind[i] == IMP:
                for gamma, delta in self.splits(ctx, i):
                    yield "imp_l", i, [(gamma, ix.left[i]), (bump(delta, ix.right[i]), goal)]
        if ix.kind[goal] == FUSION:
            for gamma, delta in self.splits(ctx, None):
                yield "fusion_r", goal, [(gamma, ix.left[goal]), (delta, ix.right[goal])]

    def splits(self, ctx: Counts, principal: Optional[int]) -> Iterator[Tuple[Counts, Counts]]:
        positions = [i for i, c in enumerate(ctx) if c]
        options = [_split_options(ctx[i], 1 if i == principal else 0) for i in positions]
        for choice in itertools.product(*options):
            gamma = [0] * self.index.n
            delta = [0] * self.index.n
            for i, (g, d) in zip(positions, choice):
                gamma[i] = g
                delta[i] = d
            yield tuple(gamma), tuple(delta)

    def assemble(self, ctx: Counts, goal: int, tag: str, principal: int,
                 premises: List[Tuple[Counts, int]], proofs: List[LrProof]) -> LrProof:
        ix = self.index
        conclusion = self.sequent(ctx, goal)
        formula = ix.formula(principal)
        if tag == "id":
            return LrProof(LrRule.ID, conclusion, (), formula)
        if tag == "truth_r":
            return LrProof(LrRule.TRUTH_R, conclusion)
        if tag == "imp_r":
            return LrProof(LrRule.IMP_R, conclusion, tuple(proofs), formula)
        if tag == "truth_l":
            return LrProof(LrRule.TRUTH_L, conclusion, tuple(proofs), formula)
        if tag == "fusion_l":
            return LrProof(LrRule.FUSION_L, conclusion, tuple(proofs), formula)
        (gamma, _), (delta, _) = premises
        if tag == "imp_l":
            delta = bump(delta, ix.right[principal], -1)
            raw = bump(tuple(g + d for g, d in zip(gamma, delta)), principal)
            node = LrProof(LrRule.IMP_L, self.sequent(raw, goal), tuple(proofs), formula)
        else:
            raw = tuple(g + d for g, d in zip(gamma, delta))
            node = LrProof(LrRule.FUSION_R, self.sequent(raw, goal), tuple(proofs), formula)
        return self.contract_down(node, raw, ctx, goal)

    def search(self, ctx: Counts, goal: int, depth: int) -> Tuple[Optional[LrProof], Dependencies]:
        """Returns a proof, or None with the path depths the failure relies on."""
        key = (ctx, goal)
        if key in self.proved:
            return self.proved[key], NO_DEPENDENCIES
        if key in self.refuted:
            return None, NO_DEPENDENCIES
        mask = support_mask(ctx)
        pruned_by = self.covering(goal, mask, ctx)
        if pruned_by is not None:
            return None, frozenset((pruned_by,))
        recalled = self.recall(key)
        if recalled is not None:
            return None, recalled
        if not self.index.consumable(goal, mask):
            self.refuted.add(key)
            return None, NO_DEPENDENCIES

        self.nodes += 1
        if self.nodes > self.budget:
            raise ResourceLimitError(self.budget)

        ancestors = self.path[(goal, mask)]
        ancestors.append((ctx, depth))
        self.trail.append((goal, mask, ctx))
        try:
            outer: Set[int] = set()
            for tag, principal, premises in self.candidates(ctx, goal):
                proofs = []
                for sub_ctx, sub_goal in premises:
                    proof, needs = self.search(sub_ctx, sub_goal, depth + 1)
                    if proof is None:
                        outer.update(d for d in needs if d < depth)
                        break
                    proofs.append(proof)
                else:
                    result = self.assemble(ctx, goal, tag, principal, premises, proofs)
                    self.proved[key] = result
                    return result, NO_DEPENDENCIES
            if not outer:
                self.refuted.add(key)
                return None, NO_DEPENDENCIES
            self.refuted_below[key].add(tuple(self.trail[d] for d in sorted(outer)))
            return None, frozenset(outer)
        finally:
            ancestors.pop()
            self.trail.pop()


def lr_prove(s: Sequent, budget: Optional[int] = None) -> ProofResult[LrProof]:
    """Decide ``s``; returns a checked-shape proof or NOT_PROVABLE."""
    budget = budget or settings.LR_NODE_BUDGET
    index = FormulaIndex.of(s.succedent, *s.antecedent)
    search = _KripkeSearch(index, budget)
    try:
        proof, _ = search.search(index.counts(s.antecedent), index.position(s.succedent), 0)
    except RecursionError:
        raise ResourceLimitError(budget, "search nodes (path too deep)")
    logger.debug(f"lr_prove explored {search.nodes} nodes, provable={proof is not None}")
    if proof is None:
        return NOT_PROVABLE
    return ProofResult.provable(proof, proof.height())


class _BoundedSearch(_ProofBuilder):
    """Plain rules with explicit backward contraction and no pruning."""

    def __init__(self, index: FormulaIndex):
        super().__init__(index)
        self.proved: Dict[Tuple[Counts, int], Tuple[LrProof, int]] = {}
        self.failed: Dict[Tuple[Counts, int], int] = {}

    def exact_splits(self, ctx: Counts) -> Iterator[Tuple[Counts, Counts]]:
        ranges = [range(c + 1) for c in ctx]
        for gamma in itertools.product(*ranges):
            yield tuple(gamma), tuple(c - g for c, g in zip(ctx, gamma))

    def candidates(self, ctx: Counts, goal: int) -> Iterator[Tuple[LrRule, int, List[Tuple[Counts, int]]]]:
        ix = self.index
        kind = ix.kind[goal]
        if sum(ctx) == 1 and ctx[goal] == 1:
            yield LrRule.ID, goal, []
        if kind == IMP:
            yield LrRule.IMP_R, goal, [(bump(ctx, ix.left[goal]), ix.right[goal])]
        if kind == TRUTH_KIND and not any(ctx):
            yield LrRule.TRUTH_R, goal, []
        for i, c in enumerate(ctx):
            if not c:
                continue
            if ix.kind[i] == TRUTH_KIND:
                yield LrRule.TRUTH_L, i, [(bump(ctx, i, -1), goal)]
            elif ix.kind[i] == FUSION:
                yield LrRule.FUSION_L, i, [(bump(bump(bump(ctx, i, -1), ix.left[i]), ix.right[i]), goal)]
        for i, c in enumerate(ctx):
            if c and ix.kind[i] == IMP:
                for gamma, delta in self.exact_splits(bump(ctx, i, -1)):
                    yield LrRule.IMP_L, i, [(gamma, ix.left[i]), (bump(delta, ix.right[i]), goal)]
        if kind == FUSION:
            for gamma, delta in self.exact_splits(ctx):
                yield LrRule.FUSION_R, goal, [(gamma, ix.left[goal]), (delta, ix.right[goal])]
        for i, c in enumerate(ctx):
            if c:
                yield LrRule.CONTRACTION, i, [(bump(ctx, i), goal)]

    def search(self, ctx: Counts, goal: int, depth: int) -> Optional[Tuple[LrProof, int]]:
        if depth <= 0:
            return None
        key = (ctx, goal)
        hit = self.proved.get(key)
        if hit is not None and hit[1] <= depth:
            return hit
        if self.failed.get(key, -1) >= depth:
            return None
        for rule, principal, premises in self.candidates(ctx, goal):
            results = []
            for sub_ctx, sub_goal in premises:
                found = self.search(sub_ctx, sub_goal, depth - 1)
                if found is None:
                    break
                results.append(found)
            else:
                formula = None if rule == LrRule.TRUTH_R else self.index.formula(principal)
                proof = LrProof(rule, self.sequent(ctx, goal), tuple(p for p, _ in results), formula)
                height = 1 + max((h for _, h in results), default=0)
                if hit is None or height < hit[1]:
                    self.proved[key] = (proof, height)
                return proof, height
        self.failed[key] = max(self.failed.get(key, -1), depth)
        return None


def lr_prove_bounded(s: Sequent, depth: Optional[int] = None) -> ProofResult[LrProof]:
    """Search for a proof of height at most ``depth`` without any pruning."""
    depth = settings.BOUNDED_DEPTH if depth is None else depth
    index = FormulaIndex.of(s.succedent, *s.antecedent)
    found = _BoundedSearch(index).search(index.counts(s.antecedent), index.position(s.succedent), depth)
    if found is None:
        return NOT_PROVABLE_WITHIN_DEPTH
    return ProofResult.provable(*found)
