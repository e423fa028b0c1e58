"""Integer view of a subformula table shared by the proof searches.

Contexts become count vectors over subformula positions (0-based here,
unlike the 1-based coordinates of :class:`SubformulaTable`).
"""
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

from app.models.formula import Atom, Formula, Fusion, Imp, SubformulaTable, Truth
from app.models.sequent import multiset

ATOM, TRUTH_KIND, IMP, FUSION = range(4)

Counts = Tuple[int, ...]
# path depths a failed search leaned on
Dependencies = FrozenSet[int]
NO_DEPENDENCIES: Dependencies = frozenset()


class FormulaIndex:
    def __init__(self, table: SubformulaTable):
        self.table = table
        self.n = len(table)
        self.kind: List[int] = []
        self.left: List[int] = []
        self.right: List[int] = []
        self.truth: Optional[int] = None
        for i, f in enumerate(table.entries):
            if isinstance(f, Atom):
                self.kind.append(ATOM)
            elif isinstance(f, Truth):
                self.kind.append(TRUTH_KIND)
                self.truth = i
            else:
                self.kind.append(IMP if isinstance(f, Imp) else FUSION)
            if isinstance(f, (Imp, Fusion)):
                self.left.append(table.coordinate(f.left) - 1)
                self.right.append(table.coordinate(f.right) - 1)
            else:
                self.left.append(-1)
                self.right.append(-1)
        self.heads: List[int] = [self._head(i) for i in range(self.n)]
        self.args: List[Tuple[int, ...]] = [self._args(i) for i in range(self.n)]
        self._consumable: Dict[Tuple[int, int], bool] = {}

    @classmethod
    def of(cls, *formulas: Formula) -> "FormulaIndex":
        return cls(SubformulaTable.of(*formulas))

    def _head(self, i: int) -> int:
        while self.kind[i] == IMP:
            i = self.right[i]
        return i

    def _args(self, i: int) -> Tuple[int, ...]:
        out = []
        while self.kind[i] == IMP:
            out.append(self.left[i])
            i = self.right[i]
        return tuple(out)

    def position(self, f: Formula) -> int:
        return self.table.coordinate(f) - 1

    def formula(self, i: int) -> Formula:
        return self.table.entries[i]

    def counts(self, formulas: Iterable[Formula]) -> Counts:
        vec = [0] * self.n
        for f in formulas:
            vec[self.position(f)] += 1
        return tuple(vec)

    def multiset(self, counts: Counts):
        return multiset(self.table.entries[i] for i, c in enumerate(counts) for _ in range(c))

    def possible_goals(self, goal: int, mask: int) -> Set[int]:
        """Every succedent that can occur above ``mask |- goal``, over-approximated."""
        goals: Set[int] = set()
        hyps: Set[int] = set()
        pending_goals = [goal]
        pending_hyps = [i for i in range(self.n) if (mask >> i) & 1]
        while pending_goals or pending_hyps:
            if pending_goals:
                g = pending_goals.pop()
                if g in goals:
                    continue
                goals.add(g)
                if self.kind[g] == IMP:
                    pending_hyps.append(self.left[g])
                    pending_goals.append(self.right[g])
                elif self.kind[g] == FUSION:
                    pending_goals += [self.left[g], self.right[g]]
            else:
                h = pending_hyps.pop()
                if h in hyps:
                    continue
                hyps.add(h)
                if self.kind[h] == IMP:
                    pending_goals.append(self.left[h])
                    pending_hyps.append(self.right[h])
                elif self.kind[h] == FUSION:
                    pending_hyps += [self.left[h], self.right[h]]
        return goals

    def consumable(self, goal: int, mask: int) -> bool:
        """False when some hypothesis in ``mask`` can never be used up.

        An atom is only used by an identity on itself, an implication by an
        identity or through its consequent, a fusion through both parts.
        Without weakening such a sequent has no proof.
        """
        key = (goal, mask)
        hit = self._consumable.get(key)
        if hit is not None:
            return hit
        goals = self.possible_goals(goal, mask)
        usable: Dict[int, bool] = {}

        def used(h: int) -> bool:
            if h not in usable:
                kind = self.kind[h]
                if h in goals or kind == TRUTH_KIND:
                    usable[h] = True
                elif kind == IMP:
                    usable[h] = used(self.right[h])
                elif kind == FUSION:
                    usable[h] = used(self.left[h]) and used(self.right[h])
                else:
                    usable[h] = False
            return usable[h]

        hit = all(used(i) for i in range(self.n) if (mask >> i) & 1)
        self._consumable[key] = hit
        return hit


def bump(counts: Counts, i: int, delta: int = 1) -> Counts:
    vec = list(counts)
    vec[i] += delta
    return tuple(vec)


def add(a: Counts, b: Counts) -> Counts:
    return tuple(x + y for x, y in zip(a, b))


def leq(a: Counts, b: Counts) -> bool:
    return all(x <= y for x, y in zip(a, b))


def support_mask(counts: Counts) -> int:
    mask = 0
    for i, c in enumerate(counts):
        if c:
            mask |= 1 << i
    return mask
