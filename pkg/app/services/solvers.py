"""
Cap-bounded saturation solvers
------------------------------
Root judgements are computed bottom-up from the leaf configuration: a
worklist saturates the set of derivable configurations whose coordinates all
stay within ``cap``. The result is an under-approximation for any cap, so a
negative answer reads NOT_FOUND_WITHIN_CAP, never "unreachable".
"""
import logging
from collections import deque
from typing import Callable, Dict, List, Optional, Tuple

from app.core.config import settings
from app.core.exceptions import CapOverflowError
from app.models.derivation import DeductionTree, DerivableSet, VectorTree, materialize
from app.models.enums import Mode, StepKind, Verdict
from app.models.results import SolveResult
from app.schemas.bvass import (
    Bvas,
    BvasInstance,
    Bvass,
    BoundTriple,
    CoverInstance,
    ReachInstance,
    SplitRule,
    Vector,
    zero_vector,
)
from app.services.reductions import bvass_to_bvas

logger = logging.getLogger(__name__)

# (state, vector, used-rule mask)
Item = Tuple[str, Vector, int]


class _Saturation:
    """Worklist saturation over ``(state, vector, mask)`` items.

    The mask stays 0 unless ``track_usage`` is set; with usage tracking an
    item is dropped when the same configuration is already known with a
    superset of used rules.
    """

    def __init__(
        self,
        sys: Bvass,
        leaf: str,
        cap: int,
        expansive: bool,
        track_usage: bool = False,
        budget_bytes: Optional[int] = None,
        stop: Optional[Callable[[Item], bool]] = None,
    ):
        if cap < 0:
            raise ValueError("cap must be non-negative")
        self.sys = sys
        self.cap = cap
        self.expansive = expansive
        self.track = track_usage
        self.stop = stop
        self.budget = budget_bytes or settings.MEMORY_BUDGET_BYTES
        self.item_bytes = settings.BYTES_PER_CONFIG + 8 * sys.dimension
        self.unary_into: Dict[str, List[Tuple[int, str, Vector]]] = {q: [] for q in sys.states}
        self.split_left: Dict[str, List[Tuple[int, str, str]]] = {q: [] for q in sys.states}
        self.split_right: Dict[str, List[Tuple[int, str, str]]] = {q: [] for q in sys.states}
        for i, rule in sys.rules():
            if isinstance(rule, SplitRule):
                self.split_left[rule.left].append((i, rule.source, rule.right))
                self.split_right[rule.right].append((i, rule.source, rule.left))
            else:
                self.unary_into[rule.target].append((i, rule.source, rule.vector))
        self.provenance: Dict[Item, tuple] = {}
        self.masks: Dict[Tuple[str, Vector], List[int]] = {}
        self.processed: Dict[str, List[Item]] = {q: [] for q in sys.states}
        self.queue: deque = deque()
        self.found: Optional[Item] = None
        self._add((leaf, zero_vector(sys.dimension), 0), (StepKind.LEAF, None, ()))

    def _fits(self, v: Vector) -> bool:
        return all(0 <= x <= self.cap for x in v)

    def _add(self, item: Item, derivation: tuple) -> None:
        if item in self.provenance or not self._fits(item[1]):
            return
        if self.track:
            known = self.masks.setdefault((item[0], item[1]), [])
            if any(m | item[2] == m for m in known):
                return
            known.append(item[2])
        self.provenance[item] = derivation
        self.queue.append(item)
        if len(self.provenance) * self.item_bytes > self.budget:
            raise CapOverflowError(len(self.provenance), self.budget)
        if self.found is None and self.stop is not None and self.stop(item):
            self.found = item

    def _bit(self, rule: int) -> int:
        return 1 << rule if self.track else 0

    def run(self) -> "_Saturation":
        while self.queue and self.found is None:
            item = self.queue.popleft()
            q1, v, mask = item
            self.processed[q1].append(item)
            for i, source, u in self.unary_into[q1]:
                parent = tuple(x - y for x, y in zip(v, u))
                self._add((source, parent, mask | self._bit(i)), (StepKind.UNARY, i, (item,)))
            for i, source, right in self.split_left[q1]:
                for other in list(self.processed[right]):
                    parent = tuple(x + y for x, y in zip(v, other[1]))
                    self._add((source, parent, mask | other[2] | self._bit(i)), (StepKind.SPLIT, i, (item, other)))
            for i, source, left in self.split_right[q1]:
                for other in list(self.processed[left]):
                    parent = tuple(x + y for x, y in zip(other[1], v))
                    self._add((source, parent, other[2] | mask | self._bit(i)), (StepKind.SPLIT, i, (other, item)))
            if self.expansive:
                for c, x in enumerate(v, start=1):
                    if x >= 2:
                        parent = tuple(y - 1 if j == c else y for j, y in enumerate(v, start=1))
                        self._add((q1, parent, mask), (StepKind.EXPANSION, c, (item,)))
        logger.debug(f"saturation at cap {self.cap}: {len(self.provenance)} items")
        return self

    def witness(self, item: Item) -> DeductionTree:
        return materialize(self.provenance, item)


def saturate(sys: Bvass, leaf: str, cap: int, expansive: bool, budget_bytes: Optional[int] = None) -> DerivableSet:
    """Least set of configurations derivable from ``(leaf, 0)`` with coordinates in ``[0, cap]``."""
    run = _Saturation(sys, leaf, cap, expansive, budget_bytes=budget_bytes).run()
    result = DerivableSet(leaf=leaf, cap=cap, expansive=expansive)
    for (q, v, _), derivation in run.provenance.items():
        result.members.setdefault(q, {})[v] = None
        step, index, children = derivation
        result.provenance[(q, v)] = (step, index, tuple((c[0], c[1]) for c in children))
    logger.info(f"derivable set at cap {cap}: {len(result)} configurations")
    return result


def _solve(run: _Saturation, target: str) -> SolveResult[DeductionTree]:
    run.run()
    explored = len(run.provenance)
    if run.found is None:
        logger.info(f"no witness for {target} at cap {run.cap} after {explored} items")
        return SolveResult(Verdict.NOT_FOUND_WITHIN_CAP, None, explored)
    witness = run.witness(run.found)
    logger.info(f"witness for {target} at cap {run.cap}: {witness.size()} nodes, {explored} items explored")
    return SolveResult(Verdict.WITNESS, witness, explored)


def solve_coverability(inst: CoverInstance, cap: int, budget_bytes: Optional[int] = None) -> SolveResult[DeductionTree]:
    """Plain deduction tree rooted at ``root_state`` with any vector."""
    root = inst.root_state
    run = _Saturation(
        inst.system, inst.leaf_state, cap, expansive=False,
        budget_bytes=budget_bytes, stop=lambda item: item[0] == root,
    )
    return _solve(run, f"cover {root}")


def solve_reachability(inst: ReachInstance, cap: int, budget_bytes: Optional[int] = None) -> SolveResult[DeductionTree]:
    """Deduction tree rooted at ``(root_state, 0)``, expansive unless the mode is plain."""
    if inst.mode == Mode.COMPREHENSIVE:
        return solve_comprehensive(inst, cap, budget_bytes)
    goal = (inst.root_state, zero_vector(inst.system.dimension))
    run = _Saturation(
        inst.system, inst.leaf_state, cap, expansive=inst.expansive,
        budget_bytes=budget_bytes, stop=lambda item: (item[0], item[1]) == goal,
    )
    return _solve(run, f"reach {inst.root_state}")


def solve_comprehensive(inst: ReachInstance, cap: int, budget_bytes: Optional[int] = None) -> SolveResult[DeductionTree]:
    """Expansive reachability of ``(root_state, 0)`` by a tree that uses every rule."""
    sys = inst.system
    if 2 ** sys.rule_count > settings.COMPREHENSIVE_RULE_BUDGET:
        logger.warning(
            f"state explosion: {sys.rule_count} rules give {2 ** sys.rule_count} usage sets, "
            f"above the budget of {settings.COMPREHENSIVE_RULE_BUDGET}"
        )
    goal = (inst.root_state, zero_vector(sys.dimension), (1 << sys.rule_count) - 1)
    run = _Saturation(
        sys, inst.leaf_state, cap, expansive=True, track_usage=True,
        budget_bytes=budget_bytes, stop=lambda item: item == goal,
    )
    return _solve(run, f"comprehensively reach {inst.root_state}")


def saturate_bvas(
    sys: Bvas, leaf_vector: Vector, cap: int, budget_bytes: Optional[int] = None,
    stop: Optional[Callable[[Vector], bool]] = None,
) -> Tuple[Dict[Vector, tuple], Optional[Vector]]:
    """Vectors derivable from ``leaf_vector`` within the cap, with provenance."""
    if cap < 0:
        raise ValueError("cap must be non-negative")
    budget = budget_bytes or settings.MEMORY_BUDGET_BYTES
    item_bytes = settings.BYTES_PER_CONFIG + 8 * sys.dimension
    unary = list(enumerate(sys.unary_rules))
    splits = [(len(sys.unary_rules) + j, u) for j, u in enumerate(sys.split_rules)]
    provenance: Dict[Vector, tuple] = {}
    processed: List[Vector] = []
    queue: deque = deque()
    found: List[Vector] = []

    def add(v: Vector, derivation: tuple) -> None:
        if v in provenance or not all(0 <= x <= cap for x in v):
            return
        provenance[v] = derivation
        queue.append(v)
        if len(provenance) * item_bytes > budget:
            raise CapOverflowError(len(provenance), budget)
        if not found and stop is not None and stop(v):
            found.append(v)

    add(tuple(leaf_vector), (StepKind.LEAF, None, ()))
    while queue and not found:
        v = queue.popleft()
        processed.append(v)
        for i, u in unary:
            add(tuple(a + b for a, b in zip(u, v)), (StepKind.UNARY, i, (v,)))
        for i, u in splits:
            for other in list(processed):
                add(tuple(a + b + c for a, b, c in zip(u, v, other)), (StepKind.SPLIT, i, (v, other)))
                if other != v:
                    add(tuple(a + b + c for a, b, c in zip(u, other, v)), (StepKind.SPLIT, i, (other, v)))
    return provenance, (found[0] if found else None)


def _vector_tree(provenance: Dict[Vector, tuple], root: Vector) -> VectorTree:
    built: Dict[Vector, VectorTree] = {}
    stack = [(root, False)]
    while stack:
        v, expanded = stack.pop()
        if v in built:
            continue
        step, index, children = provenance[v]
        if not expanded:
            stack.append((v, True))
            stack.extend((c, False) for c in children if c not in built)
            continue
        built[v] = VectorTree(v, step, index, tuple(built[c] for c in children))
    return built[root]


def solve_bvas_coverability(inst: BvasInstance, cap: int, budget_bytes: Optional[int] = None) -> SolveResult[VectorTree]:
    """Vector tree with leaves ``leaf_vector`` and a root covering ``root_vector``."""
    target = tuple(inst.root_vector)
    provenance, found = saturate_bvas(
        inst.system, inst.leaf_vector, cap, budget_bytes,
        stop=lambda v: all(a >= b for a, b in zip(v, target)),
    )
    if found is None:
        logger.info(f"no BVAS cover of {target} at cap {cap} after {len(provenance)} vectors")
        return SolveResult(Verdict.NOT_FOUND_WITHIN_CAP, None, len(provenance))
    return SolveResult(Verdict.WITNESS, _vector_tree(provenance, found), len(provenance))


def norm(vectors) -> int:
    """Infinite norm of a set of vectors: the largest absolute coordinate."""
    return max((abs(x) for v in vectors for x in v), default=0)


def bvas_bounds(sys: Bvas, v_root: Vector) -> BoundTriple:
    """Height and value thresholds beyond which a larger cap cannot help."""
    base = norm(sys.unary_rules + sys.split_rules) + norm([v_root]) + 2
    return BoundTriple.compute(sys.dimension, base)


def coverability_bounds(inst: CoverInstance) -> BoundTriple:
    target = bvass_to_bvas(inst)
    return bvas_bounds(target.system, target.root_vector)
