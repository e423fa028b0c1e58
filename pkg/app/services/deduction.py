"""Independent checkers and a brute-force oracle for BVASS deduction trees.

Nothing here shares code with the saturation solvers: the checkers validate
witnesses node by node and ``enumerate_trees`` builds trees level by level
up to a height cap, so the two can be compared against each other.
"""
import logging
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from app.core.config import settings
from app.models.derivation import DeductionTree, VectorTree, materialize
from app.models.enums import StepKind
from app.schemas.bvass import Bvas, Bvass, SplitRule, Vector, zero_vector
from app.schemas.common import CheckReport

logger = logging.getLogger(__name__)

Achievable = Set[Tuple[Vector, FrozenSet[int]]]


def _vadd(*vectors: Vector) -> Vector:
    return tuple(map(sum, zip(*vectors)))


def _node_problem(sys: Bvass, t: DeductionTree, leaf: str, expansive: bool):
    node = t.node
    d = sys.dimension
    if node.state not in sys.states:
        return f"unknown state '{node.state}'"
    if len(node.vector) != d:
        return f"vector {node.vector} is not of dimension {d}"
    if any(x < 0 for x in node.vector):
        return f"negative coordinate in {node.vector}"
    kids = t.children

    if t.step == StepKind.LEAF:
        if kids:
            return "leaf has children"
        if node.state != leaf or any(node.vector):
            return f"leaf must be ({leaf}, 0)"
        return None

    if t.step == StepKind.EXPANSION:
        if not expansive:
            return "expansion outside expansive mode"
        i = t.index
        if i is None or not 1 <= i <= d:
            return f"bad coordinate {i}"
        if len(kids) != 1:
            return "expects one child"
        if node.vector[i - 1] < 1:
            return f"coordinate {i} is zero"
        child = kids[0].node
        expected = tuple(x + 1 if j == i else x for j, x in enumerate(node.vector, start=1))
        if child.state != node.state or child.vector != expected:
            return f"child must be ({node.state}, {expected})"
        return None

    if t.index is None or not 0 <= t.index < sys.rule_count:
        return f"no rule with index {t.index}"
    rule = sys.rule(t.index)

    if t.step == StepKind.UNARY:
        if isinstance(rule, SplitRule):
            return f"rule {t.index} is a split rule"
        if len(kids) != 1:
            return "expects one child"
        if rule.source != node.state:
            return f"rule {t.index} starts at {rule.source}"
        child = kids[0].node
        expected = _vadd(node.vector, rule.vector)
        if child.state != rule.target or child.vector != expected:
            return f"child must be ({rule.target}, {expected})"
        return None

    if t.step == StepKind.SPLIT:
        if not isinstance(rule, SplitRule):
            return f"rule {t.index} is a unary rule"
        if len(kids) != 2:
            return "expects two children"
        if rule.source != node.state:
            return f"rule {t.index} starts at {rule.source}"
        left, right = kids[0].node, kids[1].node
        if left.state != rule.left or right.state != rule.right:
            return f"children must be in {rule.left} and {rule.right}"
        if len(left.vector) == d and len(right.vector) == d and _vadd(left.vector, right.vector) != node.vector:
            return f"{node.vector} != {left.vector} + {right.vector}"
        return None

    return f"unknown step {t.step}"


def check_deduction_tree(sys: Bvass, t: DeductionTree, leaf: str, expansive: bool) -> CheckReport:
    """Validate every node of ``t``; ``used_rules`` lists the rule indices it uses."""
    used: Set[int] = set()
    stack: List[Tuple[DeductionTree, Tuple[int, ...]]] = [(t, ())]
    while stack:
        node, path = stack.pop()
        problem = _node_problem(sys, node, leaf, expansive)
        if problem is not None:
            return CheckReport.fail(list(path), f"{node.step.value}: {problem}")
        if node.step in (StepKind.UNARY, StepKind.SPLIT):
            used.add(node.index)
        for i in reversed(range(len(node.children))):
            stack.append((node.children[i], path + (i,)))
    return CheckReport.ok(sorted(used))


def check_bvas_tree(sys: Bvas, t: VectorTree, v_leaf: Vector) -> CheckReport:
    stack: List[Tuple[VectorTree, Tuple[int, ...]]] = [(t, ())]
    used: Set[int] = set()
    while stack:
        node, path = stack.pop()
        problem = _bvas_problem(sys, node, v_leaf)
        if problem is not None:
            return CheckReport.fail(list(path), f"{node.step.value}: {problem}")
        if node.step != StepKind.LEAF:
            used.add(node.index)
        for i in reversed(range(len(node.children))):
            stack.append((node.children[i], path + (i,)))
    return CheckReport.ok(sorted(used))


def _bvas_problem(sys: Bvas, t: VectorTree, v_leaf: Vector):
    if len(t.node) != sys.dimension:
        return f"vector {t.node} is not of dimension {sys.dimension}"
    if any(x < 0 for x in t.node):
        return f"negative coordinate in {t.node}"
    if t.step == StepKind.LEAF:
        if t.children:
            return "leaf has children"
        return None if t.node == tuple(v_leaf) else f"leaf must be {tuple(v_leaf)}"
    if t.index is None or not 0 <= t.index < sys.rule_count:
        return f"no rule with index {t.index}"
    is_split = t.index >= len(sys.unary_rules)
    if t.step == StepKind.UNARY and is_split or t.step == StepKind.SPLIT and not is_split:
        return f"rule {t.index} has the wrong arity"
    if t.step not in (StepKind.UNARY, StepKind.SPLIT):
        return f"unknown step {t.step}"
    arity = 2 if is_split else 1
    if len(t.children) != arity:
        return f"expects {arity} children"
    if any(len(c.node) != sys.dimension for c in t.children):
        return "child vector of wrong dimension"
    expected = _vadd(sys.rule(t.index), *(c.node for c in t.children))
    return None if expected == t.node else f"{t.node} != rule {t.index} + children"


class _TreeEnumerator:
    """Level-by-level construction of every tree up to a height cap.

    Items are ``(state, vector, used)``; ``by_state`` after round ``h`` holds
    every item realized by a tree of height at most ``h``.
    """

    def __init__(self, sys: Bvass, leaf: str, expansive: bool, value_cap: int, track_usage: bool):
        self.sys = sys
        self.expansive = expansive
        self.cap = value_cap
        self.track = track_usage
        self.by_state: Dict[str, List[tuple]] = {q: [] for q in sys.states}
        self.provenance: Dict[tuple, tuple] = {}
        self.unary_into: Dict[str, List[int]] = {q: [] for q in sys.states}
        self.split_left: Dict[str, List[int]] = {q: [] for q in sys.states}
        self.split_right: Dict[str, List[int]] = {q: [] for q in sys.states}
        for i, rule in sys.rules():
            if isinstance(rule, SplitRule):
                self.split_left[rule.left].append(i)
                self.split_right[rule.right].append(i)
            else:
                self.unary_into[rule.target].append(i)
        start = (leaf, zero_vector(sys.dimension), frozenset())
        self.delta = [start]
        self._record(start, (StepKind.LEAF, None, ()))

    def _record(self, item, derivation) -> None:
        self.provenance[item] = derivation
        self.by_state[item[0]].append(item)

    def _used(self, *parts, rule=None) -> FrozenSet[int]:
        if not self.track:
            return frozenset()
        out = frozenset().union(*parts)
        return out | {rule} if rule is not None else out

    def _fits(self, v: Vector) -> bool:
        return all(0 <= x <= self.cap for x in v)

    def round(self) -> bool:
        fresh: Dict[tuple, tuple] = {}

        def offer(item, derivation):
            if item not in self.provenance and item not in fresh and self._fits(item[1]):
                fresh[item] = derivation

        for item in self.delta:
            q1, v, used = item
            for i in self.unary_into[q1]:
                rule = self.sys.rule(i)
                parent = tuple(x - u for x, u in zip(v, rule.vector))
                offer((rule.source, parent, self._used(used, rule=i)), (StepKind.UNARY, i, (item,)))
            for i in self.split_left[q1]:
                rule = self.sys.rule(i)
                for other in list(self.by_state[rule.right]):
                    parent = _vadd(v, other[1])
                    offer((rule.source, parent, self._used(used, other[2], rule=i)), (StepKind.SPLIT, i, (item, other)))
            for i in self.split_right[q1]:
                rule = self.sys.rule(i)
                for other in list(self.by_state[rule.left]):
                    parent = _vadd(other[1], v)
                    offer((rule.source, parent, self._used(other[2], used, rule=i)), (StepKind.SPLIT, i, (other, item)))
            if self.expansive:
                for c, x in enumerate(v, start=1):
                    if x >= 2:
                        parent = tuple(y - 1 if j == c else y for j, y in enumerate(v, start=1))
                        offer((q1, parent, used), (StepKind.EXPANSION, c, (item,)))

        for item, derivation in fresh.items():
            self._record(item, derivation)
        self.delta = list(fresh)
        return bool(fresh)


def _run_enumerator(sys, root_state, leaf, expansive, height_cap, value_cap, track_usage) -> _TreeEnumerator:
    height_cap = settings.HEIGHT_CAP if height_cap is None else height_cap
    value_cap = settings.DEFAULT_CAP if value_cap is None else value_cap
    if height_cap < 0 or value_cap < 0:
        raise ValueError("caps must be non-negative")
    en = _TreeEnumerator(sys, leaf, expansive, value_cap, track_usage)
    for _ in range(height_cap):
        if not en.round():
            break
    logger.debug(f"enumerated {len(en.provenance)} items up to height {height_cap}, values {value_cap}")
    return en


def enumerate_trees(
    sys: Bvass,
    root_state: str,
    leaf: str,
    expansive: bool,
    height_cap: Optional[int] = None,
    value_cap: Optional[int] = None,
    track_usage: bool = True,
) -> Achievable:
    """Every ``(root vector, used rules)`` realized at ``root_state`` within the caps.

    With ``track_usage`` off every usage set is empty, which keeps the
    enumeration small when only vectors matter.
    """
    en = _run_enumerator(sys, root_state, leaf, expansive, height_cap, value_cap, track_usage)
    return {(v, used) for (q, v, used) in en.by_state[root_state]}


def enumerate_witnesses(
    sys: Bvass,
    root_state: str,
    leaf: str,
    expansive: bool,
    height_cap: Optional[int] = None,
    value_cap: Optional[int] = None,
) -> Dict[Tuple[Vector, FrozenSet[int]], DeductionTree]:
    """One materialized tree per pair returned by :func:`enumerate_trees`."""
    en = _run_enumerator(sys, root_state, leaf, expansive, height_cap, value_cap, True)
    return {
        (item[1], item[2]): materialize(en.provenance, item)
        for item in en.by_state[root_state]
    }
