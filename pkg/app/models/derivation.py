from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterator, List, Optional, Tuple

from app.models.enums import StepKind

Vector = Tuple[int, ...]
ConfigKey = Tuple[str, Vector]


@dataclass(frozen=True)
class Configuration:
    state: str
    vector: Vector

    @property
    def key(self) -> ConfigKey:
        return (self.state, self.vector)


class _StepTree:
    children: tuple

    def nodes(self) -> Iterator["_StepTree"]:
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def size(self) -> int:
        return sum(1 for _ in self.nodes())

    def height(self) -> int:
        """Edges on the longest branch; a bare leaf has height 0."""
        best = 0
        stack = [(self, 0)]
        while stack:
            node, depth = stack.pop()
            best = max(best, depth)
            stack.extend((c, depth + 1) for c in node.children)
        return best

    def used_rules(self) -> FrozenSet[int]:
        return frozenset(
            n.index for n in self.nodes() if n.step in (StepKind.UNARY, StepKind.SPLIT)
        )


@dataclass(frozen=True)
class DeductionTree(_StepTree):
    """BVASS deduction tree, root first.

    ``index`` is a global rule index for Unary/Split steps and a 1-based
    coordinate for Expansion steps.
    """
    node: Configuration
    step: StepKind
    index: Optional[int] = None
    children: Tuple["DeductionTree", ...] = ()


@dataclass(frozen=True)
class VectorTree(_StepTree):
    node: Vector
    step: StepKind
    index: Optional[int] = None
    children: Tuple["VectorTree", ...] = ()


# step, index, child configurations
Derivation = Tuple[StepKind, Optional[int], Tuple[ConfigKey, ...]]


@dataclass
class DerivableSet:
    """Configurations derivable from the leaf within a value cap.

    ``provenance`` records the first derivation found for each member, so a
    checkable tree can be rebuilt for any of them.
    """
    leaf: str
    cap: int
    expansive: bool
    members: Dict[str, Dict[Vector, None]] = field(default_factory=dict)
    provenance: Dict[ConfigKey, Derivation] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.provenance)

    def contains(self, state: str, vector: Vector) -> bool:
        return (state, vector) in self.provenance

    def vectors(self, state: str) -> List[Vector]:
        return sorted(self.members.get(state, {}))

    def witness(self, state: str, vector: Vector) -> DeductionTree:
        return materialize(self.provenance, (state, vector))


def materialize(provenance: Dict, root) -> DeductionTree:
    """Rebuild a deduction tree from a provenance map without recursion.

    Keys are ``(state, vector, ...)`` tuples; extra components such as a
    used-rule mask are ignored in the resulting nodes.
    """
    built: Dict = {}
    stack = [(root, False)]
    while stack:
        key, expanded = stack.pop()
        if key in built:
            continue
        step, index, children = provenance[key]
        if not expanded:
            stack.append((key, True))
            stack.extend((c, False) for c in children if c not in built)
            continue
        built[key] = DeductionTree(
            Configuration(key[0], key[1]),
            step,
            index,
            tuple(built[c] for c in children),
        )
    return built[root]
