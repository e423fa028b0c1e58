"""
Formula syntax trees
--------------------
Atoms, implication, fusion and the constant ``t``. All nodes are frozen
dataclasses, so formulas hash structurally and can key multisets.
"""
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterator, List, Tuple, Union

from app.core.exceptions import ReservedNameError

ATOM_PATTERN = re.compile(r"[A-Za-z0-9_]+")
TRUTH_TOKEN = "T"
FUSION_TOKEN = "o"
RESERVED_NAMES = frozenset({TRUTH_TOKEN, FUSION_TOKEN})


@dataclass(frozen=True)
class Atom:
    name: str

    def __post_init__(self):
        if not ATOM_PATTERN.fullmatch(self.name) or self.name in RESERVED_NAMES:
            raise ReservedNameError(self.name)


@dataclass(frozen=True)
class Imp:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Fusion:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Truth:
    pass


TRUTH = Truth()

Formula = Union[Atom, Imp, Fusion, Truth]


@lru_cache(maxsize=65536)
def formula_key(f: Formula) -> tuple:
    """Total structural order used to canonicalize multisets."""
    if isinstance(f, Atom):
        return (0, f.name)
    if isinstance(f, Truth):
        return (1,)
    if isinstance(f, Imp):
        return (2, formula_key(f.left), formula_key(f.right))
    return (3, formula_key(f.left), formula_key(f.right))


@lru_cache(maxsize=65536)
def size(f: Formula) -> int:
    if isinstance(f, (Imp, Fusion)):
        return 1 + size(f.left) + size(f.right)
    return 1


def is_atomic(f: Formula) -> bool:
    return isinstance(f, Atom)


def is_implicational(f: Formula) -> bool:
    """True when ``f`` uses neither fusion nor the constant."""
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Imp):
            stack.extend((g.left, g.right))
        elif not isinstance(g, Atom):
            return False
    return True


def arguments(f: Formula) -> List[Formula]:
    """Arguments of the implicational spine: ``A1->...->An->h`` gives ``[A1..An]``."""
    args = []
    while isinstance(f, Imp):
        args.append(f.left)
        f = f.right
    return args


def head(f: Formula) -> Formula:
    while isinstance(f, Imp):
        f = f.right
    return f


def atoms(f: Formula) -> Iterator[Atom]:
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Atom):
            yield g
        elif isinstance(g, (Imp, Fusion)):
            stack.extend((g.right, g.left))


def imp_chain(args: List[Formula], tail: Formula) -> Formula:
    for a in reversed(args):
        tail = Imp(a, tail)
    return tail


@dataclass(frozen=True)
class SubformulaTable:
    """Distinct subformulas in post-order of first occurrence.

    Coordinates are 1-based: ``index[entries[i]] == i + 1``.
    """
    entries: Tuple[Formula, ...]
    index: Dict[Formula, int] = field(compare=False, hash=False)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, f: Formula) -> bool:
        return f in self.index

    def coordinate(self, f: Formula) -> int:
        return self.index[f]

    def entry(self, coordinate: int) -> Formula:
        return self.entries[coordinate - 1]

    @classmethod
    def of(cls, *formulas: Formula) -> "SubformulaTable":
        entries: List[Formula] = []
        seen: Dict[Formula, int] = {}
        for root in formulas:
            # iterative post-order: (node, expanded)
            stack = [(root, False)]
            while stack:
                node, expanded = stack.pop()
                if node in seen:
                    continue
                if expanded or not isinstance(node, (Imp, Fusion)):
                    entries.append(node)
                    seen[node] = len(entries)
                    continue
                stack.append((node, True))
                stack.append((node.right, False))
                stack.append((node.left, False))
        return cls(entries=tuple(entries), index=seen)


def subformulas(f: Formula) -> SubformulaTable:
    return SubformulaTable.of(f)
