"""
Sequents over multisets
-----------------------
Antecedents are stored as tuples sorted by ``formula_key`` so that two
sequents are equal exactly when their multisets are.
"""
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Optional, Tuple

from app.models.formula import Formula, formula_key

Multiset = Tuple[Formula, ...]


def multiset(items: Iterable[Formula]) -> Multiset:
    return tuple(sorted(items, key=formula_key))


def msum(*parts: Iterable[Formula]) -> Multiset:
    return multiset(f for part in parts for f in part)


def mdiff(whole: Iterable[Formula], part: Iterable[Formula]) -> Optional[Multiset]:
    """``whole - part``, or None when ``part`` is not contained in ``whole``."""
    remaining = Counter(whole)
    remaining.subtract(Counter(part))
    if any(n < 0 for n in remaining.values()):
        return None
    return multiset(remaining.elements())


def mremove(whole: Iterable[Formula], f: Formula) -> Optional[Multiset]:
    return mdiff(whole, (f,))


def mleq(small: Iterable[Formula], large: Iterable[Formula]) -> bool:
    return mdiff(large, small) is not None


def support(items: Iterable[Formula]) -> frozenset:
    return frozenset(items)


@dataclass(frozen=True)
class Sequent:
    antecedent: Multiset
    succedent: Formula

    def __post_init__(self):
        object.__setattr__(self, "antecedent", multiset(self.antecedent))

    def counts(self) -> Counter:
        return Counter(self.antecedent)


@dataclass(frozen=True)
class FocusSequent:
    """``antecedent, [focus] |- succedent``; the focus is optional."""
    antecedent: Multiset
    focus: Optional[Formula]
    succedent: Formula

    def __post_init__(self):
        object.__setattr__(self, "antecedent", multiset(self.antecedent))

    def counts(self) -> Counter:
        return Counter(self.antecedent)

    def unfocused(self) -> Sequent:
        """The sequent obtained by dropping the focus brackets."""
        extra = () if self.focus is None else (self.focus,)
        return Sequent(msum(self.antecedent, extra), self.succedent)
