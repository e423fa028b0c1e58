from dataclasses import dataclass
from typing import Iterator, Optional, Tuple

from app.models.enums import FrRule, LrRule
from app.models.formula import Formula
from app.models.sequent import FocusSequent, Sequent


class _TreeMixin:
    premises: tuple

    def nodes(self) -> Iterator["_TreeMixin"]:
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.premises))

    def size(self) -> int:
        return sum(1 for _ in self.nodes())

    def height(self) -> int:
        best = 0
        stack = [(self, 1)]
        while stack:
            node, depth = stack.pop()
            best = max(best, depth)
            stack.extend((p, depth + 1) for p in node.premises)
        return best


@dataclass(frozen=True)
class LrProof(_TreeMixin):
    rule: LrRule
    conclusion: Sequent
    premises: Tuple["LrProof", ...] = ()
    principal: Optional[Formula] = None


@dataclass(frozen=True)
class FrProof(_TreeMixin):
    rule: FrRule
    conclusion: FocusSequent
    premises: Tuple["FrProof", ...] = ()
    principal: Optional[Formula] = None

    def count(self, rule: FrRule) -> int:
        return sum(1 for node in self.nodes() if node.rule == rule)
