from dataclasses import dataclass
from typing import Generic, Optional, TypeVar

from app.models.enums import Verdict

T = TypeVar("T")


@dataclass(frozen=True)
class ProofResult(Generic[T]):
    """A verdict with the proof that backs a positive answer."""
    verdict: Verdict
    proof: Optional[T] = None
    height: Optional[int] = None

    def __bool__(self) -> bool:
        return self.verdict.positive

    @classmethod
    def provable(cls, proof: T, height: Optional[int] = None) -> "ProofResult[T]":
        return cls(Verdict.PROVABLE, proof, height)


@dataclass(frozen=True)
class SolveResult(Generic[T]):
    """A solver verdict; ``witness`` is present iff the verdict is WITNESS."""
    verdict: Verdict
    witness: Optional[T] = None
    explored: int = 0

    def __bool__(self) -> bool:
        return self.verdict.positive


NOT_PROVABLE: ProofResult = ProofResult(Verdict.NOT_PROVABLE)
NOT_PROVABLE_WITHIN_DEPTH: ProofResult = ProofResult(Verdict.NOT_PROVABLE_WITHIN_DEPTH)
