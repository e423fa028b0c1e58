"""Exception hierarchy shared by parsers, provers, translations and solvers.

Every error carries an :class:`ErrorCode` and the exit status the command line
reports for it: 2 for malformed input or misuse, 3 for exhausted resources.
"""
from typing import Any, Dict, Optional

from app.schemas.common import ErrorCode, ErrorDetail


class ReasoningError(Exception):
    code: ErrorCode = ErrorCode.FORMAT_ERROR
    exit_status: int = 2

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None, field: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.details = details
        self.field = field

    @property
    def detail(self) -> ErrorDetail:
        return ErrorDetail(code=self.code, message=self.message, field=self.field, details=self.details)


class FormulaSyntaxError(ReasoningError):
    code = ErrorCode.SYNTAX_ERROR

    def __init__(self, position: int, expected: str, text: str = ""):
        super().__init__(
            f"syntax error at position {position}: expected {expected}",
            details={"position": position, "expected": expected, "text": text},
        )
        self.position = position
        self.expected = expected


class ReservedNameError(ReasoningError):
    code = ErrorCode.RESERVED_NAME

    def __init__(self, name: str):
        super().__init__(f"'{name}' is not a valid atom name", details={"name": name})
        self.name = name


class ResourceLimitError(ReasoningError):
    code = ErrorCode.RESOURCE_LIMIT
    exit_status = 3

    def __init__(self, budget: int, what: str = "search nodes"):
        super().__init__(f"budget of {budget} {what} exhausted", details={"budget": budget})
        self.budget = budget


class CapOverflowError(ReasoningError):
    code = ErrorCode.CAP_OVERFLOW
    exit_status = 3

    def __init__(self, configurations: int, budget_bytes: int):
        super().__init__(
            f"{configurations} configurations exceed the memory budget of {budget_bytes} bytes",
            details={"configurations": configurations, "budget_bytes": budget_bytes},
        )


class NotOrdinaryError(ReasoningError):
    code = ErrorCode.NOT_ORDINARY


class InvalidProofError(ReasoningError):
    code = ErrorCode.INVALID_PROOF


class ShapeMismatchError(ReasoningError):
    code = ErrorCode.SHAPE_MISMATCH


class UnsupportedConnectiveError(ReasoningError):
    code = ErrorCode.UNSUPPORTED_CONNECTIVE


class AtomCollisionError(ReasoningError):
    code = ErrorCode.ATOM_COLLISION


class FormatError(ReasoningError):
    code = ErrorCode.FORMAT_ERROR

    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(
            message if line is None else f"line {line}: {message}",
            details=None if line is None else {"line": line},
        )
        self.line = line
