from typing import Optional, Any, Generic, TypeVar, Dict, List
from pydantic import BaseModel, Field, ConfigDict
from enum import Enum

DataT = TypeVar('DataT')

class ErrorCode(str, Enum):
    """Standard error codes"""
    SYNTAX_ERROR = "SYNTAX_ERROR"
    RESERVED_NAME = "RESERVED_NAME"
    RESOURCE_LIMIT = "RESOURCE_LIMIT"
    CAP_OVERFLOW = "CAP_OVERFLOW"
    NOT_ORDINARY = "NOT_ORDINARY"
    INVALID_PROOF = "INVALID_PROOF"
    SHAPE_MISMATCH = "SHAPE_MISMATCH"
    UNSUPPORTED_CONNECTIVE = "UNSUPPORTED_CONNECTIVE"
    ATOM_COLLISION = "ATOM_COLLISION"
    FORMAT_ERROR = "FORMAT_ERROR"
    IO_ERROR = "IO_ERROR"

class ErrorDetail(BaseModel):
    """Detailed error information"""
    code: ErrorCode
    message: str
    field: Optional[str] = None
    details: Optional[Dict[str, Any]] = None

class CheckReport(BaseModel):
    """Outcome of a proof or witness check.

    ``path`` lists child indices from the root to the first offending node.
    """
    valid: bool
    path: List[int] = Field(default_factory=list)
    message: str = ""
    used_rules: List[int] = Field(default_factory=list)

    model_config = ConfigDict(frozen=True)

    def __bool__(self) -> bool:
        return self.valid

    @classmethod
    def ok(cls, used_rules: Optional[List[int]] = None) -> 'CheckReport':
        return cls(valid=True, used_rules=sorted(used_rules or []))

    @classmethod
    def fail(cls, path: List[int], message: str) -> 'CheckReport':
        return cls(valid=False, path=list(path), message=message)

class CommandResponse(BaseModel, Generic[DataT]):
    """Generic envelope for machine-readable command output"""
    success: bool = True
    data: Optional[DataT] = None
    error: Optional[ErrorDetail] = None

    model_config = ConfigDict(from_attributes=True)

    @classmethod
    def success_response(cls, data: DataT) -> 'CommandResponse[DataT]':
        return cls(success=True, data=data)

    @classmethod
    def error_response(
        cls,
        code: ErrorCode,
        message: str,
        details: Optional[Dict[str, Any]] = None
    ) -> 'CommandResponse[DataT]':
        error = ErrorDetail(code=code, message=message, details=details)
        return cls(success=False, error=error)
