from enum import IntEnum
from typing import Any, Dict, Optional

from pydantic import BaseModel, Field


class ErrorDetail(BaseModel):
    """Error detail schema"""
    code: str = Field(..., description="Error code")
    message: str = Field(..., description="Error message")
    details: Optional[Dict[str, Any]] = Field(None, description="Additional error details")


class ErrorResponse(BaseModel):
    """Standard error document written to stderr"""
    success: bool = Field(False, description="Success status")
    exit_code: int = Field(..., description="Process exit code")
    error: ErrorDetail = Field(..., description="Error details")


# Common error codes
class ErrorCodes:
    MALFORMED_INPUT = "MALFORMED_INPUT"
    DIMENSION_MISMATCH = "DIMENSION_MISMATCH"
    NON_FINITE = "NON_FINITE"
    NOT_HERMITIAN = "NOT_HERMITIAN"
    NOT_A_FRAME = "NOT_A_FRAME"
    DEGENERATE_SYSTEM = "DEGENERATE_SYSTEM"
    ZERO_VECTOR = "ZERO_VECTOR"
    SINGULAR_OPERATOR = "SINGULAR_OPERATOR"
    SPECTRAL_RADIUS = "SPECTRAL_RADIUS"
    NOT_CYCLIC = "NOT_CYCLIC"
    ADMISSIBILITY = "ADMISSIBILITY"
    PARAM_RANGE = "PARAM_RANGE"
    CONFIGURATION = "CONFIGURATION"
    GOLDEN_MISMATCH = "GOLDEN_MISMATCH"
    INTERNAL_ERROR = "INTERNAL_ERROR"


class ExitCodes(IntEnum):
    OK = 0
    MALFORMED_INPUT = 1
    DIMENSION_MISMATCH = 2
    FRAME_SEQUENCE_ONLY = 3
    DEGENERATE = 4
    SPECTRAL_RADIUS = 5
    NOT_CYCLIC = 6
    ADMISSIBILITY = 7
    GOLDEN_MISMATCH = 8
