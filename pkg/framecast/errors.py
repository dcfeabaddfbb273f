"""
Framecast exceptions
Every failure carries a stable error code and the CLI exit code it maps to
"""

from typing import Any, Dict, Optional

from framecast.schemas.common import ErrorCodes, ExitCodes


class FramecastError(Exception):
    """Base class for all framecast failures"""
    code = ErrorCodes.INTERNAL_ERROR
    exit_code = ExitCodes.MALFORMED_INPUT

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details


class ConfigurationError(FramecastError):
    code = ErrorCodes.CONFIGURATION


class MalformedInputError(FramecastError):
    code = ErrorCodes.MALFORMED_INPUT


class NonFiniteError(FramecastError, ValueError):
    """NaN or Inf entries"""
    code = ErrorCodes.NON_FINITE


class DimensionMismatchError(FramecastError, ValueError):
    code = ErrorCodes.DIMENSION_MISMATCH
    exit_code = ExitCodes.DIMENSION_MISMATCH


class NotHermitianError(FramecastError, ValueError):
    code = ErrorCodes.NOT_HERMITIAN


class DegenerateSystemError(FramecastError):
    """All-zero or empty frame system"""
    code = ErrorCodes.DEGENERATE_SYSTEM
    exit_code = ExitCodes.DEGENERATE


class NotAFrameError(FramecastError):
    code = ErrorCodes.NOT_A_FRAME
    exit_code = ExitCodes.FRAME_SEQUENCE_ONLY


class ZeroVectorError(FramecastError, ValueError):
    code = ErrorCodes.ZERO_VECTOR


class SingularOperatorError(FramecastError):
    code = ErrorCodes.SINGULAR_OPERATOR


class SpectralRadiusError(FramecastError):
    """No convergent series: spectral radius too close to (or above) 1"""
    code = ErrorCodes.SPECTRAL_RADIUS
    exit_code = ExitCodes.SPECTRAL_RADIUS


class NotCyclicError(FramecastError):
    code = ErrorCodes.NOT_CYCLIC
    exit_code = ExitCodes.NOT_CYCLIC


class AdmissibilityError(FramecastError):
    code = ErrorCodes.ADMISSIBILITY
    exit_code = ExitCodes.ADMISSIBILITY


class ParamRangeError(FramecastError, ValueError):
    code = ErrorCodes.PARAM_RANGE


class GoldenMismatchError(FramecastError):
    code = ErrorCodes.GOLDEN_MISMATCH
    exit_code = ExitCodes.GOLDEN_MISMATCH
