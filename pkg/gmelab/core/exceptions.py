"""
Custom exceptions for the GMELab toolkit
"""
from typing import Any, Optional


class GmeLabException(Exception):
    """Base exception for all GMELab-related errors"""
    pass


class ValidationError(GmeLabException):
    """Raised when input validation or an operation precondition fails"""
    pass


class DimensionError(ValidationError):
    """Raised when a construction would exceed the configured dimension cap"""
    pass


class StateSpecError(ValidationError):
    """Raised when a command-line state spec cannot be parsed"""
    pass


class ConfigurationError(GmeLabException):
    """Raised when configuration is invalid"""
    pass


class NumericalError(GmeLabException):
    """Raised when a numerical procedure breaks down"""
    pass


class SolverError(NumericalError):
    """Raised when the SDP solver does not reach an optimal solution"""

    def __init__(self, message: str, solution: Optional[Any] = None):
        super().__init__(message)
        self.solution = solution


class CertificateError(NumericalError):
    """Raised when a certificate cannot be built or fails verification"""
    pass
