"""
Errors Module - Exception hierarchy and structured error payloads for quartic-iso
"""

from typing import Any


class ErrorCodes:
    """Error codes used in logs and json error payloads"""

    INTERNAL_ERROR = -32603

    DOMAIN_ERROR = -32000
    INVALID_INDEX = -32001
    FIELD_MISMATCH = -32002
    FACTORIZATION_INCOMPLETE = -32003
    CERTIFICATE_FORMAT = -32004
    USAGE_ERROR = -32005


class QuarticError(Exception):
    """Base class for all quartic-iso errors"""

    code: int = ErrorCodes.INTERNAL_ERROR

    def __init__(self, message: str, details: dict[str, Any] | None = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}


class DomainError(QuarticError, ValueError):
    """Input outside the mathematical domain of an operation"""

    code = ErrorCodes.DOMAIN_ERROR


class InvalidIndexError(DomainError):
    """Index n of K_n rejected at the API boundary (n < 1 or n = 3)"""

    code = ErrorCodes.INVALID_INDEX


class FieldMismatchError(DomainError):
    """Quadratic integers taken from different fields"""

    code = ErrorCodes.FIELD_MISMATCH


class FactorizationIncompleteError(QuarticError):
    """A decomposition needed a full factorization that did not finish"""

    code = ErrorCodes.FACTORIZATION_INCOMPLETE


class CertificateFormatError(QuarticError):
    """Certificate file is not in the canonical format"""

    code = ErrorCodes.CERTIFICATE_FORMAT


class ErrorHandler:
    """Builds structured error payloads for reports"""

    @staticmethod
    def create_error_payload(code: int, message: str, data: Any = None) -> dict[str, Any]:
        """Create a structured error payload

        Args:
            code: Error code
            message: Error message
            data: Optional additional error data

        Returns:
            Error payload dictionary
        """
        payload: dict[str, Any] = {"error": {"code": code, "message": message}}
        if data is not None:
            payload["error"]["data"] = data
        return payload

    @staticmethod
    def from_exception(error: Exception, context: str | None = None) -> dict[str, Any]:
        """Convert an exception into a structured error payload"""
        if isinstance(error, QuarticError):
            code = error.code
            message = error.message
            details: dict[str, Any] = dict(error.details)
        else:
            code = ErrorCodes.INTERNAL_ERROR
            message = str(error)
            details = {}

        details["error_type"] = type(error).__name__
        if context:
            message = f"{context}: {message}"
        return ErrorHandler.create_error_payload(code, message, details)
