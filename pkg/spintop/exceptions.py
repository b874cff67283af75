"""
Custom exception classes for the simulator.

This module defines a hierarchy of exceptions that represent different
failure modes. The CLI maps them to process exit codes and the HTTP API
maps them to status codes.

Each exception includes:
- error_code: Machine-readable identifier
- error_id: Unique ID for tracking this specific error occurrence
- message: Human-readable description
- details: Additional context
- exit_code: Process exit code used by the command line interface
"""

from typing import Optional, Dict, Any
from uuid import UUID, uuid4

from spintop.constants import EXIT_CODES


class SpinTopError(Exception):
    """
    Base exception class for all simulator-specific exceptions.

    Attributes:
        message: Human-readable error description
        error_code: Machine-readable error identifier
        error_id: Unique ID for this error occurrence
        details: Additional context information
        exit_code: CLI exit code for this failure class
    """

    exit_code: int = EXIT_CODES.NUMERICAL

    def __init__(
        self,
        message: str,
        error_code: Optional[str] = None,
        error_id: Optional[UUID] = None,
        details: Optional[Dict[str, Any]] = None
    ) -> None:
        """
        Initialize the exception.

        Args:
            message: Human-readable error message
            error_code: Machine-readable error code for clients
            error_id: Unique error ID (generated if not provided)
            details: Additional context about the error
        """
        self.message = message
        self.error_code = error_code or self.__class__.__name__
        self.error_id = error_id or uuid4()
        self.details = details or {}
        super().__init__(self.message)

    def __str__(self) -> str:
        """Return string representation of the exception."""
        return f"[{self.error_code}:{self.error_id}] {self.message}"

    def to_dict(self) -> Dict[str, Any]:
        """
        Convert exception to dictionary format.

        Returns:
            Dictionary containing error information
        """
        return {
            "error_code": self.error_code,
            "error_id": str(self.error_id),
            "message": self.message,
            "details": self.details
        }


class ValidationError(SpinTopError):
    """
    Exception raised when an input violates a domain rule.

    Examples: 2s not a positive integer, a non-unit rotation axis, a qubit
    index out of range, a flag used with an incompatible mode.

    HTTP Status: 400 Bad Request
    """

    exit_code = EXIT_CODES.USAGE

    def __init__(
        self,
        message: str,
        field: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None
    ) -> None:
        """
        Initialize validation error.

        Args:
            message: Description of what validation failed
            field: Name of the parameter that failed validation
            details: Additional context about the validation failure
        """
        error_details = details or {}
        if field:
            error_details["field"] = field

        super().__init__(
            message=message,
            error_code="VALIDATION_ERROR",
            details=error_details
        )


class GridResolutionError(ValidationError):
    """
    Exception raised when a quadrature grid is too coarse for the spin.

    HTTP Status: 400 Bad Request
    """

    def __init__(self, two_s: int, n_theta: int, n_phi: int) -> None:
        """
        Initialize grid resolution error.

        Args:
            two_s: Twice the spin quantum number
            n_theta: Requested polar node count
            n_phi: Requested azimuthal node count
        """
        super().__init__(
            message=(
                f"Grid {n_theta}x{n_phi} is under-resolved for 2s={two_s}: "
                f"need n_theta >= {two_s + 2} and n_phi >= {2 * two_s + 2}"
            ),
            field="grid",
            details={"two_s": two_s, "n_theta": n_theta, "n_phi": n_phi}
        )
        self.error_code = "GRID_UNDER_RESOLVED"


class DimensionMismatchError(ValidationError):
    """
    Exception raised when an operator does not match the Hilbert space.

    HTTP Status: 400 Bad Request
    """

    def __init__(self, expected: int, actual: int, what: str = "state") -> None:
        """
        Initialize dimension mismatch error.

        Args:
            expected: Dimension required by the parameters
            actual: Dimension of the supplied object
            what: Name of the supplied object
        """
        super().__init__(
            message=f"{what} has dimension {actual}, expected {expected}",
            field=what,
            details={"expected": expected, "actual": actual}
        )
        self.error_code = "DIMENSION_MISMATCH"


class NumericalValidationError(SpinTopError):
    """
    Exception raised when a numerical check on data fails.

    Examples: a density matrix that is not Hermitian, a distribution that is
    not normalized, a rank-deficient sample set for inversion.

    HTTP Status: 422 Unprocessable Entity
    """

    exit_code = EXIT_CODES.NUMERICAL

    def __init__(
        self,
        message: str,
        check: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None
    ) -> None:
        """
        Initialize numerical validation error.

        Args:
            message: Description of the failed check
            check: Short name of the check that failed
            details: Offending values
        """
        error_details = details or {}
        if check:
            error_details["check"] = check

        super().__init__(
            message=message,
            error_code="NUMERICAL_VALIDATION_ERROR",
            details=error_details
        )


class GridMismatchError(NumericalValidationError):
    """
    Exception raised when two grids being compared do not share nodes.

    HTTP Status: 422 Unprocessable Entity
    """

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None) -> None:
        super().__init__(message=message, check="grid_match", details=details)
        self.error_code = "GRID_MISMATCH"


class DataFormatError(SpinTopError):
    """
    Exception raised when an input file cannot be parsed.

    HTTP Status: 400 Bad Request
    """

    exit_code = EXIT_CODES.USAGE

    def __init__(
        self,
        message: str,
        path: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None
    ) -> None:
        error_details = details or {}
        if path:
            error_details["path"] = path

        super().__init__(
            message=message,
            error_code="DATA_FORMAT_ERROR",
            details=error_details
        )


class StorageError(SpinTopError):
    """
    Exception raised when reading or writing an output fails.

    Wraps OSError so the CLI can report a distinct exit code.

    HTTP Status: 500 Internal Server Error
    """

    exit_code = EXIT_CODES.IO

    def __init__(
        self,
        message: str,
        path: Optional[str] = None,
        operation: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None
    ) -> None:
        """
        Initialize storage error.

        Args:
            message: Description of the failure
            path: File or directory involved
            operation: Operation that failed (read, write, mkdir)
            details: Additional context
        """
        error_details = details or {}
        if path:
            error_details["path"] = path
        if operation:
            error_details["operation"] = operation

        super().__init__(
            message=message,
            error_code="STORAGE_ERROR",
            details=error_details
        )
