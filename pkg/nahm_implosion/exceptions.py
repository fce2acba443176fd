"""Custom exceptions for the Nahm implosion laboratory."""

from typing import Any, Dict, List, Optional


class ImplosionLabError(Exception):
    """Base exception for all laboratory errors."""

    def __init__(
        self,
        message: str,
        exit_code: int = 1,
        details: Optional[Dict[str, Any]] = None,
    ) -> None:
        """Initialize the exception.

        Args:
            message: Error message
            exit_code: Process exit status used by the command-line front end
            details: Structured diagnostic data if available
        """
        super().__init__(message)
        self.message = message
        self.exit_code = exit_code
        self.details = details or {}


class LieAlgebraError(ImplosionLabError):
    """Raised when a matrix is not a valid element of the required algebra."""

    def __init__(
        self,
        message: str = "Invalid Lie algebra element",
        details: Optional[Dict[str, Any]] = None,
    ) -> None:
        """Initialize Lie algebra error."""
        super().__init__(message, details=details)


class StratumError(ImplosionLabError):
    """Raised when centraliser or root data is inconsistent."""

    def __init__(
        self,
        message: str = "Inconsistent stratum data",
        details: Optional[Dict[str, Any]] = None,
    ) -> None:
        """Initialize stratum error."""
        super().__init__(message, details=details)


class TripleError(ImplosionLabError):
    """Raised when su(2) bracket relations fail."""

    def __init__(
        self,
        message: str = "Not an su(2)-triple",
        residual: Optional[float] = None,
    ) -> None:
        """Initialize triple error.

        Args:
            message: Error message
            residual: Largest bracket-relation residual found
        """
        super().__init__(message, details={"residual": residual})
        self.residual = residual


class GridError(ImplosionLabError):
    """Raised for malformed grids or paths living on different grids."""

    def __init__(
        self,
        message: str = "Invalid grid",
        details: Optional[Dict[str, Any]] = None,
    ) -> None:
        """Initialize grid error."""
        super().__init__(message, details=details)


class AsymptoticsError(ImplosionLabError):
    """Raised when asymptotic records are missing or incompatible."""

    def __init__(
        self,
        message: str = "Missing or incompatible asymptotic data",
        details: Optional[Dict[str, Any]] = None,
    ) -> None:
        """Initialize asymptotics error."""
        super().__init__(message, details=details)


class IntegrationBlowUpError(ImplosionLabError):
    """Raised when an ODE solution leaves the blow-up guard."""

    def __init__(
        self,
        message: str = "Integration blew up",
        t: Optional[float] = None,
        norm: Optional[float] = None,
    ) -> None:
        """Initialize blow-up error.

        Args:
            message: Error message
            t: Time at which the guard tripped
            norm: Offending norm
        """
        super().__init__(message, exit_code=3, details={"t": t, "norm": norm})
        self.t = t
        self.norm = norm


class ToleranceError(ImplosionLabError):
    """Raised when a checked numerical precondition is violated."""

    def __init__(
        self,
        message: str = "Tolerance exceeded",
        quantity: Optional[str] = None,
        value: Optional[float] = None,
        tolerance: Optional[float] = None,
    ) -> None:
        """Initialize tolerance error.

        Args:
            message: Error message
            quantity: Name of the checked quantity
            value: Measured value
            tolerance: Allowed bound
        """
        super().__init__(
            message,
            details={"quantity": quantity, "value": value, "tolerance": tolerance},
        )
        self.quantity = quantity
        self.value = value
        self.tolerance = tolerance


class DivergentPairingError(ImplosionLabError):
    """Raised when a regularised pairing would diverge."""

    def __init__(
        self,
        message: str = "Pairing integral diverges",
        pairings: Optional[List[float]] = None,
    ) -> None:
        """Initialize divergent pairing error.

        Args:
            message: Error message
            pairings: Offending cross pairings
        """
        super().__init__(message, details={"pairings": pairings or []})
        self.pairings = pairings or []


class ScenarioError(ImplosionLabError):
    """Raised when a scenario file cannot be parsed or validated."""

    def __init__(
        self,
        message: str = "Invalid scenario",
        errors: Optional[List[Dict[str, Any]]] = None,
    ) -> None:
        """Initialize scenario error.

        Args:
            message: Error message
            errors: List of validation errors
        """
        super().__init__(message, exit_code=2, details={"errors": errors or []})
        self.errors = errors or []
