"""Computation exceptions for the tube toolkit."""

from typing import Any, Dict, Optional, Sequence


class WeylTubeError(Exception):
    """Base exception for all weyltube errors."""

    def __init__(
        self,
        message: str,
        *,
        error_code: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
    ) -> None:
        """
        Initialize weyltube error.

        Args:
            message: Error message
            error_code: Optional short machine-readable code
            details: Optional additional error details
        """
        super().__init__(message)
        self.message = message
        self.error_code = error_code
        self.details = details or {}

    def __str__(self) -> str:
        """String representation of the error."""
        if self.error_code:
            return f"[{self.error_code}] {self.message}"
        return self.message


class WeylTubeComputationError(WeylTubeError):
    """Base exception for failures inside a computation."""

    pass


class DimensionMismatchError(WeylTubeComputationError):
    """Raised when operands disagree on a dimension."""

    def __init__(
        self,
        message: str = "Dimension mismatch",
        *,
        expected: Optional[int] = None,
        actual: Optional[int] = None,
        **kwargs: Any,
    ) -> None:
        """
        Initialize dimension mismatch error.

        Args:
            message: Error message
            expected: Dimension that was required
            actual: Dimension that was supplied
            **kwargs: Additional error details
        """
        super().__init__(message, error_code="dimension", **kwargs)
        self.expected = expected
        self.actual = actual
        if expected is not None:
            self.details["expected"] = expected
        if actual is not None:
            self.details["actual"] = actual


class DeterminantSizeError(WeylTubeComputationError):
    """Raised when a Leibniz determinant is requested beyond the size cap."""

    def __init__(self, size: int, limit: int) -> None:
        """Initialize determinant size error."""
        super().__init__(
            f"determinant of size {size} exceeds the Leibniz limit {limit}",
            error_code="det_size",
            details={"size": size, "limit": limit},
        )
        self.size = size
        self.limit = limit


class NonOrthogonalElementError(WeylTubeComputationError):
    """Raised when a supposed group element is not orthogonal."""

    def __init__(self, defect: float, index: Optional[int] = None) -> None:
        """Initialize non-orthogonal element error."""
        where = f" (element {index})" if index is not None else ""
        super().__init__(
            f"non-orthogonal group element{where}: Gram defect {defect:.3e}",
            error_code="non_orthogonal",
            details={"defect": defect, "index": index},
        )
        self.defect = defect


class EnumerationOutOfScopeError(WeylTubeComputationError):
    """Raised for reflection groups whose elements are not enumerated."""

    def __init__(self, group_type: str, message: str) -> None:
        """Initialize out-of-scope error."""
        super().__init__(
            f"{group_type}: {message}",
            error_code="out_of_scope",
            details={"type": group_type},
        )
        self.group_type = group_type


class GroupEnumerationError(WeylTubeComputationError):
    """Raised when a closure does not reproduce the classical order."""

    def __init__(self, label: str, order: int, expected: int) -> None:
        """Initialize enumeration error."""
        super().__init__(
            f"{label}: enumerated {order} elements, expected {expected}",
            error_code="enumeration",
            details={"label": label, "order": order, "expected": expected},
        )


class FrameBreakdownError(WeylTubeComputationError):
    """Raised when Gram-Schmidt meets a null or dependent normal direction."""

    def __init__(self, u: Sequence[float], reason: str = "") -> None:
        """
        Initialize frame breakdown error.

        Args:
            u: Parameter point where the frame failed
            reason: Short description of the failure
        """
        point = tuple(float(x) for x in u)
        message = f"frame breakdown at u={point}"
        if reason:
            message = f"{message}: {reason}"
        super().__init__(message, error_code="frame", details={"u": point})
        self.u = point


class ImmersionError(WeylTubeComputationError):
    """Raised when the induced metric is not positive definite."""

    def __init__(self, u: Sequence[float]) -> None:
        """Initialize immersion error."""
        point = tuple(float(x) for x in u)
        super().__init__(
            f"not spacelike/immersed at u={point}",
            error_code="immersion",
            details={"u": point},
        )
        self.u = point


class FocalRadiusError(WeylTubeComputationError):
    """Raised when a tube radius exceeds the reach of the embedding."""

    def __init__(self, radius: float, reach: float) -> None:
        """Initialize focal radius error."""
        super().__init__(
            f"radius {radius:g} exceeds the estimated reach {reach:g}; tube is not embedded",
            error_code="focal_radius",
            details={"radius": radius, "reach": reach},
        )
        self.radius = radius
        self.reach = reach


class MomentDepthError(WeylTubeComputationError):
    """Raised when a moment table is too shallow for a request."""

    def __init__(self, needed: int, available: int) -> None:
        """Initialize moment depth error."""
        super().__init__(
            f"moment table has degree {available}, degree {needed} required",
            error_code="moment_depth",
            details={"needed": needed, "available": available},
        )


class DomainConstraintError(WeylTubeComputationError):
    """Raised when domain parameters violate a construction constraint."""

    def __init__(self, constraint: str, **kwargs: Any) -> None:
        """
        Initialize domain constraint error.

        Args:
            constraint: The violated inequality, spelled out
            **kwargs: Parameter values involved
        """
        super().__init__(
            f"domain constraint violated: {constraint}",
            error_code="domain_constraint",
            details={"constraint": constraint, **kwargs},
        )
        self.constraint = constraint
