"""weyltube exceptions."""

from .base import (
    DeterminantSizeError,
    DimensionMismatchError,
    DomainConstraintError,
    EnumerationOutOfScopeError,
    FocalRadiusError,
    FrameBreakdownError,
    GroupEnumerationError,
    ImmersionError,
    MomentDepthError,
    NonOrthogonalElementError,
    WeylTubeComputationError,
    WeylTubeError,
)
from .client import (
    WeylTubeClientError,
    WeylTubeConfigurationError,
    WeylTubeDataError,
    WeylTubeValidationError,
)

__all__ = [
    # Base
    "WeylTubeError",
    # Computation exceptions
    "WeylTubeComputationError",
    "DimensionMismatchError",
    "DeterminantSizeError",
    "NonOrthogonalElementError",
    "EnumerationOutOfScopeError",
    "GroupEnumerationError",
    "FrameBreakdownError",
    "ImmersionError",
    "FocalRadiusError",
    "MomentDepthError",
    "DomainConstraintError",
    # Client exceptions
    "WeylTubeClientError",
    "WeylTubeValidationError",
    "WeylTubeConfigurationError",
    "WeylTubeDataError",
]
