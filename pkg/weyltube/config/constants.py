"""Numeric constants and configuration defaults."""

from typing import Final

# Polynomial algebra
MAX_DETERMINANT_SIZE: Final[int] = 8  # Leibniz expansion over n! permutations
MAX_MOMENT_DEGREE: Final[int] = 12
MAX_SYMMETRY_DEGREE: Final[int] = 10
MAX_MOLIEN_DEGREE: Final[int] = 30
ORTHOGONALITY_TOLERANCE: Final[float] = 1e-9

# Reflection groups
GROUP_ROUND_TOLERANCE: Final[float] = 1e-9  # matrix dedup key granularity
MOLIEN_INTEGRALITY_TOLERANCE: Final[float] = 1e-6

# Orders of the types whose order does not depend on a rank parameter
FIXED_ORDERS: Final[dict[str, int]] = {
    "H3": 120,
    "H4": 14400,
    "F4": 1152,
    "E6": 51840,
    "E7": 2903040,
    "E8": 696729600,
}
UNENUMERATED_TYPES: Final[frozenset[str]] = frozenset({"E6", "E7", "E8"})

# Invariant degrees of the exceptional types
EXCEPTIONAL_DEGREES: Final[dict[str, tuple[int, ...]]] = {
    "E6": (2, 5, 6, 8, 9, 12),
    "E7": (2, 6, 8, 10, 12, 14, 18),
    "E8": (2, 8, 12, 14, 18, 20, 24, 30),
    "F4": (2, 6, 8, 12),
    "H3": (2, 6, 10),
    "H4": (2, 12, 20, 30),
}

# Differential geometry
FD_STEP: Final[float] = 1e-4  # central differences, scaled by box size
FRAME_TOLERANCE: Final[float] = 1e-10
FRAME_BREAKDOWN_TOLERANCE: Final[float] = 1e-12
MAX_HD_DEGREE: Final[int] = 8

# Quadrature
GAUSS_LEGENDRE_ORDER: Final[int] = 16
TRAPEZOID_NODES: Final[int] = 64
REFINEMENT_FACTOR: Final[int] = 2

# Radial domains
RADIAL_NODE_FACTOR: Final[int] = 8  # nodes >= 8 (N+2) max mode

# Monte Carlo
DEFAULT_MC_SAMPLES: Final[int] = 100_000
DEFAULT_MC_CHUNK_SIZE: Final[int] = 250_000
DEFAULT_SEED: Final[int] = 20240601

# Domain checks
SYMMETRY_TOLERANCE: Final[float] = 1e-10
BOUNDARY_TOLERANCE: Final[float] = 1e-12  # boundary points count as members
PROFILE_GRID: Final[int] = 4096  # grid for positivity and max of radial profiles
MIN_RADIAL_NODES: Final[int] = 64

# CLI exit codes
EXIT_OK: Final[int] = 0
EXIT_CHECK_FAILED: Final[int] = 1
EXIT_VALIDATION: Final[int] = 2

# Logging
DEFAULT_LOG_FORMAT: Final[str] = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
JSON_LOG_FORMAT: Final[str] = "json"

# Error messages
ERROR_ENUMERATION_OUT_OF_SCOPE: Final[str] = (
    "enumeration out of scope; degrees available via degrees_table"
)
ERROR_FRAME_BREAKDOWN: Final[str] = "frame breakdown"
