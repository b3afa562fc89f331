"""Cross-section domains, moment tables and symmetry tests."""

from .catalog import Domain, FourierProfile, membership, regular_polygon_vertices
from .moments import (
    MomentTable,
    ball_moment_shape,
    ball_volume,
    moments,
    radial_moment,
    radial_moment_shape,
    sphere_area,
    volume,
)
from .symmetry import SymmetryResult, build_radial_counterexample, moment_defect, symmetric_of_degree

__all__ = [
    "Domain",
    "FourierProfile",
    "MomentTable",
    "SymmetryResult",
    "ball_moment_shape",
    "ball_volume",
    "build_radial_counterexample",
    "membership",
    "moment_defect",
    "moments",
    "radial_moment",
    "radial_moment_shape",
    "regular_polygon_vertices",
    "sphere_area",
    "symmetric_of_degree",
    "volume",
]
