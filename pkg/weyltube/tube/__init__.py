"""Tube volumes, sampling oracles, no-go demonstrators and the intrinsicness verdict."""

from .integrand import degree_integrals, integrand_poly, lowered_variables
from .montecarlo import (
    HaarAverage,
    closed_form_tube,
    curvature_series,
    haar_integrand_average,
    monte_carlo_series,
    tube_volume_mc,
)
from .nogo import (
    CausalSurfaceCoefficients,
    DiamondGap,
    FourfoldCoefficients,
    FrameRotationGap,
    SquareMomentGap,
    SurfaceCoefficients,
    causal_surface_coefficients,
    diamond_codimension_gap,
    diamond_fourfold_coefficients,
    diamond_gap_closed_form,
    diamond_square_moment_gap,
    diamond_surface_coefficients,
    frame_rotation_gap,
    swap_rotation,
)
from .quadrature import ParameterGrid, parameter_grid, refined
from .verdict import DIAMOND_INTRINSIC_TABLE, diamond_intrinsic_degree, intrinsicness_verdict
from .volumes import (
    combine_reports,
    curvature_integrals,
    curve_tube_volume,
    estimate_reach,
    intrinsic_coefficients,
    polynomial_volumes,
    tube_volume_extrinsic,
    tube_volume_intrinsic,
    weyl_ball_coefficients,
)

__all__ = [
    # Quadrature and integrand
    "ParameterGrid",
    "degree_integrals",
    "integrand_poly",
    "lowered_variables",
    "parameter_grid",
    "refined",

    # Volumes
    "combine_reports",
    "curvature_integrals",
    "curve_tube_volume",
    "estimate_reach",
    "intrinsic_coefficients",
    "polynomial_volumes",
    "tube_volume_extrinsic",
    "tube_volume_intrinsic",
    "weyl_ball_coefficients",

    # Oracles
    "HaarAverage",
    "closed_form_tube",
    "curvature_series",
    "haar_integrand_average",
    "monte_carlo_series",
    "tube_volume_mc",

    # No-go demonstrators
    "CausalSurfaceCoefficients",
    "DiamondGap",
    "FourfoldCoefficients",
    "FrameRotationGap",
    "SquareMomentGap",
    "SurfaceCoefficients",
    "causal_surface_coefficients",
    "diamond_codimension_gap",
    "diamond_fourfold_coefficients",
    "diamond_gap_closed_form",
    "diamond_square_moment_gap",
    "diamond_surface_coefficients",
    "frame_rotation_gap",
    "swap_rotation",

    # Verdict
    "DIAMOND_INTRINSIC_TABLE",
    "diamond_intrinsic_degree",
    "intrinsicness_verdict",
]
