"""Exact polynomial algebra, determinants and averaging."""

from .averaging import (
    RadialPoly,
    average_group,
    average_group_values,
    average_orthogonal,
    double_factorial,
    radial_series_value,
    rising_even_product,
    sphere_moment,
)
from .haar import haar_sample_orthogonal, haar_samples
from .poly import (
    Coefficient,
    MultiIndex,
    Poly,
    coerce_coefficient,
    multi_indices,
    multinomial,
    poly_det,
    tangent_block,
)

__all__ = [
    "Coefficient",
    "MultiIndex",
    "Poly",
    "RadialPoly",
    "average_group",
    "average_group_values",
    "average_orthogonal",
    "coerce_coefficient",
    "double_factorial",
    "haar_sample_orthogonal",
    "haar_samples",
    "multi_indices",
    "multinomial",
    "poly_det",
    "radial_series_value",
    "rising_even_product",
    "sphere_moment",
    "tangent_block",
]
