"""Finite reflection groups and their invariants."""

from .groups import (
    ReflectionGroup,
    build_group,
    classical_order,
    coxeter_gram,
    group_label,
    invariant_degrees,
    reflection_matrix,
)
from .invariants import (
    degree_series,
    degrees_table,
    invariant_dimension,
    invariant_dimensions,
    molien_series,
    orthogonal_of_degree,
    predicted_orthogonal_degree,
)

__all__ = [
    "ReflectionGroup",
    "build_group",
    "classical_order",
    "coxeter_gram",
    "degree_series",
    "degrees_table",
    "group_label",
    "invariant_degrees",
    "invariant_dimension",
    "invariant_dimensions",
    "molien_series",
    "orthogonal_of_degree",
    "predicted_orthogonal_degree",
    "reflection_matrix",
]
