"""Molien series, invariant dimensions and the table of invariant degrees."""

from __future__ import annotations

from collections import Counter
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import structlog

from ..config.constants import (
    EXCEPTIONAL_DEGREES,
    MAX_MOLIEN_DEGREE,
    MOLIEN_INTEGRALITY_TOLERANCE,
)
from ..exceptions.base import WeylTubeComputationError
from ..exceptions.client import WeylTubeValidationError
from ..models.common import GroupType
from .groups import ReflectionGroup, invariant_degrees

logger = structlog.get_logger(__name__)


def _check_degree(max_degree: int) -> None:
    if not 0 <= max_degree <= MAX_MOLIEN_DEGREE:
        raise WeylTubeValidationError(
            f"degree must lie in [0, {MAX_MOLIEN_DEGREE}]", field="d", value=max_degree
        )


def _inverse_series(coefficients: Sequence[float], max_degree: int) -> np.ndarray:
    """Power series of ``1 / sum_k c_k q^k`` (``c_0 = 1``) up to ``q^max_degree``."""
    series = np.zeros(max_degree + 1)
    series[0] = 1.0
    for n in range(1, max_degree + 1):
        acc = 0.0
        for j in range(1, min(n, len(coefficients) - 1) + 1):
            acc += coefficients[j] * series[n - j]
        series[n] = -acc
    return series


def molien_series(group: ReflectionGroup, max_degree: int) -> np.ndarray:
    """
    Coefficients of ``(1/|G|) sum_g 1 / det(I - q g)`` up to ``q^max_degree``.

    ``det(I - q g)`` has the coefficients of the characteristic polynomial of
    ``g``; elements sharing one characteristic polynomial are inverted once.
    """
    _check_degree(max_degree)
    counts: Counter = Counter()
    representatives: Dict[Tuple[float, ...], np.ndarray] = {}
    for element in group.elements:
        coefficients = np.poly(np.asarray(element, dtype=float)).real
        key = tuple(np.round(coefficients, 8) + 0.0)
        counts[key] += 1
        representatives.setdefault(key, coefficients)
    total = np.zeros(max_degree + 1)
    for key, count in counts.items():
        total += count * _inverse_series(representatives[key], max_degree)
    series = total / group.order
    logger.debug("Molien series", group=group.label, classes=len(counts), degree=max_degree)
    return series


def _as_counts(series: np.ndarray, label: str) -> List[int]:
    counts = np.rint(series)
    drift = float(np.max(np.abs(series - counts)))
    if drift > MOLIEN_INTEGRALITY_TOLERANCE:
        raise WeylTubeComputationError(
            f"{label}: Molien coefficients are not integral (drift {drift:.2e})",
            error_code="molien",
        )
    return [int(c) for c in counts]


def invariant_dimension(group: ReflectionGroup, d: int) -> int:
    """Dimension of the degree-``d`` invariant polynomials (coefficient of ``q^d``)."""
    return invariant_dimensions(group, d)[d]


def invariant_dimensions(group: ReflectionGroup, max_degree: int) -> List[int]:
    """Invariant dimensions for every degree ``0..max_degree``."""
    return _as_counts(molien_series(group, max_degree), group.label)


def degree_series(degrees: Sequence[int], max_degree: int) -> List[int]:
    """Coefficients of ``prod_i 1 / (1 - q^{d_i})`` up to ``q^max_degree`` (exact integers)."""
    series = [0] * (max_degree + 1)
    series[0] = 1
    for d in degrees:
        for n in range(d, max_degree + 1):
            series[n] += series[n - d]
    return series


def orthogonal_of_degree(group: ReflectionGroup, max_degree: int = MAX_MOLIEN_DEGREE) -> int:
    """
    Largest ``n <= max_degree`` such that the group has the invariants of ``O(m)`` up to degree ``n``.

    For ``O(m)`` the degree-``d`` invariants are spanned by ``|t|^d`` for even
    ``d`` and vanish for odd ``d``.
    """
    counts = invariant_dimensions(group, max_degree)
    n = 0
    for d in range(1, max_degree + 1):
        if counts[d] != (1 if d % 2 == 0 else 0):
            break
        n = d
    logger.info(
        "Orthogonal degree computed",
        group=group.label,
        order=group.order,
        orthogonal_degree=n,
        second_degree=group.second_degree,
    )
    return n


def degrees_table(max_rank: int = 8, max_dihedral: int = 12) -> Dict[str, Tuple[int, ...]]:
    """
    Invariant degrees of the irreducible finite reflection groups.

    The infinite families are listed up to ``max_rank`` and the dihedral
    groups ``I2(k)`` for ``5 <= k <= max_dihedral``; the exceptional types
    (E6, E7, E8, F4, H3, H4) are always present.
    """
    table: Dict[str, Tuple[int, ...]] = {}
    for m in range(1, max_rank + 1):
        table[f"A{m}"] = invariant_degrees(GroupType.A, m)
    for m in range(2, max_rank + 1):
        table[f"B{m}"] = invariant_degrees(GroupType.B, m)
    for m in range(4, max_rank + 1):
        table[f"D{m}"] = invariant_degrees(GroupType.D, m)
    table.update(EXCEPTIONAL_DEGREES)
    for k in range(5, max_dihedral + 1):
        table[f"I2({k})"] = invariant_degrees(GroupType.I2, k=k)
    return table


def predicted_orthogonal_degree(degrees: Sequence[int], cap: Optional[int] = None) -> int:
    """``d_2 - 1`` read off the degrees; rank-one groups are capped at ``cap``."""
    if len(degrees) < 2:
        return cap if cap is not None else MAX_MOLIEN_DEGREE
    return sorted(degrees)[1] - 1
