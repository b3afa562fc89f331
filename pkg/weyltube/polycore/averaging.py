"""Averaging of polynomials over the orthogonal group and over finite matrix groups."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterable, Mapping, Optional, Sequence

import numpy as np
import structlog

from ..config.constants import ORTHOGONALITY_TOLERANCE
from ..exceptions.base import DimensionMismatchError, NonOrthogonalElementError
from .poly import Coefficient, Poly, coerce_coefficient, multi_indices, multinomial

logger = structlog.get_logger(__name__)


def double_factorial(k: int) -> int:
    """``k!!`` with the convention ``(-1)!! = 0!! = 1``."""
    result = 1
    while k > 1:
        result *= k
        k -= 2
    return result


def rising_even_product(m: int, d: int) -> int:
    """``m (m+2) ... (m+d-2)``; the empty product (``d = 0``) is 1."""
    result = 1
    for j in range(d // 2):
        result *= m + 2 * j
    return result


def sphere_moment(m: int, alpha: Sequence[int]) -> Fraction:
    """
    Average of ``t^alpha`` over the unit sphere ``S^{m-1}``.

    Any odd exponent gives 0; otherwise the value is
    ``prod (alpha_i - 1)!! / (m (m+2) ... (m+|alpha|-2))``.
    For ``m = 1`` the sphere is ``{-1, +1}``.
    """
    if m < 1:
        raise DimensionMismatchError("sphere dimension must be positive", actual=m)
    if len(alpha) != m:
        raise DimensionMismatchError(
            "multi-index length must equal m", expected=m, actual=len(alpha)
        )
    if any(a < 0 for a in alpha):
        raise DimensionMismatchError(f"negative exponent in {tuple(alpha)}")
    if any(a % 2 for a in alpha):
        return Fraction(0)
    numerator = 1
    for a in alpha:
        numerator *= double_factorial(a - 1)
    return Fraction(numerator, rising_even_product(m, sum(alpha)))


@dataclass(frozen=True)
class RadialPoly:
    """
    Radial polynomial ``sum_d c_d |t|^d`` in ``m`` variables (even ``d`` only).
    """

    m: int
    coefficients: Mapping[int, Coefficient] = field(default_factory=dict)

    def __post_init__(self) -> None:
        cleaned: Dict[int, Coefficient] = {}
        for d, c in self.coefficients.items():
            value = coerce_coefficient(c)
            if value == 0:
                continue
            if d % 2:
                raise ValueError(f"radial polynomial has odd degree slot {d}")
            cleaned[int(d)] = value
        object.__setattr__(self, "coefficients", dict(sorted(cleaned.items())))

    def coefficient(self, d: int) -> Coefficient:
        return self.coefficients.get(d, Fraction(0))

    @property
    def degree(self) -> int:
        return max(self.coefficients, default=-1)

    def is_zero(self) -> bool:
        return not self.coefficients

    def evaluate(self, t: Sequence[Any]) -> Coefficient:
        r2 = sum(coerce_coefficient(x) * coerce_coefficient(x) for x in t)
        return sum((c * r2 ** (d // 2) for d, c in self.coefficients.items()), Fraction(0))

    def to_poly(self) -> Poly:
        """Expand ``|t|^d = (t_1^2 + ... + t_m^2)^{d/2}`` into monomials."""
        result = Poly.zero(self.m)
        for d, c in self.coefficients.items():
            half = d // 2
            terms = {
                tuple(2 * b for b in beta): multinomial(half, beta) * c
                for beta in multi_indices(self.m, half)
            }
            result = result + Poly(self.m, terms)
        return result


def average_orthogonal(p: Poly) -> RadialPoly:
    """
    Average ``p(g t)`` over Haar measure on ``O(m)``.

    Args:
        p: Polynomial in ``m`` variables

    Returns:
        ``RadialPoly`` with ``c_d = sum_{|alpha|=d} coeff_alpha * sphere_moment(m, alpha)``
    """
    if p.m < 1:
        raise DimensionMismatchError("averaging needs at least one variable", actual=p.m)
    coefficients: Dict[int, Coefficient] = {}
    for alpha, coeff in p.terms.items():
        moment = sphere_moment(p.m, alpha)
        if moment == 0:
            continue
        d = sum(alpha)
        coefficients[d] = coefficients.get(d, Fraction(0)) + coeff * moment
    return RadialPoly(p.m, coefficients)


def _as_matrices(elements: Iterable[Any], m: int) -> list[np.ndarray]:
    matrices = []
    for index, element in enumerate(elements):
        matrix = np.asarray(element)
        if matrix.shape != (m, m):
            raise DimensionMismatchError(
                f"group element {index} has shape {matrix.shape}", expected=m
            )
        numeric = matrix.astype(float)
        defect = float(np.max(np.abs(numeric.T @ numeric - np.eye(m))))
        if defect > ORTHOGONALITY_TOLERANCE:
            raise NonOrthogonalElementError(defect, index)
        matrices.append(matrix)
    return matrices


def _exact_rows(matrix: np.ndarray) -> Optional[list[list[Fraction]]]:
    """Rational rows when every entry is (numerically) an integer or already exact."""
    if matrix.dtype == object:
        rows = [[coerce_coefficient(x) for x in row] for row in matrix]
        if all(isinstance(x, Fraction) for row in rows for x in row):
            return rows
        return None
    rounded = np.rint(matrix)
    if np.all(np.abs(matrix - rounded) < 1e-12):
        return [[Fraction(int(x)) for x in row] for row in rounded]
    return None


def group_elements(group: Any) -> Sequence[Any]:
    """Accept either a reflection group (``.elements``) or an explicit element list."""
    return getattr(group, "elements", group)


def average_group(p: Poly, group: Any) -> Poly:
    """
    Uniform average ``(1/|G|) sum_g p(g t)`` over a finite matrix group.

    Exact when every group matrix is integral (signed permutations); numeric
    otherwise.

    Args:
        p: Polynomial in ``m`` variables
        group: ``ReflectionGroup`` or a sequence of ``m x m`` orthogonal matrices

    Returns:
        The averaged polynomial

    Raises:
        NonOrthogonalElementError: If an element has Gram defect above tolerance
    """
    matrices = _as_matrices(group_elements(group), p.m)
    if not matrices:
        raise DimensionMismatchError("cannot average over an empty group")
    total = Poly.zero(p.m)
    exact = True
    for matrix in matrices:
        rows = _exact_rows(matrix)
        if rows is None:
            exact = False
            rows = matrix.astype(float).tolist()
        total = total + p.substitute_linear(rows)
    scale = Fraction(1, len(matrices)) if exact else 1.0 / len(matrices)
    averaged = total * scale
    logger.debug("group average", order=len(matrices), exact=exact, terms=len(averaged.terms))
    return averaged


def average_group_values(p: Poly, group: Any, points: np.ndarray) -> np.ndarray:
    """
    Evaluate the group average of ``p`` at the rows of ``points`` without expanding it.

    Suited to large groups (H4 has 14400 elements) where symbolic expansion is
    wasteful.
    """
    matrices = np.stack([np.asarray(g, dtype=float) for g in group_elements(group)])
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if matrices.shape[1:] != (p.m, p.m):
        raise DimensionMismatchError("group acts on the wrong dimension", expected=p.m)
    values = np.empty(points.shape[0])
    for k, point in enumerate(points):
        images = matrices @ point
        values[k] = float(np.mean(p.evaluate_many(images)))
    return values


def radial_series_value(radial: RadialPoly, points: np.ndarray) -> np.ndarray:
    """Float evaluation of a radial polynomial at the rows of ``points``."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    r2 = np.sum(points * points, axis=1)
    values = np.zeros(points.shape[0])
    for d, c in radial.coefficients.items():
        values += float(c) * r2 ** (d // 2)
    return values

