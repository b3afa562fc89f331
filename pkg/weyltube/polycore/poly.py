"""Sparse multivariate polynomials over the rationals (or floats in numeric mode)."""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from numbers import Integral, Rational
from types import MappingProxyType
from typing import Any, Dict, Iterable, Iterator, List, Mapping, Sequence, Tuple, Union

import numpy as np
import structlog

from ..config.constants import MAX_DETERMINANT_SIZE
from ..exceptions.base import DeterminantSizeError, DimensionMismatchError

logger = structlog.get_logger(__name__)

MultiIndex = Tuple[int, ...]
Coefficient = Union[Fraction, float]


def coerce_coefficient(value: Any) -> Coefficient:
    """
    Normalize a scalar to the coefficient field.

    Integers and rationals become ``Fraction``; everything else is a float.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (bool, np.bool_)):
        return Fraction(int(value))
    if isinstance(value, (Integral, np.integer)):
        return Fraction(int(value))
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    return float(value)


def is_exact(value: Any) -> bool:
    """True for rational scalars."""
    return isinstance(value, (Fraction, Integral, np.integer))


def total_degree(alpha: Sequence[int]) -> int:
    return sum(alpha)


def unit_index(m: int, i: int, power: int = 1) -> MultiIndex:
    """Multi-index of ``t_i**power`` in ``m`` variables."""
    alpha = [0] * m
    alpha[i] = power
    return tuple(alpha)


def multi_indices(m: int, degree: int) -> Iterator[MultiIndex]:
    """All multi-indices of length ``m`` and total degree ``degree``, graded-lex order."""
    if m == 0:
        if degree == 0:
            yield ()
        return
    for first in range(degree, -1, -1):
        for rest in multi_indices(m - 1, degree - first):
            yield (first,) + rest


def graded_key(alpha: MultiIndex) -> Tuple[int, Tuple[int, ...]]:
    """Sort key: ascending total degree, then lexicographically descending exponents."""
    return (sum(alpha), tuple(-a for a in alpha))


class Poly:
    """
    Immutable sparse polynomial in ``m`` variables ``t_1..t_m``.

    Terms map a multi-index to a nonzero coefficient. Coefficients are
    ``Fraction`` in exact mode; any float coefficient makes the result of
    arithmetic numeric.
    """

    __slots__ = ("_m", "_terms", "_hash")

    def __init__(self, m: int, terms: Mapping[Sequence[int], Any] | None = None) -> None:
        if m < 0:
            raise DimensionMismatchError("variable count must be non-negative", actual=m)
        collected: Dict[MultiIndex, Coefficient] = {}
        for alpha, coeff in (terms or {}).items():
            key = tuple(int(a) for a in alpha)
            if len(key) != m:
                raise DimensionMismatchError(
                    f"multi-index {key} has length {len(key)}, expected {m}",
                    expected=m,
                    actual=len(key),
                )
            if any(a < 0 for a in key):
                raise DimensionMismatchError(f"negative exponent in {key}")
            value = coerce_coefficient(coeff)
            if key in collected:
                value = collected[key] + value
            collected[key] = value
        self._m = m
        self._terms = MappingProxyType({k: v for k, v in collected.items() if v != 0})
        self._hash: int | None = None

    # Constructors

    @classmethod
    def zero(cls, m: int) -> "Poly":
        return cls(m)

    @classmethod
    def constant(cls, m: int, value: Any) -> "Poly":
        return cls(m, {(0,) * m: value})

    @classmethod
    def one(cls, m: int) -> "Poly":
        return cls.constant(m, 1)

    @classmethod
    def variable(cls, m: int, i: int) -> "Poly":
        """The coordinate polynomial ``t_{i+1}`` (0-based ``i``)."""
        if not 0 <= i < m:
            raise DimensionMismatchError(f"variable index {i} out of range for m={m}")
        return cls(m, {unit_index(m, i): 1})

    @classmethod
    def linear(cls, coefficients: Sequence[Any], constant: Any = 0) -> "Poly":
        """``constant + sum_i c_i t_i``."""
        m = len(coefficients)
        terms: Dict[MultiIndex, Any] = {(0,) * m: constant}
        for i, c in enumerate(coefficients):
            terms[unit_index(m, i)] = c
        return cls(m, terms)

    # Accessors

    @property
    def m(self) -> int:
        return self._m

    @property
    def terms(self) -> Mapping[MultiIndex, Coefficient]:
        return self._terms

    @property
    def degree(self) -> int:
        """Total degree; the zero polynomial has degree -1."""
        if not self._terms:
            return -1
        return max(sum(alpha) for alpha in self._terms)

    @property
    def is_exact(self) -> bool:
        return all(isinstance(c, Fraction) for c in self._terms.values())

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, alpha: Sequence[int]) -> Coefficient:
        return self._terms.get(tuple(alpha), Fraction(0))

    def sorted_terms(self) -> List[Tuple[MultiIndex, Coefficient]]:
        """Terms in canonical graded-lexicographic order."""
        return sorted(self._terms.items(), key=lambda item: graded_key(item[0]))

    def homogeneous_part(self, degree: int) -> "Poly":
        return Poly(self._m, {a: c for a, c in self._terms.items() if sum(a) == degree})

    def map_coefficients(self, fn) -> "Poly":
        return Poly(self._m, {a: fn(c) for a, c in self._terms.items()})

    def to_float(self) -> "Poly":
        return self.map_coefficients(float)

    # Arithmetic

    def _check(self, other: "Poly") -> None:
        if other._m != self._m:
            raise DimensionMismatchError(
                "polynomials live in different variable counts",
                expected=self._m,
                actual=other._m,
            )

    def _lift(self, other: Any) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        return Poly.constant(self._m, other)

    def __add__(self, other: Any) -> "Poly":
        other = self._lift(other)
        terms = dict(self._terms)
        for alpha, coeff in other._terms.items():
            terms[alpha] = terms.get(alpha, 0) + coeff
        return Poly(self._m, terms)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self._m, {a: -c for a, c in self._terms.items()})

    def __sub__(self, other: Any) -> "Poly":
        return self + (-self._lift(other))

    def __rsub__(self, other: Any) -> "Poly":
        return self._lift(other) - self

    def __mul__(self, other: Any) -> "Poly":
        if not isinstance(other, Poly):
            scalar = coerce_coefficient(other)
            return Poly(self._m, {a: c * scalar for a, c in self._terms.items()})
        self._check(other)
        terms: Dict[MultiIndex, Coefficient] = {}
        for a, ca in self._terms.items():
            for b, cb in other._terms.items():
                key = tuple(x + y for x, y in zip(a, b))
                terms[key] = terms.get(key, 0) + ca * cb
        return Poly(self._m, terms)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Poly":
        if exponent < 0:
            raise ValueError("negative powers are not polynomials")
        result = Poly.one(self._m)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly):
            return self._m == other._m and dict(self._terms) == dict(other._terms)
        if isinstance(other, (int, Fraction, float)):
            return self == Poly.constant(self._m, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._m, frozenset(self._terms.items())))
        return self._hash

    # Evaluation and substitution

    def __call__(self, t: Sequence[Any]) -> Coefficient:
        return self.evaluate(t)

    def evaluate(self, t: Sequence[Any]) -> Coefficient:
        if len(t) != self._m:
            raise DimensionMismatchError(
                "evaluation point has wrong length", expected=self._m, actual=len(t)
            )
        total: Coefficient = Fraction(0)
        for alpha, coeff in self._terms.items():
            term = coeff
            for x, a in zip(t, alpha):
                if a:
                    term = term * x**a
            total = total + term
        return total

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        """Vectorized float evaluation at the rows of ``points`` (shape ``(k, m)``)."""
        points = np.asarray(points, dtype=float)
        if points.ndim != 2 or points.shape[1] != self._m:
            raise DimensionMismatchError(
                "points must have shape (k, m)", expected=self._m, actual=points.shape[-1]
            )
        if not self._terms:
            return np.zeros(points.shape[0])
        alphas = np.array(list(self._terms.keys()), dtype=float)
        coeffs = np.array([float(c) for c in self._terms.values()])
        monomials = np.prod(points[:, None, :] ** alphas[None, :, :], axis=2)
        return monomials @ coeffs

    def substitute_linear(self, matrix: Sequence[Sequence[Any]]) -> "Poly":
        """
        Return ``p(g t)`` for an ``m x m`` matrix ``g``.

        Entries that are integers or Fractions keep the result exact.
        """
        rows = [[coerce_coefficient(x) for x in row] for row in matrix]
        if len(rows) != self._m or any(len(row) != self._m for row in rows):
            raise DimensionMismatchError("substitution matrix must be m x m", expected=self._m)
        forms = [Poly.linear(row) for row in rows]
        powers: Dict[Tuple[int, int], Poly] = {}

        def power(i: int, k: int) -> Poly:
            key = (i, k)
            if key not in powers:
                powers[key] = Poly.one(self._m) if k == 0 else power(i, k - 1) * forms[i]
            return powers[key]

        result = Poly.zero(self._m)
        for alpha, coeff in self._terms.items():
            term = Poly.constant(self._m, coeff)
            for i, a in enumerate(alpha):
                if a:
                    term = term * power(i, a)
            result = result + term
        return result

    # Serialization

    def to_json_dict(self) -> Dict[str, Any]:
        """``{"m": int, "terms": [{"alpha": [...], "num": str, "den": str}]}`` (floats use ``value``)."""
        terms: List[Dict[str, Any]] = []
        for alpha, coeff in self.sorted_terms():
            if isinstance(coeff, Fraction):
                terms.append(
                    {"alpha": list(alpha), "num": str(coeff.numerator), "den": str(coeff.denominator)}
                )
            else:
                terms.append({"alpha": list(alpha), "value": float(coeff)})
        return {"m": self._m, "terms": terms}

    @classmethod
    def from_json_dict(cls, payload: Mapping[str, Any]) -> "Poly":
        m = int(payload["m"])
        terms: Dict[MultiIndex, Coefficient] = {}
        for entry in payload.get("terms", []):
            alpha = tuple(int(a) for a in entry["alpha"])
            if "num" in entry:
                terms[alpha] = Fraction(int(entry["num"]), int(entry["den"]))
            else:
                terms[alpha] = float(entry["value"])
        return cls(m, terms)

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for alpha, coeff in self.sorted_terms():
            monomial = "*".join(
                f"t{i + 1}" if a == 1 else f"t{i + 1}^{a}" for i, a in enumerate(alpha) if a
            )
            pieces.append(f"{coeff}*{monomial}" if monomial else f"{coeff}")
        return " + ".join(pieces).replace("+ -", "- ")


def _permutation_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def poly_det(entries: Sequence[Sequence[Poly]]) -> Poly:
    """
    Exact determinant of an ``n x n`` matrix of polynomials by Leibniz expansion.

    Args:
        entries: Square matrix of ``Poly`` sharing one variable count

    Returns:
        The determinant polynomial (degree at most ``n`` times the entry degree)

    Raises:
        DeterminantSizeError: If ``n`` exceeds the Leibniz limit
        DimensionMismatchError: If the matrix is not square or variable counts differ
    """
    n = len(entries)
    if n > MAX_DETERMINANT_SIZE:
        raise DeterminantSizeError(n, MAX_DETERMINANT_SIZE)
    if any(len(row) != n for row in entries):
        raise DimensionMismatchError("determinant needs a square matrix", expected=n)
    if n == 0:
        raise DimensionMismatchError("empty determinant", expected=1, actual=0)
    m = entries[0][0].m
    for row in entries:
        for entry in row:
            if entry.m != m:
                raise DimensionMismatchError(
                    "determinant entries disagree on variable count", expected=m, actual=entry.m
                )

    result = Poly.zero(m)
    for perm in itertools.permutations(range(n)):
        factors = [entries[i][perm[i]] for i in range(n)]
        if any(f.is_zero() for f in factors):
            continue
        term = factors[0]
        for factor in factors[1:]:
            term = term * factor
        result = result + term if _permutation_sign(perm) > 0 else result - term
    return result


def tangent_block(h: np.ndarray | Sequence[Any], lowered_t: Sequence[Poly] | None = None) -> List[List[Poly]]:
    """
    Matrix ``delta_i^j - sum_p t_p h_i^{jp}`` as polynomials.

    Args:
        h: Array of shape ``(n, n, m)`` holding ``h_i^{jp}`` (index order i, j, p)
        lowered_t: Optional polynomials standing in for ``t_p``; defaults to the coordinates

    Returns:
        ``n x n`` nested list of ``Poly``
    """
    array = np.asarray(h, dtype=object)
    if array.ndim != 3 or array.shape[0] != array.shape[1]:
        raise DimensionMismatchError("h must have shape (n, n, m)")
    n, _, m = array.shape
    ts = list(lowered_t) if lowered_t is not None else [Poly.variable(m, p) for p in range(m)]
    matrix: List[List[Poly]] = []
    for i in range(n):
        row = []
        for j in range(n):
            entry = Poly.constant(m, 1 if i == j else 0)
            for p in range(m):
                coeff = array[i, j, p]
                if coeff != 0:
                    entry = entry - ts[p] * coerce_coefficient(coeff)
            row.append(entry)
        matrix.append(row)
    return matrix


def multinomial(total: int, parts: Iterable[int]) -> int:
    """Multinomial coefficient ``total! / prod(parts!)``."""
    result = 1
    remaining = total
    for part in parts:
        result *= math.comb(remaining, part)
        remaining -= part
    return result

