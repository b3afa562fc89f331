"""Cross-section domain catalog and membership predicates."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import structlog

from ..config.constants import BOUNDARY_TOLERANCE, PROFILE_GRID
from ..exceptions.base import DimensionMismatchError
from ..exceptions.client import WeylTubeValidationError
from ..models.common import DomainKind

logger = structlog.get_logger(__name__)

Predicate = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class FourierProfile:
    """
    Positive periodic profile ``a(phi) = c_0 + sum_k (c_k cos k phi + s_k sin k phi)``.

    ``modes`` maps a positive mode ``k`` to ``(c_k, s_k)``.
    """

    constant: float
    modes: Dict[int, Tuple[float, float]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        cleaned: Dict[int, Tuple[float, float]] = {}
        for k, (c, s) in self.modes.items():
            k = int(k)
            if k < 0:
                k, s = -k, -s
            if k == 0:
                object.__setattr__(self, "constant", float(self.constant) + float(c))
                continue
            prev = cleaned.get(k, (0.0, 0.0))
            total = (prev[0] + float(c), prev[1] + float(s))
            if total != (0.0, 0.0):
                cleaned[k] = total
            else:
                cleaned.pop(k, None)
        object.__setattr__(self, "constant", float(self.constant))
        object.__setattr__(self, "modes", dict(sorted(cleaned.items())))

    @classmethod
    def from_triples(cls, constant: float, triples: Sequence[Sequence[float]]) -> "FourierProfile":
        """Build from ``[[mode, cos_coeff, sin_coeff], ...]``."""
        modes: Dict[int, Tuple[float, float]] = {}
        for triple in triples:
            if len(triple) != 3:
                raise WeylTubeValidationError(
                    "each mode must be [mode, cos_coeff, sin_coeff]", field="modes", value=triple
                )
            k, c, s = triple
            if int(k) != k:
                raise WeylTubeValidationError("mode must be an integer", field="modes", value=k)
            prev = modes.get(int(k), (0.0, 0.0))
            modes[int(k)] = (prev[0] + float(c), prev[1] + float(s))
        return cls(constant, modes)

    @property
    def max_mode(self) -> int:
        return max(self.modes, default=0)

    def __call__(self, phi: np.ndarray | float) -> np.ndarray:
        phi = np.asarray(phi, dtype=float)
        value = np.full(phi.shape, self.constant)
        for k, (c, s) in self.modes.items():
            value = value + c * np.cos(k * phi) + s * np.sin(k * phi)
        return value

    def __mul__(self, other: "FourierProfile") -> "FourierProfile":
        """Exact product of two trigonometric polynomials."""
        lhs = [(0, self.constant, 0.0)] + [(k, c, s) for k, (c, s) in self.modes.items()]
        rhs = [(0, other.constant, 0.0)] + [(k, c, s) for k, (c, s) in other.modes.items()]
        acc: Dict[int, List[float]] = {}

        def add(k: int, c: float, s: float) -> None:
            if k < 0:
                k, s = -k, -s
            slot = acc.setdefault(k, [0.0, 0.0])
            slot[0] += c
            slot[1] += s

        for j, a, b in lhs:
            for k, c, d in rhs:
                # (a cos j + b sin j)(c cos k + d sin k)
                add(j + k, 0.5 * (a * c - b * d), 0.5 * (a * d + b * c))
                add(j - k, 0.5 * (a * c + b * d), 0.5 * (b * c - a * d))
        constant = acc.pop(0, [0.0, 0.0])[0]
        return FourierProfile(constant, {k: (v[0], v[1]) for k, v in acc.items()})

    def minimum(self, nodes: int = PROFILE_GRID) -> float:
        return float(np.min(self(np.linspace(0.0, 2 * np.pi, nodes, endpoint=False))))

    def maximum(self, nodes: int = PROFILE_GRID) -> float:
        return float(np.max(self(np.linspace(0.0, 2 * np.pi, nodes, endpoint=False))))

    def has_only_even_modes(self) -> bool:
        return all(k % 2 == 0 for k in self.modes)


@dataclass(frozen=True, eq=False)
class Domain:
    """
    Compact cross-section domain around the origin in ``R^m``.

    Build instances with the classmethods; ``kind`` decides which of the
    optional fields are meaningful.
    """

    kind: DomainKind
    m: int
    sides: Optional[int] = None
    apex: Optional[float] = None
    profile: Optional[FourierProfile] = None
    predicate: Optional[Predicate] = None
    bounding_radius: Optional[float] = None
    label: str = ""

    def __post_init__(self) -> None:
        if self.m < 1:
            raise WeylTubeValidationError("dimension must be at least 1", field="m", value=self.m)
        if not self.label:
            object.__setattr__(self, "label", self._default_label())
        if not bool(self.contains(np.zeros((1, self.m)))[0]):
            raise WeylTubeValidationError(
                "domain must contain the origin", field="kind", value=self.kind
            )

    def _default_label(self) -> str:
        kind = DomainKind(self.kind)
        if kind is DomainKind.REGULAR_POLYGON:
            return f"regular_polygon(k={self.sides})"
        if kind is DomainKind.CONE_BALL:
            return f"cone_ball(m={self.m}, b={self.apex:g})"
        return f"{kind.value}(m={self.m})"

    # Constructors

    @classmethod
    def ball(cls, m: int) -> "Domain":
        return cls(DomainKind.BALL, m)

    @classmethod
    def interval(cls) -> "Domain":
        """``[-1, 1]``, the unit ball of ``R^1``."""
        return cls(DomainKind.BALL, 1, label="interval")

    @classmethod
    def cube(cls, m: int) -> "Domain":
        return cls(DomainKind.CUBE, m)

    @classmethod
    def cross_polytope(cls, m: int) -> "Domain":
        return cls(DomainKind.CROSS_POLYTOPE, m)

    @classmethod
    def diamond(cls, m: int) -> "Domain":
        """Convex hull of the unit ball of ``t_m = 0`` and ``+-e_m``."""
        if m < 2:
            raise WeylTubeValidationError("diamond needs m >= 2", field="m", value=m)
        return cls(DomainKind.DIAMOND, m)

    @classmethod
    def regular_polygon(cls, k: int) -> "Domain":
        """Regular ``k``-gon inscribed in the unit circle, first vertex on the ``t_1`` axis."""
        if k < 3:
            raise WeylTubeValidationError("polygon needs at least 3 sides", field="k", value=k)
        return cls(DomainKind.REGULAR_POLYGON, 2, sides=k)

    @classmethod
    def cone_ball(cls, m: int, b: float) -> "Domain":
        """Half unit ball ``t_1 <= 0`` glued to the cone with apex ``(b, 0, ..., 0)``."""
        if not b > 0:
            raise WeylTubeValidationError("apex parameter must be positive", field="b", value=b)
        return cls(DomainKind.CONE_BALL, m, apex=float(b))

    @classmethod
    def radial2d(cls, profile: FourierProfile, label: str = "") -> "Domain":
        """Planar star domain ``{0 <= r <= a(phi)}``."""
        if profile.minimum() <= 0:
            raise WeylTubeValidationError(
                "radial profile must be positive", field="modes", value=profile.minimum()
            )
        return cls(DomainKind.RADIAL_2D, 2, profile=profile, label=label)

    @classmethod
    def monte_carlo(
        cls, m: int, predicate: Predicate, bounding_radius: float, label: str = ""
    ) -> "Domain":
        """Generic domain known only through a vectorized membership predicate."""
        if not (bounding_radius > 0 and math.isfinite(bounding_radius)):
            raise WeylTubeValidationError(
                "bounding radius must be positive and finite",
                field="bounding_radius",
                value=bounding_radius,
            )
        return cls(
            DomainKind.MONTE_CARLO,
            m,
            predicate=predicate,
            bounding_radius=float(bounding_radius),
            label=label or f"monte_carlo(m={m})",
        )

    def sampled_twin(self) -> "Domain":
        """The same set, seen only through its membership predicate."""
        return Domain.monte_carlo(
            self.m, self.contains, self.circumradius(), label=f"sampled {self.label}"
        )

    # Geometry

    def polygon_vertices(self) -> List[Tuple[float, float]] | List[Tuple[Fraction, Fraction]]:
        if self.sides is None:
            raise DimensionMismatchError("not a polygon")
        return regular_polygon_vertices(self.sides)

    def circumradius(self) -> float:
        kind = DomainKind(self.kind)
        if kind is DomainKind.CUBE:
            return math.sqrt(self.m)
        if kind is DomainKind.CONE_BALL:
            return max(1.0, float(self.apex))
        if kind is DomainKind.RADIAL_2D:
            return self.profile.maximum()
        if kind is DomainKind.MONTE_CARLO:
            return float(self.bounding_radius)
        return 1.0

    def is_centrally_symmetric(self) -> bool:
        kind = DomainKind(self.kind)
        if kind in (DomainKind.BALL, DomainKind.CUBE, DomainKind.CROSS_POLYTOPE, DomainKind.DIAMOND):
            return True
        if kind is DomainKind.REGULAR_POLYGON:
            return self.sides % 2 == 0
        if kind is DomainKind.RADIAL_2D:
            return self.profile.has_only_even_modes()
        return False

    def contains(self, points: np.ndarray) -> np.ndarray:
        """Vectorized membership for the rows of ``points``; boundary points are inside."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if points.shape[1] != self.m:
            raise DimensionMismatchError(
                "point has wrong dimension", expected=self.m, actual=points.shape[1]
            )
        tol = BOUNDARY_TOLERANCE
        kind = DomainKind(self.kind)
        if kind is DomainKind.BALL:
            return np.sum(points**2, axis=1) <= 1.0 + tol
        if kind is DomainKind.CUBE:
            return np.max(np.abs(points), axis=1) <= 1.0 + tol
        if kind is DomainKind.CROSS_POLYTOPE:
            return np.sum(np.abs(points), axis=1) <= 1.0 + tol
        if kind is DomainKind.DIAMOND:
            radial = np.linalg.norm(points[:, :-1], axis=1)
            return radial <= 1.0 - np.abs(points[:, -1]) + tol
        if kind is DomainKind.REGULAR_POLYGON:
            k = self.sides
            angles = 2 * np.pi * (np.arange(k) + 0.5) / k
            normals = np.stack([np.cos(angles), np.sin(angles)], axis=1)
            return np.all(points @ normals.T <= math.cos(math.pi / k) + tol, axis=1)
        if kind is DomainKind.CONE_BALL:
            b = float(self.apex)
            t1 = points[:, 0]
            rest = np.linalg.norm(points[:, 1:], axis=1)
            in_half_ball = (t1 <= 0) & (np.sum(points**2, axis=1) <= 1.0 + tol)
            in_cone = (t1 >= 0) & (t1 <= b + tol) & (rest <= 1.0 - t1 / b + tol)
            return in_half_ball | in_cone
        if kind is DomainKind.RADIAL_2D:
            r = np.hypot(points[:, 0], points[:, 1])
            phi = np.arctan2(points[:, 1], points[:, 0])
            return r <= self.profile(phi) + tol
        return np.asarray(self.predicate(points), dtype=bool)

    def __repr__(self) -> str:
        return f"Domain({self.label})"


def membership(domain: Domain, t: Sequence[float]) -> bool:
    """Point-in-domain test for a single point ``t`` of length ``m``."""
    if len(t) != domain.m:
        raise DimensionMismatchError("point has wrong dimension", expected=domain.m, actual=len(t))
    return bool(domain.contains(np.asarray(t, dtype=float)[None, :])[0])


def regular_polygon_vertices(k: int) -> List[Tuple[float, float]] | List[Tuple[Fraction, Fraction]]:
    """Vertices ``(cos 2 pi j/k, sin 2 pi j/k)``; exact rationals for the square."""
    if k == 4:
        one, zero = Fraction(1), Fraction(0)
        return [(one, zero), (zero, one), (-one, zero), (zero, -one)]
    return [(math.cos(2 * math.pi * j / k), math.sin(2 * math.pi * j / k)) for j in range(k)]
