"""Monomial moment tables of cross-section domains."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, Mapping, Optional, Sequence, Tuple

import numpy as np
import structlog
from scipy.special import beta as beta_function

from ..config.constants import (
    MAX_MOMENT_DEGREE,
    MIN_RADIAL_NODES,
    RADIAL_NODE_FACTOR,
)
from ..config.settings import get_settings
from ..exceptions.base import MomentDepthError
from ..exceptions.client import WeylTubeValidationError
from ..models.common import DomainKind
from ..polycore import Coefficient, MultiIndex, Poly, multi_indices, multinomial, sphere_moment
from ..utils.sample_slicer import SampleChunk, map_chunks, sample_chunks
from .catalog import Domain, regular_polygon_vertices

logger = structlog.get_logger(__name__)


def sphere_area(k: int) -> Coefficient:
    """Volume of the unit sphere ``S^{k-1}``: ``2 pi^{k/2} / Gamma(k/2)``; exact (= 2) for ``k = 1``."""
    if k < 1:
        raise WeylTubeValidationError("sphere needs k >= 1", field="m", value=k)
    if k == 1:
        return Fraction(2)
    return 2 * math.pi ** (k / 2) / math.gamma(k / 2)


def ball_volume(k: int) -> Coefficient:
    """Volume of the unit ball ``B^k``; ``B^0`` is a point of measure 1."""
    if k == 0:
        return Fraction(1)
    return sphere_area(k) / k


def ball_moment_shape(k: int, alpha: Sequence[int]) -> Fraction:
    """``int_{B^k} t^alpha dt`` divided by ``sphere_area(k)``; exact."""
    if k == 0:
        return Fraction(1)
    return sphere_moment(k, alpha) / (k + sum(alpha))


def _beta_rational(a: int, b: int) -> Fraction:
    """``B(a, b) = (a-1)! (b-1)! / (a+b-1)!`` for positive integers."""
    return Fraction(math.factorial(a - 1) * math.factorial(b - 1), math.factorial(a + b - 1))


@dataclass(frozen=True)
class MomentTable:
    """
    Moments ``int_D t^alpha dt`` for every ``|alpha| <= max_degree``.

    Values are stored as ``scale * shape(alpha)``. The scale carries the
    transcendental factor shared by all entries (a sphere area for balls and
    diamonds), so the shapes stay exact rationals wherever possible.
    """

    domain: Domain
    max_degree: int
    shapes: Mapping[MultiIndex, Coefficient]
    scale: Coefficient = Fraction(1)
    scale_label: str = "1"
    errors: Mapping[MultiIndex, float] = field(default_factory=dict)

    @property
    def m(self) -> int:
        return self.domain.m

    def shape(self, alpha: Sequence[int]) -> Coefficient:
        key = tuple(alpha)
        if key not in self.shapes:
            raise MomentDepthError(sum(key), self.max_degree)
        return self.shapes[key]

    def value(self, alpha: Sequence[int]) -> Coefficient:
        return self.scale * self.shape(alpha)

    def is_exact(self, alpha: Sequence[int]) -> bool:
        return isinstance(self.value(alpha), Fraction)

    @property
    def exact(self) -> bool:
        return isinstance(self.scale, Fraction) and all(
            isinstance(v, Fraction) for v in self.shapes.values()
        )

    def error(self, alpha: Sequence[int]) -> float:
        """Standard error of a sampled entry, 0 for closed forms."""
        return self.errors.get(tuple(alpha), 0.0)

    def require(self, degree: int) -> None:
        if degree > self.max_degree:
            raise MomentDepthError(degree, self.max_degree)

    def items(self) -> Iterator[Tuple[MultiIndex, Coefficient]]:
        for alpha in sorted(self.shapes, key=lambda a: (sum(a), tuple(-x for x in a))):
            yield alpha, self.value(alpha)

    def integrate_shape(self, p: Poly) -> Coefficient:
        """``int_D p dt`` in units of ``scale``."""
        self.require(max(p.degree, 0))
        total: Coefficient = Fraction(0)
        for alpha, coeff in p.terms.items():
            total = total + coeff * self.shapes[alpha]
        return total

    def integrate(self, p: Poly) -> Coefficient:
        """``int_D p dt``."""
        return self.scale * self.integrate_shape(p)

    @property
    def volume(self) -> Coefficient:
        return self.value((0,) * self.m)


def _check_degree(max_degree: int) -> None:
    if max_degree < 0:
        raise WeylTubeValidationError("degree must be non-negative", field="N", value=max_degree)
    if max_degree > MAX_MOMENT_DEGREE:
        raise WeylTubeValidationError(
            f"moment degree above {MAX_MOMENT_DEGREE}", field="N", value=max_degree
        )


def _all_indices(m: int, max_degree: int) -> Iterator[MultiIndex]:
    for d in range(max_degree + 1):
        yield from multi_indices(m, d)


def _ball_table(domain: Domain, max_degree: int) -> MomentTable:
    m = domain.m
    shapes = {alpha: ball_moment_shape(m, alpha) for alpha in _all_indices(m, max_degree)}
    return MomentTable(domain, max_degree, shapes, scale=sphere_area(m), scale_label=f"|S^{m - 1}|")


def _cube_table(domain: Domain, max_degree: int) -> MomentTable:
    shapes: Dict[MultiIndex, Coefficient] = {}
    for alpha in _all_indices(domain.m, max_degree):
        value = Fraction(1)
        for a in alpha:
            value *= Fraction(2, a + 1) if a % 2 == 0 else 0
        shapes[alpha] = value
    return MomentTable(domain, max_degree, shapes)


def _cross_polytope_table(domain: Domain, max_degree: int) -> MomentTable:
    # Dirichlet integral over one orthant times 2^m
    m = domain.m
    shapes: Dict[MultiIndex, Coefficient] = {}
    for alpha in _all_indices(m, max_degree):
        if any(a % 2 for a in alpha):
            shapes[alpha] = Fraction(0)
            continue
        numerator = 2**m
        for a in alpha:
            numerator *= math.factorial(a)
        shapes[alpha] = Fraction(numerator, math.factorial(m + sum(alpha)))
    return MomentTable(domain, max_degree, shapes)


def _diamond_table(domain: Domain, max_degree: int) -> MomentTable:
    # Slice at height s: a ball of radius 1 - |s| in the first m - 1 coordinates
    m = domain.m
    shapes: Dict[MultiIndex, Coefficient] = {}
    for alpha in _all_indices(m, max_degree):
        head, last = alpha[:-1], alpha[-1]
        if last % 2 or any(a % 2 for a in head):
            shapes[alpha] = Fraction(0)
            continue
        height = 2 * _beta_rational(last + 1, m + sum(head))
        shapes[alpha] = height * ball_moment_shape(m - 1, head)
    return MomentTable(
        domain, max_degree, shapes, scale=sphere_area(m - 1), scale_label=f"|S^{m - 2}|"
    )


def _polygon_table(domain: Domain, max_degree: int) -> MomentTable:
    # Fan of triangles (0, v_j, v_{j+1}); each is the image of the unit simplex
    vertices = regular_polygon_vertices(domain.sides)
    k = len(vertices)
    shapes: Dict[MultiIndex, Coefficient] = {
        alpha: Fraction(0) for alpha in _all_indices(2, max_degree)
    }
    for j in range(k):
        (x0, y0), (x1, y1) = vertices[j], vertices[(j + 1) % k]
        jacobian = abs(x0 * y1 - x1 * y0)
        linear = [[x0, x1], [y0, y1]]
        for alpha in shapes:
            image = Poly(2, {alpha: 1}).substitute_linear(linear)
            total: Coefficient = Fraction(0)
            for (b1, b2), coeff in image.terms.items():
                total = total + coeff * Fraction(
                    math.factorial(b1) * math.factorial(b2), math.factorial(2 + b1 + b2)
                )
            shapes[alpha] = shapes[alpha] + jacobian * total
    return MomentTable(domain, max_degree, shapes)


def _cone_ball_table(domain: Domain, max_degree: int) -> MomentTable:
    m, b = domain.m, float(domain.apex)
    shapes: Dict[MultiIndex, Coefficient] = {}
    for alpha in _all_indices(m, max_degree):
        first, rest = alpha[0], alpha[1:]
        if any(a % 2 for a in rest):
            shapes[alpha] = 0.0
            continue
        k = m - 1
        cross = float(ball_moment_shape(k, rest)) * (float(sphere_area(k)) if k else 1.0)
        exponent = k + sum(rest)
        # half ball: int_{-1}^0 t^a (1 - t^2)^{exponent/2} dt
        half = (-1) ** first * 0.5 * beta_function((first + 1) / 2, exponent / 2 + 1)
        # cone: int_0^b t^a (1 - t/b)^exponent dt
        cone = b ** (first + 1) * float(_beta_rational(first + 1, exponent + 1))
        shapes[alpha] = (half + cone) * cross
    return MomentTable(domain, max_degree, shapes)


def radial_node_count(max_degree: int, max_mode: int) -> int:
    """Trapezoid nodes for a radial profile: at least ``8 (N + 2) max_mode``."""
    return max(MIN_RADIAL_NODES, RADIAL_NODE_FACTOR * (max_degree + 2) * max(1, max_mode))


def _radial2d_table(domain: Domain, max_degree: int) -> MomentTable:
    profile = domain.profile
    nodes = radial_node_count(max_degree, profile.max_mode)
    phi = 2 * np.pi * np.arange(nodes) / nodes
    a = profile(phi)
    if np.any(a <= 0):
        raise WeylTubeValidationError("radial profile must be positive", field="modes")
    weight = 2 * np.pi / nodes
    cos, sin = np.cos(phi), np.sin(phi)
    shapes: Dict[MultiIndex, Coefficient] = {}
    for alpha in _all_indices(2, max_degree):
        d = sum(alpha)
        integrand = cos ** alpha[0] * sin ** alpha[1] * a ** (d + 2) / (d + 2)
        shapes[alpha] = float(weight * np.sum(integrand))
    logger.debug("radial moments", nodes=nodes, max_mode=profile.max_mode, degree=max_degree)
    return MomentTable(domain, max_degree, shapes)


def _sampled_table(
    domain: Domain, max_degree: int, samples: int, seed: int, threads: Optional[int]
) -> MomentTable:
    settings = get_settings()
    m, radius = domain.m, float(domain.bounding_radius)
    alphas = list(_all_indices(m, max_degree))
    exponents = np.array(alphas, dtype=float)
    box = (2 * radius) ** m

    def worker(chunk: SampleChunk) -> Tuple[np.ndarray, np.ndarray]:
        rng = chunk.generator()
        points = rng.uniform(-radius, radius, size=(chunk.size, m))
        inside = domain.contains(points)
        hits = points[inside]
        monomials = np.prod(hits[:, None, :] ** exponents[None, :, :], axis=2)
        return monomials.sum(axis=0), (monomials**2).sum(axis=0)

    chunks = sample_chunks(samples, seed, settings.mc_chunk_size)
    partial = map_chunks(worker, chunks, threads or settings.threads)
    first = sum(p[0] for p in partial)
    second = sum(p[1] for p in partial)
    mean = first / samples
    variance = np.maximum(second / samples - mean**2, 0.0)
    shapes = {alpha: float(box * mean[i]) for i, alpha in enumerate(alphas)}
    errors = {alpha: float(box * math.sqrt(variance[i] / samples)) for i, alpha in enumerate(alphas)}
    return MomentTable(domain, max_degree, shapes, errors=errors)


def moments(
    domain: Domain,
    max_degree: int,
    *,
    samples: Optional[int] = None,
    seed: Optional[int] = None,
    threads: Optional[int] = None,
) -> MomentTable:
    """
    Moment table of ``domain`` up to total degree ``max_degree``.

    Args:
        domain: Cross-section domain
        max_degree: Largest ``|alpha|`` (at most 12)
        samples: Sample count for Monte Carlo domains
        seed: Seed for Monte Carlo domains
        threads: Worker threads for Monte Carlo domains

    Returns:
        MomentTable with entries for every ``|alpha| <= max_degree``

    Raises:
        WeylTubeValidationError: If the degree is out of range
    """
    _check_degree(max_degree)
    started = time.perf_counter()
    kind = DomainKind(domain.kind)
    if kind is DomainKind.BALL:
        table = _ball_table(domain, max_degree)
    elif kind is DomainKind.CUBE:
        table = _cube_table(domain, max_degree)
    elif kind is DomainKind.CROSS_POLYTOPE:
        table = _cross_polytope_table(domain, max_degree)
    elif kind is DomainKind.DIAMOND:
        table = _diamond_table(domain, max_degree)
    elif kind is DomainKind.REGULAR_POLYGON:
        table = _polygon_table(domain, max_degree)
    elif kind is DomainKind.CONE_BALL:
        table = _cone_ball_table(domain, max_degree)
    elif kind is DomainKind.RADIAL_2D:
        table = _radial2d_table(domain, max_degree)
    else:
        settings = get_settings()
        table = _sampled_table(
            domain,
            max_degree,
            samples or settings.mc_samples,
            settings.default_seed if seed is None else seed,
            threads,
        )
    logger.info(
        "Moment table built",
        domain=domain.label,
        degree=max_degree,
        exact=table.exact,
        seconds=round(time.perf_counter() - started, 4),
    )
    return table


def radial_moment_shape(table: MomentTable, d: int) -> Coefficient:
    """``int_D |t|^d dt`` in units of ``table.scale``."""
    if d % 2:
        raise WeylTubeValidationError("radial moment needs an even degree", field="d", value=d)
    table.require(d)
    half = d // 2
    total: Coefficient = Fraction(0)
    for beta in multi_indices(table.m, half):
        total = total + multinomial(half, beta) * table.shape(tuple(2 * b for b in beta))
    return total


def radial_moment(domain_or_table: Domain | MomentTable, d: int) -> Coefficient:
    """
    ``int_D |t|^d dt`` for even ``d``.

    Accepts a built table or a domain (a table of degree ``d`` is built).
    """
    if d % 2:
        raise WeylTubeValidationError("radial moment needs an even degree", field="d", value=d)
    table = domain_or_table
    if isinstance(domain_or_table, Domain):
        table = moments(domain_or_table, d)
    return table.scale * radial_moment_shape(table, d)


def volume(domain: Domain) -> Coefficient:
    return moments(domain, 0).volume
