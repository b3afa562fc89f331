"""Direct sampling oracles: tube volumes by rejection and Haar averages of the integrand."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import structlog

from ..config.settings import get_settings
from ..diffgeo.embedding import Embedding
from ..diffgeo.curvature import gauss_riemann
from ..diffgeo.lipschitz_killing import lipschitz_killing_integrands
from ..domains.catalog import Domain
from ..exceptions.base import FocalRadiusError
from ..exceptions.client import WeylTubeValidationError
from ..models.reports import MonteCarloEstimate
from ..models.scenario import MonteCarloSpec
from ..polycore import haar_samples, rising_even_product
from ..utils.sample_slicer import SampleChunk, map_chunks, sample_chunks
from .integrand import integrand_poly

logger = structlog.get_logger(__name__)

Offsets = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class ClosedFormTube:
    """Nearest-point offsets of a zoo manifold with its sampling box and focal bound."""

    offsets: Offsets  # (K, N) points -> (K, m) normal coordinates
    lower: np.ndarray
    upper: np.ndarray
    focal_bound: float

    @property
    def box_volume(self) -> float:
        return float(np.prod(self.upper - self.lower))


def _sphere(R: float, reach: float) -> ClosedFormTube:
    def offsets(x: np.ndarray) -> np.ndarray:
        return (np.linalg.norm(x, axis=1) - R)[:, None]

    extent = R + reach
    return ClosedFormTube(offsets, np.full(3, -extent), np.full(3, extent), R)


def _circle(R: float, codim: int, reach: float) -> ClosedFormTube:
    # frame: radial in the first plane, then e_3, e_4, ...
    def offsets(x: np.ndarray) -> np.ndarray:
        radial = np.hypot(x[:, 0], x[:, 1]) - R
        return np.column_stack([radial, x[:, 2:]])

    lower = np.concatenate([[-(R + reach)] * 2, [-reach] * (codim - 1)])
    return ClosedFormTube(offsets, lower, -lower, R)


def _torus(R: float, r: float, reach: float) -> ClosedFormTube:
    def offsets(x: np.ndarray) -> np.ndarray:
        rho = np.hypot(x[:, 0], x[:, 1]) - R
        return (np.hypot(rho, x[:, 2]) - r)[:, None]

    extent = R + r + reach
    lower = np.array([-extent, -extent, -(r + reach)])
    return ClosedFormTube(offsets, lower, -lower, r)


def closed_form_tube(embedding: Embedding, reach: float) -> ClosedFormTube:
    """
    Offsets for the circle, sphere and torus zoo entries.

    ``reach`` is the largest normal offset the domain allows, ``a * circumradius(D)``.

    Raises:
        WeylTubeValidationError: For manifolds without a closed-form projection
    """
    params = embedding.params
    if embedding.name == "sphere":
        return _sphere(params["R"], reach)
    if embedding.name == "circle":
        return _circle(params["R"], params["codim"], reach)
    if embedding.name == "torus":
        return _torus(params["R"], params["r"], reach)
    raise WeylTubeValidationError(
        "Monte Carlo needs a closed-form projection (circle, sphere, torus)",
        field="manifold",
        value=embedding.name,
    )


def tube_volume_mc(
    embedding: Embedding,
    domain: Domain,
    radius: float,
    samples: int,
    seed: int,
    *,
    chunk_size: Optional[int] = None,
    threads: Optional[int] = None,
) -> MonteCarloEstimate:
    """
    Rejection-sampling estimate of the tube volume at one radius.

    A point ``x`` of the enclosing box is in the tube iff the coordinates
    ``t(x)`` of ``x - proj(x)`` in the normal frame satisfy ``t / a`` in ``D``.
    Chunks carry child seeds of ``seed``, so the estimate depends only on
    ``(seed, chunk_size)``.

    Args:
        embedding: circle, sphere or torus from the zoo
        domain: Cross-section of dimension equal to the codimension
        radius: Tube radius ``a``
        samples: Total sample count
        seed: Root seed (mandatory)
        chunk_size: Samples per chunk (settings default)
        threads: Worker threads (settings default)

    Returns:
        MonteCarloEstimate with the binomial standard error

    Raises:
        FocalRadiusError: If ``a * circumradius(D)`` reaches the focal bound
    """
    if radius <= 0:
        raise WeylTubeValidationError("radius must be positive", field="radii", value=radius)
    if domain.m != embedding.m:
        raise WeylTubeValidationError("domain dimension must equal the codimension", field="domain", value=domain.m)
    settings = get_settings()
    reach = radius * domain.circumradius()
    tube = closed_form_tube(embedding, reach)
    if reach >= tube.focal_bound:
        raise FocalRadiusError(radius, tube.focal_bound / domain.circumradius())

    chunks = sample_chunks(samples, seed, chunk_size or settings.mc_chunk_size)

    def worker(chunk: SampleChunk) -> int:
        rng = chunk.generator()
        points = tube.lower + (tube.upper - tube.lower) * rng.random((chunk.size, tube.lower.size))
        return int(np.count_nonzero(domain.contains(tube.offsets(points) / radius)))

    hits = sum(map_chunks(worker, chunks, threads if threads is not None else settings.threads))
    fraction = hits / samples
    box_volume = tube.box_volume
    estimate = MonteCarloEstimate(
        radius=radius,
        estimate=box_volume * fraction,
        stderr=box_volume * math.sqrt(fraction * (1.0 - fraction) / samples),
        samples=samples,
        hits=hits,
        seed=seed,
        box_volume=box_volume,
    )
    logger.info(
        "Monte Carlo tube volume",
        manifold=embedding.name,
        domain=domain.label,
        radius=radius,
        samples=samples,
        hits=hits,
        stderr=estimate.stderr,
    )
    return estimate


def monte_carlo_series(
    embedding: Embedding, domain: Domain, radii: Sequence[float], spec: MonteCarloSpec
) -> List[MonteCarloEstimate]:
    """One estimate per radius; radius ``k`` uses seed ``spec.seed + k``."""
    return [
        tube_volume_mc(embedding, domain, a, spec.samples, spec.seed + k, chunk_size=spec.chunk_size)
        for k, a in enumerate(radii)
    ]


@dataclass(frozen=True)
class HaarAverage:
    """Sampled rotation averages of the integrand next to the curvature series."""

    points: np.ndarray
    mean: np.ndarray
    stderr: np.ndarray
    series: np.ndarray

    @property
    def z_scores(self) -> np.ndarray:
        return np.abs(self.mean - self.series) / np.maximum(self.stderr, 1e-300)


def curvature_series(h_raised: np.ndarray, points: np.ndarray) -> np.ndarray:
    """``sum_d H_d |t|^d / (m (m+2) ... (m+d-2))`` with ``H_d`` from the Gauss curvature of ``h``."""
    n, _, m = h_raised.shape
    riemann = gauss_riemann(h_raised, np.ones(m))
    hd: Dict[int, float] = {d: float(v) for d, v in lipschitz_killing_integrands(riemann, n).items()}
    r2 = np.sum(np.atleast_2d(points) ** 2, axis=1)
    return sum(hd[d] * r2 ** (d // 2) / rising_even_product(m, d) for d in sorted(hd))


def haar_integrand_average(
    h_raised: np.ndarray,
    points: np.ndarray,
    samples: int,
    seed: int,
    *,
    chunk_size: Optional[int] = None,
) -> HaarAverage:
    """
    Average ``det(delta - sum_p (g t)_p h^p)`` over Haar-random ``g`` in ``O(m)``.

    The rotation average of the integrand equals the curvature series, so
    ``z_scores`` should stay within a few units.
    """
    h = np.asarray(h_raised, dtype=float)
    n, _, m = h.shape
    if h.shape[1] != n:
        raise WeylTubeValidationError("h must be n x n x m", field="h", value=h.shape)
    poly = integrand_poly(h)
    points = np.atleast_2d(np.asarray(points, dtype=float))
    chunks = sample_chunks(samples, seed, chunk_size or get_settings().mc_chunk_size)

    def worker(chunk: SampleChunk) -> Tuple[np.ndarray, np.ndarray]:
        rotations = haar_samples(m, chunk.size, rng=chunk.generator())
        values = np.stack([poly.evaluate_many(rotations @ t) for t in points])  # (P, size)
        return values.sum(axis=1), (values**2).sum(axis=1)

    partial = map_chunks(worker, chunks, get_settings().threads)
    first = sum(p[0] for p in partial)
    second = sum(p[1] for p in partial)
    mean = first / samples
    variance = np.maximum(second / samples - mean**2, 0.0)
    return HaarAverage(
        points=points,
        mean=mean,
        stderr=np.sqrt(variance / samples),
        series=curvature_series(h, points),
    )
