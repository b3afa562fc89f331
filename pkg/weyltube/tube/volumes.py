"""Tube volumes by moment contraction (extrinsic) and by curvature integrals (intrinsic)."""

from __future__ import annotations

import math
import time
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import structlog

from ..config.settings import get_settings
from ..diffgeo.curvature import christoffel_riemann
from ..diffgeo.embedding import Embedding
from ..diffgeo.frames import fundamental_forms, normal_frame, rotate_frame
from ..diffgeo.lipschitz_killing import lipschitz_killing_integrands
from ..domains.catalog import Domain
from ..domains.moments import MomentTable, ball_volume, moments, radial_moment
from ..domains.symmetry import symmetric_of_degree
from ..exceptions.base import DimensionMismatchError, FocalRadiusError
from ..exceptions.client import WeylTubeValidationError
from ..models.common import DomainKind, VolumePath
from ..models.reports import TubeReport, VolumeSeries
from ..models.scenario import QuadratureSpec
from ..polycore import rising_even_product
from ..utils.sample_slicer import map_chunks
from .integrand import degree_integrals, integrand_poly
from .quadrature import ParameterGrid, parameter_grid, refined

logger = structlog.get_logger(__name__)


def polynomial_volumes(coefficients: Sequence[float], m: int, radii: Sequence[float]) -> List[float]:
    """``V(a) = sum_d v_d a^{m+d}`` at every radius."""
    return [float(sum(v * a ** (m + d) for d, v in enumerate(coefficients))) for a in radii]


def _check_radii(radii: Sequence[float]) -> List[float]:
    radii = [float(a) for a in radii]
    if not radii or any(not (a > 0 and math.isfinite(a)) for a in radii):
        raise WeylTubeValidationError("radii must be positive and finite", field="radii", value=radii)
    return radii


def _check_dimensions(embedding: Embedding, domain: Domain) -> None:
    if domain.m != embedding.m:
        raise DimensionMismatchError(
            "domain dimension must equal the codimension", expected=embedding.m, actual=domain.m
        )


def _grids(embedding: Embedding, quadrature: Optional[QuadratureSpec]) -> List[ParameterGrid]:
    spec = quadrature or QuadratureSpec()
    coarse = parameter_grid(
        embedding.box, embedding.periodic, spec.gauss_legendre_order, spec.trapezoid_nodes
    )
    if not spec.refine:
        return [coarse]
    return [coarse, refined(coarse, embedding.box, embedding.periodic)]


def _check_rotation(rotation: np.ndarray, block: np.ndarray) -> np.ndarray:
    Q = np.asarray(rotation, dtype=float)
    if Q.shape != (block.size, block.size):
        raise WeylTubeValidationError("frame rotation must be m x m", field="frame_rotation", value=Q.shape)
    eta = np.diag(block)
    if np.max(np.abs(Q @ eta @ Q.T - eta)) > 1e-10:
        raise WeylTubeValidationError("frame rotation must preserve the normal block", field="frame_rotation")
    return Q


def _operator_norm(h_raised: np.ndarray) -> float:
    # sqrt(sum_p |h^p|_2^2) bounds sup_{|t|=1} |sum_p t_p h^p|_2
    return float(np.sqrt(sum(np.linalg.norm(h_raised[:, :, p], 2) ** 2 for p in range(h_raised.shape[2]))))


def _extrinsic_on_grid(
    embedding: Embedding,
    table: MomentTable,
    grid: ParameterGrid,
    rotation: Optional[np.ndarray],
    threads: int,
) -> Tuple[np.ndarray, float, float]:
    """Coefficients ``v_d``, ``vol(M)`` and the largest shape-operator norm on one grid."""
    n = embedding.n
    signature = embedding.signature

    def worker(u: np.ndarray) -> Tuple[float, Dict[int, float], float]:
        jet = embedding.jet(u)
        forms = fundamental_forms(embedding, u, jet=jet, frame=normal_frame(embedding, u, jet))
        if rotation is not None:
            forms = rotate_frame(forms, rotation)
        poly = integrand_poly(forms.h_raised, signature)
        integrals = {d: float(v) for d, v in degree_integrals(poly, table).items()}
        return forms.sqrt_det_g, integrals, _operator_norm(forms.h_raised)

    results = map_chunks(worker, list(grid.nodes), threads)
    sqrt_g = np.array([r[0] for r in results])
    per_degree = np.array([[r[1].get(d, 0.0) for d in range(n + 1)] for r in results])
    coefficients = float(table.scale) * grid.integrate(sqrt_g[:, None] * per_degree)
    manifold_volume = float(grid.integrate(sqrt_g))
    return coefficients, manifold_volume, max(r[2] for r in results)


def estimate_reach(max_operator_norm: float, domain: Domain) -> float:
    """Largest radius with ``a * circumradius(D) * |h|_op < 1`` at every node."""
    if max_operator_norm <= 0:
        return math.inf
    return 1.0 / (max_operator_norm * domain.circumradius())


def tube_volume_extrinsic(
    embedding: Embedding,
    domain: Domain,
    radii: Sequence[float],
    quadrature: Optional[QuadratureSpec] = None,
    *,
    table: Optional[MomentTable] = None,
    frame_rotation: Optional[np.ndarray] = None,
    check_reach: bool = True,
    threads: Optional[int] = None,
) -> TubeReport:
    """
    Tube volume by integrating the determinant polynomial against the domain moments.

    At every quadrature node the integrand ``det(delta - sum t_p h^p)`` is
    expanded exactly, integrated over ``D`` degree by degree, and weighted by
    ``sqrt(det g)``. ``V(a) = sum_d v_d a^{m+d}``.

    Args:
        embedding: Submanifold with its parameter box
        domain: Cross-section, dimension equal to the codimension
        radii: Tube radii
        quadrature: Quadrature orders and refinement
        table: Prebuilt moment table of degree ``>= n`` (required for sampled domains)
        frame_rotation: Constant ``m x m`` matrix applied to the normal frame
        check_reach: Reject radii beyond the focal estimate
        threads: Worker threads for the node map

    Returns:
        TubeReport carrying the extrinsic series

    Raises:
        FocalRadiusError: If a radius exceeds the estimated reach
        MomentDepthError: If ``table`` is too shallow
    """
    radii = _check_radii(radii)
    _check_dimensions(embedding, domain)
    n, m = embedding.n, embedding.m
    threads = threads if threads is not None else get_settings().threads
    block = embedding.signature.normal_block(m)
    rotation = _check_rotation(frame_rotation, block) if frame_rotation is not None else None
    table = table if table is not None else moments(domain, n)
    table.require(n)

    started = time.perf_counter()
    grids = _grids(embedding, quadrature)
    runs = [_extrinsic_on_grid(embedding, table, grid, rotation, threads) for grid in grids]
    if domain.is_centrally_symmetric():
        for run in runs:
            run[0][1::2] = 0.0
    coefficients, manifold_volume, op_norm = runs[-1]

    reach = estimate_reach(op_norm, domain)
    if check_reach and max(radii) >= reach:
        raise FocalRadiusError(max(radii), reach)

    volumes = polynomial_volumes(coefficients, m, radii)
    error = 0.0
    if len(runs) > 1:
        coarse = polynomial_volumes(runs[0][0], m, radii)
        error = max(abs(f - c) for f, c in zip(volumes, coarse))

    domain_volume = float(table.volume)
    v0_consistent = math.isclose(coefficients[0], domain_volume * manifold_volume, rel_tol=1e-9, abs_tol=1e-12)
    nodes = grids[-1].size
    logger.info(
        "Extrinsic tube volume",
        manifold=embedding.name,
        domain=domain.label,
        nodes=nodes,
        error=error,
        seconds=round(time.perf_counter() - started, 3),
    )
    return TubeReport(
        manifold=embedding.name,
        manifold_params=dict(embedding.params),
        domain=domain.label,
        domain_kind=DomainKind(domain.kind),
        n=n,
        m=m,
        signature=embedding.signature.kind,
        radii=radii,
        domain_volume=domain_volume,
        manifold_volume=manifold_volume,
        nodes=nodes,
        reach=reach if math.isfinite(reach) else None,
        v0_consistent=v0_consistent,
        extrinsic=VolumeSeries(
            path=VolumePath.EXTRINSIC,
            volumes=volumes,
            coefficients=[float(v) for v in coefficients],
            error=error,
        ),
    )


def _curvature_integrals_on_grid(
    embedding: Embedding, grid: ParameterGrid, threads: int, with_reach: bool = False
) -> Tuple[np.ndarray, float, float]:
    """Curvature integrals ``k_d``, ``vol(M)`` and (when asked) the largest shape-operator norm."""
    n = embedding.n

    def worker(u: np.ndarray) -> Tuple[float, Dict[int, float], float]:
        jet = embedding.jet(u)
        eta = np.asarray(embedding.signature.eta, dtype=float)
        g = jet.d1.T @ (eta[:, None] * jet.d1)
        intrinsic = christoffel_riemann(embedding, u, jet)
        hd = lipschitz_killing_integrands(intrinsic.riemann, n)
        op_norm = 0.0
        if with_reach:
            forms = fundamental_forms(embedding, u, jet=jet, frame=normal_frame(embedding, u, jet))
            op_norm = _operator_norm(forms.h_raised)
        return float(np.sqrt(np.linalg.det(g))), {d: float(v) for d, v in hd.items()}, op_norm

    results = map_chunks(worker, list(grid.nodes), threads)
    sqrt_g = np.array([r[0] for r in results])
    per_degree = np.array([[r[1].get(d, 0.0) for d in range(n + 1)] for r in results])
    return (
        grid.integrate(sqrt_g[:, None] * per_degree),
        float(grid.integrate(sqrt_g)),
        max(r[2] for r in results),
    )


def curvature_integrals(
    embedding: Embedding, quadrature: Optional[QuadratureSpec] = None, threads: Optional[int] = None
) -> List[float]:
    """``k_d = int_M H_d ds`` for ``d = 0..n`` from the Christoffel-path curvature (odd entries 0)."""
    threads = threads if threads is not None else get_settings().threads
    grid = _grids(embedding, quadrature)[-1]
    k, _, _ = _curvature_integrals_on_grid(embedding, grid, threads)
    return [float(v) for v in k]


def intrinsic_coefficients(
    k: Sequence[float], domain: Domain | MomentTable, m: int, lorentzian: bool = False
) -> List[float]:
    """
    ``v_d = int_D |t|^d dt * k_d / (m (m+2) ... (m+d-2))`` for even ``d``.

    The causal hypersurface variant multiplies by ``(-1)^{d/2}``.
    """
    coefficients = []
    for d, kd in enumerate(k):
        if d % 2:
            coefficients.append(0.0)
            continue
        sign = (-1) ** (d // 2) if lorentzian else 1
        coefficients.append(sign * float(radial_moment(domain, d)) * kd / rising_even_product(m, d))
    return coefficients


def tube_volume_intrinsic(
    embedding: Embedding,
    domain: Domain,
    radii: Sequence[float],
    quadrature: Optional[QuadratureSpec] = None,
    *,
    table: Optional[MomentTable] = None,
    check_reach: bool = True,
    threads: Optional[int] = None,
) -> TubeReport:
    """
    Tube volume from the curvature integrals ``k_d`` and the radial moments of ``D``.

    ``k_d`` comes from the Christoffel-path Riemann tensor, never from the
    second fundamental form. In a Lorentzian ambient only hypersurfaces are
    supported; their terms carry ``(-1)^{d/2}``.

    Raises:
        FocalRadiusError: If a radius exceeds the estimated reach
        WeylTubeValidationError: For a Lorentzian ambient with codimension above 1
    """
    radii = _check_radii(radii)
    _check_dimensions(embedding, domain)
    n, m = embedding.n, embedding.m
    lorentzian = embedding.signature.is_lorentzian
    if lorentzian and m != 1:
        raise WeylTubeValidationError(
            "the causal intrinsic formula covers hypersurfaces only", field="signature", value=m
        )
    threads = threads if threads is not None else get_settings().threads
    radial_source: Domain | MomentTable = table if table is not None else moments(domain, n - n % 2)

    started = time.perf_counter()
    grids = _grids(embedding, quadrature)
    runs = [_curvature_integrals_on_grid(embedding, grid, threads, with_reach=check_reach) for grid in grids]
    k, manifold_volume, op_norm = runs[-1]
    reach = estimate_reach(op_norm, domain) if check_reach else math.inf
    if max(radii) >= reach:
        raise FocalRadiusError(max(radii), reach)

    coefficients = intrinsic_coefficients(k, radial_source, m, lorentzian)
    volumes = polynomial_volumes(coefficients, m, radii)
    error = 0.0
    if len(runs) > 1:
        coarse = polynomial_volumes(intrinsic_coefficients(runs[0][0], radial_source, m, lorentzian), m, radii)
        error = max(abs(f - c) for f, c in zip(volumes, coarse))

    domain_volume = float(radial_moment(radial_source, 0))
    logger.info(
        "Intrinsic tube volume",
        manifold=embedding.name,
        domain=domain.label,
        lorentzian=lorentzian,
        error=error,
        seconds=round(time.perf_counter() - started, 3),
    )
    return TubeReport(
        manifold=embedding.name,
        manifold_params=dict(embedding.params),
        domain=domain.label,
        domain_kind=DomainKind(domain.kind),
        n=n,
        m=m,
        signature=embedding.signature.kind,
        radii=radii,
        domain_volume=domain_volume,
        manifold_volume=manifold_volume,
        nodes=grids[-1].size,
        reach=reach if math.isfinite(reach) else None,
        intrinsic=VolumeSeries(
            path=VolumePath.INTRINSIC,
            volumes=volumes,
            coefficients=coefficients,
            curvature_integrals=[float(v) for v in k],
            error=error,
        ),
    )


def weyl_ball_coefficients(m: int, k: Mapping[int, float] | Sequence[float]) -> List[float]:
    """
    Ball cross-section coefficients ``v_d = vol(B^m) k_d / ((m+2)(m+4) ... (m+d))``.

    ``k`` maps even degrees to curvature integrals (a sequence is read by index).
    """
    items = k.items() if isinstance(k, Mapping) else enumerate(k)
    values = dict(items)
    top = max(values, default=0)
    omega = float(ball_volume(m))
    coefficients = []
    for d in range(top + 1):
        if d % 2 or d not in values:
            coefficients.append(0.0)
            continue
        denominator = 1
        for j in range(1, d // 2 + 1):
            denominator *= m + 2 * j
        coefficients.append(omega * float(values[d]) / denominator)
    return coefficients


def curve_tube_volume(length: float, domain: Domain, radii: Sequence[float]) -> List[float]:
    """
    ``length * vol(D) * a^m`` for a curve whose cross-section has its centroid at the origin.

    Only the first moments enter for ``n = 1``, so symmetry of degree 1 suffices.

    Raises:
        WeylTubeValidationError: If the centroid of ``D`` is off the origin
    """
    table = moments(domain, 1)
    check = symmetric_of_degree(table, 1)
    if not check.symmetric:
        raise WeylTubeValidationError(
            "the curve formula needs a cross-section centred at the origin", field="domain", value=domain.label
        )
    vol = float(table.volume)
    return [length * vol * a**domain.m for a in _check_radii(radii)]


def combine_reports(*reports: TubeReport) -> TubeReport:
    """Merge single-path reports of one scenario into one report."""
    base = reports[0]
    update = {}
    for report in reports[1:]:
        for key in ("extrinsic", "intrinsic", "reach", "v0_consistent"):
            value = getattr(report, key)
            if value is not None and getattr(base, key) is None:
                update[key] = value
        if report.monte_carlo:
            update["monte_carlo"] = list(base.monte_carlo) + list(report.monte_carlo)
        if report.notes:
            update["notes"] = list(base.notes) + list(report.notes)
    return base.model_copy(update=update)
