"""Diamond and causal cross-sections where the tube formula stops being intrinsic."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np
import structlog

from ..config.settings import get_settings
from ..coxeter import build_group
from ..diffgeo.curvature import christoffel_riemann, gauss_riemann
from ..diffgeo.embedding import Embedding
from ..diffgeo.frames import fundamental_forms
from ..domains.catalog import Domain
from ..domains.moments import moments
from ..exceptions.client import WeylTubeValidationError
from ..models.scenario import QuadratureSpec
from ..polycore import average_group, coerce_coefficient
from ..utils.sample_slicer import map_chunks
from .integrand import integrand_poly
from .quadrature import parameter_grid
from .volumes import tube_volume_extrinsic

logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class DiamondGap:
    """Normalized second moments of ``Diamond(m)`` (units of ``2 |S^{m-2}|``)."""

    m: int
    spatial: Fraction  # int t_1^2, the weight of sum_{p<m} A_p
    axial: Fraction  # int t_m^2, the weight of A_m

    @property
    def difference(self) -> Fraction:
        return self.spatial - self.axial


def diamond_codimension_gap(m: int) -> DiamondGap:
    """
    Weights of the curvature terms in the degree-2 tube coefficient of a surface.

    The spatial weight multiplies ``A = sum_{p<m} A_p`` and the axial weight
    multiplies ``B = A_m``; only ``A + B`` is intrinsic, so the tube formula
    is intrinsic exactly when the difference vanishes (``m = 2``).
    """
    if m < 2:
        raise WeylTubeValidationError("the diamond gap needs m >= 2", field="m", value=m)
    table = moments(Domain.diamond(m), 2)
    spatial = table.shape((2,) + (0,) * (m - 1)) / 2
    axial = table.shape((0,) * (m - 1) + (2,)) / 2
    return DiamondGap(m, Fraction(spatial), Fraction(axial))


def diamond_gap_closed_form(m: int) -> Tuple[Fraction, Fraction, Fraction]:
    """``1/((m-1)(m+1)(m+2))``, ``2/((m-1)m(m+1)(m+2))`` and their difference ``(m-2)/(...)``."""
    spatial = Fraction(1, (m - 1) * (m + 1) * (m + 2))
    axial = Fraction(2, (m - 1) * m * (m + 1) * (m + 2))
    return spatial, axial, Fraction(m - 2, (m - 1) * m * (m + 1) * (m + 2))


@dataclass(frozen=True)
class SurfaceCoefficients:
    """Normal-block determinants of a surface's second fundamental form."""

    per_normal: Tuple[float, ...]  # A_p = h_1^{1p} h_2^{2p} - h_1^{2p} h_2^{1p}

    @property
    def spatial(self) -> float:
        return float(sum(self.per_normal[:-1]))

    @property
    def axial(self) -> float:
        return float(self.per_normal[-1])


def surface_block_determinants(h_raised: np.ndarray) -> Tuple[float, ...]:
    h = np.asarray(h_raised)
    if h.shape[:2] != (2, 2):
        raise WeylTubeValidationError("surface data needs n = 2", field="h", value=h.shape)
    return tuple(
        h[0, 0, p] * h[1, 1, p] - h[0, 1, p] * h[1, 0, p] for p in range(h.shape[2])
    )


def diamond_surface_coefficients(h_raised: np.ndarray) -> SurfaceCoefficients:
    """
    ``A = sum_{p<m} A_p`` and ``B = A_m`` at one node.

    With a Euclidean normal block the Gauss equation gives ``R_12^{12} = A + B``.
    """
    return SurfaceCoefficients(tuple(float(v) for v in surface_block_determinants(h_raised)))


@dataclass(frozen=True)
class FourfoldCoefficients:
    """Averaged integrand of a diagonal 4-fold with two normals."""

    A: Fraction
    B: Fraction
    C: Fraction
    A_closed: Fraction
    B_closed: Fraction
    C_closed: Fraction
    half_scalar: Fraction  # (1/2) sum_{i<j} R_ij^{ij}
    pair_products: Fraction  # sum over unordered {ij|kl} of R_ij^{ij} R_kl^{kl}

    @property
    def closed_forms_match(self) -> bool:
        return (self.A, self.B, self.C) == (self.A_closed, self.B_closed, self.C_closed)

    @property
    def intrinsic_checks(self) -> Tuple[bool, bool]:
        return self.A == self.half_scalar, self.B + 6 * self.C == self.pair_products


def _complementary_pairs() -> List[Tuple[Tuple[int, int], Tuple[int, int]]]:
    ordered = []
    for first in itertools.combinations(range(4), 2):
        rest = tuple(i for i in range(4) if i not in first)
        ordered.append((first, rest))
    return ordered


def diamond_fourfold_coefficients(a: Sequence, b: Sequence) -> FourfoldCoefficients:
    """
    Average ``prod_i (1 - t_1 a_i - t_2 b_i)`` over the square's symmetry group.

    The average is ``1 + A |t|^2 + B t_1^2 t_2^2 + C (t_1^4 + t_2^4)``.
    ``A`` and ``B + 6 C`` are intrinsic; ``B`` and ``C`` separately are not,
    and the square's moments weight them with ``1/45`` against ``4/15``.

    Args:
        a: ``h_i^{i1}`` for ``i = 1..4`` (ints or Fractions stay exact)
        b: ``h_i^{i2}``
    """
    if len(a) != 4 or len(b) != 4:
        raise WeylTubeValidationError("four principal values per normal", field="a", value=(len(a), len(b)))
    a = [coerce_coefficient(x) for x in a]
    b = [coerce_coefficient(x) for x in b]
    h = np.zeros((4, 4, 2), dtype=object)
    h[...] = Fraction(0)
    for i in range(4):
        h[i, i, 0], h[i, i, 1] = a[i], b[i]

    averaged = average_group(integrand_poly(h), build_group("B2"))
    A = averaged.coefficient((2, 0))
    B = averaged.coefficient((2, 2))
    C = averaged.coefficient((4, 0))

    pairs = list(itertools.combinations(range(4), 2))
    A_closed = sum(a[i] * a[j] + b[i] * b[j] for i, j in pairs) / 2
    B_closed = sum(a[i] * a[j] * b[k] * b[l] for (i, j), (k, l) in _complementary_pairs())
    C_closed = (a[0] * a[1] * a[2] * a[3] + b[0] * b[1] * b[2] * b[3]) / 2

    R = gauss_riemann(h, [1, 1])
    half_scalar = sum(R[i, j, i, j] for i, j in pairs) / 2
    # each unordered partition {ij|kl} appears twice among the ordered ones
    pair_products = sum(R[i, j, i, j] * R[k, l, k, l] for (i, j), (k, l) in _complementary_pairs()) / 2

    result = FourfoldCoefficients(
        A=Fraction(A),
        B=Fraction(B),
        C=Fraction(C),
        A_closed=Fraction(A_closed),
        B_closed=Fraction(B_closed),
        C_closed=Fraction(C_closed),
        half_scalar=Fraction(half_scalar),
        pair_products=Fraction(pair_products),
    )
    logger.debug("Fourfold coefficients", A=str(result.A), B=str(result.B), C=str(result.C))
    return result


@dataclass(frozen=True)
class SquareMomentGap:
    mixed: Fraction  # int t_1^2 t_2^2
    pure: Fraction  # int (t_1^4 + t_2^4)

    @property
    def gap(self) -> Fraction:
        return self.pure - 6 * self.mixed


def diamond_square_moment_gap() -> SquareMomentGap:
    """Fourth moments of ``|t_1| + |t_2| <= 1``: ``1/45`` and ``4/15``, gap ``2/15``."""
    table = moments(Domain.diamond(2), 4)
    return SquareMomentGap(
        mixed=Fraction(table.value((2, 2))),
        pure=Fraction(table.value((4, 0)) + table.value((0, 4))),
    )


@dataclass(frozen=True)
class CausalSurfaceCoefficients:
    """Integrated normal-block determinants of a spacelike surface in ``R^{3,1}``."""

    area: float
    integral_A: float  # spacelike normal
    integral_B: float  # timelike normal
    gauss_residual: float  # max |(A - B) - R_12^{12}| over the nodes

    def volumes(self, radii: Sequence[float]) -> List[float]:
        """``2 a^2 area + (a^4 / 3) int (A + B)`` for the causal diamond."""
        return [2 * a**2 * self.area + a**4 / 3 * (self.integral_A + self.integral_B) for a in radii]


def causal_surface_coefficients(
    embedding: Embedding, quadrature: Optional[QuadratureSpec] = None
) -> CausalSurfaceCoefficients:
    """
    ``area``, ``int A``, ``int B`` and the Gauss check ``A - B = R_12^{12}``.

    ``A`` and ``B`` are the spacelike and timelike block determinants of
    ``h``; ``R`` comes from the Christoffel symbols of the induced metric.
    """
    if not embedding.signature.is_lorentzian or embedding.n != 2 or embedding.m != 2:
        raise WeylTubeValidationError(
            "needs a spacelike surface in R^{3,1}", field="manifold", value=embedding.name
        )
    spec = quadrature or QuadratureSpec()
    grid = parameter_grid(embedding.box, embedding.periodic, spec.gauss_legendre_order, spec.trapezoid_nodes)

    def worker(u: np.ndarray) -> Tuple[float, float, float, float]:
        jet = embedding.jet(u)
        forms = fundamental_forms(embedding, u, jet=jet)
        A, B = surface_block_determinants(forms.h_raised)
        R = christoffel_riemann(embedding, u, jet).riemann
        return forms.sqrt_det_g, float(A), float(B), abs(float(A - B) - float(R[0, 1, 0, 1]))

    rows = np.array(map_chunks(worker, list(grid.nodes), get_settings().threads))
    sqrt_g = rows[:, 0]
    return CausalSurfaceCoefficients(
        area=float(grid.integrate(sqrt_g)),
        integral_A=float(grid.integrate(sqrt_g * rows[:, 1])),
        integral_B=float(grid.integrate(sqrt_g * rows[:, 2])),
        gauss_residual=float(rows[:, 3].max()),
    )


@dataclass(frozen=True)
class FrameRotationGap:
    """Extrinsic volumes under two normal frames differing by a constant rotation."""

    radii: Tuple[float, ...]
    original: Tuple[float, ...]
    rotated: Tuple[float, ...]
    error_bound: float

    @property
    def gap(self) -> float:
        return max(abs(x - y) for x, y in zip(self.original, self.rotated))

    @property
    def frame_dependent(self) -> bool:
        """The gap exceeds ten times the quadrature error bound."""
        return self.gap > 10.0 * self.error_bound


def frame_rotation_gap(
    embedding: Embedding,
    domain: Domain,
    rotation: np.ndarray,
    radii: Sequence[float],
    quadrature: Optional[QuadratureSpec] = None,
) -> FrameRotationGap:
    """
    Compare the extrinsic volume in the given frame and in the frame rotated by ``rotation``.

    An intrinsic tube formula cannot tell the two apart; a gap beyond the
    quadrature error shows the cross-section does not make it intrinsic.
    """
    original = tube_volume_extrinsic(embedding, domain, radii, quadrature)
    rotated = tube_volume_extrinsic(embedding, domain, radii, quadrature, frame_rotation=rotation)
    result = FrameRotationGap(
        radii=tuple(original.radii),
        original=tuple(original.extrinsic.volumes),
        rotated=tuple(rotated.extrinsic.volumes),
        error_bound=max(original.extrinsic.error, rotated.extrinsic.error, 1e-15),
    )
    logger.info(
        "Frame rotation gap",
        manifold=embedding.name,
        domain=domain.label,
        gap=result.gap,
        error_bound=result.error_bound,
    )
    return result


def swap_rotation(m: int, i: int, j: int) -> np.ndarray:
    """Permutation matrix exchanging normal directions ``i`` and ``j``."""
    Q = np.eye(m)
    Q[[i, j]] = Q[[j, i]]
    return Q
