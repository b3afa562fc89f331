"""Moment symmetry of domains and the planar radial construction."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import structlog

from ..config.constants import MAX_SYMMETRY_DEGREE, SYMMETRY_TOLERANCE
from ..exceptions.base import DomainConstraintError
from ..exceptions.client import WeylTubeValidationError
from ..polycore import MultiIndex, multi_indices, sphere_moment
from .catalog import Domain, FourierProfile
from .moments import MomentTable, moments, radial_moment_shape

logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class SymmetryResult:
    """Outcome of the degree-``n`` moment symmetry test."""

    symmetric: bool
    degree: int
    max_defect: float
    worst_alpha: Optional[MultiIndex]
    exact: bool

    def __iter__(self):
        # unpacks as (symmetric, max_defect, worst_alpha)
        return iter((self.symmetric, self.max_defect, self.worst_alpha))


def moment_defect(table: MomentTable, alpha: Sequence[int]) -> Fraction | float:
    """
    Signed gap ``int t^alpha - S_m(alpha) * int |t|^{|alpha|}`` in units of the table scale.
    """
    d = sum(alpha)
    expected = sphere_moment(table.m, alpha) * radial_moment_shape(table, d) if d % 2 == 0 else 0
    return table.shape(alpha) - expected


def symmetric_of_degree(
    domain: Domain | MomentTable, n: int, tol: float = SYMMETRY_TOLERANCE
) -> SymmetryResult:
    """
    Test whether every moment of degree ``<= n`` equals its rotational average.

    Defects are normalized by ``vol(D) * circumradius^{|alpha|}`` so the
    tolerance does not depend on the size of the domain.

    Args:
        domain: Domain or a prebuilt moment table of degree ``>= n``
        n: Degree to test, at most 10
        tol: Relative tolerance on the normalized defect

    Returns:
        SymmetryResult with the worst violator
    """
    if not 0 <= n <= MAX_SYMMETRY_DEGREE:
        raise WeylTubeValidationError(
            f"symmetry degree must lie in [0, {MAX_SYMMETRY_DEGREE}]", field="n", value=n
        )
    table = domain if isinstance(domain, MomentTable) else moments(domain, n)
    table.require(n)
    radius = table.domain.circumradius()
    volume = abs(float(table.shape((0,) * table.m)))

    worst: Optional[MultiIndex] = None
    max_defect = 0.0
    exact = True
    for d in range(1, n + 1):
        for alpha in multi_indices(table.m, d):
            defect = moment_defect(table, alpha)
            if not isinstance(defect, Fraction):
                exact = False
            normalized = abs(float(defect)) / (volume * radius**d)
            if normalized > max_defect:
                max_defect, worst = normalized, alpha
    symmetric = max_defect <= tol
    logger.info(
        "Symmetry test",
        domain=table.domain.label,
        degree=n,
        symmetric=symmetric,
        max_defect=max_defect,
        worst_alpha=worst,
    )
    return SymmetryResult(symmetric, n, max_defect, worst, exact)


def build_radial_counterexample(
    n: int,
    p: int,
    q: int,
    b: FourierProfile | Sequence[Sequence[float]] | None = None,
    *,
    b_constant: float = 1.0,
) -> Domain:
    """
    Planar domain ``r <= b(phi) (2 + cos(p phi))`` symmetric of degree ``n``.

    Requires ``p > n``, ``q > (n + 3) p``, ``gcd(p, q) = 1`` and a positive
    ``b`` whose Fourier modes all lie in ``q Z``.

    Args:
        n: Target symmetry degree
        p: Mode of the deforming cosine
        q: Rotation order of ``b``
        b: Profile of ``b``, or ``[[mode, cos, sin], ...]`` with constant ``b_constant``

    Raises:
        DomainConstraintError: Naming the violated inequality
    """
    if n < 0:
        raise DomainConstraintError("n >= 0", n=n)
    if not p > n:
        raise DomainConstraintError("p > n", n=n, p=p)
    if not q > (n + 3) * p:
        raise DomainConstraintError("q > (n + 3) p", n=n, p=p, q=q)
    if math.gcd(p, q) != 1:
        raise DomainConstraintError("gcd(p, q) = 1", p=p, q=q)

    if b is None:
        profile = FourierProfile(b_constant)
    elif isinstance(b, FourierProfile):
        profile = b
    else:
        profile = FourierProfile.from_triples(b_constant, b)
    stray = [k for k in profile.modes if k % q]
    if stray:
        raise DomainConstraintError("b has only Fourier modes in qZ", q=q, modes=stray)
    if profile.minimum() <= 0:
        raise DomainConstraintError("b(phi) > 0", minimum=profile.minimum())

    deform = FourierProfile(2.0, {p: (1.0, 0.0)})
    domain = Domain.radial2d(profile * deform, label=f"radial2d(n={n}, p={p}, q={q})")
    logger.debug("Radial counterexample built", n=n, p=p, q=q, max_mode=domain.profile.max_mode)
    return domain

