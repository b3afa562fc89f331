"""Which sufficient condition (if any) makes a tube formula intrinsic."""

from __future__ import annotations

import math
from typing import Optional, Tuple

import structlog

from ..config.constants import MAX_SYMMETRY_DEGREE, SYMMETRY_TOLERANCE
from ..coxeter import group_label, invariant_degrees, predicted_orthogonal_degree
from ..domains.catalog import Domain
from ..domains.symmetry import symmetric_of_degree
from ..models.common import DomainKind, GroupType, IntrinsicCriterion
from ..models.reports import IntrinsicnessVerdict

logger = structlog.get_logger(__name__)

# (codimension m or None for any, symmetry group, largest intrinsic n or None for any)
DIAMOND_INTRINSIC_TABLE: Tuple[Tuple[Optional[int], str, Optional[int]], ...] = (
    (1, "O(1)", None),
    (2, "W(B2)", 3),
    (None, "O(m-1) x O(1)", 1),
)


def diamond_intrinsic_degree(m: int) -> Tuple[str, float]:
    """Symmetry group of ``Diamond(m)`` and the largest ``n`` with an intrinsic tube formula."""
    row = next(r for r in DIAMOND_INTRINSIC_TABLE if r[0] is None or r[0] == m)
    return row[1], math.inf if row[2] is None else row[2]


def _group_degree(domain: Domain) -> Tuple[Optional[str], float]:
    kind = DomainKind(domain.kind)
    if kind in (DomainKind.CUBE, DomainKind.CROSS_POLYTOPE):
        if domain.m == 1:
            return "B1", math.inf
        return group_label(GroupType.B, domain.m), predicted_orthogonal_degree(invariant_degrees(GroupType.B, domain.m))
    if kind is DomainKind.REGULAR_POLYGON:
        k = domain.sides
        return group_label(GroupType.I2, k=k), predicted_orthogonal_degree(invariant_degrees(GroupType.I2, k=k))
    if kind is DomainKind.DIAMOND:
        return diamond_intrinsic_degree(domain.m)
    return None, 0


def intrinsicness_verdict(domain: Domain, n: int, tol: float = SYMMETRY_TOLERANCE) -> IntrinsicnessVerdict:
    """
    Decide whether the extrinsic tube volume over ``domain`` must equal the intrinsic one for n-manifolds.

    Checked in order: full rotational symmetry, a symmetry group orthogonal of
    degree ``>= n``, and moments symmetric of degree ``n``.
    """
    kind = DomainKind(domain.kind)
    if kind is DomainKind.BALL:
        verdict = IntrinsicnessVerdict(
            domain=domain.label,
            n=n,
            criterion=IntrinsicCriterion.ROTATIONAL,
            intrinsic=True,
            group=f"O({domain.m})",
            reason="the ball is invariant under the full orthogonal group",
        )
        logger.info("Intrinsicness verdict", domain=domain.label, n=n, criterion=verdict.criterion)
        return verdict

    group, degree = _group_degree(domain)
    orthogonal_degree = None if group is None or math.isinf(degree) else int(degree)
    if group is not None and degree >= n:
        verdict = IntrinsicnessVerdict(
            domain=domain.label,
            n=n,
            criterion=IntrinsicCriterion.GROUP_ORTHOGONAL,
            intrinsic=True,
            group=group,
            orthogonal_degree=orthogonal_degree,
            reason=f"{group} is orthogonal of degree {'any' if math.isinf(degree) else int(degree)} >= {n}",
        )
    else:
        check = symmetric_of_degree(domain, n, tol) if n <= MAX_SYMMETRY_DEGREE else None
        symmetric = check is not None and check.symmetric
        verdict = IntrinsicnessVerdict(
            domain=domain.label,
            n=n,
            criterion=IntrinsicCriterion.MOMENT_SYMMETRIC if symmetric else IntrinsicCriterion.NONE,
            intrinsic=symmetric,
            group=group,
            orthogonal_degree=orthogonal_degree,
            max_defect=check.max_defect if check is not None else None,
            reason=(
                f"moments agree with their rotational averages up to degree {n}"
                if symmetric
                else "not guaranteed intrinsic"
            ),
        )
    logger.info(
        "Intrinsicness verdict",
        domain=domain.label,
        n=n,
        criterion=verdict.criterion,
        intrinsic=verdict.intrinsic,
    )
    return verdict
