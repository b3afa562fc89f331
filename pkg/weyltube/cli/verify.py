"""Pinned constants and closed forms checked by ``weyltube tube verify-paper``."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
import structlog

from ..coxeter import build_group, orthogonal_of_degree, predicted_orthogonal_degree
from ..diffgeo import build_embedding, contract_Hd, identity_curvature, identity_normalization
from ..domains import Domain, build_radial_counterexample, moments, symmetric_of_degree
from ..models.common import CheckStatus
from ..models.reports import CheckResult, VerificationSummary
from ..polycore import RadialPoly, average_orthogonal, double_factorial, rising_even_product
from ..tube import (
    causal_surface_coefficients,
    combine_reports,
    curvature_integrals,
    diamond_codimension_gap,
    diamond_fourfold_coefficients,
    diamond_gap_closed_form,
    diamond_square_moment_gap,
    frame_rotation_gap,
    integrand_poly,
    intrinsic_coefficients,
    swap_rotation,
    tube_volume_extrinsic,
    tube_volume_intrinsic,
)

logger = structlog.get_logger(__name__)

Outcome = Tuple[bool, str, str]  # passed, expected, actual


@dataclass(frozen=True)
class Check:
    name: str
    category: str
    run: Callable[[], Outcome]
    slow: bool = False


def _close(actual: float, expected: float, rel: float) -> bool:
    return math.isclose(actual, expected, rel_tol=rel, abs_tol=rel * 1e-3)


def _square_mixed() -> Outcome:
    value = diamond_square_moment_gap().mixed
    return value == Fraction(1, 45), "1/45", str(value)


def _square_pure() -> Outcome:
    value = diamond_square_moment_gap().pure
    return value == Fraction(4, 15), "4/15", str(value)


def _square_gap() -> Outcome:
    value = diamond_square_moment_gap().gap
    return value == Fraction(2, 15), "2/15", str(value)


def _diamond_difference(m: int) -> Callable[[], Outcome]:
    def run() -> Outcome:
        gap = diamond_codimension_gap(m)
        _, _, expected = diamond_gap_closed_form(m)
        return gap.difference == expected, str(expected), str(gap.difference)

    return run


def _fourfold_unit() -> Outcome:
    result = diamond_fourfold_coefficients([1, 1, 1, 1], [1, 1, 1, 1])
    actual = (result.A, result.B, result.C)
    return actual == (6, 6, 1), "A=6 B=6 C=1", "A={} B={} C={}".format(*actual)


def _fourfold_intrinsic() -> Outcome:
    a = [Fraction(1, 2), Fraction(-2, 3), Fraction(3), Fraction(5, 7)]
    b = [Fraction(2), Fraction(1, 3), Fraction(-1, 4), Fraction(4, 5)]
    result = diamond_fourfold_coefficients(a, b)
    ok = result.closed_forms_match and all(result.intrinsic_checks)
    return ok, "closed forms and A, B+6C intrinsic", f"closed={result.closed_forms_match} intrinsic={result.intrinsic_checks}"


def _identity_case(n_max: int = 6, m_max: int = 5) -> Outcome:
    for n in range(1, n_max + 1):
        for m in range(1, m_max + 1):
            h = np.zeros((n, n, m), dtype=object)
            h[...] = Fraction(0)
            for i in range(n):
                h[i, i, 0] = Fraction(1)
            averaged = average_orthogonal(integrand_poly(h))
            expected = RadialPoly(
                m,
                {
                    d: Fraction(math.comb(n, d) * double_factorial(d - 1), rising_even_product(m, d))
                    for d in range(0, n + 1, 2)
                },
            )
            if averaged != expected:
                return False, "C(n,d)(d-1)!!/(m(m+2)...)", f"mismatch at n={n}, m={m}"
    return True, "C(n,d)(d-1)!!/(m(m+2)...)", f"n<={n_max}, m<={m_max}"


def _identity_hd() -> Outcome:
    for n in range(2, 7):
        R = identity_curvature(n)
        for d in range(2, n + 1, 2):
            if contract_Hd(R, n, d) != identity_normalization(n, d):
                return False, "H_d(identity) = C(n,d)(d-1)!!", f"mismatch at n={n}, d={d}"
    return True, "H_d(identity) = C(n,d)(d-1)!!", "n<=6"


def _group_degree(label: str) -> Callable[[], Outcome]:
    def run() -> Outcome:
        group = build_group(label)
        predicted = predicted_orthogonal_degree(group.degrees)
        computed = orthogonal_of_degree(group)
        return computed == predicted, f"d2-1={predicted}", f"{computed} (order {group.order})"

    return run


def _sphere_shell() -> Outcome:
    R = 2.0
    radii = [0.05, 0.1, 0.2]
    sphere = build_embedding("sphere", R=R)
    interval = Domain.interval()
    extrinsic = tube_volume_extrinsic(sphere, interval, radii).extrinsic.volumes
    intrinsic = tube_volume_intrinsic(sphere, interval, radii).intrinsic.volumes
    shell = [4 * math.pi / 3 * ((R + a) ** 3 - (R - a) ** 3) for a in radii]
    ok = all(_close(e, s, 1e-9) and _close(i, s, 1e-9) for e, i, s in zip(extrinsic, intrinsic, shell))
    return ok, f"{shell[-1]:.12g}", f"{extrinsic[-1]:.12g} / {intrinsic[-1]:.12g}"


def _sphere_gauss_bonnet() -> Outcome:
    k = curvature_integrals(build_embedding("sphere", R=2.0))
    return _close(k[2], 4 * math.pi, 1e-9), f"{4 * math.pi:.12g}", f"{k[2]:.12g}"


def _torus_k2() -> Outcome:
    k = curvature_integrals(build_embedding("torus", R=3.0, r=1.0))
    return abs(k[2]) <= 1e-8, "|k2| <= 1e-8", f"{k[2]:.3e}"


def _pappus() -> Outcome:
    R, a = 2.0, 0.2
    pentagon = Domain.regular_polygon(5)
    report = tube_volume_extrinsic(build_embedding("circle", R=R, codim=2), pentagon, [a])
    expected = 2 * math.pi * R * float(moments(pentagon, 0).volume) * a**2
    actual = report.extrinsic.volumes[0]
    return _close(actual, expected, 1e-8), f"{expected:.12g}", f"{actual:.12g}"


def _path_agreement(manifold: str, domain: Domain, radii: Sequence[float], rel: float, **params) -> Outcome:
    embedding = build_embedding(manifold, **params)
    extrinsic = tube_volume_extrinsic(embedding, domain, radii).extrinsic.volumes
    intrinsic = tube_volume_intrinsic(embedding, domain, radii).intrinsic.volumes
    gap = max(abs(e - i) / abs(i) for e, i in zip(extrinsic, intrinsic))
    return gap <= rel, f"relative gap <= {rel:g}", f"{gap:.3e}"


def _clifford_pentagon() -> Outcome:
    return _path_agreement("clifford_torus", Domain.regular_polygon(5), [0.05, 0.1], 1e-6, R1=1.0, R2=1.0)


def _counterexample_symmetric() -> Outcome:
    domain = build_radial_counterexample(2, 3, 16)
    check = symmetric_of_degree(domain, 2)
    return check.symmetric and check.max_defect <= 1e-10, "defect <= 1e-10", f"{check.max_defect:.3e}"


def _counterexample_paths() -> Outcome:
    domain = build_radial_counterexample(2, 3, 16)
    return _path_agreement("clifford_torus", domain, [0.02, 0.05], 1e-6, R1=1.0, R2=1.5)


def _causal_sign() -> Outcome:
    coefficients = intrinsic_coefficients([1.0, 0.0, 1.0], Domain.interval(), 1, lorentzian=True)
    return _close(coefficients[2], -2.0 / 3.0, 1e-15), "-2/3 k2", f"{coefficients[2]:.12g}"


def _causal_slice() -> Outcome:
    embedding = build_embedding("lorentz_graph2d", f=[[0.2, 2, 0], [0.1, 0, 2]])
    radii = [0.05, 0.1]
    extrinsic = tube_volume_extrinsic(embedding, Domain.interval(), radii)
    intrinsic = tube_volume_intrinsic(embedding, Domain.interval(), radii)
    v2_ext = extrinsic.extrinsic.coefficients[2]
    k2 = intrinsic.intrinsic.curvature_integrals[2]
    ok = _close(v2_ext, -2.0 * k2 / 3.0, 1e-6) and combine_reports(extrinsic, intrinsic).path_discrepancy() <= 1e-6
    return ok, f"v2 = -2 k2/3 = {-2 * k2 / 3:.10g}", f"{v2_ext:.10g}"


def _causal_surface() -> Outcome:
    embedding = build_embedding(
        "lorentz_graph2d", f=[[0.1, 2, 0], [0.05, 0, 2]], ambient=4, spatial=[[0.3, 2, 0], [-0.2, 0, 2]]
    )
    radii = [0.05, 0.1]
    coefficients = causal_surface_coefficients(embedding)
    expected = coefficients.volumes(radii)
    actual = tube_volume_extrinsic(embedding, Domain.diamond(2), radii).extrinsic.volumes
    ok = all(_close(x, y, 1e-6) for x, y in zip(actual, expected)) and coefficients.gauss_residual <= 1e-6
    return ok, f"{expected[-1]:.12g}, gauss <= 1e-6", f"{actual[-1]:.12g}, gauss {coefficients.gauss_residual:.2e}"


def nogo_surface():
    """Surface in R^5 whose three normals bend as ``I``, ``0`` and ``diag(1, -1)`` at the origin."""
    return build_embedding(
        "graph_surface",
        heights=[[[0.5, 2, 0], [0.5, 0, 2]], [], [[0.5, 2, 0], [-0.5, 0, 2]]],
        box=[[-0.5, 0.5], [-0.5, 0.5]],
    )


def _frame_rotation() -> Outcome:
    result = frame_rotation_gap(nogo_surface(), Domain.diamond(3), swap_rotation(3, 0, 2), [0.1])
    return result.frame_dependent, f"gap > 10 x {result.error_bound:.1e}", f"{result.gap:.3e}"


def build_checks() -> List[Check]:
    checks = [
        Check("square.mixed_moment", "moments", _square_mixed),
        Check("square.pure_moment", "moments", _square_pure),
        Check("square.moment_gap", "moments", _square_gap),
        Check("fourfold.unit", "diamond", _fourfold_unit),
        Check("fourfold.intrinsic", "diamond", _fourfold_intrinsic),
        Check("polycore.identity_case", "polycore", _identity_case),
        Check("diffgeo.identity_hd", "polycore", _identity_hd),
    ]
    checks += [Check(f"diamond.difference_m{m}", "diamond", _diamond_difference(m)) for m in range(2, 9)]
    labels = ["A2", "A3", "A4", "B2", "B3", "B4", "D4", "I2(5)", "I2(6)", "I2(7)", "I2(8)", "H3", "F4", "H4"]
    checks += [Check(f"coxeter.{label}", "coxeter", _group_degree(label), slow=label == "H4") for label in labels]
    checks += [
        Check("tube.sphere_shell", "tube", _sphere_shell),
        Check("tube.sphere_gauss_bonnet", "tube", _sphere_gauss_bonnet),
        Check("tube.torus_k2", "tube", _torus_k2),
        Check("tube.pappus_pentagon", "tube", _pappus),
        Check("tube.clifford_pentagon", "tube", _clifford_pentagon),
        Check("tube.counterexample_symmetric", "domains", _counterexample_symmetric),
        Check("tube.counterexample_paths", "tube", _counterexample_paths),
        Check("tube.frame_rotation_gap", "tube", _frame_rotation),
        Check("lorentzian.sign", "lorentzian", _causal_sign),
        Check("lorentzian.flat_slice", "lorentzian", _causal_slice),
        Check("lorentzian.causal_surface", "lorentzian", _causal_surface),
    ]
    return checks


def run_checks(name_filter: Optional[str] = None, include_slow: bool = True) -> VerificationSummary:
    """Run every check whose name or category contains ``name_filter``."""
    results = []
    for check in build_checks():
        if name_filter and name_filter not in check.category and name_filter not in check.name:
            continue
        if check.slow and not include_slow:
            continue
        started = time.perf_counter()
        try:
            passed, expected, actual = check.run()
            status = CheckStatus.PASS if passed else CheckStatus.FAIL
            detail = ""
        except Exception as exc:  # a crashing check is reported, not raised
            status, expected, actual, detail = CheckStatus.ERROR, "", "", str(exc)
            logger.error("Check crashed", check=check.name, error=str(exc))
        results.append(
            CheckResult(
                name=check.name,
                category=check.category,
                status=status,
                expected=expected,
                actual=actual,
                detail=detail,
            )
        )
        logger.info("Check finished", check=check.name, status=status, seconds=round(time.perf_counter() - started, 3))
    return VerificationSummary(checks=results)
