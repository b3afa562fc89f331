"""Tests for tube volumes, the sampling oracles, the no-go demonstrators and the verdict."""

import math
from fractions import Fraction

import numpy as np
import pytest

from weyltube.diffgeo import build_embedding
from weyltube.domains import Domain, build_radial_counterexample, moments
from weyltube.exceptions import DimensionMismatchError, FocalRadiusError, WeylTubeValidationError
from weyltube.models import IntrinsicCriterion, MonteCarloSpec, QuadratureSpec
from weyltube.tube import (
    causal_surface_coefficients,
    combine_reports,
    curvature_integrals,
    curve_tube_volume,
    degree_integrals,
    diamond_codimension_gap,
    diamond_fourfold_coefficients,
    diamond_gap_closed_form,
    diamond_intrinsic_degree,
    diamond_square_moment_gap,
    diamond_surface_coefficients,
    estimate_reach,
    frame_rotation_gap,
    haar_integrand_average,
    integrand_poly,
    intrinsic_coefficients,
    intrinsicness_verdict,
    monte_carlo_series,
    parameter_grid,
    polynomial_volumes,
    refined,
    swap_rotation,
    tube_volume_extrinsic,
    tube_volume_intrinsic,
    tube_volume_mc,
    weyl_ball_coefficients,
)


def shell_volume(R, a):
    return 4 * math.pi / 3 * ((R + a) ** 3 - (R - a) ** 3)


class TestQuadrature:
    def test_box_area(self):
        grid = parameter_grid([(0.0, 2.0), (0.0, 2 * math.pi)], [False, True], 8, 16)
        assert grid.size == 8 * 16
        assert float(grid.integrate(np.ones(grid.size))) == pytest.approx(4 * math.pi)

    def test_trigonometric_exactness(self):
        grid = parameter_grid([(0.0, 2 * math.pi)], [True], 4, 16)
        values = np.cos(grid.nodes[:, 0]) ** 2
        assert float(grid.integrate(values)) == pytest.approx(math.pi)

    def test_polynomial_exactness(self):
        grid = parameter_grid([(-1.0, 1.0)], [False], 4, 8)
        assert float(grid.integrate(grid.nodes[:, 0] ** 6)) == pytest.approx(2 / 7)

    def test_refined_is_finer(self):
        box, periodic = [(0.0, 1.0), (0.0, 1.0)], [False, True]
        coarse = parameter_grid(box, periodic, 4, 8)
        fine = refined(coarse, box, periodic)
        assert fine.size > coarse.size

    @pytest.mark.parametrize(
        "box, periodic, order, trapezoid",
        [
            ([(0.0, 1.0)], [False], 1, 8),
            ([(0.0, 1.0)], [True], 4, 2),
            ([(1.0, 1.0)], [False], 4, 8),
            ([(0.0, 1.0)], [False, True], 4, 8),
        ],
    )
    def test_rejects_bad_rules(self, box, periodic, order, trapezoid):
        with pytest.raises(WeylTubeValidationError):
            parameter_grid(box, periodic, order, trapezoid)


class TestIntegrand:
    def test_umbilic_surface(self):
        h = np.empty((2, 2, 1), dtype=object)
        h[...] = Fraction(0)
        h[0, 0, 0] = h[1, 1, 0] = Fraction(1)
        p = integrand_poly(h)
        assert p.coefficient((0,)) == 1
        assert p.coefficient((1,)) == -2
        assert p.coefficient((2,)) == 1

    def test_timelike_normal_flips_odd_terms(self):
        h = np.empty((2, 2, 1), dtype=object)
        h[...] = Fraction(0)
        h[0, 0, 0] = h[1, 1, 0] = Fraction(1)
        p = integrand_poly(h, [-1])
        assert p.coefficient((1,)) == 2
        assert p.coefficient((2,)) == 1

    def test_degree_integrals_over_interval(self):
        h = np.empty((2, 2, 1), dtype=object)
        h[...] = Fraction(0)
        h[0, 0, 0] = h[1, 1, 0] = Fraction(1)
        table = moments(Domain.interval(), 2)
        integrals = degree_integrals(integrand_poly(h), table)
        assert table.scale * integrals[0] == 2
        assert table.scale * integrals[2] == Fraction(2, 3)


class TestExtrinsicVolume:
    def test_sphere_shell(self):
        radii = [0.05, 0.1, 0.2]
        report = tube_volume_extrinsic(build_embedding("sphere", R=2.0), Domain.interval(), radii)
        for a, v in zip(radii, report.extrinsic.volumes):
            assert v == pytest.approx(shell_volume(2.0, a), rel=1e-9)
        assert report.v0_consistent
        assert report.manifold_volume == pytest.approx(16 * math.pi, rel=1e-10)
        assert report.domain_volume == pytest.approx(2.0)
        assert report.reach == pytest.approx(2.0, rel=1e-8)

    def test_pappus_pentagon(self):
        pentagon = Domain.regular_polygon(5)
        report = tube_volume_extrinsic(build_embedding("circle", R=2.0, codim=2), pentagon, [0.2])
        expected = 2 * math.pi * 2.0 * float(moments(pentagon, 0).volume) * 0.2**2
        assert report.extrinsic.volumes[0] == pytest.approx(expected, rel=1e-8)

    def test_centrally_symmetric_odd_terms_vanish(self):
        report = tube_volume_extrinsic(build_embedding("sphere", R=1.0), Domain.interval(), [0.1])
        assert report.extrinsic.coefficients[1] == 0.0

    def test_focal_radius(self):
        with pytest.raises(FocalRadiusError) as exc_info:
            tube_volume_extrinsic(build_embedding("sphere", R=1.0), Domain.interval(), [1.5])
        assert exc_info.value.radius == 1.5
        assert exc_info.value.reach == pytest.approx(1.0, rel=1e-8)

    def test_focal_check_can_be_skipped(self):
        report = tube_volume_extrinsic(
            build_embedding("sphere", R=1.0), Domain.interval(), [1.5], check_reach=False
        )
        assert len(report.extrinsic.volumes) == 1

    @pytest.mark.parametrize("radii", [[], [-0.1], [0.1, 0.0], [float("nan")]])
    def test_rejects_bad_radii(self, radii):
        with pytest.raises(WeylTubeValidationError) as exc_info:
            tube_volume_extrinsic(build_embedding("sphere"), Domain.interval(), radii)
        assert exc_info.value.field == "radii"

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            tube_volume_extrinsic(build_embedding("sphere"), Domain.cube(2), [0.1])

    def test_frame_rotation_must_be_orthogonal(self):
        circle = build_embedding("circle", R=2.0, codim=2)
        with pytest.raises(WeylTubeValidationError) as exc_info:
            tube_volume_extrinsic(circle, Domain.cube(2), [0.1], frame_rotation=np.diag([2.0, 1.0]))
        assert exc_info.value.field == "frame_rotation"

    def test_error_estimate_without_refinement(self):
        report = tube_volume_extrinsic(
            build_embedding("sphere"), Domain.interval(), [0.1], QuadratureSpec(refine=False)
        )
        assert report.extrinsic.error == 0.0


class TestIntrinsicVolume:
    def test_sphere_shell(self):
        radii = [0.05, 0.1, 0.2]
        report = tube_volume_intrinsic(build_embedding("sphere", R=2.0), Domain.interval(), radii)
        for a, v in zip(radii, report.intrinsic.volumes):
            assert v == pytest.approx(shell_volume(2.0, a), rel=1e-9)
        assert report.intrinsic.curvature_integrals[2] == pytest.approx(4 * math.pi, rel=1e-9)
        assert report.reach == pytest.approx(2.0, rel=1e-8)

    def test_focal_radius(self):
        with pytest.raises(FocalRadiusError) as exc_info:
            tube_volume_intrinsic(build_embedding("sphere", R=1.0), Domain.interval(), [1.5])
        assert exc_info.value.radius == 1.5
        assert exc_info.value.reach == pytest.approx(1.0, rel=1e-8)

    def test_focal_check_can_be_skipped(self):
        report = tube_volume_intrinsic(
            build_embedding("sphere", R=1.0), Domain.interval(), [1.5], check_reach=False
        )
        assert report.reach is None
        assert len(report.intrinsic.volumes) == 1

    def test_gauss_bonnet(self):
        k = curvature_integrals(build_embedding("sphere", R=2.0))
        assert k[0] == pytest.approx(16 * math.pi, rel=1e-10)
        assert k[1] == 0.0
        assert k[2] == pytest.approx(4 * math.pi, rel=1e-9)

    def test_torus_total_curvature(self):
        k = curvature_integrals(build_embedding("torus", R=3.0, r=1.0))
        assert abs(k[2]) <= 1e-8

    def test_paths_agree_for_pentagon(self):
        clifford = build_embedding("clifford_torus", R1=1.0, R2=1.0)
        pentagon = Domain.regular_polygon(5)
        radii = [0.05, 0.1]
        extrinsic = tube_volume_extrinsic(clifford, pentagon, radii)
        intrinsic = tube_volume_intrinsic(clifford, pentagon, radii)
        assert combine_reports(extrinsic, intrinsic).path_discrepancy() <= 1e-6

    def test_paths_agree_for_counterexample(self):
        clifford = build_embedding("clifford_torus", R1=1.0, R2=1.5)
        domain = build_radial_counterexample(2, 3, 16)
        radii = [0.02, 0.05]
        extrinsic = tube_volume_extrinsic(clifford, domain, radii)
        intrinsic = tube_volume_intrinsic(clifford, domain, radii)
        assert combine_reports(extrinsic, intrinsic).path_discrepancy() <= 1e-6

    def test_lorentzian_codimension_two_rejected(self):
        embedding = build_embedding(
            "lorentz_graph2d", f=[[0.1, 2, 0], [0.05, 0, 2]], ambient=4, spatial=[[0.3, 2, 0], [-0.2, 0, 2]]
        )
        with pytest.raises(WeylTubeValidationError) as exc_info:
            tube_volume_intrinsic(embedding, Domain.diamond(2), [0.05])
        assert exc_info.value.field == "signature"


class TestCoefficients:
    def test_ball_coefficients_reproduce_shell(self):
        R = 2.0
        coefficients = weyl_ball_coefficients(1, {0: 4 * math.pi * R**2, 2: 4 * math.pi})
        assert coefficients[0] == pytest.approx(8 * math.pi * R**2)
        assert coefficients[1] == 0.0
        assert coefficients[2] == pytest.approx(8 * math.pi / 3)
        volumes = polynomial_volumes(coefficients, 1, [0.1, 0.3])
        assert volumes == pytest.approx([shell_volume(R, 0.1), shell_volume(R, 0.3)])

    def test_ball_coefficients_match_intrinsic_path(self):
        k = [1.3, 0.0, 0.7]
        ball = intrinsic_coefficients(k, Domain.ball(2), 2)
        assert ball == pytest.approx(weyl_ball_coefficients(2, k))

    def test_lorentzian_sign(self):
        coefficients = intrinsic_coefficients([1.0, 0.0, 1.0], Domain.interval(), 1, lorentzian=True)
        assert coefficients[2] == pytest.approx(-2.0 / 3.0, abs=1e-15)

    def test_curve_tube_volume(self):
        volumes = curve_tube_volume(2 * math.pi, Domain.cube(2), [0.1, 0.2])
        assert volumes == pytest.approx([2 * math.pi * 4 * 0.01, 2 * math.pi * 4 * 0.04])

    def test_curve_tube_volume_pentagon(self):
        pentagon = Domain.regular_polygon(5)
        area = float(moments(pentagon, 0).volume)
        volumes = curve_tube_volume(3.0, pentagon, [0.1, 0.2])
        assert volumes == pytest.approx([3.0 * area * 0.01, 3.0 * area * 0.04])

    def test_curve_tube_needs_centred_domain(self):
        with pytest.raises(WeylTubeValidationError) as exc_info:
            curve_tube_volume(1.0, Domain.cone_ball(2, 0.5), [0.1])
        assert exc_info.value.field == "domain"

    def test_reach_estimate(self):
        assert estimate_reach(0.0, Domain.cube(2)) == math.inf
        assert estimate_reach(2.0, Domain.cube(2)) == pytest.approx(1 / (2 * math.sqrt(2)))


class TestLorentzian:
    def test_flat_slice(self):
        embedding = build_embedding("lorentz_graph2d", f=[[0.2, 2, 0], [0.1, 0, 2]])
        radii = [0.05, 0.1]
        extrinsic = tube_volume_extrinsic(embedding, Domain.interval(), radii)
        intrinsic = tube_volume_intrinsic(embedding, Domain.interval(), radii)
        k2 = intrinsic.intrinsic.curvature_integrals[2]
        assert extrinsic.extrinsic.coefficients[2] == pytest.approx(-2 * k2 / 3, rel=1e-6)
        assert combine_reports(extrinsic, intrinsic).path_discrepancy() <= 1e-6

    def test_causal_surface(self):
        embedding = build_embedding(
            "lorentz_graph2d", f=[[0.1, 2, 0], [0.05, 0, 2]], ambient=4, spatial=[[0.3, 2, 0], [-0.2, 0, 2]]
        )
        radii = [0.05, 0.1]
        coefficients = causal_surface_coefficients(embedding)
        actual = tube_volume_extrinsic(embedding, Domain.diamond(2), radii).extrinsic.volumes
        assert actual == pytest.approx(coefficients.volumes(radii), rel=1e-6)
        assert coefficients.gauss_residual <= 1e-6

    def test_causal_surface_needs_lorentzian_surface(self):
        with pytest.raises(WeylTubeValidationError):
            causal_surface_coefficients(build_embedding("clifford_torus"))


class TestMonteCarlo:
    def test_sphere_shell(self):
        estimate = tube_volume_mc(build_embedding("sphere", R=1.0), Domain.interval(), 0.2, 200_000, seed=11)
        assert abs(estimate.estimate - shell_volume(1.0, 0.2)) <= 4 * estimate.stderr
        assert estimate.samples == 200_000
        assert estimate.seed == 11

    def test_circle_with_square(self):
        circle = build_embedding("circle", R=2.0, codim=2)
        estimate = tube_volume_mc(circle, Domain.cube(2), 0.2, 100_000, seed=5)
        expected = 2 * math.pi * 2.0 * 4 * 0.2**2
        assert abs(estimate.estimate - expected) <= 4 * estimate.stderr

    def test_deterministic_for_seed(self):
        sphere = build_embedding("sphere")
        first = tube_volume_mc(sphere, Domain.interval(), 0.1, 20_000, seed=3, chunk_size=5_000)
        second = tube_volume_mc(sphere, Domain.interval(), 0.1, 20_000, seed=3, chunk_size=5_000, threads=4)
        assert first.hits == second.hits

    def test_series_seeds(self):
        spec = MonteCarloSpec(samples=5_000, seed=40)
        series = monte_carlo_series(build_embedding("sphere"), Domain.interval(), [0.1, 0.2], spec)
        assert [e.seed for e in series] == [40, 41]

    def test_focal_radius(self):
        with pytest.raises(FocalRadiusError):
            tube_volume_mc(build_embedding("sphere", R=1.0), Domain.interval(), 2.0, 1_000, seed=0)

    def test_needs_closed_form(self):
        with pytest.raises(WeylTubeValidationError) as exc_info:
            tube_volume_mc(build_embedding("clifford_torus"), Domain.cube(2), 0.1, 1_000, seed=0)
        assert exc_info.value.field == "manifold"

    @pytest.mark.slow
    def test_haar_average_matches_curvature_series(self, random_second_form):
        points = np.array([[0.3, 0.1], [0.0, 0.5], [-0.4, 0.2]])
        result = haar_integrand_average(random_second_form, points, 20_000, seed=7)
        assert np.all(result.z_scores < 5.0)


class TestNoGo:
    @pytest.mark.parametrize("m", range(2, 9))
    def test_codimension_gap_closed_form(self, m):
        gap = diamond_codimension_gap(m)
        spatial, axial, difference = diamond_gap_closed_form(m)
        assert (gap.spatial, gap.axial, gap.difference) == (spatial, axial, difference)

    def test_gap_vanishes_only_in_codimension_two(self):
        assert diamond_codimension_gap(2).difference == 0
        assert diamond_codimension_gap(3).difference == Fraction(1, 120)

    def test_codimension_gap_rejects_m_one(self):
        with pytest.raises(WeylTubeValidationError):
            diamond_codimension_gap(1)

    def test_surface_coefficients(self):
        h = np.zeros((2, 2, 3))
        h[:, :, 0] = np.eye(2)
        h[:, :, 2] = np.diag([1.0, -1.0])
        coefficients = diamond_surface_coefficients(h)
        assert coefficients.per_normal == (1.0, 0.0, -1.0)
        assert coefficients.spatial == 1.0
        assert coefficients.axial == -1.0

    def test_square_moments(self):
        result = diamond_square_moment_gap()
        assert result.mixed == Fraction(1, 45)
        assert result.pure == Fraction(4, 15)
        assert result.gap == Fraction(2, 15)

    def test_fourfold_unit(self):
        result = diamond_fourfold_coefficients([1, 1, 1, 1], [1, 1, 1, 1])
        assert (result.A, result.B, result.C) == (6, 6, 1)
        assert result.closed_forms_match

    def test_fourfold_generic_intrinsic_combinations(self):
        a = [Fraction(1, 2), Fraction(-2, 3), Fraction(3), Fraction(5, 7)]
        b = [Fraction(2), Fraction(1, 3), Fraction(-1, 4), Fraction(4, 5)]
        result = diamond_fourfold_coefficients(a, b)
        assert result.closed_forms_match
        assert result.intrinsic_checks == (True, True)

    def test_fourfold_needs_four_values(self):
        with pytest.raises(WeylTubeValidationError):
            diamond_fourfold_coefficients([1, 1, 1], [1, 1, 1, 1])

    def test_frame_rotation_changes_diamond_volume(self):
        surface = build_embedding(
            "graph_surface",
            heights=[[[0.5, 2, 0], [0.5, 0, 2]], [], [[0.5, 2, 0], [-0.5, 0, 2]]],
            box=[[-0.5, 0.5], [-0.5, 0.5]],
        )
        result = frame_rotation_gap(surface, Domain.diamond(3), swap_rotation(3, 0, 2), [0.1])
        assert result.frame_dependent

    def test_frame_rotation_leaves_ball_volume(self):
        circle = build_embedding("circle", R=2.0, codim=2)
        result = frame_rotation_gap(circle, Domain.ball(2), swap_rotation(2, 0, 1), [0.1])
        assert result.gap < 1e-10

    def test_swap_rotation(self):
        Q = swap_rotation(3, 0, 2)
        assert np.array_equal(Q @ np.array([1.0, 2.0, 3.0]), np.array([3.0, 2.0, 1.0]))


class TestVerdict:
    def test_ball_is_rotational(self):
        verdict = intrinsicness_verdict(Domain.ball(3), 6)
        assert verdict.criterion == IntrinsicCriterion.ROTATIONAL
        assert verdict.intrinsic

    def test_square_group_covers_degree_three(self):
        verdict = intrinsicness_verdict(Domain.cube(2), 3)
        assert verdict.criterion == IntrinsicCriterion.GROUP_ORTHOGONAL
        assert verdict.group == "B2"
        assert verdict.orthogonal_degree == 3

    def test_square_not_guaranteed_in_dimension_four(self):
        verdict = intrinsicness_verdict(Domain.cube(2), 4)
        assert verdict.criterion == IntrinsicCriterion.NONE
        assert not verdict.intrinsic

    def test_counterexample_is_moment_symmetric(self):
        verdict = intrinsicness_verdict(build_radial_counterexample(2, 3, 16), 2)
        assert verdict.criterion == IntrinsicCriterion.MOMENT_SYMMETRIC
        assert verdict.intrinsic
        assert verdict.group is None

    @pytest.mark.parametrize("m, group, degree", [(1, "O(1)", math.inf), (2, "W(B2)", 3), (5, "O(m-1) x O(1)", 1)])
    def test_diamond_table(self, m, group, degree):
        assert diamond_intrinsic_degree(m) == (group, degree)

    def test_interval_is_always_intrinsic(self):
        verdict = intrinsicness_verdict(Domain.interval(), 8)
        assert verdict.intrinsic
