"""Tests for embeddings, normal frames, curvature and the H_d contraction."""

import itertools
from fractions import Fraction

import numpy as np
import pytest

from weyltube.diffgeo import (
    Signature,
    build_embedding,
    christoffel_riemann,
    contract_Hd,
    coupling_terms,
    embedding_from_callable,
    frame_defect,
    fundamental_forms,
    gauss_codazzi_residuals,
    gauss_riemann,
    identity_curvature,
    identity_normalization,
    lipschitz_killing_integrands,
    node_curvature,
    normal_frame,
    pair_partitions,
    residual_summary,
    rotate_frame,
)
from weyltube.exceptions import ImmersionError, WeylTubeValidationError


class TestZoo:
    @pytest.mark.parametrize(
        "name, params, n, m",
        [
            ("circle", {"R": 2.0}, 1, 2),
            ("circle", {"R": 2.0, "codim": 1}, 1, 1),
            ("sphere", {"R": 1.5}, 2, 1),
            ("torus", {"R": 3.0, "r": 1.0}, 2, 1),
            ("clifford_torus", {}, 2, 2),
            ("helix", {}, 1, 2),
            ("helicoid", {}, 2, 1),
            ("graph2d", {}, 2, 1),
            ("plane", {"codim": 3}, 2, 3),
        ],
    )
    def test_dimensions(self, name, params, n, m):
        embedding = build_embedding(name, **params)
        assert (embedding.n, embedding.m) == (n, m)
        assert embedding.signature.dimension == n + m

    def test_unknown_manifold(self):
        with pytest.raises(WeylTubeValidationError) as exc_info:
            build_embedding("klein_bottle")
        assert exc_info.value.field == "manifold"

    def test_bad_parameter_name(self):
        with pytest.raises(WeylTubeValidationError):
            build_embedding("sphere", radius=2.0)

    def test_torus_needs_thin_tube(self):
        with pytest.raises(WeylTubeValidationError):
            build_embedding("torus", R=1.0, r=2.0)

    def test_lorentzian_graph_signature(self):
        embedding = build_embedding("lorentz_graph2d", ambient=4, spatial=[[0.2, 2, 0]])
        assert embedding.signature.eta == (1, 1, 1, -1)
        assert list(embedding.signature.normal_block(2)) == [1.0, -1.0]


class TestSignature:
    def test_time_coordinate_must_be_last(self):
        with pytest.raises(WeylTubeValidationError):
            Signature((1, -1, 1))

    def test_single_negative_entry(self):
        with pytest.raises(WeylTubeValidationError):
            Signature((1, -1, -1))

    def test_dot(self):
        signature = Signature.lorentzian(3)
        assert signature.dot(np.array([1.0, 2.0, 3.0]), np.array([1.0, 1.0, 1.0])) == pytest.approx(0.0)


class TestFrames:
    def test_sphere_second_fundamental_form(self):
        forms = fundamental_forms(build_embedding("sphere", R=2.0), [1.0, 0.5])
        assert np.allclose(forms.h_raised[:, :, 0], -0.5 * np.eye(2))
        assert forms.sqrt_det_g == pytest.approx(4.0 * np.sin(1.0))

    @pytest.mark.parametrize("name", ["clifford_torus", "helix", "helicoid", "graph2d"])
    def test_frames_are_orthonormal(self, name):
        embedding = build_embedding(name)
        u = embedding.center + 0.1
        frame = normal_frame(embedding, u)
        assert frame_defect(embedding, u, frame) < 1e-10

    def test_lorentzian_frame_is_timelike_last(self):
        embedding = build_embedding("lorentz_graph2d", ambient=4, spatial=[[0.2, 2, 0]])
        u = np.array([0.3, -0.2])
        frame = normal_frame(embedding, u)
        eta = np.array(embedding.signature.eta, dtype=float)
        gram = frame @ (eta[:, None] * frame.T)
        assert np.allclose(gram, np.diag([1.0, -1.0]))

    def test_timelike_graph_is_not_immersed(self):
        embedding = build_embedding("lorentz_graph2d", f=[[2.0, 1, 0]])
        with pytest.raises(ImmersionError):
            normal_frame(embedding, [0.0, 0.0])

    def test_rotation_preserves_curvature(self):
        embedding = build_embedding("clifford_torus", R1=1.0, R2=1.5)
        forms = fundamental_forms(embedding, [0.4, 1.1])
        angle = 0.7
        rotation = np.array([[np.cos(angle), -np.sin(angle)], [np.sin(angle), np.cos(angle)]])
        rotated = rotate_frame(forms, rotation)
        before = gauss_riemann(forms.h_raised, forms.normal_block)
        after = gauss_riemann(rotated.h_raised, rotated.normal_block)
        assert np.allclose(before, after)
        assert frame_defect(embedding, forms.u, rotated.frame) < 1e-10

    def test_finite_difference_embedding_matches_analytic(self):
        R = 2.0

        def position(u):
            return np.array([R * np.sin(u[0]) * np.cos(u[1]), R * np.sin(u[0]) * np.sin(u[1]), R * np.cos(u[0])])

        numeric = embedding_from_callable(
            "sphere_fd", position, 2, 1, [(0.0, np.pi), (0.0, 2 * np.pi)], [False, True]
        )
        forms = fundamental_forms(numeric, [1.0, 0.5])
        assert abs(forms.h_raised[0, 0, 0]) == pytest.approx(0.5, rel=1e-5)


class TestCurvature:
    def test_sphere_scalar_curvature(self):
        node = node_curvature(build_embedding("sphere", R=2.0), [1.0, 0.5])
        assert node.intrinsic.scalar == pytest.approx(0.5)
        assert node.hd[2] == pytest.approx(0.25)
        assert node.hd[0] == 1.0

    @pytest.mark.parametrize(
        "name, params, u",
        [
            ("sphere", {"R": 1.5}, [1.2, 0.3]),
            ("torus", {"R": 3.0, "r": 1.0}, [0.5, 2.0]),
            ("clifford_torus", {"R1": 1.0, "R2": 1.5}, [0.2, 0.9]),
            ("graph2d", {}, [0.1, -0.3]),
        ],
    )
    def test_gauss_and_codazzi_hold(self, name, params, u):
        gauss, codazzi = gauss_codazzi_residuals(build_embedding(name, **params), u)
        assert gauss < 1e-8
        assert codazzi < 1e-6

    def test_clifford_torus_is_flat(self):
        embedding = build_embedding("clifford_torus", R1=1.0, R2=1.5)
        curvature = christoffel_riemann(embedding, [0.3, 0.8])
        assert np.allclose(curvature.riemann, 0.0, atol=1e-10)

    def test_torus_gauss_curvature(self):
        R, r, v = 3.0, 1.0, 0.4
        node = node_curvature(build_embedding("torus", R=R, r=r), [0.0, v])
        gauss_curvature = np.cos(v) / (r * (R + r * np.cos(v)))
        assert node.hd[2] == pytest.approx(gauss_curvature)

    def test_exact_gauss_equation_on_object_arrays(self):
        h = np.zeros((2, 2, 1), dtype=object)
        h[...] = Fraction(0)
        h[0, 0, 0], h[1, 1, 0] = Fraction(1, 2), Fraction(1, 3)
        R = gauss_riemann(h, [1])
        assert R[0, 1, 0, 1] == Fraction(1, 6)
        assert R[0, 1, 1, 0] == Fraction(-1, 6)

    def test_lorentzian_normal_flips_sign(self):
        h = np.zeros((2, 2, 1))
        h[0, 0, 0] = h[1, 1, 0] = 1.0
        assert gauss_riemann(h, np.array([-1.0]))[0, 1, 0, 1] == pytest.approx(-1.0)

    def test_residual_summary(self):
        embedding = build_embedding("sphere", R=1.0)
        summary = residual_summary(embedding, np.array([[1.0, 0.2], [2.0, 3.0]]))
        assert summary["nodes"] == 2
        assert summary["scalar_min"] == pytest.approx(2.0)
        assert summary["gauss_residual"] < 1e-8


class TestLipschitzKilling:
    def test_pair_partitions(self):
        assert len(pair_partitions(2)) == 1
        assert len(pair_partitions(4)) == 3
        assert len(pair_partitions(6)) == 15
        assert pair_partitions(3) == ()

    def test_coupling_terms_count(self):
        # 3 lower partitions x 3 upper partitions x 2 orderings
        assert len(coupling_terms(4)) == 18

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_identity_normalization(self, n):
        R = identity_curvature(n)
        for d in range(0, n + 1, 2):
            assert contract_Hd(R, n, d) == identity_normalization(n, d)

    def test_h2_is_half_scalar(self, random_second_form):
        R = gauss_riemann(random_second_form, np.ones(2))
        scalar = np.einsum("ijij->", R)
        assert contract_Hd(R, 3, 2) == pytest.approx(scalar / 2)

    def test_stacked_input(self, random_second_form):
        R = gauss_riemann(random_second_form, np.ones(2))
        stack = np.stack([R, 2 * R])
        values = contract_Hd(stack, 3, 2)
        assert values.shape == (2,)
        assert values[1] == pytest.approx(2 * values[0])

    def test_hypersurface_h2_is_product_of_principal_curvatures(self):
        h = np.zeros((2, 2, 1))
        h[0, 0, 0], h[1, 1, 0] = 0.3, -1.7
        integrands = lipschitz_killing_integrands(gauss_riemann(h, np.ones(1)), 2)
        assert set(integrands) == {0, 2}
        assert integrands[2] == pytest.approx(0.3 * -1.7)

    @pytest.mark.parametrize("d", [1, 6])
    def test_degree_validation(self, d):
        with pytest.raises(WeylTubeValidationError):
            contract_Hd(identity_curvature(4), 4, d)

    def test_degree_cap(self):
        with pytest.raises(WeylTubeValidationError) as exc_info:
            contract_Hd(np.zeros((10, 10, 10, 10)), 10, 10)
        assert exc_info.value.field == "d"

    def test_h4_of_product_curvature(self):
        # R = identity on the first two and last two coordinates only: H_4 = 2 x 2 block pairings
        R = np.zeros((4, 4, 4, 4), dtype=object)
        R[...] = Fraction(0)
        for a, b in ((0, 1), (2, 3)):
            for i, j in itertools.permutations((a, b)):
                R[i, j, i, j] = Fraction(1)
                R[i, j, j, i] = Fraction(-1)
        assert contract_Hd(R, 4, 4) == 1
