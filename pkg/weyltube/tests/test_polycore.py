"""Tests for exact polynomials, orthogonal averaging and Haar sampling."""

from fractions import Fraction

import numpy as np
import pytest

from weyltube.coxeter import build_group
from weyltube.exceptions import DeterminantSizeError, DimensionMismatchError
from weyltube.polycore import (
    Poly,
    RadialPoly,
    average_group,
    average_orthogonal,
    double_factorial,
    haar_sample_orthogonal,
    haar_samples,
    multi_indices,
    multinomial,
    poly_det,
    radial_series_value,
    rising_even_product,
    sphere_moment,
    tangent_block,
)


def random_poly(rng, m, max_degree, terms=6):
    indices = [alpha for d in range(max_degree + 1) for alpha in multi_indices(m, d)]
    picks = rng.choice(len(indices), size=min(terms, len(indices)), replace=False)
    return Poly(m, {indices[i]: int(rng.integers(1, 4)) * int(rng.choice([-1, 1])) for i in picks})


def random_linear_entry(rng):
    return Poly(
        2,
        {
            alpha: Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 6)))
            for alpha in [(0, 0), (1, 0), (0, 1)]
        },
    )


def cofactor_det(entries):
    if len(entries) == 1:
        return entries[0][0]
    total = Poly.zero(entries[0][0].m)
    for j, entry in enumerate(entries[0]):
        minor = [row[:j] + row[j + 1 :] for row in entries[1:]]
        term = entry * cofactor_det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


class TestPoly:
    def test_arithmetic_is_exact(self):
        t1, t2 = Poly.variable(2, 0), Poly.variable(2, 1)
        p = (t1 + t2) ** 2 - t1 * t1 * 2
        assert p.coefficient((0, 2)) == Fraction(1)
        assert p.coefficient((1, 1)) == Fraction(2)
        assert p.coefficient((2, 0)) == Fraction(-1)
        assert p.is_exact

    def test_zero_terms_are_dropped(self):
        t1 = Poly.variable(1, 0)
        assert (t1 - t1).is_zero()
        assert (t1 - t1) == 0

    def test_evaluate(self):
        p = Poly(2, {(2, 0): Fraction(1, 2), (0, 1): 3, (0, 0): 1})
        assert p.evaluate([Fraction(2), Fraction(1, 3)]) == Fraction(4)
        assert p.evaluate_many(np.array([[2.0, 1 / 3]]))[0] == pytest.approx(4.0)

    def test_wrong_arity_raises(self):
        with pytest.raises(DimensionMismatchError):
            Poly.variable(2, 0) + Poly.variable(3, 0)

    def test_substitute_linear_swaps_variables(self):
        p = Poly(2, {(2, 1): 1})
        swapped = p.substitute_linear([[0, 1], [1, 0]])
        assert swapped == Poly(2, {(1, 2): 1})

    def test_json_round_trip_keeps_fractions(self):
        p = Poly(2, {(1, 1): Fraction(-2, 7), (0, 0): 5})
        assert Poly.from_json_dict(p.to_json_dict()) == p


class TestDeterminant:
    def test_two_by_two(self):
        t1, t2 = Poly.variable(2, 0), Poly.variable(2, 1)
        det = poly_det([[1 - t1, Poly.zero(2)], [Poly.zero(2), 1 - t2]])
        assert det == Poly(2, {(0, 0): 1, (1, 0): -1, (0, 1): -1, (1, 1): 1})

    def test_size_limit(self):
        entries = [[Poly.constant(1, int(i == j)) for j in range(9)] for i in range(9)]
        with pytest.raises(DeterminantSizeError):
            poly_det(entries)

    def test_identity_of_size_eight(self):
        entries = [[Poly.constant(1, int(i == j)) for j in range(8)] for i in range(8)]
        assert poly_det(entries) == 1

    def test_tangent_block_entries(self):
        h = np.zeros((2, 2, 1), dtype=object)
        h[0, 0, 0] = Fraction(1, 2)
        h[1, 1, 0] = Fraction(1, 2)
        block = tangent_block(h)
        t = Poly.variable(1, 0)
        assert block[0][0] == 1 - t * Fraction(1, 2)
        assert block[0][1].is_zero()
        # det (I - t h) for a sphere of radius 2 in R^3
        assert poly_det(block) == (1 - t * Fraction(1, 2)) ** 2

    @pytest.mark.parametrize("seed", [0, 1, 2, 3, 4])
    def test_matches_cofactor_expansion(self, seed):
        rng = np.random.default_rng(seed)
        entries = [[random_linear_entry(rng) for _ in range(3)] for _ in range(3)]
        det = poly_det(entries)
        assert det == cofactor_det(entries)
        assert det.is_exact


class TestOrthogonalAverage:
    @pytest.mark.parametrize(
        "m, alpha, expected",
        [
            (1, (2,), Fraction(1)),
            (2, (2, 0), Fraction(1, 2)),
            (3, (2, 2, 0), Fraction(1, 15)),
            (3, (4, 0, 0), Fraction(1, 5)),
            (2, (1, 1), Fraction(0)),
            (4, (2, 2, 2, 0), Fraction(1, 192)),
        ],
    )
    def test_sphere_moment(self, m, alpha, expected):
        assert sphere_moment(m, alpha) == expected

    def test_helpers(self):
        assert double_factorial(-1) == 1
        assert double_factorial(7) == 105
        assert rising_even_product(3, 4) == 15
        assert rising_even_product(5, 0) == 1
        assert multinomial(4, (2, 1, 1)) == 12

    def test_radial_average_of_square(self):
        p = Poly(2, {(2, 0): 1})
        assert average_orthogonal(p) == RadialPoly(2, {2: Fraction(1, 2)})

    def test_odd_terms_vanish(self):
        p = Poly(3, {(1, 0, 0): 4, (1, 1, 1): 2, (0, 0, 0): 7})
        assert average_orthogonal(p) == RadialPoly(3, {0: 7})

    def test_radial_poly_expansion_is_invariant(self):
        radial = RadialPoly(2, {2: Fraction(1, 2), 4: 3})
        expanded = radial.to_poly()
        assert expanded.substitute_linear([[0, -1], [1, 0]]) == expanded
        assert radial.evaluate([1, 1]) == Fraction(13)

    def test_radial_poly_rejects_odd_slots(self):
        with pytest.raises(ValueError):
            RadialPoly(2, {3: 1})

    def test_group_average_is_exact_for_signed_permutations(self):
        b2 = build_group("B", 2)
        averaged = average_group(Poly(2, {(2, 0): 1}), b2)
        assert averaged == Poly(2, {(2, 0): Fraction(1, 2), (0, 2): Fraction(1, 2)})
        assert averaged.is_exact

    def test_group_average_kills_non_invariant_quartic(self):
        b2 = build_group("B", 2)
        quartic = Poly(2, {(3, 1): 1})
        assert average_group(quartic, b2).is_zero()

    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    @pytest.mark.parametrize("d", [0, 2, 4, 6, 8])
    def test_sphere_moments_integrate_radial_powers(self, m, d):
        # |t|^d = sum_beta multinomial(d/2; beta) t^(2 beta) averages to 1 on the sphere
        half = d // 2
        total = sum(
            multinomial(half, beta) * sphere_moment(m, tuple(2 * b for b in beta))
            for beta in multi_indices(m, half)
        )
        assert total == 1

    @pytest.mark.parametrize("group_request", ["B2", "B3", "D3"])
    def test_group_average_is_idempotent(self, group_request, rng):
        group = build_group(group_request)
        once = average_group(random_poly(rng, group.m, 4), group)
        assert average_group(once, group) == once

    def test_numeric_group_average_is_idempotent(self, rng):
        group = build_group("I2(5)")
        once = average_group(random_poly(rng, 2, 5), group)
        twice = average_group(once, group)
        points = rng.normal(size=(8, 2))
        assert np.allclose(twice.evaluate_many(points), once.evaluate_many(points), atol=1e-12)

    @pytest.mark.parametrize("group_request", ["B2", "B3", "D3"])
    def test_orthogonal_average_factors_through_group_average(self, group_request, rng):
        group = build_group(group_request)
        p = random_poly(rng, group.m, 6)
        assert average_orthogonal(average_group(p, group)) == average_orthogonal(p)


class TestHaar:
    def test_orthogonal(self):
        q = haar_sample_orthogonal(4, seed=7)
        assert np.allclose(q.T @ q, np.eye(4))

    def test_seeded_samples_repeat(self):
        a = haar_samples(3, 5, seed=11)
        b = haar_samples(3, 5, seed=11)
        assert a.shape == (5, 3, 3)
        assert np.array_equal(a, b)

    def test_second_moment_matches_sphere(self):
        samples = haar_samples(3, 20_000, seed=3)
        first_columns = samples[:, :, 0]
        assert np.mean(first_columns[:, 0] ** 2) == pytest.approx(1 / 3, abs=0.01)

    @pytest.mark.parametrize("m, degree, seed", [(2, 4, 1), (2, 6, 2), (3, 6, 3), (4, 5, 4), (4, 6, 5)])
    def test_orthogonal_average_matches_haar_mean(self, m, degree, seed):
        rng = np.random.default_rng(seed)
        p = random_poly(rng, m, degree)
        t = rng.normal(size=m)
        t /= np.linalg.norm(t)
        values = p.evaluate_many(haar_samples(m, 40_000, seed=seed) @ t)
        stderr = values.std(ddof=1) / np.sqrt(values.size)
        expected = radial_series_value(average_orthogonal(p), t)[0]
        assert abs(values.mean() - expected) <= 4 * stderr + 1e-12

    def test_rejects_empty_dimension(self):
        with pytest.raises(DimensionMismatchError):
            haar_sample_orthogonal(0)
