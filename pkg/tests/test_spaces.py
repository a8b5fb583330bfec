import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from opsmooth import (
    NormSpec,
    Vector,
    duality_map,
    is_smooth_point,
    norm,
    sip,
)
from opsmooth.oracles import smooth_point_battery, sphere_grid

from _utils import dual_norm_grid, random_vector

P_SMOOTH = (1.5, 2.0, 3.0)
P_ALL = (1.0, 1.5, 2.0, 3.0, math.inf)


def vec(coords, p):
    coords = np.asarray(coords, dtype=float)
    return Vector(coords, NormSpec(p, coords.shape[0]))


class TestNorm:
    def test_pythagorean(self):
        assert norm(vec([3, 4], 2)) == 5.0

    @pytest.mark.parametrize("p", P_ALL)
    def test_unit_basis_vector(self, p):
        assert norm(vec([1, 0, 0], p)) == 1.0

    def test_sup_norm(self):
        assert norm(vec([1, 1], math.inf)) == 1.0

    def test_zero_iff_zero_vector(self):
        assert norm(vec([0, 0], 3)) == 0.0
        assert norm(vec([0, 1e-200], 3)) > 0.0

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ValueError, match="dimension mismatch"):
            Vector(np.ones(3), NormSpec(2, 2))


class TestDualityMap:
    def test_hilbert_example(self):
        f = duality_map(vec([3, 4], 2))
        np.testing.assert_allclose(f.coeffs, [0.6, 0.8], atol=1e-15)
        assert f(vec([3, 4], 2)) == pytest.approx(5.0, abs=1e-12)
        assert f.unique

    def test_p3_diagonal_point_against_grid_oracle(self):
        x = vec([1, 1], 3)
        f = duality_map(x)
        np.testing.assert_allclose(f.coeffs, [2 ** (-2 / 3)] * 2, rtol=1e-14)
        assert f(x) == pytest.approx(2 ** (1 / 3), abs=1e-12)
        # dual norm via maximization over a primal sphere grid
        grid = sphere_grid(2, 3.0, 400_000)
        assert dual_norm_grid(f.coeffs, 3.0, grid) == pytest.approx(1.0, abs=1e-9)

    def test_sup_norm_point_with_unique_argmax(self):
        f = duality_map(vec([1, 0.5], math.inf))
        np.testing.assert_allclose(f.coeffs, [1.0, 0.0])
        assert f.unique
        # the l1-ball extreme points attaining f(x) = 1 reduce to +e_1
        for cand in (np.array([1.0, 0]), np.array([-1.0, 0]),
                     np.array([0, 1.0]), np.array([0, -1.0])):
            attains = np.dot(cand, [1.0, 0.5]) == pytest.approx(1.0, abs=1e-12)
            assert attains == bool(np.allclose(cand, f.coeffs))

    def test_zero_vector_rejected(self):
        with pytest.raises(ValueError, match="nonzero"):
            duality_map(vec([0, 0], 2))

    @pytest.mark.parametrize("p", P_ALL)
    def test_norming_invariants_random(self, p):
        rng = np.random.default_rng(101)
        for _ in range(200):
            x = random_vector(rng, rng.integers(1, 5), p)
            if x.is_zero():
                continue
            f = duality_map(x)
            assert f.dual_norm() == pytest.approx(1.0, abs=1e-9)
            assert f(x) == pytest.approx(norm(x), abs=1e-9 * max(1.0, norm(x)))

    @pytest.mark.parametrize("p", P_ALL)
    def test_sign_symmetry_and_positive_homogeneity(self, p):
        rng = np.random.default_rng(7)
        for _ in range(50):
            x = random_vector(rng, 3, p)
            if x.is_zero():
                continue
            minus = Vector(-x.coords, x.space)
            scaled = Vector(2.75 * x.coords, x.space)
            np.testing.assert_allclose(duality_map(minus).coeffs, -duality_map(x).coeffs,
                                       atol=1e-12)
            np.testing.assert_allclose(duality_map(scaled).coeffs, duality_map(x).coeffs,
                                       atol=1e-12)


def check_sip_axioms(p, count, seed, tol):
    """Axioms of a norm-compatible semi-inner-product, sampled."""
    rng = np.random.default_rng(seed)
    space = NormSpec(p, 3)
    worst = 0.0
    for _ in range(count):
        x = Vector(rng.standard_normal(3), space)
        y = Vector(rng.standard_normal(3), space)
        z = Vector(rng.standard_normal(3), space)
        if z.is_zero() or x.is_zero() or y.is_zero():
            continue
        alpha, beta = rng.standard_normal(2)
        combo = Vector(alpha * x.coords + beta * y.coords, space)
        worst = max(worst, abs(sip(combo, z) - alpha * sip(x, z) - beta * sip(y, z)))
        assert sip(x, x) > 0.0
        cs = sip(x, y) ** 2 - sip(x, x) * sip(y, y)
        assert cs <= tol * max(1.0, sip(x, x) * sip(y, y))
        scaled = Vector(alpha * y.coords, space)
        if not scaled.is_zero():
            worst = max(worst, abs(sip(x, scaled) - alpha * sip(x, y)))
        worst = max(worst, abs(sip(x, x) - norm(x) ** 2))
    assert worst <= tol
    return worst


class TestSip:
    @pytest.mark.parametrize("p", P_SMOOTH)
    def test_compatibility_with_norm(self, p):
        rng = np.random.default_rng(3)
        for _ in range(20):
            x = random_vector(rng, 4, p)
            if x.is_zero():
                continue
            assert sip(x, x) == pytest.approx(norm(x) ** 2, rel=1e-12)

    def test_disjoint_supports(self):
        assert sip(vec([0, 1], 1.5), vec([1, 0], 1.5)) == 0.0

    def test_p3_closed_form(self):
        value = sip(vec([1, 0], 3), vec([1, 1], 3))
        assert value == pytest.approx(2 ** (-1 / 3), abs=1e-12)
        # axioms hold on this concrete triple
        check_sip_axioms(3.0, 50, seed=5, tol=1e-9)

    def test_zero_base_convention(self):
        assert sip(vec([1, 2], 2), vec([0, 0], 2)) == 0.0

    @pytest.mark.parametrize("p", P_SMOOTH)
    def test_axiom_suite(self, p):
        check_sip_axioms(p, 1000, seed=42, tol=1e-9)

    def test_hilbert_sip_is_inner_product(self):
        rng = np.random.default_rng(12)
        for _ in range(200):
            x = rng.standard_normal(3)
            y = rng.standard_normal(3)
            got = sip(vec(y, 2), vec(x, 2))
            assert got == pytest.approx(float(np.dot(x, y)), abs=1e-12 * max(1, abs(np.dot(x, y))))


class TestSmoothPoint:
    @pytest.mark.parametrize("p", P_SMOOTH)
    def test_lp_points_are_smooth(self, p):
        rng = np.random.default_rng(8)
        for _ in range(20):
            x = random_vector(rng, 3, p)
            if x.is_zero():
                continue
            assert is_smooth_point(x).smooth

    def test_sup_norm_tie_witnesses(self):
        verdict = is_smooth_point(vec([1, 1], math.inf))
        assert not verdict.smooth
        got = {tuple(w.coeffs) for w in verdict.witnesses}
        assert got == {(1.0, 0.0), (0.0, 1.0)}
        for w in verdict.witnesses:
            assert w.dual_norm() == pytest.approx(1.0)
            assert w(vec([1, 1], math.inf)) == pytest.approx(1.0)

    def test_l1_zero_coordinate_witnesses(self):
        verdict = is_smooth_point(vec([1, 0], 1))
        assert not verdict.smooth
        got = {tuple(w.coeffs) for w in verdict.witnesses}
        assert got == {(1.0, 1.0), (1.0, -1.0)}

    def test_witness_distinctness(self):
        for x in (vec([1, 1], math.inf), vec([1, 0], 1), vec([-2, 2, 1], math.inf)):
            verdict = is_smooth_point(x)
            if verdict.smooth:
                continue
            a, b = verdict.witnesses[:2]
            assert np.max(np.abs(a.coeffs - b.coeffs)) > 1e-2

    @pytest.mark.parametrize("p", P_ALL)
    def test_agrees_with_dual_sphere_oracle_dim2(self, p):
        result = smooth_point_battery(p, 2, count=10, seed=21)
        assert result.disagreements == 0

    @pytest.mark.parametrize("p", (1.0, 2.0, math.inf))
    def test_agrees_with_dual_sphere_oracle_dim3(self, p):
        result = smooth_point_battery(p, 3, count=2, seed=22)
        assert result.disagreements == 0


@settings(max_examples=60, deadline=None)
@given(
    coords=st.lists(st.floats(-10, 10), min_size=2, max_size=4),
    scale=st.floats(0.01, 100.0),
    p=st.sampled_from([1.0, 1.5, 2.0, 3.0, math.inf]),
)
def test_norm_homogeneity_property(coords, scale, p):
    x = vec(coords, p)
    assert norm(Vector(scale * x.coords, x.space)) == pytest.approx(
        scale * norm(x), rel=1e-12, abs=1e-12
    )
