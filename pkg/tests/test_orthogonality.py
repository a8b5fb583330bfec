import math

import numpy as np
import pytest

from opsmooth import (
    NormSpec,
    Vector,
    approx_bj,
    bj_orthogonal,
    directional_class,
    is_smooth_point,
    right_additivity_probe,
    sip,
)
from opsmooth.oracles import bj_battery, kernel_orthogonal_direction
from opsmooth.spaces import lp_norm

from _utils import random_unit_vector, random_vector


def vec(coords, p):
    coords = np.asarray(coords, dtype=float)
    return Vector(coords, NormSpec(p, coords.shape[0]))


class TestBjOrthogonal:
    def test_zero_direction_is_trivially_orthogonal(self):
        v = bj_orthogonal(vec([2, 1], 1.5), vec([0, 0], 1.5))
        assert v.orthogonal and v.minimizer == 0.0

    def test_euclidean_axes(self):
        v = bj_orthogonal(vec([1, 0], 2), vec([0, 1], 2))
        assert v.orthogonal
        assert v.min_value == pytest.approx(1.0, abs=1e-12)
        assert abs(v.minimizer) < 1e-6
        assert v.sip_value == pytest.approx(0.0, abs=1e-12)

    def test_sup_norm_example_against_fine_grid(self):
        x, y = vec([1, 1], math.inf), vec([1, -1], math.inf)
        v = bj_orthogonal(x, y)
        lam = np.arange(-4.0, 4.0, 1e-4)
        grid_min = np.min(np.maximum(np.abs(1 + lam), np.abs(1 - lam)))
        assert grid_min == pytest.approx(1.0, abs=1e-8)
        assert v.orthogonal
        assert v.min_value == pytest.approx(grid_min, abs=1e-8)
        # the certificate kills y while norming x
        assert v.certificate is not None
        assert v.certificate(y) == pytest.approx(0.0, abs=1e-12)
        assert v.certificate(x) == pytest.approx(1.0, abs=1e-12)

    def test_base_vector_must_be_nonzero(self):
        with pytest.raises(ValueError, match="nonzero"):
            bj_orthogonal(vec([0, 0], 2), vec([1, 0], 2))

    @pytest.mark.parametrize("p", (1.0, 1.5, 2.0, 3.0, math.inf))
    def test_verdict_homogeneity(self, p):
        rng = np.random.default_rng(31)
        for _ in range(40):
            x = random_vector(rng, 3, p)
            y = random_vector(rng, 3, p)
            if x.is_zero() or y.is_zero():
                continue
            base = bj_orthogonal(x, y).orthogonal
            for cx, cy in ((2.5, 1.0), (1.0, -3.0), (0.25, 0.5)):
                scaled = bj_orthogonal(
                    Vector(cx * x.coords, x.space), Vector(cy * y.coords, y.space)
                )
                assert scaled.orthogonal == base

    @pytest.mark.parametrize("p", (1.5, 3.0))
    def test_matches_sip_criterion_in_smooth_spaces(self, p):
        rng = np.random.default_rng(57)
        space = NormSpec(p, 3)
        for k in range(500):
            x = random_unit_vector(rng, 3, p)
            if k % 2 == 0:
                y = random_unit_vector(rng, 3, p)
            else:
                y = kernel_orthogonal_direction(rng, x)
                if y.is_zero():
                    continue
            verdict = bj_orthogonal(x, y)
            sip_zero = abs(sip(y, x)) <= 1e-7 * max(1.0, lp_norm(y.coords, p))
            assert verdict.orthogonal == sip_zero


class TestApproxBj:
    def test_eps_zero_reduces_to_orthogonality(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            x = random_vector(rng, 2, 2)
            y = random_vector(rng, 2, 2)
            if x.is_zero():
                continue
            assert approx_bj(x, y, 0.0) == bj_orthogonal(x, y).orthogonal

    def test_quadratic_example_loose_eps(self):
        # min over t of ||(1-t, t)||_2 is 1/sqrt(2) >= sqrt(1-0.64)
        assert approx_bj(vec([1, 0], 2), vec([-1, 1], 2), 0.8)

    def test_quadratic_example_tight_eps(self):
        assert not approx_bj(vec([1, 0], 2), vec([-1, 1], 2), 0.3)

    def test_eps_domain_validated(self):
        with pytest.raises(ValueError):
            approx_bj(vec([1, 0], 2), vec([0, 1], 2), 1.0)
        with pytest.raises(ValueError):
            approx_bj(vec([1, 0], 2), vec([0, 1], 2), -0.1)

    def test_monotone_in_eps(self):
        rng = np.random.default_rng(77)
        for _ in range(100):
            x = random_vector(rng, 3, 1.5)
            y = random_vector(rng, 3, 1.5)
            if x.is_zero():
                continue
            e1, e2 = sorted(rng.uniform(0.0, 0.99, size=2))
            if approx_bj(x, y, e1):
                assert approx_bj(x, y, e2)


class TestDirectionalClass:
    def test_positive_ray_example(self):
        cls = directional_class(vec([1, 0], 2), vec([1, 0], 2), 0.0)
        assert cls.in_plus and not cls.in_minus

    def test_one_sided_minimum(self):
        cls = directional_class(vec([1, 0], 2), vec([-1, 1], 2), 0.8)
        assert cls.in_plus
        assert cls.min_plus == pytest.approx(2 ** -0.5, abs=1e-9)

    def test_eps_zero_decomposition(self):
        rng = np.random.default_rng(13)
        for p in (1.0, 2.0, math.inf):
            for _ in range(60):
                x = random_vector(rng, 2, p)
                y = random_vector(rng, 2, p)
                if x.is_zero():
                    continue
                cls = directional_class(x, y, 0.0)
                both = cls.in_plus and cls.in_minus
                assert both == bj_orthogonal(x, y).orthogonal


class TestRightAdditivityProbe:
    def test_hilbert_space_always_passes(self):
        rng = np.random.default_rng(3)
        for _ in range(5):
            x = random_vector(rng, 3, 2)
            report = right_additivity_probe(x, 32, seed=17)
            assert report.passes

    def test_sup_norm_corner_fails_with_spec_instance(self):
        x = vec([1, 1], math.inf)
        y = vec([2, -1], math.inf)
        z = vec([-1, 2], math.inf)
        assert bj_orthogonal(x, y).orthogonal
        assert bj_orthogonal(x, z).orthogonal
        s = vec([1, 1], math.inf)  # y + z
        assert not bj_orthogonal(x, s).orthogonal
        report = right_additivity_probe(x, 64, seed=2)
        assert not report.passes
        assert report.counterexample is not None
        cy, cz = report.counterexample
        assert bj_orthogonal(x, cy).orthogonal
        assert bj_orthogonal(x, cz).orthogonal
        assert not bj_orthogonal(x, Vector(cy.coords + cz.coords, x.space)).orthogonal

    def test_smooth_lp_passes(self):
        rng = np.random.default_rng(23)
        for _ in range(5):
            x = random_vector(rng, 3, 1.5)
            assert right_additivity_probe(x, 32, seed=5).passes

    @pytest.mark.parametrize(
        "coords,p",
        [
            ([1.0, 1.0], math.inf),
            ([1.0, 0.0], 1.0),
            ([2.0, -2.0, 0.5], math.inf),
            ([1.0, 0.0, 3.0], 1.0),
            ([0.7, -0.2], 1.5),
            ([0.7, -0.2, 0.1], 3.0),
            ([0.3, 0.9], 2.0),
        ],
    )
    def test_agrees_with_smooth_point(self, coords, p):
        x = vec(coords, p)
        report = right_additivity_probe(x, 64, seed=11)
        assert report.passes == is_smooth_point(x).smooth


class TestGridOracleAgreement:
    @pytest.mark.parametrize("p", (1.0, 1.5, 2.0, 3.0, math.inf))
    def test_small_batteries_dim2_dim3(self, p):
        for dim in (2, 3):
            result = bj_battery(p, dim, 30, grid_count=200_000, seed=61)
            assert result.disagreements == 0
