"""Inequality oracles: frozen hand values, degenerate corners, random suites."""

import numpy as np
import pytest

from nsdamp.inequalities import (
    gronwall_constant,
    interpolation_gap,
    monotonicity_gap,
    product_law_ratio,
    verify_suite,
    young_gap,
)
from nsdamp.initial_conditions import random_solenoidal
from nsdamp.spectral import SpectralField, make_grid


class TestMonotonicityGap:
    def test_hand_value(self):
        # x = (2, 0), y = (0, 1), beta = 2:
        # gap = (|x|^2 - |y|^2)(|x|^2 - |y|^2)/2 = (4 - 1)(4 - 1)/2
        assert monotonicity_gap([2.0, 0.0], [0.0, 1.0], 2.0) == pytest.approx(4.5)

    def test_matches_raw_inner_product_form(self):
        # the factorized evaluation must agree with the definition
        # <|x|^b x - |y|^b y, x - y> - (|x|^b + |y|^b)|x - y|^2 / 2
        rng = np.random.default_rng(0)
        x = rng.uniform(-3.0, 3.0, (500, 3))
        y = rng.uniform(-3.0, 3.0, (500, 3))
        beta = rng.uniform(0.5, 6.0, 500)
        ax = np.linalg.norm(x, axis=1)
        ay = np.linalg.norm(y, axis=1)
        lead = (ax**beta)[:, None] * x - (ay**beta)[:, None] * y
        raw = np.einsum("ij,ij->i", lead, x - y)
        raw -= 0.5 * (ax**beta + ay**beta) * np.einsum("ij,ij->i", x - y, x - y)
        got = monotonicity_gap(x, y, beta)
        np.testing.assert_allclose(got, raw, atol=1e-10)

    @pytest.mark.parametrize(
        "x,y",
        [
            ([1.0, 2.0], [1.0, 2.0]),  # x = y
            ([1.0, 2.0], [0.0, 0.0]),  # y = 0
            ([1.0, 2.0], [-1.0, -2.0]),  # antipodal, equal norms
            ([3.0, 4.0], [4.0, 3.0]),  # permuted, equal norms
        ],
    )
    def test_degenerate_pairs_nonnegative(self, x, y):
        g = monotonicity_gap(x, y, 3.0)
        assert g >= 0.0
        if np.linalg.norm(x) == np.linalg.norm(y):
            assert g == 0.0

    def test_rejects_nonpositive_beta(self):
        with pytest.raises(ValueError):
            monotonicity_gap([1.0], [0.5], 0.0)


class TestYoungGap:
    def test_hand_value(self):
        # a = 2, b = 1, p = q = 2: 2 + 1/2 - 2 = 1/2
        assert young_gap(2.0, 1.0, 2.0, 2.0) == pytest.approx(0.5)

    def test_equality_case(self):
        # equality iff a^p = b^q
        p, q = 3.0, 1.5
        a = 2.0
        b = a ** (p / q)
        assert young_gap(a, b, p, q) == pytest.approx(0.0, abs=1e-12)

    def test_damping_exponent_family(self):
        # the conjugate pair ((beta-1)/2, (beta-1)/(beta-3)) used by the
        # absorption step is accepted and nonnegative
        for beta in (3.5, 4.0, 6.0, 3.0 + 1e-5):
            p = (beta - 1.0) / 2.0
            q = (beta - 1.0) / (beta - 3.0)
            assert 1.0 / p + 1.0 / q == pytest.approx(1.0, abs=1e-13)
            g = young_gap(1.7, 0.3, p, q)
            assert g >= 0.0

    def test_rejects_bad_exponents(self):
        with pytest.raises(ValueError, match="conjugate"):
            young_gap(1.0, 1.0, 2.0, 2.5)
        with pytest.raises(ValueError, match="exceed 1"):
            young_gap(1.0, 1.0, 1.0, np.inf)
        with pytest.raises(ValueError, match="nonnegative"):
            young_gap(-1.0, 1.0, 2.0, 2.0)


class TestGronwallConstant:
    def test_frozen_values(self):
        # (2/alpha)^(2/(beta-3)) / 2
        assert gronwall_constant(1.0, 4.0) == pytest.approx(2.0)
        assert gronwall_constant(2.0, 4.0) == pytest.approx(0.5)
        assert gronwall_constant(1.0, 5.0) == pytest.approx(1.0)
        assert gronwall_constant(8.0, 5.0) == pytest.approx(0.125)

    def test_monotone_in_alpha(self):
        alphas = np.linspace(0.1, 4.0, 40)
        c = gronwall_constant(alphas, 4.0)
        assert np.all(np.diff(c) < 0.0)

    def test_rejects_beta_at_threshold(self):
        with pytest.raises(ValueError, match="beta > 3"):
            gronwall_constant(1.0, 3.0)
        with pytest.raises(ValueError, match="alpha > 0"):
            gronwall_constant(0.0, 4.0)


class TestInterpolationGap:
    def test_single_shell_equality(self):
        # a field on one |xi| shell makes the interpolation exact
        grid = make_grid(8, 2.0 * np.pi)
        c = np.zeros(grid.shape, dtype=np.complex128)
        c[1, 1, 0, 0] = 0.5
        c[1, -1, 0, 0] = 0.5
        f = SpectralField(grid, c)
        assert abs(interpolation_gap(f)) <= 1e-12

    def test_two_shell_strictly_positive(self):
        grid = make_grid(8, 2.0 * np.pi)
        c = np.zeros(grid.shape, dtype=np.complex128)
        c[1, 1, 0, 0] = c[1, -1, 0, 0] = 0.5
        c[2, 2, 0, 0] = c[2, -2, 0, 0] = 0.25
        f = SpectralField(grid, c)
        assert interpolation_gap(f) > 0.0

    def test_random_fields_nonnegative(self):
        grid = make_grid(8, 2.0 * np.pi)
        for seed in range(20):
            f = random_solenoidal(grid, seed=seed)
            assert interpolation_gap(f) >= -1e-12

    def test_requires_zero_mean(self):
        grid = make_grid(8, 2.0 * np.pi)
        f = random_solenoidal(grid, seed=0)
        f.coeffs[0, 0, 0, 0] = 1.0
        with pytest.raises(ValueError):
            interpolation_gap(f)


def test_product_law_ratio_finite_and_positive():
    grid = make_grid(16, 2.0 * np.pi)
    f = random_solenoidal(grid, seed=1)
    g = random_solenoidal(grid, seed=2)
    r = product_law_ratio(f, g)
    assert np.isfinite(r) and r > 0.0


def test_verify_suite_fast_all_pass():
    rows = verify_suite(seed=0, fast=True)
    names = [r.name for r in rows]
    assert names == ["monotonicity", "young", "gronwall-monotone", "interpolation", "product-law"]
    for row in rows:
        assert row.passed, f"{row.name}: worst {row.worst}"
        assert row.samples > 0


def test_verify_suite_seed_stability():
    a = verify_suite(seed=7, fast=True)
    b = verify_suite(seed=7, fast=True)
    for ra, rb in zip(a, b):
        assert ra.worst == rb.worst
