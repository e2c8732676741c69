import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sublinexp import (
    IDENTITY,
    InputError,
    ParametricFamily,
    RAMP_DOWN,
    SQUARE,
    chebyshev_bound_check,
    clamp,
    linear_expect,
    lln_sweep,
    maximal_dist_value,
    peng_condition_report,
    psi,
    psi_fn,
    tent,
    truncated_means,
)
from sublinexp.lln import psi_grid_sup

from conftest import make_set


class TestPsi:
    def test_closed_form_values(self):
        assert psi(5, 5.0) == 5.0
        assert psi(5, 4.0) == 0.0
        assert psi(5, 4.5) == 2.5
        assert psi(5, -7.0) == 5.0
        assert psi(1, 0.5) == 0.5

    def test_vectorized(self):
        out = psi(3, np.array([0.0, 2.5, 3.0, -10.0]))
        assert out.tolist() == [0.0, 1.5, 3.0, 3.0]

    def test_bad_level(self):
        with pytest.raises(InputError):
            psi(0, 1.0)

    @settings(max_examples=200, deadline=None)
    @given(st.integers(1, 100), st.floats(-250, 250, allow_nan=False))
    def test_indicator_sandwich(self, n, x):
        lower = n * (abs(x) >= n)
        upper = n * (abs(x) >= n - 1)
        assert lower <= psi(n, x) <= upper

    def test_matches_function_object(self):
        xs = np.linspace(-8, 8, 101)
        f = psi_fn(4)
        assert np.array_equal(np.asarray(f(xs)), psi(4, xs))

    def test_grid_sup_matches_literal_scan(self):
        rng = np.random.default_rng(11)
        step = 1e-3
        for _ in range(20):
            n = int(rng.integers(1, 5))
            x = float(rng.uniform(-(n + 2), n + 2))
            lo = int(np.floor((x - 2) / step))
            hi = int(np.ceil((x + 2) / step))
            ys = np.arange(lo, hi + 1) * step
            literal = np.max(n * (np.abs(ys) >= n) - n * np.abs(ys - x))
            assert psi_grid_sup(n, x, y_step=step) == pytest.approx(literal, abs=1e-12)

    def test_grid_sup_close_to_exact_sup(self):
        # the grid sup differs from psi by at most n * (grid spacing)
        for n in (1, 3, 7):
            xs = np.linspace(-n - 2, n + 2, 201)
            g = psi_grid_sup(n, xs, y_step=1e-3)
            assert np.all(np.abs(g - psi(n, xs)) <= n * 1e-3 + 1e-12)


class TestTruncatedMeans:
    def test_biased_pair(self, biased_pair):
        tm = truncated_means(biased_pair, 1)
        assert (tm.mu_lower, tm.mu_upper) == (0.0, 0.5)

    def test_clamp_actually_truncates(self):
        s = make_set([(0, 0.5), (4, 0.5)])
        assert truncated_means(s, 2).mu_upper == 1.0  # (0 + 2)/2
        assert truncated_means(s, 4).mu_upper == 2.0

    def test_heavy_family(self):
        fam = ParametricFamily("HEAVY", 10)
        tm = truncated_means(fam, 2)
        # sup over k of E_k[clamp_2] = min(k,2)/k is 1; inf sits at k=10
        assert tm.mu_upper == 1.0
        assert tm.mu_lower == pytest.approx(2 / 10, abs=1e-15)

    def test_bad_level(self, coin):
        with pytest.raises(InputError):
            truncated_means(coin, 0)


class TestConditionReport:
    def test_bounded_set_all_conditions_clean(self, biased_pair):
        rep = peng_condition_report(biased_pair, 6)
        assert [r.n for r in rep.rows] == [1, 2, 3, 4, 5, 6]
        for r in rep.rows[1:]:  # support is {-1, 1}: tails vanish from n = 2
            assert r.nV_tail == 0.0 and r.psi_expect == 0.0
            assert (r.mu_lower_n, r.mu_upper_n) == (0.0, 0.5)
        assert "satisfied" in rep.condition_i_trend
        assert rep.mu_upper_limit == 0.5 and rep.mu_lower_limit == 0.0
        assert rep.warnings == ()

    def test_heavy_family_condition_i_fails(self):
        rep = peng_condition_report(ParametricFamily("HEAVY", 64), 8)
        for r in rep.rows:  # index k = n attains tail mass 1/n exactly
            assert r.nV_tail == 1.0
            assert r.mu_upper_n == 1.0
        assert "violated" in rep.condition_i_trend
        assert rep.mu_upper_limit == 1.0
        assert rep.mu_lower_limit is None  # n/64 keeps drifting

    def test_exm3_small_scale_matches_direct_summation(self):
        trunc = 30
        rep = peng_condition_report(ParametricFamily("EXM3", trunc), 5)
        fam = ParametricFamily("EXM3", trunc)
        for r in rep.rows:
            direct_psi = max(
                linear_expect(fam.generator(j), psi_fn(r.n)) for j in range(1, trunc + 1)
            )
            direct_mu = max(
                linear_expect(fam.generator(j), clamp(r.n)) for j in range(1, trunc + 1)
            )
            assert r.psi_expect == pytest.approx(direct_psi, abs=1e-12)
            assert r.mu_upper_n == pytest.approx(direct_mu, abs=1e-12)

    def test_truncation_warning_surfaces(self):
        rep = peng_condition_report(ParametricFamily("HEAVY", 4), 6)
        assert any("FAMILY_TRUNCATION_WARNING" in w for w in rep.warnings)

    def test_bad_n_max(self, coin):
        with pytest.raises(InputError):
            peng_condition_report(coin, 1)


class TestMaximalDistValue:
    def test_degenerate_interval(self):
        assert maximal_dist_value(RAMP_DOWN, 1.0, 1.0) == 0.0

    def test_interior_knot_wins(self):
        f = tent(0.25, 0.25)
        assert maximal_dist_value(f, 0.0, 0.5) == 1.0

    def test_endpoint_wins(self):
        assert maximal_dist_value(RAMP_DOWN, 0.25, 0.75) == 0.75

    def test_empty_interval(self):
        with pytest.raises(InputError) as e:
            maximal_dist_value(RAMP_DOWN, 1.0, 0.0)
        assert e.value.code == "BAD_INTERVAL"

    def test_unbounded_rejected(self):
        with pytest.raises(InputError):
            maximal_dist_value(SQUARE, 0.0, 1.0)


class TestSweep:
    def test_error_shrinks_along_doubling_horizons(self, biased_pair):
        rep = lln_sweep(biased_pair, tent(0.25, 0.25), [4, 8, 16, 32])
        errs = [r.abs_error for r in rep.rows]
        assert all(b < a for a, b in zip(errs, errs[1:]))
        assert all(r.limit_value == 1.0 for r in rep.rows)

    def test_rows_carry_exact_difference(self, biased_pair):
        rep = lln_sweep(biased_pair, RAMP_DOWN, [2, 4])
        for r in rep.rows:
            assert r.abs_error == abs(r.dp_value - r.limit_value)

    def test_single_generator_plain_lln(self, coin):
        rep = lln_sweep(coin, tent(0.0, 0.5), [16, 64])
        assert rep.rows[-1].abs_error < rep.rows[0].abs_error


class TestChebyshev:
    def test_coin_small_horizon(self, coin):
        chk = chebyshev_bound_check(coin, 2, 1.0)
        assert chk.lhs == 0.0 and chk.rhs == 4.0 and chk.holds

    def test_bound_holds_on_random_sets(self):
        rng = np.random.default_rng(17)
        from conftest import random_set

        for _ in range(25):
            s = random_set(rng)
            n = int(rng.integers(2, 7))
            eps = float(rng.uniform(0.1, 2.0))
            assert chebyshev_bound_check(s, n, eps).holds

    def test_bad_eps(self, coin):
        with pytest.raises(InputError):
            chebyshev_bound_check(coin, 2, 0.0)
