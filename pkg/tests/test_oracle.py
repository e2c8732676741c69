import numpy as np
import pytest

from sublinexp import (
    BudgetError,
    KernelPolicy,
    PathEvent,
    brute_force_capacity,
    brute_force_value,
    enumerate_selections_value,
    piecewise_linear,
    policy_value,
    robust_value,
)

from conftest import make_set, random_pwl, random_set

ABS_CLIPPED = piecewise_linear([(-1, 1), (0, 0), (1, 1)])


class TestBruteForceValue:
    def test_freeze_or_spread(self, coin_or_rest):
        assert brute_force_value(coin_or_rest, 2, ABS_CLIPPED) == 0.5

    def test_minimize_side(self, coin_or_rest):
        assert brute_force_value(coin_or_rest, 2, ABS_CLIPPED, maximize=False) == 0.0

    def test_moment_mode(self, coin):
        sq = piecewise_linear([(-2, 4), (-1, 1), (0, 0), (1, 1), (2, 4)])
        assert brute_force_value(coin, 2, sq, normalize=False) == 2.0

    def test_budget_guard(self, biased_pair):
        with pytest.raises(BudgetError) as e:
            brute_force_value(biased_pair, 4, ABS_CLIPPED, budget=5)
        assert e.value.code == "ENUMERATION_BUDGET_EXCEEDED"


class TestBruteForceCapacity:
    def test_final_abs(self, coin_or_rest):
        ev = PathEvent("FINAL_ABS_GE", 2)
        assert brute_force_capacity(coin_or_rest, 2, ev, "UPPER") == 0.5
        assert brute_force_capacity(coin_or_rest, 2, ev, "LOWER") == 0.0

    def test_running_max_dominates_final(self, biased_pair):
        for a in (1, 2):
            peak = brute_force_capacity(
                biased_pair, 3, PathEvent("MAX_PARTIAL_ABS_GE", a), "UPPER"
            )
            final = brute_force_capacity(
                biased_pair, 3, PathEvent("FINAL_ABS_GE", a), "UPPER"
            )
            assert peak >= final


class TestSelectionEnumeration:
    def test_matches_tree_recursion_on_tiny_instances(self):
        rng = np.random.default_rng(5)
        for _ in range(15):
            s = random_set(rng, max_generators=2, max_atoms=2, span=2)
            f = random_pwl(rng)
            n = int(rng.integers(1, 4))
            lhs = enumerate_selections_value(s, n, f)
            rhs = brute_force_value(s, n, f)
            assert lhs == pytest.approx(rhs, abs=1e-9)

    def test_budget_guard(self, biased_pair):
        with pytest.raises(BudgetError):
            enumerate_selections_value(biased_pair, 4, ABS_CLIPPED, budget=3)


class TestPolicyDominance:
    def test_no_policy_beats_the_robust_value(self):
        """Any measurable kernel policy is dominated by the DP optimum."""
        rng = np.random.default_rng(31)
        for _ in range(20):
            s = random_set(rng, max_generators=2)
            f = random_pwl(rng)
            n = int(rng.integers(1, 4))
            res = robust_value(s, n, f)
            # constant policies at each generator index
            for gi in range(len(s.generators)):
                entries = {
                    key: gi for key in res.policy.entries
                }
                val = policy_value(s, KernelPolicy(n, entries), n, f)
                assert val <= res.value + 1e-9
