"""The three convergence conditions, and a family that breaks them.

A bounded set satisfies all three conditions trivially.  The HEAVY
family (index k: mass 1 - 1/k at 0 and 1/k at k) has every mean equal
to 1 yet keeps n * V(|X_1| >= n) pinned at 1 -- condition (i) fails --
and the law of large numbers fails with it: E[ramp(S_n / n)] stays near
1 where the maximal distribution would predict ramp(1) = 0.
"""

from sublinexp import (
    ParametricFamily,
    heavy_lln_lower_bound,
    heavy_lln_value,
    peng_condition_report,
    validate_ambiguity_set,
)

pair = validate_ambiguity_set(
    {"step": 1, "generators": [[(-1, 0.5), (1, 0.5)], [(-1, 0.25), (1, 0.75)]]}
)

for source in (pair, ParametricFamily("HEAVY", 64)):
    rep = peng_condition_report(source, 6)
    print(rep.source_description)
    print(f"  {'n':>3} {'nV_tail':>9} {'psi_expect':>11} {'mu_lower':>9} {'mu_upper':>9}")
    for r in rep.rows:
        print(
            f"  {r.n:>3} {r.nV_tail:>9.4f} {r.psi_expect:>11.4f} "
            f"{r.mu_lower_n:>9.4f} {r.mu_upper_n:>9.4f}"
        )
    print(f"  {rep.condition_i_trend}")
    print()

value = heavy_lln_value(200, 20)
print(f"HEAVY LLN failure at desk scale (K=200, n=20):")
print(f"  E[ramp(S_20/20)] = {value:.12f} >= (1 - 1/200)^20 = "
      f"{heavy_lln_lower_bound(200, 20):.12f}")
print("  maximal-distribution prediction: ramp(1) = 0 -- a certified gap above 0.9.")
