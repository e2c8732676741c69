"""Convergence of E[f(S_n / n)] to the maximal-distribution value.

For a bounded-support ambiguity set the normalized sums concentrate on
the mean interval [mu_lower, mu_upper]; the limit of E[f(S_n / n)] is
the max of f over that interval.  The sweep shows the exact DP value
approaching the limit as the horizon doubles.
"""

from sublinexp import lln_sweep, maximal_dist_value, tent, truncated_means, validate_ambiguity_set

pair = validate_ambiguity_set(
    {"step": 1, "generators": [[(-1, 0.5), (1, 0.5)], [(-1, 0.25), (1, 0.75)]]}
)
f = tent(0.25, 0.25)

tm = truncated_means(pair, 1)
print(f"mean interval: [{tm.mu_lower}, {tm.mu_upper}]")
print(f"limit value: max of tent over the interval = "
      f"{maximal_dist_value(f, tm.mu_lower, tm.mu_upper)}")
print()
print(f"{'n':>6} {'dp_value':>12} {'limit':>8} {'abs_error':>12}")
for row in lln_sweep(pair, f, [16, 32, 64, 128, 256]).rows:
    print(f"{row.n:>6} {row.dp_value:>12.6f} {row.limit_value:>8.3f} {row.abs_error:>12.6f}")
print()
print("The error roughly halves with each doubling of n.")
