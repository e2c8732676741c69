"""Inequality checkers and Monte Carlo validation of the DP.

Three checkable facts about capacities of partial sums, then a seeded
simulation of the extracted worst-case policy: the sample mean must
land within sampling error of the exact policy value.
"""

from sublinexp import (
    SimConfig,
    capacity_product_identity,
    chebyshev_bound_check,
    ottaviani_check,
    robust_value,
    simulate,
    tent,
    validate_ambiguity_set,
)

pair = validate_ambiguity_set(
    {"step": 1, "generators": [[(-1, 0.5), (1, 0.5)], [(-1, 0.25), (1, 0.75)]]}
)

rep = ottaviani_check(pair, 6, alpha=3.0, c=0.75)
print(f"maximal inequality: status {rep.status}, premise {rep.premise_value:.4f}, "
      f"lhs {rep.lhs:.4f} <= rhs {rep.rhs:.4f}")

pi = capacity_product_identity(pair, 5, threshold=1)
print(f"product identity:   lhs {pi.lhs:.6f} == rhs {pi.rhs:.6f} (delta {pi.delta:.1e})")

chk = chebyshev_bound_check(pair, 8, eps=0.5)
print(f"tail bound:         lhs {chk.lhs:.6f} <= rhs {chk.rhs:.6f}: {chk.holds}")

print()
f = tent(0.25, 0.25)
res = robust_value(pair, 8, f)
sim = simulate(SimConfig(res.policy, pair, 8, paths=20_000, seed=101), f)
print(f"robust DP value at n=8: {res.value:.6f}")
print(f"simulated under the extracted policy: {sim.estimate:.6f} +/- {sim.stderr:.6f}")
print(f"|estimate - exact| <= 4*stderr: {abs(sim.estimate - res.value) <= 4 * sim.stderr}")
