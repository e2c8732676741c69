"""Law-of-large-numbers machinery.

The tail surrogate ``psi``, truncated upper/lower means, the
three-condition convergence report, the maximal-distribution limit
value, horizon sweeps of the robust DP against that limit, and the
explicit Chebyshev-style tail bound.

Verdicts about limits are always labeled as trends observed over the
computed range; limits are not computable from finitely many terms and
no asymptotic claim is ever made beyond the range.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .ambiguity import AmbiguitySet, sublinear_expect
from .counterexamples import ParametricFamily, family_expect, family_lower_expect
from .errors import InputError
from .functions import TestFunction, clamp, psi_fn
from .lattice_dp import DEFAULT_STATE_BUDGET, PathEvent, capacity, robust_value

Source = Union[AmbiguitySet, ParametricFamily]

STABLE_TOL = 1e-9


# -- the tail surrogate ------------------------------------------------


def psi(n: int, x):
    """Closed form n * min(1, max(0, |x| - (n - 1))).

    Equals the supremum over y of ``n * [|y| >= n] - n * |y - x|`` and is
    sandwiched between ``n * [|x| >= n]`` and ``n * [|x| >= n - 1]``.
    """
    if n < 1:
        raise InputError("BAD_LEVEL", "psi level must be >= 1")
    x = np.asarray(x, dtype=float)
    out = n * np.clip(np.abs(x) - (n - 1), 0.0, 1.0)
    return out if out.ndim else float(out)


def psi_grid_sup(n: int, x, y_step: float = 1e-3, y_pad: float = 1.5):
    """The defining supremum restricted to a y-grid of spacing ``y_step``.

    Only y within ``y_pad`` of x can beat the trivial candidate y = x, so
    the grid maximum reduces to two candidates: the nearest grid point to
    x itself and the nearest grid point with |y| >= n.  Both are located
    in closed form; the result is exactly the maximum a literal scan of
    the grid would return (cross-checked by brute force in the tests).
    """
    x = np.asarray(x, dtype=float)
    # candidate 1: grid point nearest x (indicator almost surely 0 there)
    y_near = np.round(x / y_step) * y_step
    val_near = n * (np.abs(y_near) >= n) - n * np.abs(y_near - x)
    # candidate 2: nearest grid point inside {|y| >= n}
    up = np.ceil(n / y_step) * y_step  # smallest grid y >= n
    y_tail = np.where(x >= 0, np.maximum(y_near, up), np.minimum(y_near, -up))
    val_tail = n - n * np.abs(y_tail - x)
    out = np.maximum(val_near, val_tail)
    return out if out.ndim else float(out)


# -- truncated means ---------------------------------------------------


@dataclass(frozen=True)
class TruncatedMeans:
    """Upper/lower expectations of X clamped to [-n, n]."""

    n: int
    mu_lower: float
    mu_upper: float


def truncated_means(source: Source, n: int) -> TruncatedMeans:
    if n < 1:
        raise InputError("BAD_LEVEL", "truncation level must be >= 1")
    f = clamp(n)
    if isinstance(source, ParametricFamily):
        upper = family_expect(source, f).value
        lower = family_lower_expect(source, f)
    else:
        sv = sublinear_expect(source, f)
        upper, lower = sv.upper, sv.lower
    return TruncatedMeans(n, lower, upper)


def _single_step_tail_capacity(source: Source, threshold) -> Fraction:
    """V(|X_1| >= threshold) for one coordinate, as an exact rational."""
    if isinstance(source, ParametricFamily):
        value, _ = source.tail_capacity_fraction(threshold)
        return value
    return max(g.tail_mass_fraction(threshold) for g in source.generators)


def _psi_expect(source: Source, n: int) -> float:
    f = psi_fn(n)
    if isinstance(source, ParametricFamily):
        return family_expect(source, f).value
    return sublinear_expect(source, f).upper


# -- the three-condition report ----------------------------------------


@dataclass(frozen=True)
class ConditionRow:
    n: int
    nV_tail: float
    psi_expect: float
    mu_lower_n: float
    mu_upper_n: float


@dataclass(frozen=True)
class ConditionReport:
    rows: List[ConditionRow]
    condition_i_trend: str
    mu_upper_limit: Optional[float]
    mu_lower_limit: Optional[float]
    source_description: str
    warnings: Tuple[str, ...] = field(default=())


def peng_condition_report(source: Source, n_max: int) -> ConditionReport:
    """Tabulate the three convergence conditions for n = 1..n_max.

    The condition-(i) verdict is a trend over the computed range only.
    Truncated-mean limits are reported when the last three values agree
    within 1e-9 ("detected stable"); heavy-tailed families never get a
    false stable flag at that tolerance.
    """
    if n_max < 2:
        raise InputError("BAD_LEVEL", "n_max must be >= 2")
    warnings: List[str] = []
    rows = []
    for n in range(1, n_max + 1):
        tail = _single_step_tail_capacity(source, n)
        if isinstance(source, ParametricFamily) and source.truncation_binding_for_tail(n):
            warnings.append(
                f"FAMILY_TRUNCATION_WARNING: tail sup at n={n} limited by truncation"
            )
        tm = truncated_means(source, n)
        rows.append(
            ConditionRow(n, float(n * tail), _psi_expect(source, n), tm.mu_lower, tm.mu_upper)
        )
    nv = np.array([r.nV_tail for r in rows])
    peak = float(np.max(nv))
    if peak == 0.0 or nv[-1] <= 0.5 * peak:
        verdict = "satisfied"
    else:
        verdict = "violated"
    trend = f"condition (i) {verdict} (observed over n <= {n_max})"
    uppers = [r.mu_upper_n for r in rows[-3:]]
    lowers = [r.mu_lower_n for r in rows[-3:]]
    mu_upper = uppers[-1] if max(uppers) - min(uppers) <= STABLE_TOL else None
    mu_lower = lowers[-1] if max(lowers) - min(lowers) <= STABLE_TOL else None
    desc = source.describe()
    return ConditionReport(rows, trend, mu_upper, mu_lower, desc, tuple(warnings))


# -- maximal distribution and sweeps -----------------------------------


def maximal_dist_value(f: TestFunction, mu_lower: float, mu_upper: float) -> float:
    """Exact max of f over [mu_lower, mu_upper] (endpoints plus interior knots)."""
    if mu_lower > mu_upper:
        raise InputError("BAD_INTERVAL", f"[{mu_lower}, {mu_upper}] is empty")
    if not f.bounded:
        raise InputError("UNBOUNDED_F", f"{f.describe()} is not a bounded kind")
    candidates = [mu_lower, mu_upper]
    candidates += [x for x in f.knots() if mu_lower < x < mu_upper]
    return float(max(float(f(x)) for x in candidates))


@dataclass(frozen=True)
class SweepRow:
    n: int
    dp_value: float
    limit_value: float
    abs_error: float


@dataclass(frozen=True)
class SweepReport:
    rows: List[SweepRow]
    set_description: str
    function_description: str


def lln_sweep(
    set_: AmbiguitySet,
    f: TestFunction,
    horizons: Sequence[int],
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> SweepReport:
    """Robust DP value vs. maximal-distribution prediction per horizon."""
    rows = []
    for n in horizons:
        dp = robust_value(set_, n, f, state_budget=state_budget).value
        tm = truncated_means(set_, n)
        limit = maximal_dist_value(f, tm.mu_lower, tm.mu_upper)
        rows.append(SweepRow(int(n), dp, limit, abs(dp - limit)))
    return SweepReport(rows, set_.describe(), f.describe())


# -- the explicit tail bound from the truncation argument --------------


@dataclass(frozen=True)
class ChebyshevCheck:
    lhs: float
    rhs: float
    holds: bool


def chebyshev_bound_check(
    set_: AmbiguitySet,
    n: int,
    eps: float,
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> ChebyshevCheck:
    """V(S_n/n > mu_upper_n + eps) against n*V(|X_1|>=n) + 8/(n eps^2) E[X~^2].

    X~ is the coordinate clamped to [-n, n]; E[] is the upper
    expectation of its square over the generators.
    """
    if eps <= 0:
        raise InputError("BAD_EPS", "eps must be positive")
    mu_upper = truncated_means(set_, n).mu_upper
    event = PathEvent("FINAL_GT", n * (mu_upper + eps))
    lhs = capacity(set_, n, event, "UPPER", state_budget=state_budget)
    tail = _single_step_tail_capacity(set_, n)
    clamped_sq = max(
        float(np.add.reduce(np.minimum(np.abs(g.point_array), n) ** 2 * g.weight_array))
        for g in set_.generators
    )
    rhs = float(n * tail) + (8.0 / (n * eps * eps)) * clamped_sq
    return ChebyshevCheck(lhs, rhs, lhs <= rhs + 1e-12)
