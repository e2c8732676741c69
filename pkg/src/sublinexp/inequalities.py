"""Maximal-inequality checks on capacities of partial sums.

Two numerically checkable facts: the Ottaviani-style bound relating the
running-max capacity to the final-sum capacity, and the i.i.d. product
identity for the capacity of a large increment appearing anywhere along
the path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .ambiguity import AmbiguitySet
from .errors import InputError
from .lattice_dp import DEFAULT_STATE_BUDGET, PathEvent, capacity

_TOL = 1e-12

HOLDS = "HOLDS"
VACUOUS = "VACUOUS"
VIOLATED = "VIOLATED"


@dataclass(frozen=True)
class OttavianiReport:
    """Premise, sides and verdict of one maximal-inequality instance.

    ``VIOLATED`` must never occur on valid inputs; it exists so the check
    is falsifiable rather than tautological.
    """

    premise_value: float
    c: float
    lhs: float
    rhs: float
    status: str


def _increment_capacity(set_: AmbiguitySet, horizon: int, alpha, state_budget: int) -> float:
    """V(|S_n - S_k| >= alpha) computed as a horizon-(n-k) quantity.

    Increments are i.i.d., so the capacity depends only on the number of
    remaining steps; the equality with the in-place TAIL_SUM event is
    certified by the lattice-DP stationarity invariant.
    """
    if horizon == 0:
        return 1.0 if alpha <= 0 else 0.0
    return capacity(
        set_, horizon, PathEvent("FINAL_ABS_GE", alpha), "UPPER", state_budget=state_budget
    )


def ottaviani_check(
    set_: AmbiguitySet,
    n: int,
    alpha: float,
    c: float,
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> OttavianiReport:
    """Check V(max_k |S_k| >= 2 alpha) <= V(|S_n| >= alpha) / (1 - c).

    The premise requires max over k = 1..n of V(|S_n - S_k| >= alpha) to
    stay <= c; when it fails the instance is reported VACUOUS rather than
    silently skipped.
    """
    if not 0 < c < 1:
        raise InputError("BAD_C", "c must lie strictly between 0 and 1")
    if alpha <= 0:
        raise InputError("BAD_ALPHA", "alpha must be positive")
    if n < 1:
        raise InputError("BAD_HORIZON", "horizon must be >= 1")
    premise = max(
        _increment_capacity(set_, n - k, alpha, state_budget) for k in range(1, n + 1)
    )
    lhs = capacity(
        set_,
        n,
        PathEvent("MAX_PARTIAL_ABS_GE", 2 * alpha),
        "UPPER",
        state_budget=state_budget,
    )
    final = capacity(
        set_, n, PathEvent("FINAL_ABS_GE", alpha), "UPPER", state_budget=state_budget
    )
    rhs = final / (1.0 - c)
    if premise > c + _TOL:
        status = VACUOUS
    elif lhs <= rhs + _TOL:
        status = HOLDS
    else:
        status = VIOLATED
    return OttavianiReport(premise, c, lhs, rhs, status)


@dataclass(frozen=True)
class ProductIdentityReport:
    lhs: float
    rhs: float
    delta: float


def capacity_product_identity(
    set_: AmbiguitySet,
    n: int,
    threshold: float,
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> ProductIdentityReport:
    """V(max_k |X_k| >= t) against 1 - (1 - V(|X_1| >= t))^n.

    The two sides agree because the adversary's optimal play per step is
    the single-step tail maximizer, independently across coordinates.
    The exponential comparison 1 - p <= e^{-p} makes the right side at
    least 1 - exp(-n V), which is asserted alongside in the test suites.
    """
    if n < 1:
        raise InputError("BAD_HORIZON", "horizon must be >= 1")
    lhs = capacity(
        set_,
        n,
        PathEvent("MAX_INCREMENT_ABS_GE", threshold),
        "UPPER",
        state_budget=state_budget,
    )
    single = capacity(
        set_, 1, PathEvent("FINAL_ABS_GE", threshold), "UPPER", state_budget=state_budget
    )
    rhs = 1.0 - (1.0 - single) ** n
    return ProductIdentityReport(lhs, rhs, abs(lhs - rhs))


def exponential_lower_bound(set_: AmbiguitySet, n: int, threshold: float) -> float:
    """1 - exp(-n V(|X_1| >= t)), a lower bound for the product identity rhs."""
    single = capacity(set_, 1, PathEvent("FINAL_ABS_GE", threshold), "UPPER")
    return 1.0 - math.exp(-n * single)
