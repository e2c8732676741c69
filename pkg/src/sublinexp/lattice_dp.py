"""Exact multi-step backward induction on the partial-sum lattice.

Computes the robust (upper) expectation of a terminal functional of the
normalized sum, upper/lower capacities of a closed grammar of path
events, and the evaluation of a fixed kernel policy.  The adversary picks
a generator per (level, state); restricting to these sum-dependent
(Markov) selections is certified against the history-dependent
brute-force oracle rather than assumed (see :mod:`sublinexp.oracle`).

State values are exact: partial sums are integers on the common lattice,
and event indicators compare exact rationals, so no mollification or
floating-state merging is ever needed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np

from .ambiguity import AmbiguitySet, to_fraction
from .errors import BudgetError, InputError
from .functions import TestFunction

DEFAULT_STATE_BUDGET = 50_000_000

_FINAL_KINDS = frozenset({"FINAL_ABS_GE", "FINAL_GT", "FINAL_LT", "FINAL_ABS_LT"})
_FLAG_KINDS = frozenset({"MAX_PARTIAL_ABS_GE", "MAX_INCREMENT_ABS_GE"})
EVENT_KINDS = _FINAL_KINDS | _FLAG_KINDS | {"TAIL_SUM_ABS_GE"}


@dataclass(frozen=True)
class PathEvent:
    """One event from the closed, DP-tractable grammar."""

    kind: str
    threshold: Fraction
    from_index: Optional[int] = None

    def __post_init__(self):
        if self.kind not in EVENT_KINDS:
            raise InputError("UNSUPPORTED_EVENT", f"unknown event kind {self.kind!r}")
        object.__setattr__(self, "threshold", to_fraction(self.threshold))
        if self.kind == "TAIL_SUM_ABS_GE":
            if self.from_index is None or self.from_index < 0:
                raise InputError(
                    "UNSUPPORTED_EVENT", "TAIL_SUM_ABS_GE needs from_index >= 0"
                )
        elif self.from_index is not None:
            raise InputError("UNSUPPORTED_EVENT", f"{self.kind} takes no from_index")

    def describe(self) -> str:
        extra = f", from {self.from_index}" if self.from_index is not None else ""
        return f"{self.kind}({self.threshold}{extra})"


@dataclass(frozen=True)
class ValueTable:
    """Backward-induction values at one level, keyed by lattice state."""

    level: int
    entries: Dict[int, float]


@dataclass(frozen=True)
class KernelPolicy:
    """Per (level, pre-step state) choice of generator index."""

    n: int
    entries: Dict[Tuple[int, int], int]

    def get(self, level: int, state: int) -> int:
        try:
            return self.entries[(level, state)]
        except KeyError:
            raise InputError(
                "POLICY_GAP", f"no generator designated at level {level}, state {state}"
            ) from None


@dataclass(frozen=True)
class RobustResult:
    value: float
    policy: KernelPolicy
    state_count: int
    tables: Optional[List[ValueTable]] = field(default=None, compare=False)


# -- shared helpers ----------------------------------------------------


def _level_bounds(set_: AmbiguitySet, n: int, frozen_below: int = 0):
    """(lo_k, length_k) per level; levels <= frozen_below contribute no movement."""
    minc, maxc = set_.min_coord, set_.max_coord
    bounds = []
    for k in range(n + 1):
        steps = max(0, k - frozen_below)
        bounds.append((steps * minc, steps * (maxc - minc) + 1))
    return bounds


def _check_budget(bounds, width: int, budget: int):
    total = width * sum(length for _, length in bounds)
    if total > budget:
        raise BudgetError(
            "STATE_BUDGET_EXCEEDED", f"{total} level-states exceed budget {budget}"
        )
    return total


def reachable_masks(set_: AmbiguitySet, n: int, frozen_below: int = 0):
    """Boolean reachability per level over the level's state range."""
    bounds = _level_bounds(set_, n, frozen_below)
    masks = [np.zeros(length, dtype=bool) for _, length in bounds]
    masks[0][0 - bounds[0][0]] = True
    for k in range(1, n + 1):
        lo_prev, len_prev = bounds[k - 1]
        lo_k, _ = bounds[k]
        moves = set_.coords if k > frozen_below else ((0,),) * len(set_.coords)
        for gc in moves:
            for c in gc:
                a = lo_prev + c - lo_k
                masks[k][a : a + len_prev] |= masks[k - 1]
    return bounds, masks


def reachable_states(set_: AmbiguitySet, n: int) -> List[List[int]]:
    """Reachable lattice states per level 0..n."""
    bounds, masks = reachable_masks(set_, n)
    return [
        [bounds[k][0] + int(i) for i in np.flatnonzero(masks[k])] for k in range(n + 1)
    ]


def _state_fraction(set_: AmbiguitySet, level: int, state: int) -> Fraction:
    """Exact real value of a level-k partial-sum state."""
    return (state + level * set_.lattice.origin) * set_.lattice.step


def _terminal_values(set_: AmbiguitySet, n: int, f: TestFunction, normalize: bool, bounds):
    lo, length = bounds[n]
    states = np.arange(lo, lo + length)
    xs = (states + n * set_.lattice.origin) * float(set_.lattice.step)
    if normalize:
        xs = xs / n
    return np.asarray(f(xs), dtype=float)


# -- robust value and policy evaluation --------------------------------


def robust_value(
    set_: AmbiguitySet,
    n: int,
    f: TestFunction,
    normalize: bool = True,
    state_budget: int = DEFAULT_STATE_BUDGET,
    keep_tables: bool = False,
) -> RobustResult:
    """Upper expectation of ``f(S_n / n)`` (or ``f(S_n)`` with ``normalize=False``).

    Backward induction ``u_n(s) = f(s/n)``, ``u_{k-1}(s) = max_g sum_j
    w_j u_k(s + x_j)``, with the argmax recorded as the extracted
    worst-case kernel policy.  Evaluation order is fixed (states
    ascending, generators ascending, atoms in increasing-point order) so
    results are bitwise reproducible.
    """
    if n < 1:
        raise InputError("BAD_HORIZON", "horizon must be >= 1")
    if normalize and not f.bounded:
        raise InputError("UNBOUNDED_F", f"{f.describe()} is unbounded; use moment mode")
    bounds = _level_bounds(set_, n)
    state_count = _check_budget(bounds, 1, state_budget)
    _, masks = reachable_masks(set_, n)
    u = _terminal_values(set_, n, f, normalize, bounds)
    tables = [ValueTable(n, _as_table(bounds[n][0], u))] if keep_tables else None
    entries: Dict[Tuple[int, int], int] = {}
    for k in range(n, 0, -1):
        lo_prev, len_prev = bounds[k - 1]
        lo_k, _ = bounds[k]
        best = None
        arg = np.zeros(len_prev, dtype=np.int64)
        for g, (gc, gen) in enumerate(zip(set_.coords, set_.generators)):
            cand = _shift_combine(u, gen.weights, gc, lo_prev + 0 - lo_k, len_prev)
            if best is None:
                best = cand
            else:
                better = cand > best
                best = np.where(better, cand, best)
                arg = np.where(better, g, arg)
        u = best
        for i in np.flatnonzero(masks[k - 1]):
            entries[(k, lo_prev + int(i))] = int(arg[i])
        if keep_tables:
            tables.append(ValueTable(k - 1, _as_table(lo_prev, u)))
    if keep_tables:
        tables.reverse()
    value = float(u[0 - bounds[0][0]])
    return RobustResult(value, KernelPolicy(n, entries), state_count, tables)


def _shift_combine(u, weights, coords, base_offset, length):
    """sum_j w_j * u[s + c_j], accumulated in increasing-point order."""
    acc = None
    for w, c in zip(weights, coords):
        sl = u[base_offset + c : base_offset + c + length]
        acc = w * sl if acc is None else acc + w * sl
    return acc


def _as_table(lo, u):
    return {lo + i: float(v) for i, v in enumerate(u)}


def policy_value(
    set_: AmbiguitySet,
    policy: KernelPolicy,
    n: int,
    f: TestFunction,
    normalize: bool = True,
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> float:
    """Linear (non-robust) DP under a fixed kernel policy.

    Uses the same arithmetic as :func:`robust_value` with the max replaced
    by the policy's designated generator, so evaluating an extracted
    argmax policy reproduces the robust value bitwise.
    """
    if policy.n != n:
        raise InputError("POLICY_GAP", f"policy is for horizon {policy.n}, not {n}")
    bounds = _level_bounds(set_, n)
    _check_budget(bounds, 1, state_budget)
    _, masks = reachable_masks(set_, n)
    for k in range(1, n + 1):
        lo_prev, _ = bounds[k - 1]
        for i in np.flatnonzero(masks[k - 1]):
            if (k, lo_prev + int(i)) not in policy.entries:
                raise InputError(
                    "POLICY_GAP",
                    f"reachable state {lo_prev + int(i)} at level {k} has no generator",
                )
    u = _terminal_values(set_, n, f, normalize, bounds)
    for k in range(n, 0, -1):
        lo_prev, len_prev = bounds[k - 1]
        lo_k, _ = bounds[k]
        genidx = np.zeros(len_prev, dtype=np.int64)
        for i in range(len_prev):
            genidx[i] = policy.entries.get((k, lo_prev + i), 0)
        out = None
        for g, (gc, gen) in enumerate(zip(set_.coords, set_.generators)):
            cand = _shift_combine(u, gen.weights, gc, lo_prev + 0 - lo_k, len_prev)
            out = np.where(genidx == g, cand, cand if out is None else out)
        u = out
    return float(u[0 - bounds[0][0]])


# -- capacities --------------------------------------------------------


def capacity(
    set_: AmbiguitySet,
    n: int,
    event: PathEvent,
    side: str = "UPPER",
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> float:
    """Upper capacity V(event) or lower capacity v(event) at horizon ``n``.

    UPPER maximizes the event's indicator by robust DP, LOWER minimizes.
    Running-max events fold one boolean trigger flag into the state.
    """
    if n < 1:
        raise InputError("BAD_HORIZON", "horizon must be >= 1")
    if side not in ("UPPER", "LOWER"):
        raise InputError("BAD_SIDE", f"side must be UPPER or LOWER, got {side!r}")
    maximize = side == "UPPER"
    kind, t = event.kind, event.threshold
    if kind == "TAIL_SUM_ABS_GE":
        if event.from_index > n:
            raise InputError(
                "UNSUPPORTED_EVENT", f"from_index {event.from_index} beyond horizon {n}"
            )
        return _final_capacity(
            set_, n, lambda v: abs(v) >= t, maximize, state_budget, event.from_index
        )
    if kind in _FINAL_KINDS:
        pred = {
            "FINAL_ABS_GE": lambda v: abs(v) >= t,
            "FINAL_ABS_LT": lambda v: abs(v) < t,
            "FINAL_GT": lambda v: v > t,
            "FINAL_LT": lambda v: v < t,
        }[kind]
        return _final_capacity(set_, n, pred, maximize, state_budget, 0)
    return _flagged_capacity(set_, n, event, maximize, state_budget)


def _final_capacity(set_, n, pred, maximize, state_budget, frozen_below):
    bounds = _level_bounds(set_, n, frozen_below)
    _check_budget(bounds, 1, state_budget)
    lo_n, len_n = bounds[n]
    u = np.array(
        [1.0 if pred(_state_fraction(set_, n, s)) else 0.0 for s in range(lo_n, lo_n + len_n)]
    )
    for k in range(n, 0, -1):
        lo_prev, len_prev = bounds[k - 1]
        lo_k, _ = bounds[k]
        moves = k > frozen_below
        best = None
        for gc, gen in zip(set_.coords, set_.generators):
            coords = gc if moves else (0,) * len(gc)
            cand = _shift_combine(u, gen.weights, coords, lo_prev + 0 - lo_k, len_prev)
            if best is None:
                best = cand
            elif maximize:
                best = np.where(cand > best, cand, best)
            else:
                best = np.where(cand < best, cand, best)
        u = best
    return float(u[0 - bounds[0][0]])


def _flagged_capacity(set_, n, event, maximize, state_budget):
    kind, t = event.kind, event.threshold
    bounds = _level_bounds(set_, n)
    _check_budget(bounds, 2, state_budget)
    lo_n, len_n = bounds[n]
    # u[:, 0] = value with trigger unset, u[:, 1] = value with trigger set
    u = np.zeros((len_n, 2))
    u[:, 1] = 1.0
    step = set_.lattice.step
    origin = set_.lattice.origin
    for k in range(n, 0, -1):
        lo_prev, len_prev = bounds[k - 1]
        lo_k, len_k = bounds[k]
        if kind == "MAX_PARTIAL_ABS_GE":
            trig_level = np.array(
                [abs(_state_fraction(set_, k, s)) >= t for s in range(lo_k, lo_k + len_k)]
            )
        best = None
        for gc, gen in zip(set_.coords, set_.generators):
            cand = np.empty((len_prev, 2))
            acc0 = None
            acc1 = None
            for w, c in zip(gen.weights, gc):
                a = lo_prev + c - lo_k
                nxt0 = u[a : a + len_prev, 0]
                nxt1 = u[a : a + len_prev, 1]
                if kind == "MAX_PARTIAL_ABS_GE":
                    trig = trig_level[a : a + len_prev]
                else:  # MAX_INCREMENT_ABS_GE: trigger depends on the increment only
                    trig = abs((c + origin) * step) >= t
                from_unset = np.where(trig, nxt1, nxt0)
                acc0 = w * from_unset if acc0 is None else acc0 + w * from_unset
                acc1 = w * nxt1 if acc1 is None else acc1 + w * nxt1
            cand[:, 0] = acc0
            cand[:, 1] = acc1
            if best is None:
                best = cand
            elif maximize:
                best = np.where(cand > best, cand, best)
            else:
                best = np.where(cand < best, cand, best)
        u = best
    return float(u[0 - bounds[0][0], 0])
