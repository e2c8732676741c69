"""Exponential ground-truth evaluator for tiny instances.

Walks the full history tree with no state merging: every node is a
distinct history of atom draws, and the adversary picks a generator per
node (fully history-dependent kernels).  Because each history node's
subtree enters the total expectation with a nonnegative weight, the
supremum over all history-dependent kernel selections equals the
node-wise maximum computed by this walk; a separate literal enumeration
over selection maps (:func:`enumerate_selections_value`) cross-checks
that identity on even tinier instances.

The walk is deliberately independent of the lattice DP: it works on raw
support values, never merges states, and never consults
:mod:`sublinexp.lattice_dp`.
"""

from __future__ import annotations

from itertools import product
from typing import Optional

from .ambiguity import AmbiguitySet
from .errors import BudgetError, InputError
from .functions import TestFunction
from .lattice_dp import PathEvent

DEFAULT_ENUMERATION_BUDGET = 10**6


def _tree_size(set_: AmbiguitySet, n: int) -> int:
    """Number of history nodes the walk will visit."""
    fanout = max(len(g.points) for g in set_.generators)
    total, width = 0, 1
    for _ in range(n):
        total += width
        width *= fanout
    return total + width


def _check_budget(set_: AmbiguitySet, n: int, budget: int):
    size = _tree_size(set_, n)
    if size > budget:
        raise BudgetError(
            "ENUMERATION_BUDGET_EXCEEDED", f"{size} history nodes exceed budget {budget}"
        )


def brute_force_value(
    set_: AmbiguitySet,
    n: int,
    f: TestFunction,
    normalize: bool = True,
    maximize: bool = True,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
) -> float:
    """Extreme over all history-dependent kernel selections of E[f(S_n/n)]."""
    if n < 1:
        raise InputError("BAD_HORIZON", "horizon must be >= 1")
    _check_budget(set_, n, budget)
    choose = max if maximize else min

    def walk(depth: int, partial: float) -> float:
        if depth == n:
            return float(f(partial / n if normalize else partial))
        values = []
        for g in set_.generators:
            acc = 0.0
            for p, w in zip(g.points, g.weights):
                acc += w * walk(depth + 1, partial + p)
            values.append(acc)
        return choose(values)

    return walk(0, 0.0)


def brute_force_capacity(
    set_: AmbiguitySet,
    n: int,
    event: PathEvent,
    side: str = "UPPER",
    budget: int = DEFAULT_ENUMERATION_BUDGET,
) -> float:
    """Extreme over history-dependent kernel selections of P(event).

    The event is evaluated directly on the explicit path of partial sums,
    so running-max events need no trigger-flag machinery here.
    """
    if n < 1:
        raise InputError("BAD_HORIZON", "horizon must be >= 1")
    if side not in ("UPPER", "LOWER"):
        raise InputError("BAD_SIDE", f"side must be UPPER or LOWER, got {side!r}")
    _check_budget(set_, n, budget)
    choose = max if side == "UPPER" else min
    t = float(event.threshold)
    kind = event.kind
    fi = event.from_index or 0

    def indicator(increments) -> float:
        sums = []
        s = 0.0
        for x in increments:
            s += x
            sums.append(s)
        if kind == "FINAL_ABS_GE":
            hit = abs(sums[-1]) >= t
        elif kind == "FINAL_ABS_LT":
            hit = abs(sums[-1]) < t
        elif kind == "FINAL_GT":
            hit = sums[-1] > t
        elif kind == "FINAL_LT":
            hit = sums[-1] < t
        elif kind == "MAX_PARTIAL_ABS_GE":
            hit = max(abs(v) for v in sums) >= t
        elif kind == "MAX_INCREMENT_ABS_GE":
            hit = max(abs(x) for x in increments) >= t
        elif kind == "TAIL_SUM_ABS_GE":
            hit = abs(sums[-1] - (sums[fi - 1] if fi >= 1 else 0.0)) >= t
        else:  # pragma: no cover - grammar enforced by PathEvent
            raise InputError("UNSUPPORTED_EVENT", kind)
        return 1.0 if hit else 0.0

    def walk(path: tuple) -> float:
        if len(path) == n:
            return indicator(path)
        values = []
        for g in set_.generators:
            acc = 0.0
            for p, w in zip(g.points, g.weights):
                acc += w * walk(path + (p,))
            values.append(acc)
        return choose(values)

    return walk(())


def enumerate_selections_value(
    set_: AmbiguitySet,
    n: int,
    f: TestFunction,
    normalize: bool = True,
    budget: int = 200_000,
) -> float:
    """Literal max over all kernel-selection maps, by explicit path summation.

    A selection assigns one generator to every history node (keyed by the
    atom-index tuple of the draws so far).  The number of selections is
    ``G ** (#histories)``; this is only feasible for the tiniest
    instances and exists to certify :func:`brute_force_value`.
    """
    if n < 1:
        raise InputError("BAD_HORIZON", "horizon must be >= 1")
    gens = set_.generators
    fanout = max(len(g.points) for g in gens)
    histories = []
    for depth in range(n):
        histories.extend(product(range(fanout), repeat=depth))
    count = len(gens) ** len(histories)
    if count > budget:
        raise BudgetError(
            "ENUMERATION_BUDGET_EXCEEDED", f"{count} selections exceed budget {budget}"
        )
    best = None
    for assignment in product(range(len(gens)), repeat=len(histories)):
        selection = dict(zip(histories, assignment))

        def expect(depth: int, key: tuple, partial: float, prob: float) -> float:
            if prob == 0.0:
                return 0.0
            if depth == n:
                return prob * float(f(partial / n if normalize else partial))
            g = gens[selection[key]]
            total = 0.0
            for j, (p, w) in enumerate(zip(g.points, g.weights)):
                total += expect(depth + 1, key + (j,), partial + p, prob * w)
            return total

        value = expect(0, (), 0.0, 1.0)
        if best is None or value > best:
            best = value
    return best
