"""Countably-indexed generator families and their specialized computations.

Two families are shipped:

* ``EXM3``: index 1 is the point mass at 1; index j >= 2 puts weight
  1 - 1/j^2 on 1 and weight 1/j^3 on each of j, 2j, ..., j*j.  All
  weights are exact rationals summing to one at every index.
* ``HEAVY``: index k >= 1 puts weight 1 - 1/k on 0 and 1/k on k.  Every
  generator has mean exactly 1.

A family is always used through a finite truncation index; suprema over
the countable family are therefore certified lower bounds, with
monotonicity-based warnings when the truncation is visibly binding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .ambiguity import DiscreteDistribution
from .errors import BudgetError, InputError
from .functions import TestFunction, piecewise_linear

FAMILY_NAMES = ("EXM3", "HEAVY")

#: 1 ∧ (1 - x)^+, the bounded ramp certifying the HEAVY family's LLN failure
RAMP_DOWN = piecewise_linear([(0.0, 1.0), (1.0, 0.0)])

_CHUNK_ATOMS = 1_000_000


@dataclass(frozen=True)
class ParametricFamily:
    """A truncated countably-indexed generator family."""

    name: str
    truncation: int

    def __post_init__(self):
        if self.name not in FAMILY_NAMES:
            raise InputError("BAD_FAMILY", f"unknown family {self.name!r}")
        if self.truncation < 1:
            raise InputError("BAD_FAMILY", "truncation index must be >= 1")

    # -- single generators (exact rational construction) ---------------

    def generator(self, index: int) -> DiscreteDistribution:
        if not 1 <= index <= self.truncation:
            raise InputError("BAD_FAMILY", f"index {index} outside 1..{self.truncation}")
        if self.name == "HEAVY":
            k = index
            atoms = [(Fraction(0), Fraction(k - 1, k)), (Fraction(k), Fraction(1, k))]
        elif index == 1:
            atoms = [(Fraction(1), Fraction(1))]
        else:
            j = index
            atoms = [(Fraction(1), 1 - Fraction(1, j * j))]
            atoms += [(Fraction(k * j), Fraction(1, j**3)) for k in range(1, j + 1)]
        total = sum(w for _, w in atoms)
        if total != 1:  # exact rational identity, not a tolerance check
            raise AssertionError(f"family weights sum to {total} at index {index}")
        return DiscreteDistribution.from_pairs(
            [(float(p), float(w)) for p, w in atoms]
        )

    def describe(self) -> str:
        return f"{self.name} family, truncation {self.truncation}"

    # -- vectorized per-index scans ------------------------------------

    def per_index_expectations(self, f: TestFunction) -> np.ndarray:
        """E_j[f] for j = 1..truncation, as one array."""
        n = self.truncation
        if self.name == "HEAVY":
            ks = np.arange(1, n + 1, dtype=float)
            return (1.0 - 1.0 / ks) * float(f(0.0)) + np.asarray(f(ks)) / ks
        out = np.empty(n)
        f1 = float(f(1.0))
        out[0] = f1
        j = 2
        while j <= n:
            hi = j
            atoms = j
            while hi < n and atoms + hi + 1 <= _CHUNK_ATOMS:
                hi += 1
                atoms += hi
            js = np.arange(j, hi + 1)
            lens = js
            starts = np.concatenate(([0], np.cumsum(lens)[:-1]))
            total = int(lens.sum())
            kk = np.arange(total) - np.repeat(starts, lens) + 1
            points = kk * np.repeat(js, lens).astype(float)
            fv = np.asarray(f(points), dtype=float)
            sums = np.add.reduceat(fv, starts)
            out[j - 1 : hi] = (1.0 - 1.0 / js.astype(float) ** 2) * f1 + sums / js.astype(
                float
            ) ** 3
            j = hi + 1
        return out

    def tail_fractions(self, threshold) -> List[Fraction]:
        """P_j(|X| >= threshold) for j = 1..truncation, exact counting."""
        t = Fraction(threshold) if not isinstance(threshold, Fraction) else threshold
        n = self.truncation
        out: List[Fraction] = []
        if self.name == "HEAVY":
            for k in range(1, n + 1):
                mass = Fraction(1, k) if k >= t else Fraction(0)
                if t <= 0:
                    mass = Fraction(1)
                out.append(mass)
            return out
        out.append(Fraction(1) if t <= 1 else Fraction(0))
        for j in range(2, n + 1):
            k0 = max(1, math.ceil(t / j))
            count = j - k0 + 1 if k0 <= j else 0
            mass = Fraction(count, j**3)
            if t <= 1:
                mass += 1 - Fraction(1, j * j)
            out.append(mass)
        return out

    def per_index_tail(self, threshold) -> np.ndarray:
        return np.array([float(m) for m in self.tail_fractions(threshold)])

    def tail_capacity_fraction(self, threshold) -> Tuple[Fraction, int]:
        """Exact sup over indices of the tail mass, with the attaining index."""
        tails = self.tail_fractions(threshold)
        best = max(tails)
        return best, tails.index(best) + 1

    def tail_capacity(self, threshold) -> Tuple[float, int]:
        """sup over indices of the tail mass, with the attaining index."""
        value, arg = self.tail_capacity_fraction(threshold)
        return float(value), arg

    def truncation_binding_for_tail(self, threshold) -> bool:
        """Whether the truncation visibly limits the tail supremum."""
        if self.name == "HEAVY":
            # untruncated supremum sits at index ceil(threshold)
            return math.ceil(max(float(threshold), 1.0)) > self.truncation
        _, arg = self.tail_capacity(threshold)
        return arg >= self.truncation - 5


@dataclass(frozen=True)
class FamilyExpectation:
    value: float
    argmax_index: int
    tail_note: str


def family_expect(family: ParametricFamily, f: TestFunction) -> FamilyExpectation:
    """Upper expectation sup over indices <= truncation of E_j[f].

    Raises TRUNCATION_TOO_SMALL when the running maximum is still
    strictly increasing across the last 10 indices, i.e. the supremum is
    visibly escaping past the truncation boundary.
    """
    values = family.per_index_expectations(f)
    running = np.maximum.accumulate(values)
    if len(running) >= 10 and np.all(np.diff(running[-10:]) > 0):
        raise BudgetError(
            "TRUNCATION_TOO_SMALL",
            f"running max still strictly increasing over the last 10 of "
            f"{family.truncation} indices for {f.describe()}",
        )
    arg = int(np.argmax(values)) + 1
    note = _tail_note(family, f, arg)
    return FamilyExpectation(float(values[arg - 1]), arg, note)


def family_lower_expect(family: ParametricFamily, f: TestFunction) -> float:
    """Lower expectation inf over indices <= truncation of E_j[f]."""
    return float(np.min(family.per_index_expectations(f)))


def _tail_note(family: ParametricFamily, f: TestFunction, arg: int) -> str:
    if family.name == "HEAVY" and f.kind == "identity":
        return "supremum is index-independent: every generator has mean 1"
    if family.name == "EXM3" and f.kind == "abs_excess":
        (lam,) = f.params
        return (
            f"maximizing index near 4*lambda = {4 * lam:g}; "
            f"truncation must exceed it (attained at {arg})"
        )
    boundary = arg >= family.truncation - 5
    return (
        f"supremum attained at index {arg}"
        + ("; near the truncation boundary" if boundary else "")
    )


# -- the tail-separation report ---------------------------------------


@dataclass(frozen=True)
class Exm3Report:
    """Excess-moment vs. tail-surrogate behavior of the EXM3 family."""

    truncation: int
    lambda_rows: List[Tuple[float, float]]  # (lambda, E[(|X| - lambda)^+])
    m_rows: List[Tuple[int, float, float]]  # (m, E[psi_m(X)], m * V(|X| >= m))
    warnings: Tuple[str, ...] = field(default=())


def exm3_report(
    truncation: int, lambdas: Sequence[float], ms: Sequence[int]
) -> Exm3Report:
    """Tabulate the two sides of the separation exhibited by EXM3."""
    if lambdas and truncation < 4 * max(lambdas):
        raise BudgetError(
            "TRUNCATION_TOO_SMALL",
            f"truncation {truncation} below 4 * max(lambda) = {4 * max(lambdas):g}",
        )
    fam = ParametricFamily("EXM3", truncation)
    warnings: List[str] = []
    lambda_rows = []
    for lam in lambdas:
        fe = family_expect(fam, TestFunction("abs_excess", (float(lam),)))
        lambda_rows.append((float(lam), fe.value))
    m_rows = []
    for m in ms:
        psi_val = family_expect(fam, TestFunction("psi", (int(m),))).value
        tail, _ = fam.tail_capacity(int(m))
        if fam.truncation_binding_for_tail(int(m)):
            warnings.append(f"FAMILY_TRUNCATION_WARNING: tail sup at m={m} hits truncation")
        m_rows.append((int(m), psi_val, m * tail))
    return Exm3Report(truncation, lambda_rows, m_rows, tuple(warnings))


# -- HEAVY-family LLN failure at desk scale ----------------------------


def heavy_lln_value(
    truncation: int, n: int, state_budget: int = 50_000_000
) -> float:
    """Exact E_K[ramp(S_n / n)] for the K-truncated HEAVY family.

    Dedicated integer-state DP: supports {0, k} for k <= K make level-k
    states the integers [0, k*K].  The result is a certified lower bound
    for the untruncated supremum and itself obeys
    ``value >= (1 - 1/K)^n`` (each step loses at most that factor).
    """
    K = truncation
    if K < 1 or n < 1:
        raise InputError("BAD_FAMILY", "need truncation >= 1 and horizon >= 1")
    states = (n + 1) * (n * K + 1)
    if states > state_budget:
        raise BudgetError(
            "STATE_BUDGET_EXCEEDED", f"{states} level-states exceed budget {state_budget}"
        )
    u = np.asarray(RAMP_DOWN(np.arange(n * K + 1) / n), dtype=float)
    for level in range(n, 0, -1):
        length = (level - 1) * K + 1
        best = None
        for k in range(1, K + 1):
            cand = (1.0 - 1.0 / k) * u[:length] + (1.0 / k) * u[k : k + length]
            best = cand if best is None else np.where(cand > best, cand, best)
        u = best
    return float(u[0])


def heavy_lln_lower_bound(truncation: int, n: int) -> float:
    """The closed-form per-step bound (1 - 1/K)^n."""
    return (1.0 - 1.0 / truncation) ** n
