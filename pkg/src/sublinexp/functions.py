"""Scalar test functions.

A :class:`TestFunction` is either an explicit piecewise-linear function
(with constant extension beyond the first and last breakpoint, hence
bounded) or one of a small set of named builtins.  ``square``,
``identity`` and ``abs_excess`` are marked unbounded and are rejected by
operations that require bounded functions at horizon-normalized scale;
they remain available for moment computations.

All functions evaluate vectorized on numpy arrays as well as on scalars.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

import numpy as np

from .errors import InputError

#: builtin kinds whose range is unbounded on the real line
UNBOUNDED_KINDS = frozenset({"square", "identity", "abs_excess"})

_BUILTIN_KINDS = frozenset(
    {"abs", "square", "identity", "clamp", "tent", "psi", "abs_excess"}
)


@dataclass(frozen=True)
class TestFunction:
    """A scalar function used as the integrand of expectations.

    ``kind`` is ``"pwl"`` or a builtin name; ``params`` holds the
    kind-specific parameters (for ``"pwl"``: a tuple of x-coordinates and
    a tuple of values).
    """

    kind: str
    params: tuple = ()

    def __post_init__(self):
        if self.kind == "pwl":
            xs, ys = self.params
            if len(xs) != len(ys) or len(xs) == 0:
                raise InputError("BAD_FUNCTION", "breakpoints and values must pair up")
            if any(b <= a for a, b in zip(xs, xs[1:])):
                raise InputError(
                    "BAD_FUNCTION", "piecewise-linear breakpoints must be strictly increasing"
                )
        elif self.kind not in _BUILTIN_KINDS:
            raise InputError("BAD_FUNCTION", f"unknown function kind {self.kind!r}")

    # -- evaluation ----------------------------------------------------

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        k = self.kind
        if k == "pwl":
            xs, ys = self.params
            out = np.interp(x, xs, ys)
        elif k == "abs":
            out = np.abs(x)
        elif k == "square":
            out = x * x
        elif k == "identity":
            out = x + 0.0
        elif k == "clamp":
            (n,) = self.params
            out = np.minimum(np.maximum(x, -n), n)
        elif k == "tent":
            center, halfwidth = self.params
            out = np.maximum(0.0, 1.0 - np.abs(x - center) / halfwidth)
        elif k == "psi":
            (n,) = self.params
            out = n * np.clip(np.abs(x) - (n - 1), 0.0, 1.0)
        elif k == "abs_excess":
            (lam,) = self.params
            out = np.maximum(np.abs(x) - lam, 0.0)
        else:  # pragma: no cover - guarded in __post_init__
            raise InputError("BAD_FUNCTION", f"unknown kind {k!r}")
        return out if out.ndim else float(out)

    # -- structure -----------------------------------------------------

    @property
    def bounded(self) -> bool:
        return self.kind not in UNBOUNDED_KINDS

    def knots(self) -> Tuple[float, ...]:
        """Interior points where a maximum over an interval may sit.

        Together with the interval endpoints these are enough to maximize
        the function exactly over any closed interval: between consecutive
        knots every kind here is linear (convex kinds need no interior
        candidates beyond their kink).
        """
        k = self.kind
        if k == "pwl":
            return tuple(self.params[0])
        if k in ("abs", "square", "identity"):
            return (0.0,)
        if k == "clamp":
            (n,) = self.params
            return (-float(n), float(n))
        if k == "tent":
            center, halfwidth = self.params
            return (center - halfwidth, center, center + halfwidth)
        if k == "psi":
            (n,) = self.params
            return (-float(n), -(n - 1.0), n - 1.0, float(n))
        if k == "abs_excess":
            (lam,) = self.params
            return (-lam, 0.0, lam)
        raise AssertionError(k)

    def describe(self) -> str:
        if self.kind == "pwl":
            xs, ys = self.params
            pts = ", ".join(f"({x:g}, {y:g})" for x, y in zip(xs, ys))
            return f"pwl[{pts}]"
        if self.params:
            return f"{self.kind}({', '.join(f'{p:g}' for p in self.params)})"
        return self.kind


# -- constructors ------------------------------------------------------

ABS = TestFunction("abs")
SQUARE = TestFunction("square")
IDENTITY = TestFunction("identity")


def piecewise_linear(breakpoints: Iterable[Tuple[float, float]]) -> TestFunction:
    pts = sorted((float(x), float(y)) for x, y in breakpoints)
    xs = tuple(p[0] for p in pts)
    ys = tuple(p[1] for p in pts)
    if any(b <= a for a, b in zip(xs, xs[1:])):
        raise InputError("BAD_FUNCTION", "duplicate breakpoint x-coordinates")
    return TestFunction("pwl", (xs, ys))


def clamp(n: float) -> TestFunction:
    """x clipped to [-n, n]."""
    return TestFunction("clamp", (float(n),))


def tent(center: float, halfwidth: float) -> TestFunction:
    """Unit-height tent supported on [center - halfwidth, center + halfwidth]."""
    if halfwidth <= 0:
        raise InputError("BAD_FUNCTION", "tent halfwidth must be positive")
    return TestFunction("tent", (float(center), float(halfwidth)))


def psi_fn(n: int) -> TestFunction:
    """The Lipschitz tail surrogate at level n (see :func:`sublinexp.lln.psi`)."""
    if n < 1:
        raise InputError("BAD_FUNCTION", "psi level must be >= 1")
    return TestFunction("psi", (int(n),))


def abs_excess(lam: float) -> TestFunction:
    """(|x| - lam)^+, the tail-excess moment integrand (unbounded)."""
    return TestFunction("abs_excess", (float(lam),))


def constant(c: float) -> TestFunction:
    return TestFunction("pwl", ((0.0,), (float(c),)))


# -- piecewise-linear algebra (used heavily by the property suites) ----


def _as_pwl_values(f: TestFunction, xs: Sequence[float]) -> np.ndarray:
    return np.asarray(f(np.asarray(xs, dtype=float)))


def pwl_add(f: TestFunction, g: TestFunction) -> TestFunction:
    """Sum of two piecewise-linear functions, again piecewise-linear."""
    if f.kind != "pwl" or g.kind != "pwl":
        raise InputError("BAD_FUNCTION", "pwl_add needs two piecewise-linear functions")
    xs = sorted(set(f.params[0]) | set(g.params[0]))
    ys = _as_pwl_values(f, xs) + _as_pwl_values(g, xs)
    return TestFunction("pwl", (tuple(xs), tuple(float(y) for y in ys)))


def pwl_scale(f: TestFunction, lam: float) -> TestFunction:
    """lam * f for a piecewise-linear f."""
    if f.kind != "pwl":
        raise InputError("BAD_FUNCTION", "pwl_scale needs a piecewise-linear function")
    xs, ys = f.params
    return TestFunction("pwl", (xs, tuple(float(lam * y) for y in ys)))


def pwl_negate(f: TestFunction) -> TestFunction:
    xs, ys = f.params
    return TestFunction("pwl", (xs, tuple(float(-y) for y in ys)))
