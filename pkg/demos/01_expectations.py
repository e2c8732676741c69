"""Single-coordinate upper and lower expectations.

An ambiguity set is a finite list of lattice-supported distributions;
the upper expectation is the max of the classical expectations over the
list, the lower expectation the min.  Both are attained, and the
attaining generator index is part of the answer.
"""

from sublinexp import (
    AmbiguitySet,
    DiscreteDistribution,
    IDENTITY,
    LatticeSpec,
    SQUARE,
    sublinear_expect,
    tent,
)

pair = AmbiguitySet(
    LatticeSpec(1),
    (
        DiscreteDistribution.from_pairs([(-1, 0.5), (1, 0.5)]),
        DiscreteDistribution.from_pairs([(-1, 0.25), (1, 0.75)]),
    ),
)

print("set:", pair.describe())
for f, label in [(IDENTITY, "mean"), (SQUARE, "second moment"), (tent(0.25, 0.25), "tent")]:
    sv = sublinear_expect(pair, f)
    print(
        f"  {label:14s} upper {sv.upper:8.4f} (generator {sv.argmax_upper})   "
        f"lower {sv.lower:8.4f} (generator {sv.argmin_lower})"
    )

print()
print("The mean interval [0, 0.5] is the whole story for affine f;")
print("for non-affine f the upper expectation is genuinely sublinear:")
sv_t = sublinear_expect(pair, tent(0.25, 0.25))
print(f"  E[tent] = {sv_t.upper:.4f} even though tent(E[X]) would give other values.")
