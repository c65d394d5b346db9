# %% [markdown]
# Classifying 0-chains on the Warsaw circle
#
# A sequence x in l1 lives on the extrema u_0, l_0, u_1, l_1, ... of the
# sinusoid.  Its class in H_0 is read off from the alternating partial sums
# a_k = x_0 - x_1 + x_2 - ...: summable a_k means a boundary, summable
# a_k - alpha means the singular class alpha, anything else is non-singular.

# %%
from fractions import Fraction

from warsaw_homology import (
    AltDiff,
    FiniteSupport,
    GeometricBase,
    PowerFamilyBase,
    classify,
)

# %% Finite sequences are decided in exact rational arithmetic.
for values in ([1, -1], [1], [Fraction(1, 3), 2, Fraction(-7, 4)]):
    v = classify(FiniteSupport(values))
    shown = "(" + ", ".join(str(Fraction(t)) for t in values) + ")"
    print(f"{shown:<20} {v.category.value:<16} alpha = {v.alpha}")

# %% Alternating differences of a geometric profile telescope to alpha = -n_0...
v = classify(AltDiff(GeometricBase(Fraction(1, 2))))
print("AltDiff(2^-k)        ", v.category.value, "alpha =", v.alpha)

# %% ...while a slow power profile escapes every singular class.
for beta in (Fraction(1, 2), Fraction(1)):
    v = classify(AltDiff(PowerFamilyBase(beta)))
    print(f"AltDiff((k+1)^-{beta})", v.category.value, v.witness_rules)

# %% A summable power profile is singular; its alpha is eta(beta) with an error bound.
v = classify(PowerFamilyBase(3))
print("(k+1)^-3             ", v.category.value, float(v.alpha), "+/-", v.alpha_error)
