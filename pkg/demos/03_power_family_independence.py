# %% [markdown]
# Independence of the power families
#
# For beta in (0, 1) the sequences x^beta_k = (-1)^k ((k+2)^-beta - (k+1)^-beta)
# are all non-singular, and no nontrivial finite combination of them is a
# boundary or a singular class.  The witness is symbolic: the slowest
# surviving exponent dominates the alternating partial sums.

# %%
from fractions import Fraction
import itertools

from warsaw_homology import combo_class

grid = [Fraction(k, 10) for k in range(1, 10)]
checked = 0
rules = {}
for betas in itertools.combinations(grid, 2):
    for coeffs in [(1, -1), (1, 1), (0, 1), (Fraction(1, 2), 3)]:
        v = combo_class(betas, coeffs)
        assert v.nonzero
        rules[v.witness_rules[0]] = rules.get(v.witness_rules[0], 0) + 1
        checked += 1
print(f"{checked} combinations, all nonzero; witnesses used: {rules}")

# %% One combination in detail.
v = combo_class([Fraction(3, 10), Fraction(3, 5)], [1, -1])
print(v.category.value, v.evidence[-1].detail)
