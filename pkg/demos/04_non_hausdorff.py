# %% [markdown]
# H_0 is not Hausdorff
#
# Corrected truncations of x^beta are boundaries, they converge weakly to
# x^beta (every test function sees a shrinking difference), yet the limit
# is non-singular.  So the boundaries are not closed in the weak topology.

# %%
from fractions import Fraction

from warsaw_homology import AltDiff, PowerFamilyBase, non_hausdorff_demo

cert = non_hausdorff_demo(AltDiff(PowerFamilyBase(Fraction(1, 2))))

print("truncations:")
for n, v in cert.truncations:
    print(f"  n = {n:>6}  {v.category.value}")

names = cert.convergence.functions
print("\n|Lambda_f(mu - mu_n)| against the bound sup|f| * 2 n_(n+1):")
print("  n      " + "  ".join(f"{name:>18}" for name in names))
for row in cert.convergence.rows:
    cells = [f"{v:.2e} <= {b:.2e}" for v, b in zip(row.values, row.bounds)]
    print(f"  {row.n:<6} " + "  ".join(f"{c:>18}" for c in cells))

print("\nlimit:", cert.limit.category.value)
print("printed truncations:", [(n, v.category.value) for n, v in cert.printed])
print("certified:", cert.certified)
