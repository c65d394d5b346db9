# %% [markdown]
# Inverting the Mayer-Vietoris map
#
# The map H_0(U n L) -> H_0(U) + H_0(L) sends m to x_0 = m_0,
# x_k = m_k + m_{k-1}.  It is injective, and an explicit 1-chain nu made
# of short paths to the extrema realises it at chain level:
# boundary(nu) + m = (u or l coefficients).

# %%
from fractions import Fraction

from warsaw_homology import FiniteSupport, Side, boundary_1, connecting_chain, mv_forward, mv_invert
from warsaw_homology.warsaw import m_chain

m = FiniteSupport([Fraction(1, 2), -1, 3, Fraction(-1, 4)])
x = mv_forward(m)
print("m          ", [str(t) for t in m.values])
print("forward(m) ", [str(t) for t in x.values])
print("round trip ", mv_invert(x) == m)

# %% A sequence with nonzero alternating sum has no finite preimage.
y = FiniteSupport([1])
inv = mv_invert(y)
print("inverse of (1):", [str(inv.term(k)) for k in range(8)], "...")

# %% Chain level: the connecting chain moves each atom m_k onto an extremum.
for side in (Side.U, Side.L):
    chain = boundary_1(connecting_chain(m, side)) + m_chain(m)
    atoms = sorted(chain.atoms.items(), key=lambda kv: kv[0].sort_key())
    print(side.value, [(repr(p), str(c)) for p, c in atoms])
