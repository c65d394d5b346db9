"""Measure chains that are countable sums of Dirac masses.

A :class:`DiracChain` of dimension ``k`` is a finite map from simplex
descriptors to coefficients plus any number of *families*: a coefficient
sequence (:class:`~warsaw_homology.sequences.SeqSpec`) laid out on a carrier
``k -> descriptor`` whose accumulation points are a fixed finite set of limit
descriptors.  That covers every chain in the Warsaw Circle calculations while
keeping infinite chains symbolic.

1-simplices are stored by their endpoints only, and the boundary uses the
orientation ``d(start -> end) = end - start``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, Optional, Tuple

import numpy as np

from .arith import Estimate, Number, as_number, exact_sum, float_error, is_exact, mixed_sum
from .sequences import FiniteSupport, SeqSpec, combine, max_terms
from .tails import mass_upper, summability_decide


class CarrierViolation(ValueError):
    """A map would break the compact (convergent-sequence) carrier of a chain."""


class DimensionMismatch(ValueError):
    """Atoms of the wrong simplex dimension."""


# -- simplex descriptors -------------------------------------------------------


class Descriptor:
    """Hashable, totally ordered name of a singular simplex."""

    dim: int = 0

    @property
    def is_limit(self) -> bool:
        raise NotImplementedError

    def sort_key(self) -> tuple:
        raise NotImplementedError

    def __lt__(self, other: "Descriptor") -> bool:
        return self.sort_key() < other.sort_key()


@dataclass(frozen=True)
class SeqPoint(Descriptor):
    """Point ``s_k`` of the convergent sequence space S; ``s_0`` is the limit."""

    index: int

    def __post_init__(self):
        if self.index < 0:
            raise ValueError("sequence points are indexed from 0")

    @property
    def is_limit(self) -> bool:
        return self.index == 0

    def sort_key(self):
        return (0, self.index)


@dataclass(frozen=True)
class ConstantSimplex(Descriptor):
    """The constant ``dim``-simplex at ``point``."""

    point: Descriptor
    dim: int = 0

    @property
    def is_limit(self) -> bool:
        return self.point.is_limit

    def sort_key(self):
        return (1, self.dim) + self.point.sort_key()


@dataclass(frozen=True)
class Path(Descriptor):
    """A 1-simplex known by its endpoints."""

    start: Descriptor
    end: Descriptor
    dim: int = field(default=1, init=False)

    @property
    def is_limit(self) -> bool:
        return self.start.is_limit and self.end.is_limit

    def sort_key(self):
        return (2,) + self.start.sort_key() + self.end.sort_key()


# -- carriers ------------------------------------------------------------------


class Carrier:
    """Index-to-descriptor rule of a chain family.

    ``limits`` are the accumulation points of the image; ``injective`` says
    distinct indices name distinct simplices.
    """

    dim: int = 0
    injective: bool = True

    def __call__(self, k: int) -> Descriptor:
        raise NotImplementedError

    @property
    def limits(self) -> Tuple[Descriptor, ...]:
        raise NotImplementedError

    def coords(self, ks: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        pts = [self(int(k)).coords for k in ks]
        xy = np.array(pts, dtype=float).reshape(-1, 2)
        return xy[:, 0], xy[:, 1]


@dataclass(frozen=True)
class SeqCarrier(Carrier):
    """``k -> s_k^dim`` on the space S."""

    dim: int = 0

    def __call__(self, k):
        return ConstantSimplex(SeqPoint(k), self.dim)

    @property
    def limits(self):
        return (ConstantSimplex(SeqPoint(0), self.dim),)


@dataclass(frozen=True)
class MappedCarrier(Carrier):
    inner: Carrier
    point_map: Callable[[Descriptor], Descriptor]
    dim: int = 0
    injective: bool = False

    def __call__(self, k):
        return self.point_map(self.inner(k))

    @property
    def limits(self):
        return tuple(self.point_map(p) for p in self.inner.limits)


def start_face(d: Path) -> Descriptor:
    return d.start


def end_face(d: Path) -> Descriptor:
    return d.end


# -- chains --------------------------------------------------------------------


def _accumulate(pairs: Iterable[Tuple[Descriptor, Number]]) -> Dict[Descriptor, Number]:
    buckets: Dict[Descriptor, list] = {}
    for d, c in pairs:
        buckets.setdefault(d, []).append(as_number(c))
    atoms = {}
    for d, cs in buckets.items():
        total = mixed_sum(cs)
        if total != 0:
            atoms[d] = total
    return atoms


@dataclass(frozen=True, eq=False)
class DiracChain:
    """``sum_d atoms[d] delta_d + sum_families sum_k coeffs_k delta_{carrier(k)}``."""

    dim: int
    atoms: Dict[Descriptor, Number] = field(default_factory=dict)
    families: Tuple[Tuple[SeqSpec, Carrier], ...] = ()

    def __post_init__(self):
        for d in self.atoms:
            if d.dim != self.dim:
                raise DimensionMismatch(f"{d!r} is not a {self.dim}-simplex")
        for _, carrier in self.families:
            if carrier.dim != self.dim:
                raise DimensionMismatch(f"carrier of dimension {carrier.dim} in a "
                                        f"{self.dim}-chain")

    @classmethod
    def from_atoms(cls, dim: int, pairs) -> "DiracChain":
        if isinstance(pairs, dict):
            pairs = pairs.items()
        return cls(dim, _accumulate(pairs))

    @classmethod
    def family(cls, coeffs: SeqSpec, carrier: Carrier) -> "DiracChain":
        """Chain ``sum_k coeffs_k delta_{carrier(k)}``; finite coefficient lists become atoms."""
        if isinstance(coeffs, FiniteSupport):
            return cls.from_atoms(carrier.dim, ((carrier(k), v) for k, v in enumerate(coeffs.values)))
        return cls(carrier.dim, {}, ((coeffs, carrier),))

    @classmethod
    def zero(cls, dim: int) -> "DiracChain":
        return cls(dim)

    # -- structure -------------------------------------------------------------

    @property
    def is_finite(self) -> bool:
        return not self.families

    def coefficient(self, d: Descriptor) -> Number:
        if not self.is_finite:
            raise ValueError("coefficient lookup needs a finite chain; use materialize()")
        return self.atoms.get(d, Fraction(0))

    @property
    def support(self) -> Tuple[Descriptor, ...]:
        if not self.is_finite:
            raise ValueError("support of an infinite chain is not enumerable")
        return tuple(sorted(self.atoms))

    def materialize(self, n: int) -> "DiracChain":
        """Finite chain keeping family indices ``< n`` (exact when coefficients are)."""
        pairs = list(self.atoms.items())
        for coeffs, carrier in self.families:
            m = n if coeffs.support_length is None else min(n, coeffs.support_length)
            if coeffs.exact:
                pairs.extend((carrier(k), coeffs.term(k)) for k in range(m))
            else:
                vals = coeffs.terms(m)
                pairs.extend((carrier(k), float(v)) for k, v in enumerate(vals))
        return DiracChain.from_atoms(self.dim, pairs)

    def __eq__(self, other):
        if not isinstance(other, DiracChain):
            return NotImplemented
        return (self.dim == other.dim and self.atoms == other.atoms
                and self.families == other.families)

    def __repr__(self):
        body = ", ".join(f"{d!r}: {c}" for d, c in sorted(self.atoms.items()))
        fam = f", families={len(self.families)}" if self.families else ""
        return f"DiracChain({self.dim}, {{{body}}}{fam})"

    # -- linear structure ------------------------------------------------------

    def __add__(self, other: "DiracChain") -> "DiracChain":
        if not isinstance(other, DiracChain):
            return NotImplemented
        if self.dim != other.dim:
            raise DimensionMismatch(f"cannot add a {self.dim}-chain and a {other.dim}-chain")
        atoms = _accumulate(list(self.atoms.items()) + list(other.atoms.items()))
        return DiracChain(self.dim, atoms, self.families + other.families)

    def scale(self, c: Number) -> "DiracChain":
        c = as_number(c)
        atoms = _accumulate((d, c * v) for d, v in self.atoms.items())
        fams = tuple((combine((c, s)), car) for s, car in self.families) if c != 0 else ()
        return DiracChain(self.dim, atoms, fams)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, c):
        return self.scale(c)


# -- operations ----------------------------------------------------------------------


def pushforward(chain: DiracChain, point_map: Callable[[Descriptor], Descriptor],
                dim: Optional[int] = None) -> DiracChain:
    """Image measure: transport every atom along ``point_map`` and accumulate."""
    images = {d: point_map(d) for d in chain.atoms}
    dims = {d.dim for d in images.values()}
    for _, carrier in chain.families:
        for limit in carrier.limits:
            image = point_map(limit)
            if not image.is_limit:
                raise CarrierViolation(f"limit {limit!r} is sent to the non-limit {image!r}")
            dims.add(image.dim)
    if len(dims) > 1:
        raise DimensionMismatch(f"point map produces mixed dimensions {sorted(dims)}")
    out_dim = dims.pop() if dims else (chain.dim if dim is None else dim)
    atoms = _accumulate((images[d], c) for d, c in chain.atoms.items())
    fams = tuple((s, MappedCarrier(car, point_map, out_dim)) for s, car in chain.families)
    return DiracChain(out_dim, atoms, fams)


def boundary_1(chain: DiracChain) -> DiracChain:
    """``d = d_0 - d_1``: end-point image minus start-point image."""
    if chain.dim != 1:
        raise DimensionMismatch(f"boundary_1 needs a 1-chain, got dimension {chain.dim}")
    return pushforward(chain, end_face, dim=0) - pushforward(chain, start_face, dim=0)


def parity_boundary(n: int, chain: DiracChain) -> DiracChain:
    """Boundary on the convergent sequence space S.

    Every simplex of S is constant and each face of ``s_k^n`` is ``s_k^(n-1)``,
    so the alternating face sum is 0 for odd ``n`` and the identity (re-tagged
    to dimension ``n - 1``) for even ``n``.
    """
    if n < 1:
        raise ValueError("parity_boundary is defined for n >= 1")
    if chain.dim != n:
        raise DimensionMismatch(f"expected an {n}-chain, got dimension {chain.dim}")
    for d in chain.atoms:
        if not isinstance(d, ConstantSimplex):
            raise DimensionMismatch(f"{d!r} is not a simplex of S")
    for _, carrier in chain.families:
        if not isinstance(carrier, SeqCarrier):
            raise DimensionMismatch("family is not carried by constant simplices of S")
    if n % 2 == 1:
        return DiracChain.zero(n - 1)
    atoms = {ConstantSimplex(d.point, n - 1): c for d, c in chain.atoms.items()}
    fams = tuple((s, SeqCarrier(n - 1)) for s, _ in chain.families)
    return DiracChain(n - 1, atoms, fams)


def _numeric_norms(chain: DiracChain) -> Tuple[Estimate, Estimate]:
    cap = max_terms()
    flat = chain.materialize(cap)
    tail = 0.0
    for coeffs, _ in chain.families:
        if coeffs.support_length is not None and coeffs.support_length <= cap:
            continue
        t = coeffs.abs_tail()
        if t is None or not summability_decide(t).summable:
            raise ValueError("chain coefficients are not known to be absolutely summable")
        tail += mass_upper(t, cap)
    values = list(flat.atoms.values())
    l1 = math.fsum(abs(float(v)) for v in values)
    mass = math.fsum(float(v) for v in values)
    n = len(values)
    return (Estimate(l1, tail + float_error(l1, n), "numeric"),
            Estimate(mass, tail + float_error(l1, n), "numeric"))


def l1_norm(chain: DiracChain) -> Estimate:
    """``sum |c|`` over atoms (closed form for a single injective family)."""
    finite = Estimate(exact_sum(abs(v) for v in chain.atoms.values())
                      if all(is_exact(v) for v in chain.atoms.values())
                      else math.fsum(abs(float(v)) for v in chain.atoms.values()))
    if chain.is_finite:
        return finite
    if not chain.atoms and len(chain.families) == 1:
        coeffs, carrier = chain.families[0]
        if carrier.injective:
            value = coeffs.l1_norm()
            if value is not None:
                return value
    return _numeric_norms(chain)[0]


def total_mass(chain: DiracChain) -> Estimate:
    """``sum c`` over atoms; additive, so families use their closed-form totals."""
    out = Estimate(mixed_sum(chain.atoms.values()) if chain.atoms else Fraction(0))
    for coeffs, _ in chain.families:
        t = coeffs.total()
        if t is None:
            return _numeric_norms(chain)[1]
        out = out + t
    return out


def s_chain(dim: int, coeffs) -> DiracChain:
    """Chain on S with coefficient ``coeffs[k]`` at ``s_k^dim``."""
    if isinstance(coeffs, SeqSpec):
        return DiracChain.family(coeffs, SeqCarrier(dim))
    return DiracChain.from_atoms(dim, ((ConstantSimplex(SeqPoint(k), dim), c)
                                       for k, c in enumerate(coeffs)))


__all__ = [
    "Carrier",
    "CarrierViolation",
    "ConstantSimplex",
    "Descriptor",
    "DiracChain",
    "DimensionMismatch",
    "MappedCarrier",
    "Path",
    "SeqCarrier",
    "SeqPoint",
    "boundary_1",
    "end_face",
    "l1_norm",
    "parity_boundary",
    "pushforward",
    "s_chain",
    "start_face",
    "total_mass",
]
