"""The Warsaw Circle, its Mayer-Vietoris operators, and the H_0 classifier.

Model
-----
W is the graph of ``sin(1/x)`` for ``0 < x <= 2/(3 pi)`` (ending at the
rightmost minimum), the segment ``{0} x [-1, 1]``, and a closing arc: the lower
half circle of radius ``1/(3 pi)`` centred at ``(1/(3 pi), -1)``, so the arc
stays in ``y <= -1``.

Distinguished points, all accumulating on the segment:

* ``u_k`` maxima, ``x = 2/((4k+1) pi)``, ``u_0 = (0, 1)``;
* ``m_k`` zeros, ``x = 1/((k+1) pi)``, ``m_0 = (0, 0)``;
* ``l_k`` minima, ``x = 2/((4k+3) pi)``, ``l_0 = (0, -1)``.

``u_k`` sits between the zeros ``m_{2k-1}`` and ``m_{2k}``; ``l_k`` between
``m_{2k}`` and ``m_{2k+1}`` (``l_0`` reaches ``m_1`` through the arc and the
rightmost minimum).  Hence the MV map on H_0 is

    u_0 = m_0,  u_k = m_{2k} + m_{2k-1},  l_k = m_{2k} + m_{2k+1},

which interleaves (``x_{2k} = u_k``, ``x_{2k+1} = l_k``) to
``x_0 = m_0, x_k = m_k + m_{k-1}``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import numpy as np

from .chains import Carrier, DiracChain, Path, Descriptor
from .arith import Estimate, Number, as_exact, as_number, is_exact, mixed_sum
from .sequences import (
    AltDiff,
    BaseFamily,
    FiniteSupport,
    PowerFamilyBase,
    SeqSpec,
    Truncation,
    Variant,
    _check_index,
    _signs,
    combine,
)
from .tails import (
    AbsSummable,
    DominatedCombo,
    PSeries,
    Summability,
    SummabilityVerdict,
    mass_upper,
    summability_decide,
)

ARC_RADIUS = 1 / (3 * math.pi)
RIGHTMOST_MINIMUM = 2 / (3 * math.pi)
# x-range and y-range of W
BOUNDING_BOX = ((0.0, RIGHTMOST_MINIMUM), (-1.0 - ARC_RADIUS, 1.0))


class NotInL1Error(ValueError):
    """The sequence is not absolutely summable, so it is not a chain."""


class InvalidInput(ValueError):
    pass


class PreconditionFailure(ValueError):
    pass


# -- points ---------------------------------------------------------------------


class Family(str, enum.Enum):
    U = "u"
    M = "m"
    L = "l"


_Y = {Family.U: 1.0, Family.M: 0.0, Family.L: -1.0}
_FAMILY_RANK = {Family.U: 0, Family.M: 1, Family.L: 2}


def _x_denominator(family: Family, k: int) -> Tuple[int, int]:
    """``x = num / (den * pi)`` for index ``k >= 1``."""
    if family is Family.U:
        return 2, 4 * k + 1
    if family is Family.L:
        return 2, 4 * k + 3
    return 1, k + 1


@dataclass(frozen=True)
class WarsawPoint(Descriptor):
    family: Family
    index: int

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if self.index < 0:
            raise ValueError("point indices start at 0")

    @property
    def is_limit(self) -> bool:
        return self.index == 0

    @property
    def coords(self) -> Tuple[float, float]:
        if self.index == 0:
            return 0.0, _Y[self.family]
        num, den = _x_denominator(self.family, self.index)
        return num / (den * math.pi), _Y[self.family]

    @property
    def symbolic_x(self) -> str:
        if self.index == 0:
            return "0"
        num, den = _x_denominator(self.family, self.index)
        return f"{num}/({den}π)"

    def sort_key(self):
        return (3, _FAMILY_RANK[self.family], self.index)

    def __repr__(self):
        return f"{self.family.value}{self.index}"


def warsaw_point(family, k: int) -> WarsawPoint:
    return WarsawPoint(Family(family), k)


def family_coords(family: Family, ks: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    ks = np.asarray(ks, dtype=float)
    if family is Family.U:
        x = 2.0 / ((4.0 * ks + 1.0) * math.pi)
    elif family is Family.L:
        x = 2.0 / ((4.0 * ks + 3.0) * math.pi)
    else:
        x = 1.0 / ((ks + 1.0) * math.pi)
    x = np.where(ks == 0, 0.0, x)
    return x, np.full(ks.shape, _Y[family])


# -- carriers -------------------------------------------------------------------


@dataclass(frozen=True)
class PointCarrier(Carrier):
    """``k -> family_k``."""

    family: Family

    def __call__(self, k):
        return WarsawPoint(self.family, k)

    @property
    def limits(self):
        return (WarsawPoint(self.family, 0),)

    def coords(self, ks):
        return family_coords(self.family, ks)


@dataclass(frozen=True)
class InterleavedCarrier(Carrier):
    """``2k -> u_k``, ``2k+1 -> l_k``: the layout of H_0(U) + H_0(L) sequences."""

    def __call__(self, k):
        return WarsawPoint(Family.U, k // 2) if k % 2 == 0 else WarsawPoint(Family.L, k // 2)

    @property
    def limits(self):
        return (WarsawPoint(Family.U, 0), WarsawPoint(Family.L, 0))

    def coords(self, ks):
        ks = np.asarray(ks)
        xu, yu = family_coords(Family.U, ks // 2)
        xl, yl = family_coords(Family.L, ks // 2)
        even = ks % 2 == 0
        return np.where(even, xu, xl), np.where(even, yu, yl)


class Side(str, enum.Enum):
    U = "u"
    L = "l"


def connecting_target(k: int, side: Side) -> WarsawPoint:
    """Extremum joined to ``m_k`` inside U (``side=U``) or L (``side=L``)."""
    if Side(side) is Side.U:
        return WarsawPoint(Family.U, (k + 1) // 2)
    return WarsawPoint(Family.L, k // 2)


@dataclass(frozen=True)
class ConnectingCarrier(Carrier):
    """``k -> (m_k -> adjacent extremum)``."""

    side: Side
    dim: int = field(default=1, init=False)

    def __call__(self, k):
        return Path(WarsawPoint(Family.M, k), connecting_target(k, self.side))

    @property
    def limits(self):
        return (self(0),)


# -- derived sequences ------------------------------------------------------------


@dataclass(frozen=True)
class MVForward(SeqSpec):
    """``x_0 = m_0``, ``x_k = m_k + m_{k-1}``."""

    m: SeqSpec

    @property
    def exact(self):
        return self.m.exact

    @property
    def support_length(self):
        n = self.m.support_length
        return None if n is None else n + 1

    def term(self, k):
        _check_index(k)
        return self.m.term(k) if k == 0 else mixed_sum([self.m.term(k), self.m.term(k - 1)])

    def terms(self, n):
        a = self.m.terms(n)
        out = a.copy()
        out[1:] += a[:-1]
        return out

    def _m_l1(self) -> Optional[float]:
        t = self.m.abs_tail()
        if t is None or not summability_decide(t).summable:
            return None
        return mass_upper(t)

    def alt_prefix(self, k):
        # telescopes to (-1)^k m_k
        v = self.m.term(k)
        return v if k % 2 == 0 else -v

    def alt_limit(self):
        return Estimate(Fraction(0)) if self._m_l1() is not None else None

    def alt_tail(self):
        l1 = self._m_l1()
        return None if l1 is None else AbsSummable(l1, "mv-image")

    def alt_tail_terms(self, n):
        return _signs(n) * self.m.terms(n)

    def abs_tail(self):
        l1 = self._m_l1()
        return None if l1 is None else AbsSummable(2 * l1, "mv-image")


@dataclass(frozen=True)
class MVInverse(SeqSpec):
    """``m_k = (-1)^k sum_{i<=k} (-1)^i x_i``; a formal sequence, not necessarily l1."""

    x: SeqSpec

    @property
    def exact(self):
        return self.x.exact

    def term(self, k):
        a = self.x.alt_prefix(k)
        return a if k % 2 == 0 else -a

    def terms(self, n):
        limit = self.x.alt_limit()
        if limit is not None and not isinstance(self.x, MVInverse):
            try:
                a = self.x.alt_tail_terms(n) + float(limit.value)
            except ValueError:
                a = np.cumsum(self.x.terms(n) * _signs(n))
        else:
            a = np.cumsum(self.x.terms(n) * _signs(n))
        return _signs(n) * a

    def abs_tail(self):
        limit, tail = self.x.alt_limit(), self.x.alt_tail()
        if limit is None or tail is None:
            return None
        return DominatedCombo.with_offset([(1, tail)], limit)


@dataclass(frozen=True)
class Interleave(SeqSpec):
    """``x_{2k} = u_k``, ``x_{2k+1} = l_k``."""

    u: SeqSpec
    l: SeqSpec

    @property
    def exact(self):
        return self.u.exact and self.l.exact

    @property
    def support_length(self):
        a, b = self.u.support_length, self.l.support_length
        if a is None or b is None:
            return None
        return max(2 * a - 1, 2 * b, 0)

    def term(self, k):
        _check_index(k)
        return self.u.term(k // 2) if k % 2 == 0 else self.l.term(k // 2)

    def terms(self, n):
        out = np.zeros(n)
        out[0::2] = self.u.terms((n + 1) // 2)
        out[1::2] = self.l.terms(n // 2)
        return out

    def abs_tail(self):
        masses = []
        for part in (self.u, self.l):
            t = part.abs_tail()
            if t is None or not summability_decide(t).summable:
                return None
            masses.append(mass_upper(t))
        return AbsSummable(sum(masses), "interleaved")

    def alt_limit(self):
        tu, tl = self.u.total(), self.l.total()
        if tu is None or tl is None:
            return None
        return tu - tl


@dataclass(frozen=True)
class Subsequence(SeqSpec):
    """``y_k = x_{2k + offset}``."""

    x: SeqSpec
    offset: int

    @property
    def exact(self):
        return self.x.exact

    def term(self, k):
        _check_index(k)
        return self.x.term(2 * k + self.offset)

    def terms(self, n):
        return self.x.terms(2 * n + 1)[self.offset::2][:n]

    def abs_tail(self):
        t = self.x.abs_tail()
        if t is None or not summability_decide(t).summable:
            return None
        return AbsSummable(mass_upper(t), "subsequence")


# -- Mayer-Vietoris operators --------------------------------------------------------


def mv_forward(m: SeqSpec) -> SeqSpec:
    """H_0(U n L) -> H_0(U) + H_0(L) in interleaved coordinates."""
    if isinstance(m, FiniteSupport):
        v = m.values + (Fraction(0),)
        return FiniteSupport(tuple(v[k] + v[k - 1] if k else v[0] for k in range(len(v))))
    return MVForward(m)


def mv_invert(x: SeqSpec) -> SeqSpec:
    """Unique ``m`` with ``mv_forward(m) = x``, as a term-evaluable sequence."""
    if isinstance(x, FiniteSupport) and x.alt_limit().value == 0:
        return FiniteSupport(tuple(x.alt_prefix(k) if k % 2 == 0 else -x.alt_prefix(k)
                                   for k in range(len(x.values))))
    return MVInverse(x)


def interleave(u: SeqSpec, l: SeqSpec) -> SeqSpec:
    if isinstance(u, FiniteSupport) and isinstance(l, FiniteSupport):
        n = max(len(u.values), len(l.values))
        out = []
        for k in range(n):
            out.extend([u.term(k), l.term(k)])
        return FiniteSupport(tuple(out))
    return Interleave(u, l)


def split(x: SeqSpec) -> Tuple[SeqSpec, SeqSpec]:
    """Inverse of :func:`interleave`: ``(x_0, x_2, ...)`` and ``(x_1, x_3, ...)``."""
    if isinstance(x, FiniteSupport):
        return FiniteSupport(x.values[0::2]), FiniteSupport(x.values[1::2])
    if isinstance(x, Interleave):
        return x.u, x.l
    return Subsequence(x, 0), Subsequence(x, 1)


def side_coefficients(m: SeqSpec, side: Side) -> SeqSpec:
    """``u`` (side U) or ``l`` (side L) as given by the MV equations."""
    u, l = split(mv_forward(m))
    return u if Side(side) is Side.U else l


def m_chain(m: SeqSpec) -> DiracChain:
    """0-chain ``sum m_k delta_{m_k}`` on the zeros of the sinusoid."""
    return DiracChain.family(m, PointCarrier(Family.M))


def x_chain(x: SeqSpec) -> DiracChain:
    """0-chain of an H_0(U) + H_0(L) sequence: ``x_{2k}`` on ``u_k``, ``x_{2k+1}`` on ``l_k``."""
    return DiracChain.family(x, InterleavedCarrier())


def _require_l1(spec: SeqSpec) -> None:
    if isinstance(spec, FiniteSupport):
        return
    tail = spec.abs_tail()
    if tail is not None and summability_decide(tail).divergent:
        raise NotInL1Error(f"{spec!r} is not absolutely summable")


def connecting_chain(m: SeqSpec, side: Side) -> DiracChain:
    """``nu = sum_k m_k delta_{sigma_k}`` with ``sigma_k`` from ``m_k`` to its extremum."""
    _require_l1(m)
    return DiracChain.family(m, ConnectingCarrier(Side(side)))


# -- classification -------------------------------------------------------------------


class Category(str, enum.Enum):
    BOUNDARY = "Boundary"
    SINGULAR = "SingularNonZero"
    NON_SINGULAR = "NonSingular"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class HomologyClassVerdict:
    category: Category
    alpha: Optional[Number] = None
    alpha_error: float = 0.0
    evidence: Tuple[SummabilityVerdict, ...] = ()

    @property
    def nonzero(self) -> bool:
        return self.category in (Category.SINGULAR, Category.NON_SINGULAR)

    @property
    def witness_rules(self) -> Tuple[str, ...]:
        return tuple(v.rule for v in self.evidence)


def classify(x: SeqSpec) -> HomologyClassVerdict:
    """Class of ``x`` in ``H_0(W) = l1 / image(mv_forward)``.

    With ``a_k`` the alternating partial sums and ``alpha = lim a_k``, the
    inverse MV sequence of ``x - (alpha, 0, 0, ...)`` is ``(-1)^k (a_k - alpha)``.
    So ``x`` is a boundary iff ``sum |a_k| < oo``, represents the singular
    class ``alpha`` iff ``sum |a_k - alpha| < oo``, and is non-singular
    otherwise.
    """
    abs_tail = x.abs_tail()
    if abs_tail is not None and summability_decide(abs_tail).divergent:
        raise NotInL1Error(f"{x!r} is not absolutely summable")
    alpha, tail = x.alt_limit(), x.alt_tail()
    if alpha is None or tail is None:
        return HomologyClassVerdict(Category.INCONCLUSIVE)

    singular = summability_decide(tail)
    if singular.divergent:
        return HomologyClassVerdict(Category.NON_SINGULAR, evidence=(singular,))
    if not singular.summable:
        return HomologyClassVerdict(Category.INCONCLUSIVE, evidence=(singular,))

    boundary = summability_decide(DominatedCombo.with_offset([(1, tail)], alpha))
    if boundary.summable:
        return HomologyClassVerdict(Category.BOUNDARY, Fraction(0), 0.0, (singular, boundary))
    if boundary.divergent:
        return HomologyClassVerdict(Category.SINGULAR, alpha.value, alpha.error,
                                    (singular, boundary))
    return HomologyClassVerdict(Category.INCONCLUSIVE, alpha.value, alpha.error,
                                (singular, boundary))


def power_combination(betas: Sequence, coeffs: Sequence) -> SeqSpec:
    """``z = sum_i b_i x^(beta_i)`` with ``x^(beta) = AltDiff(PowerFamilyBase(beta))``."""
    return combine(*((b, AltDiff(PowerFamilyBase(beta))) for beta, b in zip(betas, coeffs)))


def combo_class(betas: Sequence, coeffs: Sequence) -> HomologyClassVerdict:
    """Class of ``sum_i b_i x^(beta_i)`` for increasing exponents in (0, 1).

    The first evidence entry is the verdict on ``sum_k |m_k^z|`` where
    ``m_k^z = (-1)^k sum_i b_i ((k+2)^-beta_i - 1)``: it fails the
    necessary condition unless ``sum b_i = 0``, and otherwise diverges because
    the smallest exponent with a nonzero coefficient dominates.
    """
    if len(betas) != len(coeffs) or not betas:
        raise InvalidInput("betas and coeffs must be non-empty and of equal length")
    try:
        betas = [as_exact(b) for b in betas]
        coeffs = [as_number(c) for c in coeffs]
    except (TypeError, ValueError) as exc:
        raise InvalidInput(str(exc)) from None
    if any(not 0 < b < 1 for b in betas):
        raise InvalidInput("every beta must lie in (0, 1)")
    if any(b1 >= b2 for b1, b2 in zip(betas, betas[1:])):
        raise InvalidInput("betas must be strictly increasing")
    if all(c == 0 for c in coeffs):
        zero = SummabilityVerdict(Summability.SUMMABLE, "zero-combination", None,
                                  "all coefficients vanish")
        return HomologyClassVerdict(Category.BOUNDARY, Fraction(0), 0.0, (zero,))

    m_tail = DominatedCombo(tuple((b, PSeries(beta, 2)) for beta, b in zip(betas, coeffs)),
                            -mixed_sum(coeffs))
    m_verdict = summability_decide(m_tail)
    verdict = classify(power_combination(betas, coeffs))
    return HomologyClassVerdict(verdict.category, verdict.alpha, verdict.alpha_error,
                                (m_verdict,) + verdict.evidence)


# -- truncations and their limit ------------------------------------------------------


def _require_altdiff(base) -> AltDiff:
    if not isinstance(base, AltDiff):
        raise InvalidInput(f"expected an AltDiff sequence, got {base!r}")
    return base


def truncation_seq(base: AltDiff, n: int, variant=Variant.CORRECTED) -> Truncation:
    """``x^n``: head term per ``variant``, ``x_k`` for ``1 <= k <= n``, zero after."""
    return Truncation(_require_altdiff(base), n, Variant(variant))


def limit_head(base: AltDiff, variant=Variant.CORRECTED) -> Estimate:
    """Limit as ``n -> oo`` of the head term of ``truncation_seq(base, n, variant)``."""
    fam: BaseFamily = _require_altdiff(base).base
    n1 = fam.n(1)
    if Variant(variant) is Variant.CORRECTED:
        return Estimate(n1) if is_exact(n1) else Estimate(n1, 4e-16 * abs(n1))
    # -sum_{i>=1} x_i = 2 S + n_1 with S = sum_{i>=1} (-1)^i n_i
    s = fam.alt_limit() - Estimate(Fraction(fam.n(0)))
    n1_est = Estimate(n1) if is_exact(n1) else Estimate(n1, 4e-16 * abs(n1))
    return s.scale(2) + n1_est


def limit_seq(base: AltDiff, variant=Variant.CORRECTED) -> SeqSpec:
    """The weak limit of the truncations: ``base`` with its head replaced."""
    fam = _require_altdiff(base).base
    n0 = Fraction(fam.n(0))
    if Variant(variant) is Variant.CORRECTED:
        # head n_1 replaces x_0 = n_1 - n_0
        delta = n0
    else:
        # head 2 S + n_1 with S = sum_{i>=1} (-1)^i n_i = eta - n_0
        est = fam.alt_limit().scale(2) - Estimate(n0)
        delta = est.value if est.exact else float(est.value)
    return combine((1, base), (delta, FiniteSupport((1,))))


__all__ = [
    "ARC_RADIUS",
    "BOUNDING_BOX",
    "Category",
    "ConnectingCarrier",
    "Family",
    "HomologyClassVerdict",
    "InterleavedCarrier",
    "Interleave",
    "InvalidInput",
    "MVForward",
    "MVInverse",
    "NotInL1Error",
    "PointCarrier",
    "PreconditionFailure",
    "Side",
    "Subsequence",
    "WarsawPoint",
    "classify",
    "combo_class",
    "connecting_chain",
    "connecting_target",
    "interleave",
    "limit_head",
    "limit_seq",
    "m_chain",
    "mv_forward",
    "mv_invert",
    "power_combination",
    "side_coefficients",
    "split",
    "truncation_seq",
    "warsaw_point",
    "x_chain",
]
