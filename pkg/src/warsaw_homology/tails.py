"""Symbolic tail descriptions and the summability decision procedure.

A tail describes a *signed* real sequence ``t_0, t_1, ...``; the question
answered by :func:`summability_decide` is whether ``sum |t_k|`` is finite.
Only the families needed for the Warsaw Circle calculations are supported:
p-series, geometric sequences, finitely supported sequences, telescoping
differences of a decreasing family, and linear combinations of those with a
constant offset.

Every verdict carries the rule that produced it, and the bound functions
(:func:`mass_lower`, :func:`mass_upper`) give the integral-test envelopes the
numeric traces are checked against.
"""

from __future__ import annotations

import enum
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Tuple, Union

from .arith import Estimate, Number, as_exact, as_number, is_exact, mixed_sum

INF = math.inf


class TailSpec:
    """Base class of the tail variants."""

    def value(self, k: int) -> float:
        raise NotImplementedError


@dataclass(frozen=True)
class PSeries(TailSpec):
    """Terms ``1 / (k + shift) ** beta``."""

    beta: Fraction
    shift: int = 1

    def __post_init__(self):
        object.__setattr__(self, "beta", as_exact(self.beta))
        if self.beta <= 0:
            raise ValueError(f"p-series exponent must be positive, got {self.beta}")
        if int(self.shift) != self.shift or self.shift < 1:
            raise ValueError(f"shift must be an integer >= 1, got {self.shift}")

    def value(self, k: int) -> float:
        return (k + self.shift) ** -float(self.beta)


@dataclass(frozen=True)
class Geometric(TailSpec):
    """Terms ``c * ratio ** k``."""

    c: Number
    ratio: Number

    def __post_init__(self):
        object.__setattr__(self, "c", as_number(self.c))
        object.__setattr__(self, "ratio", as_number(self.ratio))

    def value(self, k: int) -> float:
        return float(self.c) * float(self.ratio) ** k


@dataclass(frozen=True)
class FiniteTail(TailSpec):
    """Terms vanishing for ``k >= length``; ``l1`` is (a bound on) their total mass."""

    length: int
    l1: float = 0.0


@dataclass(frozen=True)
class Telescoping(TailSpec):
    """``|t_k| = n_k - n_{k+1}`` for the decreasing null family ``profile``.

    The sign pattern of ``t`` is not recorded; only the masses are.
    """

    profile: Union[PSeries, Geometric]

    def __post_init__(self):
        p = self.profile
        if isinstance(p, Geometric) and not (0 < float(p.ratio) < 1 and float(p.c) > 0):
            raise ValueError("telescoping profile must decrease to zero")

    def value(self, k: int) -> float:
        return self.profile.value(k) - self.profile.value(k + 1)


@dataclass(frozen=True)
class AbsSummable(TailSpec):
    """A tail known to be absolutely summable with total mass at most ``l1``.

    ``envelope``, when given, dominates the terms and sharpens window bounds.
    """

    l1: float
    rule: str = "absolute-summability"
    envelope: Optional[TailSpec] = None


@dataclass(frozen=True)
class DominatedCombo(TailSpec):
    """``t_k = offset + sum_j coeff_j * leaf_j(k)``."""

    terms: Tuple[Tuple[Number, TailSpec], ...]
    offset: Number = Fraction(0)
    offset_error: float = 0.0

    def __post_init__(self):
        object.__setattr__(
            self, "terms", tuple((as_number(c), t) for c, t in self.terms)
        )
        object.__setattr__(self, "offset", as_number(self.offset))

    @classmethod
    def with_offset(cls, terms, offset: Estimate) -> "DominatedCombo":
        return cls(tuple(terms), offset.value, offset.error)


class Summability(str, enum.Enum):
    SUMMABLE = "Summable"
    NOT_SUMMABLE = "NotSummable"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class SummabilityVerdict:
    status: Summability
    rule: str
    parameter: Optional[Number] = None
    detail: str = ""
    tail: Optional[TailSpec] = field(default=None, compare=False, repr=False)

    @property
    def summable(self) -> bool:
        return self.status is Summability.SUMMABLE

    @property
    def divergent(self) -> bool:
        return self.status is Summability.NOT_SUMMABLE

    def lower_bound(self, n_terms: int) -> float:
        """Lower bound for ``sum_{k < n_terms} |t_k|`` implied by the witness."""
        if self.tail is None:
            return 0.0
        return mass_lower(self.tail, n_terms)

    def tail_bound(self, start: int, stop: float = INF) -> float:
        """Upper bound for ``sum_{start <= k < stop} |t_k|``."""
        if self.tail is None:
            return INF
        return mass_upper(self.tail, start, stop)


def _verdict(status, rule, parameter=None, detail="", tail=None):
    return SummabilityVerdict(Summability(status), rule, parameter, detail, tail)


# -- decision procedure -----------------------------------------------------


def summability_decide(tail: TailSpec) -> SummabilityVerdict:
    """Decide absolute summability of a symbolic tail."""
    if isinstance(tail, PSeries):
        if tail.beta > 1:
            return _verdict("Summable", "p-series", tail.beta,
                            f"sum 1/(k+{tail.shift})^{tail.beta} converges (exponent > 1)", tail)
        return _verdict("NotSummable", "p-series", tail.beta,
                        f"integral test: sum 1/(k+{tail.shift})^{tail.beta} diverges "
                        "(exponent <= 1)", tail)
    if isinstance(tail, Geometric):
        if tail.c == 0 or abs(tail.ratio) < 1:
            return _verdict("Summable", "geometric-ratio", tail.ratio,
                            "|ratio| < 1", tail)
        return _verdict("NotSummable", "necessary-condition", tail.ratio,
                        "terms do not tend to zero (|ratio| >= 1)", tail)
    if isinstance(tail, FiniteTail):
        return _verdict("Summable", "finite-support", tail.length,
                        "finitely many nonzero terms", tail)
    if isinstance(tail, Telescoping):
        return _verdict("Summable", "telescoping", None,
                        "partial sums of |t_k| equal n_0 - n_(N)", tail)
    if isinstance(tail, AbsSummable):
        return _verdict("Summable", tail.rule, None, f"total mass <= {tail.l1:.6g}", tail)
    if isinstance(tail, DominatedCombo):
        return _decide_combo(tail)
    return _verdict("Inconclusive", "no-rule", None,
                    f"no rule for {type(tail).__name__}", tail)


def _flatten(tail: DominatedCombo, scale: Number = Fraction(1)):
    offset = Estimate(tail.offset, tail.offset_error).scale(scale)
    leaves = []
    for c, leaf in tail.terms:
        if isinstance(leaf, DominatedCombo):
            inner_offset, inner = _flatten(leaf, scale * c)
            offset = offset + inner_offset
            leaves.extend(inner)
        else:
            leaves.append((scale * c, leaf))
    return offset, leaves


def _groups(leaves):
    """Split combo leaves into p-series groups (by exponent) and the rest."""
    groups = defaultdict(list)
    rest = []
    for c, leaf in leaves:
        if c == 0:
            continue
        if isinstance(leaf, PSeries):
            groups[leaf.beta].append((c, leaf.shift))
        else:
            rest.append((c, leaf))
    return groups, rest


def _decide_combo(tail: DominatedCombo) -> SummabilityVerdict:
    offset, leaves = _flatten(tail)
    zero = offset.is_zero()
    if zero is False:
        return _verdict("NotSummable", "necessary-condition", offset.value,
                        "terms tend to a nonzero constant", tail)
    if zero is None:
        return _verdict("Inconclusive", "no-rule", offset.value,
                        "constant offset indistinguishable from zero", tail)

    groups, rest = _groups(leaves)
    for c, leaf in rest:
        v = summability_decide(leaf)
        if not v.summable:
            return _verdict("Inconclusive", "no-rule", None,
                            f"non-summable component outside the p-series families: {v.rule}",
                            tail)

    nets = {beta: mixed_sum(c for c, _ in members) for beta, members in groups.items()}
    for beta in sorted(nets):
        if beta > 1:
            break
        if nets[beta] != 0:
            sign = "+" if nets[beta] > 0 else "-"
            return _verdict("NotSummable", "dominance", beta,
                            f"the 1/k^({beta}) term (net coefficient {sign}) dominates and "
                            "its series diverges by the integral test", tail)
    if any(beta <= 1 for beta in nets):
        return _verdict("Summable", "cancellation", None,
                        "slowly decaying terms cancel; remainder is O(k^-(beta+1))", tail)
    return _verdict("Summable", "termwise", None, "every component is summable", tail)


# -- integral-test envelopes ------------------------------------------------


def _power_integral(beta: float, a: float, b: float) -> float:
    """int_a^b x^-beta dx for 0 < a <= b (b may be inf)."""
    if b <= a:
        return 0.0
    if beta == 1:
        return INF if b == INF else math.log(b / a)
    if b == INF:
        return a ** (1 - beta) / (beta - 1) if beta > 1 else INF
    return (b ** (1 - beta) - a ** (1 - beta)) / (1 - beta)


def _pseries_upper(beta: float, shift: int, start: int, stop: float) -> float:
    if stop <= start:
        return 0.0
    first = (start + shift) ** -beta
    return first + _power_integral(beta, start + shift, stop - 1 + shift)


def _pseries_lower(beta: float, shift: int, start: int, stop: float) -> float:
    if stop <= start:
        return 0.0
    return _power_integral(beta, start + shift, stop + shift)


def _shift_correction(beta: float, s: int, s_ref: int, start: int) -> float:
    """Bound on sum_{k>=start} |(k+s)^-beta - (k+s_ref)^-beta| (telescopes)."""
    lo, hi = sorted((s, s_ref))
    return math.fsum((start + m) ** -beta for m in range(lo, hi))


_SLACK = 1e-12


def mass_upper(tail: TailSpec, start: int = 0, stop: float = INF) -> float:
    """Upper bound for ``sum_{start <= k < stop} |t_k|``."""
    if stop <= start:
        return 0.0
    if isinstance(tail, PSeries):
        return _pseries_upper(float(tail.beta), tail.shift, start, stop)
    if isinstance(tail, Geometric):
        c, r = abs(float(tail.c)), abs(float(tail.ratio))
        if c == 0:
            return 0.0
        if r >= 1:
            return INF if stop == INF else c * (stop - start) * max(r, 1) ** stop
        hi = 0.0 if stop == INF else r ** stop
        return c * (r ** start - hi) / (1 - r) * (1 + _SLACK)
    if isinstance(tail, FiniteTail):
        return tail.l1 if start < tail.length else 0.0
    if isinstance(tail, Telescoping):
        p = tail.profile
        hi = 0.0 if stop == INF else p.value(int(stop))
        return (p.value(start) - hi) * (1 + _SLACK)
    if isinstance(tail, AbsSummable):
        if tail.envelope is None:
            return tail.l1
        return min(tail.l1, mass_upper(tail.envelope, start, stop))
    if isinstance(tail, DominatedCombo):
        offset, leaves = _flatten(tail)
        total = (abs(float(offset.value)) + offset.error) * (stop - start) if (
            offset.value != 0 or offset.error) else 0.0
        groups, rest = _groups(leaves)
        for beta, members in groups.items():
            b = float(beta)
            s_ref = max(s for _, s in members)
            net = abs(float(mixed_sum(c for c, _ in members)))
            if net:
                total += net * _pseries_upper(b, s_ref, start, stop)
            total += math.fsum(abs(float(c)) * _shift_correction(b, s, s_ref, start)
                               for c, s in members)
        total += math.fsum(abs(float(c)) * mass_upper(leaf, start, stop) for c, leaf in rest)
        return total
    return INF


def mass_lower(tail: TailSpec, n_terms: int) -> float:
    """Lower bound for ``sum_{k < n_terms} |t_k|`` (integral test where it applies)."""
    if n_terms <= 0:
        return 0.0
    if isinstance(tail, PSeries):
        return _pseries_lower(float(tail.beta), tail.shift, 0, n_terms)
    if isinstance(tail, Geometric):
        c, r = abs(float(tail.c)), abs(float(tail.ratio))
        if r == 1:
            return c * n_terms
        return c * (1 - r ** n_terms) / (1 - r) * (1 - _SLACK)
    if isinstance(tail, FiniteTail):
        return tail.l1 * (1 - _SLACK) if n_terms >= tail.length else 0.0
    if isinstance(tail, Telescoping):
        p = tail.profile
        return (p.value(0) - p.value(n_terms)) * (1 - _SLACK)
    if isinstance(tail, DominatedCombo):
        return max(_combo_lower(tail, n_terms), 0.0)
    return 0.0


def _combo_lower(tail: DominatedCombo, n_terms: int) -> float:
    offset, leaves = _flatten(tail)
    groups, rest = _groups(leaves)
    others = math.fsum(abs(float(c)) * mass_upper(leaf, 0, n_terms) for c, leaf in rest)
    if offset.is_zero() is False:
        pseries = math.fsum(abs(float(c)) * _pseries_upper(float(beta), s, 0, n_terms)
                            for beta, members in groups.items() for c, s in members)
        return (abs(float(offset.value)) - offset.error) * n_terms - pseries - others

    nets = {beta: mixed_sum(c for c, _ in members) for beta, members in groups.items()}
    dominant = next((beta for beta in sorted(nets) if nets[beta] != 0), None)
    if dominant is None:
        return 0.0
    bound = -others
    for beta, members in groups.items():
        b = float(beta)
        s_ref = max(s for _, s in members)
        net = abs(float(nets[beta]))
        corr = math.fsum(abs(float(c)) * _shift_correction(b, s, s_ref, 0) for c, s in members)
        if beta == dominant:
            bound += net * _pseries_lower(b, s_ref, 0, n_terms) - corr
        else:
            bound -= net * _pseries_upper(b, s_ref, 0, n_terms) + corr
    return bound


__all__ = [
    "AbsSummable",
    "DominatedCombo",
    "FiniteTail",
    "Geometric",
    "PSeries",
    "Summability",
    "SummabilityVerdict",
    "TailSpec",
    "Telescoping",
    "mass_lower",
    "mass_upper",
    "summability_decide",
]
