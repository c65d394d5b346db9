"""Closed-form descriptions of real sequences ``x_0, x_1, ...``.

The variants mirror what the homology calculations need: finitely supported
rational sequences, the two decreasing null families (power and geometric),
alternating differences of those families, truncations, and linear
combinations.  Derived nodes produced by the Mayer-Vietoris operators live in
:mod:`warsaw_homology.warsaw` but share this interface.

Every node can

* evaluate a term (exactly when the description allows it),
* evaluate a block of terms as float64,
* report the limit of its alternating partial sums ``a_k = sum_{i<=k} (-1)^i x_i``
  and a symbolic description of ``a_k - lim a``,
* describe itself as a tail so :func:`~warsaw_homology.tails.summability_decide`
  can certify membership in l1.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional, Tuple

import mpmath
import numpy as np

from .arith import (
    EPS,
    Estimate,
    Number,
    as_exact,
    as_number,
    exact_sum,
    float_error,
    is_exact,
    mixed_sum,
)
from .tails import (
    AbsSummable,
    DominatedCombo,
    FiniteTail,
    Geometric,
    PSeries,
    TailSpec,
    Telescoping,
    mass_upper,
    summability_decide,
)

DEFAULT_MAX_TERMS = 10**6


def _signs(n: int) -> np.ndarray:
    s = np.ones(n)
    s[1::2] = -1.0
    return s


class SeqSpec:
    """Base class for sequence descriptions.  Instances are immutable."""

    # -- evaluation --------------------------------------------------------

    def term(self, k: int) -> Number:
        raise NotImplementedError

    @property
    def exact(self) -> bool:
        return False

    @property
    def support_length(self) -> Optional[int]:
        """Index past the last possibly-nonzero term, None if unbounded."""
        return None

    def terms(self, n: int) -> np.ndarray:
        return np.array([float(self.term(k)) for k in range(n)], dtype=float)

    def alt_prefix(self, k: int) -> Number:
        parts = [self.term(i) if i % 2 == 0 else -self.term(i) for i in range(k + 1)]
        return mixed_sum(parts)

    # -- symbolic descriptions --------------------------------------------

    def abs_tail(self) -> Optional[TailSpec]:
        """Tail whose terms are ``x_k`` themselves (None: no description)."""
        return None

    def alt_tail(self) -> Optional[TailSpec]:
        """Tail describing ``a_k - lim a`` (None: no description)."""
        return None

    def alt_limit(self) -> Optional[Estimate]:
        """Limit of the alternating partial sums.

        The default sums numerically to the configured cap and bounds the
        error by the l1 mass of the remaining terms.
        """
        tail = self.abs_tail()
        if tail is None or not summability_decide(tail).summable:
            return None
        n = max_terms()
        if self.support_length is not None:
            n = min(n, self.support_length)
        values = self.terms(n) * _signs(n)
        total = math.fsum(values)
        error = mass_upper(tail, n) + float_error(total, n)
        return Estimate(total, error, "numeric")

    def alt_tail_terms(self, n: int) -> np.ndarray:
        """float64 values of ``a_k - lim a`` for ``k < n``."""
        limit = self.alt_limit()
        if limit is None:
            raise ValueError(f"{self!r} has no alternating limit")
        prefix = np.cumsum(self.terms(n) * _signs(n))
        return prefix - float(limit.value)

    def l1_norm(self) -> Optional[Estimate]:
        tail = self.abs_tail()
        if tail is None or not summability_decide(tail).summable:
            return None
        n = max_terms()
        if self.support_length is not None:
            n = min(n, self.support_length)
        total = math.fsum(np.abs(self.terms(n)))
        return Estimate(total, mass_upper(tail, n) + float_error(total, n), "numeric")

    def total(self) -> Optional[Estimate]:
        """``sum_k x_k``."""
        tail = self.abs_tail()
        if tail is None or not summability_decide(tail).summable:
            return None
        n = max_terms()
        if self.support_length is not None:
            n = min(n, self.support_length)
        total = math.fsum(self.terms(n))
        return Estimate(total, mass_upper(tail, n) + float_error(total, n), "numeric")

    # -- linear structure --------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, SeqSpec):
            return NotImplemented
        return combine((1, self), (1, other))

    def __sub__(self, other):
        if not isinstance(other, SeqSpec):
            return NotImplemented
        return combine((1, self), (-1, other))

    def __neg__(self):
        return combine((-1, self))

    def __rmul__(self, c):
        if isinstance(c, SeqSpec):
            return NotImplemented
        return combine((c, self))

    __mul__ = __rmul__


def max_terms() -> int:
    """Cap on numerically evaluated terms (``MHL_MAX_TERMS``, default 10**6)."""
    import os

    raw = os.environ.get("MHL_MAX_TERMS")
    if not raw:
        return DEFAULT_MAX_TERMS
    value = int(raw)
    if value < 1:
        raise ValueError("MHL_MAX_TERMS must be positive")
    return value


# -- finite support ------------------------------------------------------------


@dataclass(frozen=True)
class FiniteSupport(SeqSpec):
    """Finitely many exact rational terms; trailing zeros are dropped."""

    values: Tuple[Fraction, ...] = ()

    def __post_init__(self):
        vals = [as_exact(v) for v in self.values]
        while vals and vals[-1] == 0:
            vals.pop()
        object.__setattr__(self, "values", tuple(vals))

    def __repr__(self):
        return f"FiniteSupport([{', '.join(str(v) for v in self.values)}])"

    @property
    def exact(self) -> bool:
        return True

    @property
    def support_length(self) -> int:
        return len(self.values)

    def term(self, k: int) -> Fraction:
        _check_index(k)
        return self.values[k] if k < len(self.values) else Fraction(0)

    def terms(self, n: int) -> np.ndarray:
        out = np.zeros(n)
        m = min(n, len(self.values))
        out[:m] = [float(v) for v in self.values[:m]]
        return out

    @cached_property
    def _prefixes(self) -> Tuple[Fraction, ...]:
        acc, out = Fraction(0), []
        for i, v in enumerate(self.values):
            acc += v if i % 2 == 0 else -v
            out.append(acc)
        return tuple(out)

    def alt_prefix(self, k: int) -> Fraction:
        _check_index(k)
        if not self.values:
            return Fraction(0)
        return self._prefixes[min(k, len(self.values) - 1)]

    def alt_limit(self) -> Estimate:
        return Estimate(self._prefixes[-1] if self.values else Fraction(0))

    def alt_tail(self) -> FiniteTail:
        limit = self.alt_limit().value
        mass = exact_sum(abs(p - limit) for p in self._prefixes)
        return FiniteTail(max(len(self.values) - 1, 0), float(mass))

    def alt_tail_terms(self, n: int) -> np.ndarray:
        limit = self.alt_limit().value
        out = np.zeros(n)
        m = min(n, len(self.values))
        out[:m] = [float(p - limit) for p in self._prefixes[:m]]
        return out

    def abs_tail(self) -> FiniteTail:
        return FiniteTail(len(self.values), float(self.l1_norm().value))

    def l1_norm(self) -> Estimate:
        return Estimate(exact_sum(abs(v) for v in self.values))

    def total(self) -> Estimate:
        return Estimate(exact_sum(self.values))


def _check_index(k: int) -> None:
    if k < 0:
        raise ValueError(f"index must be non-negative, got {k}")


# -- decreasing base families ----------------------------------------------------


class BaseFamily(SeqSpec):
    """Positive, strictly decreasing null sequence ``n_0 = 1 > n_1 > ... -> 0``."""

    def n(self, k: int) -> Number:
        raise NotImplementedError

    def n_array(self, ks: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def profile(self) -> TailSpec:
        """The family itself as a tail (``sum n_k`` decides singularity)."""
        raise NotImplementedError

    def shifted_profile(self) -> TailSpec:
        """Tail with terms ``n_{k+1}``."""
        raise NotImplementedError

    def alternating_tail(self, start: int) -> float:
        """``sum_{j>=0} (-1)^j n_{start+j}``."""
        raise NotImplementedError

    def term(self, k: int) -> Number:
        _check_index(k)
        return self.n(k)

    def terms(self, n: int) -> np.ndarray:
        return self.n_array(np.arange(n))

    def abs_tail(self) -> TailSpec:
        return self.profile()


@dataclass(frozen=True)
class PowerFamilyBase(BaseFamily):
    """``n_k = 1 / (k + 1) ** beta``."""

    beta: Fraction

    def __post_init__(self):
        object.__setattr__(self, "beta", as_exact(self.beta))
        if self.beta <= 0:
            raise ValueError(f"beta must be positive, got {self.beta}")

    def __repr__(self):
        return f"PowerFamilyBase({self.beta})"

    @property
    def exact(self) -> bool:
        return self.beta.denominator == 1

    def n(self, k: int) -> Number:
        if k == 0:
            return Fraction(1)
        if self.exact:
            return Fraction(1, (k + 1) ** self.beta.numerator)
        return (k + 1) ** -float(self.beta)

    def n_array(self, ks: np.ndarray) -> np.ndarray:
        return (np.asarray(ks, dtype=float) + 1.0) ** -float(self.beta)

    def profile(self) -> PSeries:
        return PSeries(self.beta, 1)

    def shifted_profile(self) -> PSeries:
        return PSeries(self.beta, 2)

    def alternating_tail(self, start: int) -> float:
        return float(mpmath.lerchphi(-1, _mp(self.beta), start + 1))

    def eta(self) -> float:
        """Dirichlet eta: ``sum_{k>=0} (-1)^k n_k``."""
        return float(mpmath.altzeta(_mp(self.beta)))

    def alt_limit(self) -> Estimate:
        value = self.eta()
        return Estimate(value, float_error(value, 8))

    def alt_tail(self) -> Optional[TailSpec]:
        # |a_k - eta| <= n_{k+1}; only usable when that envelope is summable.
        if self.beta <= 1:
            return None
        envelope = self.shifted_profile()
        return AbsSummable(mass_upper(envelope), "alternating-remainder", envelope)

    def alt_tail_terms(self, n: int) -> np.ndarray:
        if self.beta <= 1:
            return super().alt_tail_terms(n)
        from scipy.special import zeta

        # a_k - eta = sum_{j >= k+2} (-1)^j j^-beta, split over even/odd j.
        b = float(self.beta)
        m = np.arange(n, dtype=float) + 2.0
        sign = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
        return sign * 2.0 ** -b * (zeta(b, m / 2.0) - zeta(b, (m + 1.0) / 2.0))

    def l1_norm(self) -> Optional[Estimate]:
        if self.beta <= 1:
            return None
        value = float(mpmath.zeta(_mp(self.beta)))
        return Estimate(value, float_error(value, 8))

    total = l1_norm


@dataclass(frozen=True)
class GeometricBase(BaseFamily):
    """``n_k = ratio ** k`` with ``0 < ratio < 1``."""

    ratio: Fraction

    def __post_init__(self):
        object.__setattr__(self, "ratio", as_exact(self.ratio))
        if not 0 < self.ratio < 1:
            raise ValueError(f"ratio must lie in (0, 1), got {self.ratio}")

    def __repr__(self):
        return f"GeometricBase({self.ratio})"

    @property
    def exact(self) -> bool:
        return True

    def n(self, k: int) -> Fraction:
        return self.ratio**k

    def n_array(self, ks: np.ndarray) -> np.ndarray:
        return float(self.ratio) ** np.asarray(ks, dtype=float)

    def profile(self) -> Geometric:
        return Geometric(1, self.ratio)

    def shifted_profile(self) -> Geometric:
        return Geometric(self.ratio, self.ratio)

    def alternating_tail(self, start: int) -> float:
        return float(self.ratio**start / (1 + self.ratio))

    def alt_prefix(self, k: int) -> Fraction:
        r = self.ratio
        return (1 - (-r) ** (k + 1)) / (1 + r)

    def alt_limit(self) -> Estimate:
        return Estimate(1 / (1 + self.ratio))

    def alt_tail(self) -> Geometric:
        r = self.ratio
        return Geometric(r / (1 + r), -r)

    def alt_tail_terms(self, n: int) -> np.ndarray:
        r = float(self.ratio)
        return r / (1 + r) * (-r) ** np.arange(n, dtype=float)

    def l1_norm(self) -> Estimate:
        return Estimate(1 / (1 - self.ratio))

    total = l1_norm


def _mp(value: Fraction):
    return mpmath.mpf(value.numerator) / value.denominator


# -- alternating differences -------------------------------------------------------


@dataclass(frozen=True)
class AltDiff(SeqSpec):
    """``x_k = (-1)^k (n_{k+1} - n_k)`` for a decreasing base family ``n``."""

    base: BaseFamily

    def __post_init__(self):
        if not isinstance(self.base, BaseFamily):
            raise TypeError("AltDiff needs a decreasing base family "
                            "(PowerFamilyBase or GeometricBase)")

    @property
    def exact(self) -> bool:
        return self.base.exact

    def term(self, k: int) -> Number:
        _check_index(k)
        d = self.base.n(k + 1) - self.base.n(k)
        return d if k % 2 == 0 else -d

    def terms(self, n: int) -> np.ndarray:
        nk = self.base.n_array(np.arange(n + 1))
        return _signs(n) * (nk[1:] - nk[:-1])

    def alt_prefix(self, k: int) -> Number:
        _check_index(k)
        return self.base.n(k + 1) - self.base.n(0)

    def alt_limit(self) -> Estimate:
        return Estimate(-Fraction(self.base.n(0)))

    def alt_tail(self) -> TailSpec:
        return self.base.shifted_profile()

    def alt_tail_terms(self, n: int) -> np.ndarray:
        return self.base.n_array(np.arange(1, n + 1))

    def abs_tail(self) -> Telescoping:
        return Telescoping(self.base.profile())

    def l1_norm(self) -> Estimate:
        return Estimate(Fraction(self.base.n(0)))

    def total(self) -> Estimate:
        # sum (-1)^k (n_{k+1} - n_k) = -sum (-1)^k n_k - (sum (-1)^k n_k - n_0)
        return Estimate(Fraction(self.base.n(0))) - self.base.alt_limit().scale(2)


# -- truncations --------------------------------------------------------------------


class Variant(str, enum.Enum):
    """Head term convention for truncations.

    ``PRINTED``: ``x_0 = -sum_{i=1}^n x_i``.
    ``CORRECTED``: ``x_0 = -sum_{i=1}^n (-1)^i x_i``, which makes the total
    alternating sum vanish.
    """

    PRINTED = "printed"
    CORRECTED = "corrected"


@dataclass(frozen=True)
class Truncation(SeqSpec):
    """Terms ``1..n`` of ``of``, a recomputed head term, zeros after ``n``."""

    of: SeqSpec
    n: int
    variant: Variant = Variant.CORRECTED

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise ValueError(f"truncation length must be a non-negative integer, got {self.n}")
        object.__setattr__(self, "variant", Variant(self.variant))

    @property
    def exact(self) -> bool:
        return self.of.exact

    @property
    def support_length(self) -> int:
        return self.n + 1

    @cached_property
    def _inner_alt(self) -> Number:
        """``sum_{i=1}^n (-1)^i x_i``."""
        if self.n == 0:
            return Fraction(0)
        return self.of.alt_prefix(self.n) - self.of.term(0)

    @cached_property
    def head(self) -> Number:
        if self.variant is Variant.CORRECTED:
            return -self._inner_alt
        if self.of.exact:
            return -exact_sum(self.of.term(i) for i in range(1, self.n + 1))
        return -math.fsum(self.of.terms(self.n + 1)[1:])

    def term(self, k: int) -> Number:
        _check_index(k)
        if k == 0:
            return self.head
        return self.of.term(k) if k <= self.n else Fraction(0)

    def terms(self, n: int) -> np.ndarray:
        out = np.zeros(n)
        m = min(n, self.n + 1)
        if m:
            out[:m] = self.of.terms(m)
            out[0] = float(self.head)
        return out

    def alt_limit(self) -> Estimate:
        if self.variant is Variant.CORRECTED:
            return Estimate(Fraction(0))
        value = self.head + self._inner_alt
        if is_exact(value):
            return Estimate(Fraction(value))
        value = float(value)
        return Estimate(value, float_error(abs(float(self.head)) + abs(value), self.n + 2))

    def alt_tail(self) -> FiniteTail:
        mass = math.fsum(np.abs(self.alt_tail_terms(self.n)))
        return FiniteTail(self.n, mass * (1 + 1e-12))

    def alt_tail_terms(self, n: int) -> np.ndarray:
        m = min(n, self.n + 1)
        out = np.zeros(n)
        if m:
            out[:m] = np.cumsum(self.terms(m) * _signs(m)) - float(self.alt_limit().value)
        return out

    def abs_tail(self) -> FiniteTail:
        mass = math.fsum(np.abs(self.terms(self.n + 1)))
        return FiniteTail(self.n + 1, mass * (1 + 1e-12))

    def to_finite(self) -> FiniteSupport:
        if not self.exact:
            raise ValueError("truncation of an inexact sequence has no rational form")
        return FiniteSupport(tuple(self.term(k) for k in range(self.n + 1)))


# -- linear combinations ---------------------------------------------------------------


@dataclass(frozen=True)
class Combo(SeqSpec):
    """``x = sum_j coeff_j * spec_j``; use :func:`combine` to build normalised ones."""

    terms_: Tuple[Tuple[Number, SeqSpec], ...]

    def __post_init__(self):
        object.__setattr__(self, "terms_", tuple((as_number(c), s) for c, s in self.terms_))

    def __repr__(self):
        return "Combo([" + ", ".join(f"({c}, {s!r})" for c, s in self.terms_) + "])"

    @property
    def exact(self) -> bool:
        return all(is_exact(c) and s.exact for c, s in self.terms_)

    @property
    def support_length(self) -> Optional[int]:
        lengths = [s.support_length for _, s in self.terms_]
        if any(n is None for n in lengths):
            return None
        return max(lengths, default=0)

    def term(self, k: int) -> Number:
        return mixed_sum(c * s.term(k) for c, s in self.terms_)

    def terms(self, n: int) -> np.ndarray:
        out = np.zeros(n)
        for c, s in self.terms_:
            out += float(c) * s.terms(n)
        return out

    def alt_prefix(self, k: int) -> Number:
        return mixed_sum(c * s.alt_prefix(k) for c, s in self.terms_)

    def _parts(self, method):
        parts = [(c, getattr(s, method)()) for c, s in self.terms_]
        if any(p is None for _, p in parts):
            return None
        return parts

    def alt_limit(self) -> Optional[Estimate]:
        parts = self._parts("alt_limit")
        if parts is None:
            return super().alt_limit()
        out = Estimate(Fraction(0))
        for c, est in parts:
            out = out + est.scale(c)
        return out

    def alt_tail(self) -> Optional[DominatedCombo]:
        parts = self._parts("alt_tail")
        return None if parts is None else DominatedCombo(tuple(parts))

    def alt_tail_terms(self, n: int) -> np.ndarray:
        out = np.zeros(n)
        for c, s in self.terms_:
            out += float(c) * s.alt_tail_terms(n)
        return out

    def abs_tail(self) -> Optional[DominatedCombo]:
        parts = self._parts("abs_tail")
        return None if parts is None else DominatedCombo(tuple(parts))

    def total(self) -> Optional[Estimate]:
        parts = self._parts("total")
        if parts is None:
            return super().total()
        out = Estimate(Fraction(0))
        for c, est in parts:
            out = out + est.scale(c)
        return out


def combine(*pairs) -> SeqSpec:
    """Normalised linear combination of ``(coeff, spec)`` pairs.

    Nested combos are flattened, equal specs merged, exactly-weighted finite
    supports folded into a single :class:`FiniteSupport`, and zero
    coefficients dropped.
    """
    merged: dict = {}
    order = []

    def add(c, spec):
        c = as_number(c)
        if isinstance(spec, Combo):
            for c2, s2 in spec.terms_:
                add(c * c2, s2)
            return
        if spec not in merged:
            merged[spec] = Fraction(0)
            order.append(spec)
        merged[spec] = merged[spec] + c

    for c, spec in pairs:
        add(c, spec)

    finite = []
    out = []
    for spec in order:
        c = merged[spec]
        if c == 0:
            continue
        if isinstance(spec, FiniteSupport) and is_exact(c):
            finite.append((c, spec))
        else:
            out.append((c, spec))
    if finite:
        length = max(len(s.values) for _, s in finite)
        folded = FiniteSupport(tuple(
            exact_sum(c * s.term(k) for c, s in finite) for k in range(length)))
        if folded.values:
            out.insert(0, (Fraction(1), folded))
    if not out:
        return FiniteSupport(())
    if len(out) == 1 and out[0][0] == 1:
        return out[0][1]
    return Combo(tuple(out))


# -- module-level operations --------------------------------------------------------------


def eval_term(spec: SeqSpec, k: int) -> Number:
    """``x_k``; a Fraction when the spec is exactly representable."""
    return spec.term(k)


def alt_partial_sum(spec: SeqSpec, k: int) -> Number:
    """``a_k = sum_{i=0}^k (-1)^i x_i``.  The inverse MV sequence is ``(-1)^k a_k``."""
    _check_index(k)
    return spec.alt_prefix(k)


def limit_alt_sum(spec: SeqSpec) -> Estimate:
    """``sum_{i>=0} (-1)^i x_i`` with an error bound; ``numeric_only`` flags a non-closed form."""
    limit = spec.alt_limit()
    if limit is None:
        raise ValueError(f"{spec!r} is not known to be absolutely summable")
    return limit


def truncate(spec: SeqSpec, n: int, variant=Variant.CORRECTED) -> Truncation:
    return Truncation(spec, n, Variant(variant))


__all__ = [
    "AltDiff",
    "BaseFamily",
    "Combo",
    "DEFAULT_MAX_TERMS",
    "FiniteSupport",
    "GeometricBase",
    "PowerFamilyBase",
    "SeqSpec",
    "Truncation",
    "Variant",
    "alt_partial_sum",
    "combine",
    "eval_term",
    "limit_alt_sum",
    "max_terms",
    "truncate",
]
