"""Exact/float number helpers shared by the sequence and chain modules.

Exact values are :class:`fractions.Fraction`; anything irrational is a
``float``.  An :class:`Estimate` pairs a value with an absolute error bound so
that zero tests on inexact quantities can report "undecided" instead of
guessing.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union

Number = Union[Fraction, float]

EPS = sys.float_info.epsilon


def as_exact(value) -> Fraction:
    """Coerce ``value`` to a Fraction.

    Floats are read through their shortest decimal repr, so ``0.1`` becomes
    ``1/10`` rather than the binary expansion.  Strings may be ``"p/q"`` or a
    decimal literal.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite value {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as a rational number")


def as_number(value) -> Number:
    """Keep Fractions and ints exact, leave floats as floats."""
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    return float(value)


def is_exact(value) -> bool:
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)


def exact_sum(values: Iterable[Fraction]) -> Fraction:
    # Pairwise reduction keeps intermediate denominators balanced; a left fold
    # over harmonic-type terms is quadratically slower.
    items = [Fraction(v) for v in values]
    if not items:
        return Fraction(0)
    while len(items) > 1:
        paired = [items[i] + items[i + 1] for i in range(0, len(items) - 1, 2)]
        if len(items) % 2:
            paired.append(items[-1])
        items = paired
    return items[0]


def mixed_sum(values: Iterable[Number]) -> Number:
    """Exact sum when every value is exact, correctly rounded fsum otherwise."""
    values = list(values)
    if all(is_exact(v) for v in values):
        return exact_sum(values)
    return math.fsum(float(v) for v in values)


def format_number(value: Number) -> str:
    """Render a number for reports: ``"p/q"`` for exact values."""
    if is_exact(value):
        value = Fraction(value)
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    return format(float(value), ".15g")


@dataclass(frozen=True)
class Estimate:
    """A value together with an absolute error bound.

    ``error == 0`` with a Fraction value means the value is exact.
    ``method`` records how it was obtained ("closed-form", "numeric", ...).
    """

    value: Number
    error: float = 0.0
    method: str = "closed-form"

    @property
    def exact(self) -> bool:
        return self.error == 0 and is_exact(self.value)

    @property
    def numeric_only(self) -> bool:
        return self.method == "numeric"

    def is_zero(self) -> Optional[bool]:
        """True/False when decidable, None when the error bound straddles 0."""
        if self.exact:
            return self.value == 0
        if abs(float(self.value)) > self.error:
            return False
        return None

    def __float__(self) -> float:
        return float(self.value)

    def __add__(self, other: "Estimate") -> "Estimate":
        value = self.value + other.value
        error = self.error + other.error
        if not is_exact(value):
            value = float(value)
            error += EPS * abs(value)
        return Estimate(value, error, _merge_method(self.method, other.method))

    def __neg__(self) -> "Estimate":
        return Estimate(-self.value, self.error, self.method)

    def __sub__(self, other: "Estimate") -> "Estimate":
        return self + (-other)

    def scale(self, c: Number) -> "Estimate":
        value = c * self.value
        error = abs(float(c)) * self.error
        if not is_exact(value):
            value = float(value)
            error += EPS * abs(value)
        return Estimate(value, error, self.method)


def _merge_method(a: str, b: str) -> str:
    if a == b:
        return a
    if "numeric" in (a, b):
        return "numeric"
    return "closed-form"


def float_error(value: float, terms: int = 1) -> float:
    """Rounding allowance for a float assembled from ``terms`` operations."""
    return 4 * EPS * max(terms, 1) * abs(value) + sys.float_info.min
