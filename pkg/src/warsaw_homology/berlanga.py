"""Integration functionals on 0-chains of W and the non-Hausdorff certificate.

The weak topology on chains is generated by ``Lambda_f(mu) = int f dmu``.  For
the atomic chains used here that integral is a series ``sum_k c_k f(p_k)``.
Test functions come from a small polynomial grammar so that their sup norm on
W is available in closed form (bounded via the bounding box of W).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .chains import DiracChain, Path
from .arith import EPS, Number, as_number
from .sequences import AltDiff, BaseFamily, Combo, Variant, max_terms
from .tails import mass_upper, summability_decide
from .warsaw import (
    BOUNDING_BOX,
    RIGHTMOST_MINIMUM,
    Category,
    HomologyClassVerdict,
    InterleavedCarrier,
    InvalidInput,
    PreconditionFailure,
    classify,
    limit_head,
    limit_seq,
    truncation_seq,
)

# Numeric series for Lambda_f stop once the remaining l1 mass is this small.
TAIL_TOLERANCE = 1e-12


@dataclass(frozen=True)
class TestFunction:
    """Polynomial ``sum c_ij x^i y^j`` stored as ``((i, j), c)`` pairs."""

    __test__ = False  # not a pytest class

    terms: Tuple[Tuple[Tuple[int, int], float], ...]
    name: str = ""

    def __post_init__(self):
        merged: Dict[Tuple[int, int], float] = {}
        for (i, j), c in self.terms:
            if i < 0 or j < 0:
                raise ValueError("exponents must be non-negative")
            merged[(i, j)] = merged.get((i, j), 0.0) + float(c)
        object.__setattr__(self, "terms",
                           tuple(sorted((k, c) for k, c in merged.items() if c != 0)))
        if not self.name:
            object.__setattr__(self, "name", self._describe())

    def _describe(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (i, j), c in self.terms:
            mono = "".join(v if e == 1 else f"{v}^{e}" for v, e in (("x", i), ("y", j)) if e)
            parts.append(f"{c:g}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    @classmethod
    def monomial(cls, i: int, j: int, name: str = "") -> "TestFunction":
        return cls((((i, j), 1.0),), name)

    def __call__(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        out = np.zeros(np.broadcast(x, y).shape)
        for (i, j), c in self.terms:
            out = out + c * x**i * y**j
        return out

    def at(self, point) -> float:
        x, y = point.coords
        return float(self(x, y))

    @property
    def sup_bound(self) -> float:
        """Bound on ``sup_W |f|`` from the bounding box of W."""
        (x_lo, x_hi), (y_lo, y_hi) = BOUNDING_BOX
        xm = max(abs(x_lo), abs(x_hi))
        ym = max(abs(y_lo), abs(y_hi))
        return math.fsum(abs(c) * xm**i * ym**j for (i, j), c in self.terms)

    @property
    def x_lipschitz(self) -> float:
        """Bound on ``sup_W |df/dx|``."""
        (x_lo, x_hi), (y_lo, y_hi) = BOUNDING_BOX
        xm = max(abs(x_lo), abs(x_hi))
        ym = max(abs(y_lo), abs(y_hi))
        return math.fsum(abs(c) * i * xm**(i - 1) * ym**j for (i, j), c in self.terms if i)

    def __add__(self, other: "TestFunction") -> "TestFunction":
        return TestFunction(self.terms + other.terms)

    def __rmul__(self, c) -> "TestFunction":
        return TestFunction(tuple((k, float(c) * v) for k, v in self.terms))

    def __sub__(self, other: "TestFunction") -> "TestFunction":
        return self + (-1) * other


ONE = TestFunction.monomial(0, 0, "1")
COORD_X = TestFunction.monomial(1, 0, "x")
COORD_Y = TestFunction.monomial(0, 1, "y")
PRODUCT_XY = TestFunction.monomial(1, 1, "xy")
X_SQUARED = TestFunction.monomial(2, 0, "x^2")

NAMED_FUNCTIONS = {"1": ONE, "x": COORD_X, "y": COORD_Y, "xy": PRODUCT_XY,
                   "x2": X_SQUARED, "x^2": X_SQUARED}
DEFAULT_SUITE = (ONE, COORD_X, COORD_Y, PRODUCT_XY, X_SQUARED)


@dataclass(frozen=True)
class FunctionalValue:
    value: float
    error_bound: float = 0.0


def _series_length(coeffs, cap: int) -> Tuple[int, float]:
    """Terms to evaluate and the l1 mass left beyond them."""
    if coeffs.support_length is not None and coeffs.support_length <= cap:
        return coeffs.support_length, 0.0
    tail = coeffs.abs_tail()
    if tail is None or not summability_decide(tail).summable:
        raise ValueError(f"coefficients {coeffs!r} are not known to be absolutely summable")
    n = min(1024, cap)
    while n < cap and mass_upper(tail, n) > TAIL_TOLERANCE:
        n = min(4 * n, cap)
    return n, mass_upper(tail, n)


def altdiff_far_tail(fam: BaseFamily, f: TestFunction, start: int) -> Tuple[float, float]:
    """``sum_{k>=start} x_k f(p_k)`` for ``x = AltDiff(fam)`` on the interleaved points.

    Far out the points hug ``u_0`` and ``l_0``, so ``f(p_k)`` is replaced by
    ``f(u_0)`` or ``f(l_0)``; the even and odd parts of ``x`` then sum to
    alternating tails of ``n`` in closed form.  The replacement costs at most
    ``|df/dx| * x(p_start) * n_start``.
    """
    even = start + start % 2
    odd = start + 1 - start % 2
    a_even, a_odd = fam.alternating_tail(even), fam.alternating_tail(odd)
    fu, fl = float(f(0.0, 1.0)), float(f(0.0, -1.0))
    value = -fu * a_even + fl * a_odd
    j = start // 2
    x_far = 2 / ((4 * j + 1) * math.pi) if j else RIGHTMOST_MINIMUM
    n_start = float(fam.n(start))
    error = f.x_lipschitz * x_far * n_start + 8 * EPS * (abs(fu) + abs(fl)) * n_start
    return value, error


def _family_sum(f: TestFunction, coeffs, carrier, cap: int) -> Tuple[float, float, int]:
    """Value, error bound and term count of ``sum_k c_k f(carrier(k))``."""
    n, tail = _series_length(coeffs, cap)
    x, y = carrier.coords(np.arange(n))
    vals = coeffs.terms(n) * f(x, y)
    value = math.fsum(vals)
    rounding = 4 * EPS * n * math.fsum(np.abs(vals))
    if tail and isinstance(coeffs, AltDiff) and isinstance(carrier, InterleavedCarrier):
        far, far_err = altdiff_far_tail(coeffs.base, f, n)
        return value + far, far_err + rounding, n
    return value, f.sup_bound * tail + rounding, n


def _linear_parts(coeffs):
    if isinstance(coeffs, Combo):
        return coeffs.terms_
    return ((1, coeffs),)


def lambda_functional(f: Union[TestFunction, Callable], chain: DiracChain) -> FunctionalValue:
    """``Lambda_f(chain) = sum_atoms c f(atom)`` with a tail error bound.

    ``f`` is a :class:`TestFunction` (0-chains on points of W) or any callable
    on simplex descriptors (finite chains only).
    """
    if not isinstance(f, TestFunction) and chain.families:
        raise ValueError("callable test functions need a finite chain")
    evaluate = f.at if isinstance(f, TestFunction) else f

    parts = [float(c) * evaluate(d) for d, c in chain.atoms.items()]
    error = 4 * EPS * len(parts) * math.fsum(abs(p) for p in parts)
    cap = max_terms()
    for coeffs, carrier in chain.families:
        try:
            pieces = [(float(c), _family_sum(f, spec, carrier, cap))
                      for c, spec in _linear_parts(coeffs)]
        except ValueError:
            pieces = [(1.0, _family_sum(f, coeffs, carrier, cap))]
        for c, (v, e, _) in pieces:
            parts.append(c * v)
            error += abs(c) * e
    return FunctionalValue(math.fsum(parts), error)


def pulled_back(f: Callable) -> Callable:
    """``sigma -> f(end sigma) - f(start sigma)`` so that ``Lambda_f(d nu) = Lambda_g(nu)``."""
    evaluate = f.at if isinstance(f, TestFunction) else f

    def g(path: Path) -> float:
        return evaluate(path.end) - evaluate(path.start)

    return g


# -- convergence report ------------------------------------------------------------


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    values: Tuple[float, ...]
    bounds: Tuple[float, ...]
    errors: Tuple[float, ...]

    @property
    def within_bounds(self) -> bool:
        return all(v <= b + e for v, b, e in zip(self.values, self.bounds, self.errors))


@dataclass(frozen=True)
class ConvergenceReport:
    functions: Tuple[str, ...]
    rows: Tuple[ConvergenceRow, ...]
    truncations: Tuple[Tuple[int, HomologyClassVerdict], ...] = ()
    limit: Optional[HomologyClassVerdict] = None

    @property
    def bounds_decreasing(self) -> bool:
        cols = zip(*(r.bounds for r in self.rows))
        return all(all(a > b for a, b in zip(col, col[1:])) for col in map(list, cols))

    @property
    def consistent(self) -> bool:
        return all(r.within_bounds for r in self.rows)


def weak_convergence_report(base: AltDiff, variant=Variant.CORRECTED,
                            f_suite: Sequence[TestFunction] = DEFAULT_SUITE,
                            n_values: Sequence[int] = (10, 100, 1000, 10000),
                            classify_chains: bool = True) -> ConvergenceReport:
    """Tabulate ``|Lambda_f(mu - mu_n)|`` against ``||f|| (|x_0 - x_0^n| + sum_{k>n} |x_k|)``.

    ``mu`` is the chain of ``limit_seq(base)`` and ``mu_n`` that of the n-th
    truncation, both laid out on ``u_0, l_0, u_1, l_1, ...``.  The two agree on
    indices ``1..n``, so only the head difference and the tail ``k > n`` enter.
    """
    if not isinstance(base, AltDiff):
        raise InvalidInput("weak_convergence_report needs an AltDiff base")
    if not f_suite:
        raise InvalidInput("empty test-function suite")
    n_values = [int(n) for n in n_values]
    if not n_values or any(n < 0 for n in n_values) or any(
            a >= b for a, b in zip(n_values, n_values[1:])):
        raise InvalidInput("n_values must be a non-empty increasing list of non-negative integers")
    variant = Variant(variant)
    fam = base.base

    cap = max(max_terms(), n_values[-1] + 2)
    length, _ = _series_length(base, cap)
    length = max(length, n_values[-1] + 2)
    xs = base.terms(length)
    px, py = InterleavedCarrier().coords(np.arange(length))
    weighted = [xs * f(px, py) for f in f_suite]
    f_at_head = [float(f(0.0, 1.0)) for f in f_suite]  # p_0 = u_0 = (0, 1)
    sups = [f.sup_bound for f in f_suite]
    far = [altdiff_far_tail(fam, f, length) for f in f_suite]
    head_limit = limit_head(base, variant)

    rows = []
    for n in n_values:
        trunc = truncation_seq(base, n, variant)
        if variant is Variant.CORRECTED:
            # n_1 - (n_1 - n_{n+1})
            d0, d0_err = float(fam.n(n + 1)), 4 * EPS * float(fam.n(n + 1))
        else:
            d0 = float(head_limit.value) - float(trunc.head)
            d0_err = head_limit.error + 8 * EPS * (abs(float(trunc.head)) + abs(d0))
        tail_mass = float(fam.n(n + 1))  # sum_{k>n} |x_k| telescopes
        values, bounds, errors = [], [], []
        for w, fh, sup, (far_value, far_err) in zip(weighted, f_at_head, sups, far):
            s = math.fsum(w[n + 1:]) + far_value
            values.append(abs(d0 * fh + s))
            bounds.append(sup * (abs(d0) + tail_mass))
            errors.append(far_err + sup * d0_err
                          + 4 * EPS * (length - n) * sup * tail_mass)
        rows.append(ConvergenceRow(n, tuple(values), tuple(bounds), tuple(errors)))

    truncations = ()
    limit = None
    if classify_chains:
        truncations = tuple((n, classify(truncation_seq(base, n, variant))) for n in n_values)
        limit = classify(limit_seq(base, variant))
    return ConvergenceReport(tuple(f.name for f in f_suite), tuple(rows), truncations, limit)


# -- non-Hausdorff certificate --------------------------------------------------------


@dataclass(frozen=True)
class NonHausdorffCertificate:
    base: AltDiff
    truncations: Tuple[Tuple[int, HomologyClassVerdict], ...]
    convergence: ConvergenceReport
    limit: HomologyClassVerdict
    base_divergence: object
    printed: Tuple[Tuple[int, HomologyClassVerdict], ...] = ()

    @property
    def certified(self) -> bool:
        return (all(v.category is Category.BOUNDARY for _, v in self.truncations)
                and self.convergence.consistent
                and self.limit.category is Category.NON_SINGULAR)


def non_hausdorff_demo(base: AltDiff, n_values: Sequence[int] = (10, 100, 1000, 10000),
                       f_suite: Sequence[TestFunction] = DEFAULT_SUITE,
                       printed_up_to: int = 1000) -> NonHausdorffCertificate:
    """Boundaries whose weak limit is not a boundary.

    Needs ``sum n_k = oo``: otherwise the limit is itself a boundary and the
    argument says nothing.  Printed-variant truncations with ``n <= printed_up_to``
    are classified as well, to document that they are not boundaries.
    """
    if not isinstance(base, AltDiff):
        raise InvalidInput("the demo needs an AltDiff base")
    divergence = summability_decide(base.base.profile())
    if not divergence.divergent:
        raise PreconditionFailure(
            f"sum n_k converges ({divergence.rule}); the limit chain would be a boundary")
    report = weak_convergence_report(base, Variant.CORRECTED, f_suite, n_values)
    printed = tuple((n, classify(truncation_seq(base, n, Variant.PRINTED)))
                    for n in n_values if n <= printed_up_to)
    return NonHausdorffCertificate(base, report.truncations, report, report.limit,
                                   divergence, printed)


__all__ = [
    "COORD_X",
    "COORD_Y",
    "ConvergenceReport",
    "ConvergenceRow",
    "DEFAULT_SUITE",
    "FunctionalValue",
    "NAMED_FUNCTIONS",
    "NonHausdorffCertificate",
    "ONE",
    "PRODUCT_XY",
    "TestFunction",
    "X_SQUARED",
    "altdiff_far_tail",
    "lambda_functional",
    "non_hausdorff_demo",
    "pulled_back",
    "weak_convergence_report",
]
