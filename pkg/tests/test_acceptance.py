"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

The conftest hook repeats the lines in the terminal summary.
"""

import itertools
import random
from fractions import Fraction

import pytest

from warsaw_homology.berlanga import DEFAULT_SUITE, non_hausdorff_demo
from warsaw_homology.chains import (
    ConstantSimplex,
    DiracChain,
    SeqPoint,
    boundary_1,
    parity_boundary,
    s_chain,
)
from warsaw_homology.sequences import (
    AltDiff,
    Combo,
    FiniteSupport,
    GeometricBase,
    PowerFamilyBase,
    Truncation,
    Variant,
    combine,
)
from warsaw_homology.tails import Summability, summability_decide
from warsaw_homology.traces import Transform, partial_sum_trace, transformed_tail
from warsaw_homology.warsaw import (
    Category,
    MVInverse,
    Side,
    classify,
    combo_class,
    connecting_chain,
    limit_seq,
    m_chain,
    mv_forward,
    mv_invert,
    truncation_seq,
    warsaw_point,
)
import oracles


def report(number, ok, detail):
    print(f"\ncriterion {number} [{'PASS' if ok else 'FAIL'}] {detail}")
    return ok


def random_rational(rng, bound=10**6):
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def random_sequence(rng, max_len):
    values = [random_rational(rng) for _ in range(rng.randint(0, max_len))]
    if values and rng.random() < 0.2:
        values[-1] = Fraction(0)  # exercise trailing-zero normalisation
    return values


# -- 1 ------------------------------------------------------------------------------------


def test_criterion_1_mv_injectivity():
    rng = random.Random(1)
    failures = 0
    for _ in range(1000):
        values = random_sequence(rng, 128)
        m = FiniteSupport(values)
        x = FiniteSupport(random_sequence(rng, 128))
        forward = mv_forward(m)
        ok = mv_invert(forward) == m
        ok = ok and forward.values == tuple(oracles.strip(oracles.mv_forward(values)))
        # arbitrary x: the (possibly infinite) inverse maps back to x termwise
        back = mv_forward(mv_invert(x))
        if isinstance(back, FiniteSupport):
            ok = ok and back == x
        else:
            span = len(x.values) + 64
            ok = ok and [back.term(k) for k in range(span)] == [x.term(k) for k in range(span)]
        failures += not ok
    assert report(1, failures == 0, f"MV round trips exact on 1000 random sequences "
                                    f"(length <= 128); failures = {failures}")


# -- 2 ------------------------------------------------------------------------------------


def test_criterion_2_parity_boundary():
    rng = random.Random(2)
    coeffs = [random_rational(rng) for _ in range(1000)]
    ok = True
    for n in range(1, 5):
        top = s_chain(n + 1, coeffs)
        once = parity_boundary(n + 1, top)
        twice = parity_boundary(n, once)
        ok &= twice == DiracChain.zero(n - 1)
        if (n + 1) % 2:
            ok &= once == DiracChain.zero(n)
        else:
            ok &= all(once.coefficient(ConstantSimplex(SeqPoint(k), n)) == c
                      for k, c in enumerate(coeffs))
            ok &= len(once.atoms) == sum(1 for c in coeffs if c)
    for n in (1, 3):
        ok &= parity_boundary(n, s_chain(n, coeffs)) == DiracChain.zero(n - 1)
    assert report(2, ok, "d_n o d_(n+1) = 0 for n <= 4 on 1000-atom rational chains; "
                         "odd boundary zero, even boundary identity termwise")


# -- 3 ------------------------------------------------------------------------------------


def test_criterion_3_chain_level_mv_equations():
    rng = random.Random(3)
    failures = 0
    for _ in range(200):
        values = random_sequence(rng, 64)
        m = FiniteSupport(values)
        for side in (Side.U, Side.L):
            chain = boundary_1(connecting_chain(m, side)) + m_chain(m)
            expected = oracles.mv_side_coefficients(m.values, side.value)
            want = {warsaw_point(side.value, k): c for k, c in enumerate(expected) if c}
            failures += chain.atoms != want
    assert report(3, failures == 0, f"d(nu) + mu_m equals the u/l equations exactly on "
                                    f"200 random m (length <= 64); failures = {failures}")


# -- 4 ------------------------------------------------------------------------------------

GRID = [Fraction(k, 10) for k in range(1, 10)]
COEFFS_2 = [(1, -1), (1, 1), (-1, 1), (2, -2), (Fraction(1, 2), Fraction(-1, 2)),
            (0, 1), (1, 0), (0, -3), (5, 0), (1, 2), (-2, 1), (Fraction(1, 3), Fraction(1, 7)),
            (Fraction(-5, 2), 3), (7, -7), (Fraction(1, 100), -1), (1, Fraction(-1, 100)),
            (-1, -1), (3, Fraction(-3, 2)), (Fraction(-2, 9), Fraction(2, 9)), (4, 1)]
COEFFS_3 = [(1, -1, 0), (1, 1, -2), (1, -2, 1), (0, 0, 1), (0, 1, -1), (1, 0, -1),
            (Fraction(1, 2), Fraction(1, 3), Fraction(-5, 6)), (1, 1, 1), (-1, 2, -1),
            (2, -1, -1), (0, 3, 0), (5, 0, 0), (1, -1, 1), (Fraction(-1, 4), 0, Fraction(1, 4)),
            (3, -4, 1), (1, 2, 3), (-7, 7, 0), (Fraction(1, 9), Fraction(-1, 9), 1),
            (0, Fraction(-2, 3), Fraction(2, 3)), (10, -1, -9)]


def test_criterion_4_uncountable_dimension_proxy():
    single = [classify(AltDiff(PowerFamilyBase(b))).category for b in GRID]
    ok = all(c is Category.NON_SINGULAR for c in single)
    checked = failures = 0
    for r, vectors in ((2, COEFFS_2), (3, COEFFS_3)):
        assert len(vectors) == 20
        for betas in itertools.combinations(GRID, r):
            for coeffs in vectors:
                v = combo_class(betas, coeffs)
                checked += 1
                named = v.evidence and v.witness_rules[0] in ("necessary-condition", "dominance")
                failures += not (v.nonzero and named)
    ok &= failures == 0
    assert report(4, ok, f"x^beta NonSingular for beta in 0.1..0.9; {checked} combinations "
                         f"all nonzero with a named witness; failures = {failures}")


# -- 5 ------------------------------------------------------------------------------------


def test_criterion_5_singular_reduction():
    rng = random.Random(5)
    failures = 0
    for _ in range(500):
        values = random_sequence(rng, 64)
        if values and rng.random() < 0.25:
            # force alpha = 0 so the Boundary branch is exercised
            values.append(oracles.alternating_sum(values) * (1 if len(values) % 2 == 0 else -1))
        x = FiniteSupport(values)
        alpha = oracles.alternating_sum(values)
        v = classify(x)
        want = Category.BOUNDARY if alpha == 0 else Category.SINGULAR
        ok = v.category is want and v.alpha == alpha and isinstance(v.alpha, Fraction)
        ok = ok and classify(x - FiniteSupport([alpha])).category is Category.BOUNDARY
        failures += not ok
    assert report(5, failures == 0, f"alpha equals the exact alternating sum and x - (alpha, 0, ...) "
                                    f"is a boundary on 500 random sequences; failures = {failures}")


# -- 6 ------------------------------------------------------------------------------------

N_GRID = (10, 100, 1000, 10000)


@pytest.mark.parametrize("beta", [Fraction(1, 2), Fraction(1)], ids=["beta=0.5", "beta=1.0"])
def test_criterion_6_non_hausdorff_certificate(beta):
    base = AltDiff(PowerFamilyBase(beta))
    cert = non_hausdorff_demo(base, N_GRID, DEFAULT_SUITE, printed_up_to=1000)
    rows = cert.convergence.rows

    boundaries = [n for n, v in cert.truncations if v.category is Category.BOUNDARY]
    within = all(v <= b + e for r in rows for v, b, e in zip(r.values, r.bounds, r.errors))
    decreasing = cert.convergence.bounds_decreasing
    formula = all(b == pytest.approx(f.sup_bound * 2 * float(base.base.n(r.n + 1)), rel=1e-14)
                  for r in rows for f, b in zip(DEFAULT_SUITE, r.bounds))
    small = beta != Fraction(1, 2) or max(rows[-1].bounds) < 0.1
    limit_ok = cert.limit.category is Category.NON_SINGULAR

    printed_ok = all(v.category is Category.SINGULAR for _, v in cert.printed)
    printed_ok &= [n for n, _ in cert.printed] == [10, 100, 1000]
    if beta == 1:
        # exact rationals: alpha = head + sum_{i=1}^n (-1)^i x_i = head + n_{n+1} - n_1
        for n, v in cert.printed:
            ref = oracles.printed_head_harmonic(n) + Fraction(1, n + 2) - Fraction(1, 2)
            printed_ok &= isinstance(v.alpha, Fraction) and v.alpha == ref and ref != 0
    else:
        for n, v in cert.printed:
            printed_ok &= abs(float(v.alpha) - oracles.PRINTED_ALPHA_HALF[n]) <= v.alpha_error + 1e-15

    ok = (boundaries == list(N_GRID) and within and decreasing and formula and small
          and limit_ok and printed_ok and cert.certified)
    assert report(6, ok, f"beta = {float(beta)}: corrected truncations Boundary at {boundaries}; "
                         f"|Lambda_f| within bounds = {within}; bounds decreasing = {decreasing}; "
                         f"max bound at n=10^4 = {max(rows[-1].bounds):.3g}; limit "
                         f"{cert.limit.category.value}; printed truncations SingularNonZero = "
                         f"{printed_ok}")


# -- 7 ------------------------------------------------------------------------------------

N_TRACE = 10**6
CAUCHY_TOL = 1e-9
IDENT, ALT = Transform.IDENTITY, Transform.ALT_SUMS_MINUS_LIMIT
P = lambda b: PowerFamilyBase(Fraction(b))
G = lambda r: GeometricBase(Fraction(r))
_rng = random.Random(7)

INSTANCES = [
    ("finite (1,-1)", FiniteSupport([1, -1]), IDENT),
    ("finite random", FiniteSupport([random_rational(_rng) for _ in range(50)]), IDENT),
    ("finite random alt", FiniteSupport([random_rational(_rng) for _ in range(50)]), ALT),
    ("power 3", P(3), IDENT),
    ("power 7/2", P("7/2"), IDENT),
    ("power 3 alt", P(3), ALT),
    ("geometric 1/2", G("1/2"), IDENT),
    ("geometric 9/10", G("9/10"), IDENT),
    ("geometric 1/3 alt", G("1/3"), ALT),
    ("altdiff power 2", AltDiff(P(2)), IDENT),
    ("altdiff power 3 alt", AltDiff(P(3)), ALT),
    ("altdiff geometric 1/2", AltDiff(G("1/2")), IDENT),
    ("altdiff geometric 1/2 alt", AltDiff(G("1/2")), ALT),
    ("corrected truncation", Truncation(AltDiff(P("1/2")), 100, Variant.CORRECTED), IDENT),
    ("corrected truncation alt", Truncation(AltDiff(P("1/2")), 100, Variant.CORRECTED), ALT),
    ("printed truncation alt", Truncation(AltDiff(P(1)), 100, Variant.PRINTED), ALT),
    ("combo power+finite", combine((2, AltDiff(P(3))), (1, FiniteSupport([1]))), IDENT),
    ("combo cancelling alt", Combo(((1, AltDiff(P("1/2"))), (-1, AltDiff(P("1/2"))))), ALT),
    ("combo geometric+power alt", combine((1, AltDiff(G("1/2"))), (-3, AltDiff(P(3)))), ALT),
    ("power 1/2", P("1/2"), IDENT),
    ("power 1", P(1), IDENT),
    ("altdiff power 1/2 alt", AltDiff(P("1/2")), ALT),
    ("altdiff power 1 alt", AltDiff(P(1)), ALT),
    ("altdiff power 9/10 alt", AltDiff(P("9/10")), ALT),
    ("altdiff power 1/10 alt", AltDiff(P("1/10")), ALT),
    ("combo dominance alt", combine((1, AltDiff(P("3/10"))), (-1, AltDiff(P("3/5")))), ALT),
    ("combo same-sign alt", combine((1, AltDiff(P("3/10"))), (1, AltDiff(P("3/5")))), ALT),
    ("limit sequence alt", limit_seq(AltDiff(P("1/2"))), ALT),
    ("formal inverse of (1)", MVInverse(FiniteSupport([1])), IDENT),
    ("formal inverse of altdiff", MVInverse(AltDiff(P("1/2"))), IDENT),
]


def _agreement(spec, transform):
    tail = transformed_tail(spec, transform)
    if tail is None:
        return "no-tail", None
    verdict = summability_decide(tail)
    trace = partial_sum_trace(spec, transform, N_TRACE, [N_TRACE // 2, N_TRACE])
    if verdict.status is Summability.SUMMABLE:
        # instance premise: the analytic tail over the window is below the tolerance
        premise = verdict.tail_bound(N_TRACE // 2, N_TRACE) < CAUCHY_TOL
        return ("summable", premise and abs(trace.cauchy_increment()) < CAUCHY_TOL)
    if verdict.status is Summability.NOT_SUMMABLE:
        lower = verdict.lower_bound(N_TRACE)
        return ("divergent", lower > 0 and trace.last.partial_sum >= lower)
    return "inconclusive", None


def test_criterion_7_oracle_agreement():
    assert len(INSTANCES) == 30
    kinds = {type(s).__name__ for _, s, _ in INSTANCES}
    assert {"FiniteSupport", "PowerFamilyBase", "GeometricBase", "AltDiff", "Truncation",
            "Combo"} <= kinds
    results = {name: _agreement(spec, t) for name, spec, t in INSTANCES}
    inconclusive = [n for n, (kind, _) in results.items() if kind in ("inconclusive", "no-tail")]
    disagree = [n for n, (kind, ok) in results.items() if ok is False]
    counts = {k: sum(1 for kind, _ in results.values() if kind == k)
              for k in ("summable", "divergent")}
    ok = not inconclusive and not disagree
    assert report(7, ok, f"30 instances at N = 10^6: {counts['summable']} Summable with Cauchy "
                         f"increment < 1e-9, {counts['divergent']} NotSummable above the "
                         f"integral-test bound; inconclusive = {inconclusive}; "
                         f"disagreements = {disagree}")
