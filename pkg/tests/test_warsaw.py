import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from warsaw_homology.chains import boundary_1
from warsaw_homology.sequences import (
    AltDiff,
    FiniteSupport,
    GeometricBase,
    PowerFamilyBase,
    Variant,
    combine,
    limit_alt_sum,
)
from warsaw_homology.warsaw import (
    BOUNDING_BOX,
    Category,
    Family,
    InvalidInput,
    NotInL1Error,
    PointCarrier,
    Side,
    classify,
    combo_class,
    connecting_chain,
    interleave,
    limit_head,
    limit_seq,
    m_chain,
    mv_forward,
    mv_invert,
    split,
    truncation_seq,
    warsaw_point,
)
import oracles
from strategies import nonzero_rationals, rational_lists, rationals

HALF = Fraction(1, 2)


# -- points -------------------------------------------------------------------------


@pytest.mark.parametrize("family, k, xy", [
    ("u", 0, (0.0, 1.0)), ("m", 0, (0.0, 0.0)), ("l", 0, (0.0, -1.0)),
    ("u", 1, (2 / (5 * math.pi), 1.0)), ("m", 1, (1 / (2 * math.pi), 0.0)),
    ("l", 1, (2 / (7 * math.pi), -1.0)),
])
def test_point_coordinates(family, k, xy):
    assert warsaw_point(family, k).coords == pytest.approx(xy, rel=1e-15)


@pytest.mark.parametrize("family", list(Family))
def test_points_move_left_and_stay_on_sine_curve(family):
    xs = [warsaw_point(family, k).coords[0] for k in range(1, 200)]
    assert all(a > b for a, b in zip(xs, xs[1:]))
    for k in range(1, 200):
        x, y = warsaw_point(family, k).coords
        assert math.sin(1 / x) == pytest.approx(y, abs=1e-9)
        assert 0 < x < BOUNDING_BOX[0][1]


def test_extrema_sit_between_their_zeros():
    m = lambda k: warsaw_point("m", k).coords[0]
    for k in range(1, 100):
        assert m(2 * k) < warsaw_point("u", k).coords[0] < m(2 * k - 1)
        assert m(2 * k + 1) < warsaw_point("l", k).coords[0] < m(2 * k)
    # l_0 joins m_1 along the rightmost minimum and the closing arc
    assert warsaw_point("m", 1).coords[0] < BOUNDING_BOX[0][1]


def test_symbolic_x():
    assert warsaw_point("u", 1).symbolic_x == "2/(5π)"
    assert warsaw_point("l", 3).symbolic_x == "2/(15π)"
    assert warsaw_point("m", 0).symbolic_x == "0"


# -- MV operators ---------------------------------------------------------------------


@pytest.mark.parametrize("m, x", [
    ([1], [1, 1]), ([], []), ([1, -1, 1, -1], [1, 0, 0, 0, -1]),
])
def test_mv_forward_examples(m, x):
    assert mv_forward(FiniteSupport(m)) == FiniteSupport(x)


def test_mv_invert_examples():
    assert mv_invert(FiniteSupport([1, 1])) == FiniteSupport([1])
    formal = mv_invert(FiniteSupport([1]))
    assert [formal.term(k) for k in range(6)] == [1, -1, 1, -1, 1, -1]
    beta = HALF
    m = mv_invert(AltDiff(PowerFamilyBase(beta)))
    for k in (0, 1, 10):
        assert m.term(k) == pytest.approx((-1) ** k * ((k + 2) ** -0.5 - 1), rel=1e-14)
    exact = mv_invert(AltDiff(PowerFamilyBase(1)))
    assert exact.term(3) == -(Fraction(1, 5) - 1)


@given(rational_lists(max_size=64))
def test_mv_round_trips(values):
    m = FiniteSupport(values)
    assert mv_invert(mv_forward(m)) == m
    assert mv_forward(m).values == tuple(oracles.strip(oracles.mv_forward(m.values)))


@given(rational_lists(max_size=40))
def test_inverse_formal_sequence_reproduces_x(values):
    x = FiniteSupport(values)
    m = mv_invert(x)
    ref = oracles.mv_invert(x.values)
    assert [m.term(k) for k in range(len(ref))] == ref
    for k in range(len(values) + 3):
        back = m.term(k) if k == 0 else m.term(k) + m.term(k - 1)
        assert back == x.term(k)


def test_mv_forward_of_infinite_sequence():
    m = AltDiff(GeometricBase(HALF))
    x = mv_forward(m)
    for k in range(8):
        assert x.term(k) == (m.term(0) if k == 0 else m.term(k) + m.term(k - 1))
    assert classify(x).category is Category.BOUNDARY


def test_interleave_examples():
    assert interleave(FiniteSupport([1]), FiniteSupport([])) == FiniteSupport([1])
    a, b = [1, 2, 3], [4, 5]
    assert interleave(FiniteSupport(a), FiniteSupport(b)) == FiniteSupport([1, 4, 2, 5, 3])


@given(rational_lists(max_size=20), rational_lists(max_size=20))
def test_split_inverts_interleave(u, l):
    U, L = FiniteSupport(u), FiniteSupport(l)
    assert split(interleave(U, L)) == (U, L)


def test_split_inverts_interleave_for_families():
    u, l = AltDiff(PowerFamilyBase(1)), AltDiff(GeometricBase(HALF))
    assert split(interleave(u, l)) == (u, l)


# -- connecting chains ----------------------------------------------------------------


def _target(m, side):
    return boundary_1(connecting_chain(FiniteSupport(m), side)) + m_chain(FiniteSupport(m))


def _on_family(chain, family, coeffs):
    expected = {warsaw_point(family, k): c for k, c in enumerate(coeffs) if c}
    return chain.atoms == expected


def test_connecting_chain_examples():
    assert _on_family(_target([0, 1], Side.U), "u", [0, 1])
    assert _on_family(_target([1], Side.U), "u", [1])
    assert _on_family(_target([0, 0, 1, 1], Side.L), "l", [0, 2])


@given(rational_lists(max_size=30), st.sampled_from(["u", "l"]))
def test_connecting_chain_realises_mv_equations(m, side):
    chain = _target(m, side)
    assert _on_family(chain, side, oracles.mv_side_coefficients(m, side))


def test_connecting_chain_needs_l1():
    with pytest.raises(NotInL1Error):
        connecting_chain(PowerFamilyBase(HALF), Side.U)


def test_connecting_chain_family_boundary():
    m = AltDiff(PowerFamilyBase(1))
    chain = (boundary_1(connecting_chain(m, Side.U)) + m_chain(m)).materialize(41)
    ref = oracles.mv_side_coefficients([m.term(k) for k in range(41)], "u")
    for k in range(1, 19):
        assert chain.coefficient(warsaw_point("u", k)) == ref[k]
    assert chain.coefficient(warsaw_point("m", 5)) == 0


# -- classification -------------------------------------------------------------------


def test_classify_examples():
    v = classify(FiniteSupport([1, -1]))
    assert v.category is Category.SINGULAR and v.alpha == 2
    assert classify(AltDiff(PowerFamilyBase(HALF))).category is Category.NON_SINGULAR
    v = classify(AltDiff(GeometricBase(HALF)))
    assert v.category is Category.SINGULAR and v.alpha == -1
    assert classify(FiniteSupport([])).category is Category.BOUNDARY


def test_classify_rejects_non_l1():
    with pytest.raises(NotInL1Error):
        classify(PowerFamilyBase(HALF))


@given(rational_lists(max_size=30))
def test_mv_images_are_boundaries(values):
    assert classify(mv_forward(FiniteSupport(values))).category is Category.BOUNDARY


@given(rational_lists(max_size=30))
def test_singular_reduction(values):
    x = FiniteSupport(values)
    alpha = oracles.alternating_sum(values)
    v = classify(x)
    assert v.alpha == alpha
    assert v.category is (Category.BOUNDARY if alpha == 0 else Category.SINGULAR)
    assert classify(x - FiniteSupport([alpha])).category is Category.BOUNDARY


@given(rational_lists(max_size=15), rational_lists(max_size=15), nonzero_rationals)
def test_classifier_linearity(a, b, c):
    x, y = mv_forward(FiniteSupport(a)), mv_forward(FiniteSupport(b))
    assert classify(x + y).category is Category.BOUNDARY
    s = FiniteSupport([1, 2])  # alpha = -1
    v = classify(x + s)
    assert v.category is Category.SINGULAR and v.alpha == -1
    scaled = classify(c * (x + s))
    assert scaled.category is Category.SINGULAR and scaled.alpha == -c


@given(nonzero_rationals, st.sampled_from([HALF, Fraction(3, 10), Fraction(1)]))
def test_scaling_preserves_non_singular(c, beta):
    x = AltDiff(PowerFamilyBase(beta))
    assert classify(c * x).category is Category.NON_SINGULAR
    assert classify(c * x + FiniteSupport([3])).category is Category.NON_SINGULAR


@pytest.mark.parametrize("beta", [Fraction(11, 10), 2, 3])
def test_fast_power_families_are_singular(beta):
    v = classify(AltDiff(PowerFamilyBase(beta)))
    assert v.category is Category.SINGULAR and v.alpha == -1


# -- power-family combinations ----------------------------------------------------------


def test_combo_class_examples():
    v = combo_class([0.3, 0.6], [1, -1])
    assert v.category is Category.NON_SINGULAR and v.witness_rules[0] == "dominance"
    v = combo_class([0.3, 0.6], [1, 1])
    assert v.nonzero and v.witness_rules[0] == "necessary-condition"
    v = combo_class([0.5], [0])
    assert v.category is Category.BOUNDARY


@pytest.mark.parametrize("betas, coeffs", [
    ([0.6, 0.3], [1, 1]), ([0.3, 0.3], [1, 1]), ([1.0], [1]), ([0], [1]), ([0.5], [1, 2]), ([], []),
])
def test_combo_class_rejects(betas, coeffs):
    with pytest.raises(InvalidInput):
        combo_class(betas, coeffs)


# -- truncations ----------------------------------------------------------------------------


H = AltDiff(PowerFamilyBase(1))


def test_truncation_verdicts():
    c = truncation_seq(H, 2, Variant.CORRECTED)
    assert c.to_finite() == FiniteSupport([Fraction(1, 4), Fraction(1, 6), Fraction(-1, 12)])
    assert classify(c).category is Category.BOUNDARY
    p = truncation_seq(H, 2, Variant.PRINTED)
    v = classify(p)
    assert v.category is Category.SINGULAR and v.alpha == Fraction(-1, 3)
    assert classify(truncation_seq(AltDiff(GeometricBase(HALF)), 0)).category is Category.BOUNDARY


def test_truncation_needs_altdiff():
    with pytest.raises(InvalidInput):
        truncation_seq(FiniteSupport([1]), 2)


def test_limit_seq_examples():
    base = AltDiff(PowerFamilyBase(HALF))
    y = limit_seq(base, Variant.CORRECTED)
    assert y.term(0) == pytest.approx(2 ** -0.5, rel=1e-15)
    assert y.term(5) == base.term(5)
    assert classify(y).category is Category.NON_SINGULAR
    d = combine((1, y), (-1, base))
    assert d == FiniteSupport([1])  # y - x = (n_0, 0, ...), a singular class
    assert classify(base - y).category is Category.SINGULAR


def test_limit_seq_summable_base_is_a_boundary():
    y = limit_seq(AltDiff(GeometricBase(HALF)), Variant.CORRECTED)
    assert y.term(0) == HALF
    assert classify(y).category is Category.BOUNDARY


def test_printed_limit_head_matches_truncation_heads():
    base = AltDiff(PowerFamilyBase(1))
    head = limit_head(base, Variant.PRINTED)
    # head_n -> 2 (ln 2 - 1) + 1/2
    assert float(head.value) == pytest.approx(2 * (oracles.LN2 - 1) + 0.5, rel=1e-14)
    assert abs(float(truncation_seq(base, 10**4, Variant.PRINTED).head) - float(head.value)) < 1e-4
    y = limit_seq(base, Variant.PRINTED)
    assert y.term(0) == pytest.approx(float(head.value), rel=1e-14)
    assert classify(y).category is Category.NON_SINGULAR
