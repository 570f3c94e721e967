from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from exppairs.numeric import (CertInterval, QuadraticSurd, as_fraction, compare, format_fraction,
                              interval_log, iroot_floor, is_perfect_square, surd_sign)

from .strategies import fractions, intervals, non_square_radicand

# independent decimal oracles (40 digits, truncated)
LOG3_LO = F("1.098612288668109691395245236922525704647")
LOG3_HI = LOG3_LO + F(1, 10 ** 39)
E_LO = F("2.718281828459045235360287471352662497757")
E_HI = E_LO + F(1, 10 ** 39)


# -- surds -------------------------------------------------------------------

def test_surd_sign_zero():
    assert surd_sign(QuadraticSurd(0, 0, 10)) == 0


def test_surd_sign_mu_constant_exceeds_0486():
    # 2 sqrt(10)/13 > 0.486  <=>  (2000)^2 * 10 > (486 * 13)^2
    x = QuadraticSurd(F(-486, 1000), F(2, 13), 10)
    assert 2000 ** 2 * 10 > (486 * 13) ** 2
    assert surd_sign(x) == 1


def test_surd_sign_moment_constant_below_0009():
    # 3 sqrt(510)/7568 < 0.009  <=>  (3000)^2 * 510 < (9 * 7568)^2
    x = QuadraticSurd(F(-9, 1000), F(3, 7568), 510)
    assert 3000 ** 2 * 510 < (9 * 7568) ** 2
    assert surd_sign(x) == -1


def test_perfect_square_radicand_folds():
    s = QuadraticSurd(1, 2, 9)
    assert s.is_rational and s.to_fraction() == 7
    assert QuadraticSurd.sqrt(F(9, 4)) == F(3, 2)


def test_surd_field_ops():
    r2 = QuadraticSurd.sqrt(2)
    assert r2 * r2 == 2
    assert (1 + r2) * (1 - r2) == -1
    assert 1 / (1 + r2) == r2 - 1
    assert (1 + r2).norm() == -1
    assert (r2 + 1) ** 2 == 3 + 2 * r2


def test_commensurable_radicands_align():
    # sqrt(8) = 2 sqrt(2)
    assert QuadraticSurd(0, 1, 8) == QuadraticSurd(0, 2, 2)
    assert QuadraticSurd(0, 1, 8) - QuadraticSurd(0, 2, 2) == 0


def test_negative_radicand_rejected():
    with pytest.raises(ValueError):
        QuadraticSurd(0, 1, -3)


def test_surd_enclosure_brackets_value():
    s = QuadraticSurd(0, 1, 2)
    box = s.enclose(64)
    assert box.lo * box.lo <= 2 <= box.hi * box.hi
    assert box.width <= F(1, 2 ** 60)


@given(fractions, fractions.filter(lambda q: q != 0), non_square_radicand())
def test_surd_sign_antisymmetric(p, q, r):
    x = QuadraticSurd(p, q, r)
    assert surd_sign(x) == -surd_sign(-x)
    assert surd_sign(x) != 0


@given(fractions, fractions, non_square_radicand())
def test_surd_sign_agrees_with_enclosure(p, q, r):
    x = QuadraticSurd(p, q, r)
    box = x.enclose(80)
    s = surd_sign(x)
    if box.lo > 0:
        assert s == 1
    elif box.hi < 0:
        assert s == -1


# -- rationals ---------------------------------------------------------------

@given(fractions, fractions)
def test_rational_add_sub_roundtrip(a, b):
    assert (a + b) - b == a
    assert as_fraction(as_fraction(a)) == a
    assert as_fraction(format_fraction(a)) == a


def test_as_fraction_parses_decimals_and_ratios():
    assert as_fraction("0.9573") == F(9573, 10000)
    assert as_fraction("13/84") == F(13, 84)
    assert as_fraction(3) == 3


def test_compare_mixed_types():
    assert compare(QuadraticSurd(0, 1, 2), F(141, 100)) == 1
    assert compare(F(1, 3), F(1, 3)) == 0


def test_integer_roots():
    assert iroot_floor(10 ** 20, 2) == 10 ** 10
    assert iroot_floor(26, 3) == 2
    assert is_perfect_square(144) and not is_perfect_square(145)


# -- intervals ---------------------------------------------------------------

def test_log_one_contains_zero():
    for bits in (16, 64, 128):
        box = interval_log(CertInterval.point(1), bits)
        assert box.contains(0)
        assert box.width <= F(1, 2 ** bits)


def test_log_three_two_precisions():
    coarse = interval_log(3, 64)
    fine = interval_log(3, 200)
    for box in (coarse, fine):
        assert box.lo <= LOG3_HI and LOG3_LO <= box.hi
    assert fine.width < F(1, 10 ** 39)
    assert coarse.lo <= fine.lo and fine.hi <= coarse.hi
    assert fine.width < coarse.width
    assert float(coarse.mid) == pytest.approx(1.0986122886681098)


def test_log_of_e_enclosure_contains_one():
    box = interval_log(CertInterval(E_LO, E_HI), 128)
    assert box.contains(1)


@pytest.mark.parametrize("bad", [0, -1, CertInterval(F(-1), F(2))])
def test_log_rejects_nonpositive(bad):
    with pytest.raises(ValueError):
        interval_log(bad)


def test_interval_arithmetic_examples():
    a, b = CertInterval(1, 2), CertInterval(-1, 3)
    assert (a * b) == CertInterval(-2, 6)
    assert (a - CertInterval(0, 1)) == CertInterval(0, 2)
    assert a / 2 == CertInterval(F(1, 2), 1)
    assert CertInterval.point(9).sqrt(64) == CertInterval.point(3)
    assert CertInterval.hull(CertInterval(0, 1), CertInterval(3, 4)) == CertInterval(0, 4)


def test_reciprocal_of_interval_through_zero():
    with pytest.raises(ZeroDivisionError):
        CertInterval(-1, 1).reciprocal()


@settings(max_examples=40)
@given(intervals(0, 20), intervals(0, 20), st.data())
def test_monotone_ops_contain_pointwise(x, y, data):
    X, Y = CertInterval(*x), CertInterval(*y)
    s, d, m = X + Y, X - Y, X * Y
    positive = x[0] > 0
    if positive:
        lx, rx = X.log(48), X.sqrt(48)
    for _ in range(20):
        p = data.draw(st.fractions(min_value=x[0], max_value=x[1], max_denominator=1000))
        q = data.draw(st.fractions(min_value=y[0], max_value=y[1], max_denominator=1000))
        assert s.contains(p + q) and d.contains(p - q) and m.contains(p * q)
        if positive:
            lp = interval_log(p, 64)
            assert lx.lo <= lp.lo and lp.hi <= lx.hi
            assert rx.lo ** 2 <= p <= rx.hi ** 2


def test_interval_containment_1000_points():
    import random
    rng = random.Random(7)
    X = CertInterval(F(1, 3), F(7, 2))
    inv, sq = X.reciprocal(), X * X
    rt = X.root(3, 64)
    for _ in range(1000):
        x = X.lo + (X.hi - X.lo) * F(rng.randrange(10 ** 6), 10 ** 6)
        assert inv.contains(1 / x)
        assert sq.contains(x * x)
        assert rt.lo ** 3 <= x <= rt.hi ** 3
