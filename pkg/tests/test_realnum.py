from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zeckpell.realnum import (
    ALPHA,
    Comparison,
    ExpressionSyntaxError,
    IntervalDivisionByZero,
    NonPositiveLogArgument,
    PrecisionExhausted,
    RealInterval,
    approx,
    as_expr,
    compare_certified,
    eval_at_working_precision,
    evaluate,
    exact_quadratic,
    log,
    parse_prefix,
    sqrt,
    to_prefix,
)

fractions = st.fractions(min_value=-10**6, max_value=10**6, max_denominator=10**6)
positive = st.fractions(min_value=Fraction(1, 10**6), max_value=10**6, max_denominator=10**6)
bits = st.integers(min_value=24, max_value=300)


def _mp(q):
    return mpmath.mpf(q.numerator) / q.denominator


@given(fractions, bits)
def test_from_number_contains(q, w):
    iv = RealInterval.from_number(q, w)
    assert iv.contains(q)
    assert iv.width <= abs(q) * Fraction(1, 2 ** (w - 2))


@given(fractions, fractions, bits)
def test_field_ops_contain_exact(a, b, w):
    x, y = RealInterval.from_number(a, w), RealInterval.from_number(b, w)
    assert (x + y).contains(a + b)
    assert (x - y).contains(a - b)
    assert (x * y).contains(a * b)
    if b != 0:
        assert (x / y).contains(a / b)


@given(positive, bits)
@settings(max_examples=60)
def test_sqrt_log_enclose_true_value(q, w):
    iv = RealInterval.from_number(q, w)
    with mpmath.workprec(w + 200):
        s = mpmath.sqrt(_mp(q))
        lg = mpmath.log(_mp(q))
        assert _mp(iv.sqrt().lower) <= s <= _mp(iv.sqrt().upper)
        assert _mp(iv.log().lower) <= lg <= _mp(iv.log().upper)


@given(fractions, st.integers(min_value=0, max_value=7))
def test_power_contains(q, k):
    iv = RealInterval.from_number(q, 80)
    assert (iv**k).contains(q**k)


def test_division_by_interval_with_zero():
    x = RealInterval.from_bounds(-1, 1, 64)
    with pytest.raises(IntervalDivisionByZero):
        RealInterval.from_number(1, 64) / x


def test_log_of_nonpositive():
    with pytest.raises(NonPositiveLogArgument):
        RealInterval.from_bounds(-1, 2, 64).log()


def test_nearest_integer_and_distance():
    iv = RealInterval.from_bounds(Fraction(29, 10), Fraction(31, 10), 64)
    assert iv.nearest_integer() == 3
    d = iv.distance_to_nearest_integer()
    assert d.lower <= Fraction(1, 10) + Fraction(1, 10**12)
    amb = RealInterval.from_bounds(Fraction(24, 10), Fraction(26, 10), 64)
    assert amb.nearest_integer() is None
    assert RealInterval.from_bounds(Fraction(7, 2), Fraction(7, 2), 64).nearest_integer() is None


def test_evaluate_golden_ratio_and_log():
    iv = evaluate(ALPHA, 200)
    with mpmath.workprec(400):
        phi = (1 + mpmath.sqrt(5)) / 2
        assert _mp(iv.lower) <= phi <= _mp(iv.upper)
        iv = evaluate(log(sqrt(5) / 2) / log(ALPHA), 200)
        t = mpmath.log(mpmath.sqrt(5) / 2) / mpmath.log(phi)
        assert _mp(iv.lower) <= t <= _mp(iv.upper)
    assert iv.width < Fraction(1, 2**190)


def test_evaluate_escalates_under_cancellation():
    # (alpha**200 + 1) - alpha**200 needs far more than the target bits
    e = (ALPHA**200 + 1) - ALPHA**200
    iv = evaluate(e, 64)
    assert iv.contains(1)


def test_evaluate_cap():
    e = (ALPHA**5000 + 1) - ALPHA**5000
    with pytest.raises(PrecisionExhausted):
        evaluate(e, 64, max_precision_bits=256)


def test_compare_certified():
    assert compare_certified(log(3), 1) is Comparison.GREATER
    assert compare_certified(sqrt(2), Fraction(141421, 100000)) is Comparison.GREATER
    assert compare_certified(ALPHA**2, ALPHA + 1) is Comparison.EQUAL
    assert compare_certified((sqrt(5) + 1) / 2, ALPHA) is Comparison.EQUAL
    assert compare_certified(log(2) + log(3), log(6), max_precision_bits=512) is Comparison.UNDECIDED
    assert compare_certified(ALPHA**-3, Fraction(1, 4)) is Comparison.LESS


def test_exact_quadratic():
    assert exact_quadratic((1 + sqrt(3)) ** 2) == exact_quadratic(4 + 2 * sqrt(3))
    assert exact_quadratic(sqrt(12)) == exact_quadratic(2 * sqrt(3))
    assert exact_quadratic(sqrt(2) + sqrt(3)) is None
    assert exact_quadratic(log(2)) is None


@pytest.mark.parametrize(
    "text",
    [
        "alpha",
        "(/ (log (/ (sqrt 5) 2)) (log alpha))",
        "(^ alpha -7)",
        "(abs (- (log 2) 1))",
        "(neg 3/7)",
        "(log (+ 1 (^ alpha 312)))",
    ],
)
def test_prefix_round_trip(text):
    e = parse_prefix(text)
    assert to_prefix(parse_prefix(to_prefix(e))) == to_prefix(e)
    assert evaluate(e, 64).overlaps(evaluate(parse_prefix(to_prefix(e)), 64))


def test_prefix_variadic_and_numbers():
    assert to_prefix(parse_prefix("(+ 1 2 3)")) == "(+ (+ 1 2) 3)"
    assert evaluate(parse_prefix("8.2e124"), 64).contains(82 * 10**123)
    assert approx(parse_prefix("(* 2 alpha)"), 10) == pytest.approx(3.2360679775)


@pytest.mark.parametrize("bad", ["", "(", ")", "(log)", "(foo 1)", "(^ alpha x)", "(+ 1)", "1 2", "beta"])
def test_prefix_errors(bad):
    with pytest.raises(ExpressionSyntaxError):
        parse_prefix(bad)


exprs = st.recursive(
    st.one_of(st.integers(1, 50).map(as_expr), st.just(ALPHA)),
    lambda c: st.one_of(
        st.tuples(c, c).map(lambda p: p[0] + p[1]),
        st.tuples(c, c).map(lambda p: p[0] * p[1]),
        c.map(lambda e: log(1 + e * e)),
        c.map(lambda e: sqrt(e * e)),
    ),
    max_leaves=6,
)


@given(exprs)
@settings(max_examples=40, deadline=None)
def test_prefix_round_trip_random(e):
    assert to_prefix(parse_prefix(to_prefix(e))) == to_prefix(e)


@given(exprs)
@settings(max_examples=40, deadline=None)
def test_higher_precision_nests(e):
    lo = eval_at_working_precision(e, 64)
    hi = eval_at_working_precision(e, 256)
    assert lo.overlaps(hi)
    assert hi.width <= lo.width
