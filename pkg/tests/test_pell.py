import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zeckpell.pell import (
    PellSolution,
    PerfectSquare,
    XSequence,
    fundamental_solution,
    normalize_to_fundamental,
    p_poly_eval,
    p_poly_invert,
    sqrt_cf,
    squarefree_part,
)
from zeckpell.realnum import ALPHA, Comparison, compare_certified, evaluate, sqrt


def _brute_fundamental(d, ymax=10**5):
    for y in range(1, ymax):
        for eps in (-1, 1):
            x2 = d * y * y + eps
            x = math.isqrt(x2)
            if x * x == x2 and x > 0:
                return x, y, eps
    return None


NONSQUARE = [d for d in range(2, 120) if math.isqrt(d) ** 2 != d]


@pytest.mark.parametrize("d", NONSQUARE)
def test_fundamental_matches_brute_force(d):
    sol = fundamental_solution(d)
    brute = _brute_fundamental(d)
    if brute is not None:
        assert (sol.X1, sol.Y1, sol.epsilon) == brute
    assert sol.X1**2 - d * sol.Y1**2 == sol.epsilon


@pytest.mark.parametrize(
    "d,x,y,eps",
    [(2, 1, 1, -1), (3, 2, 1, 1), (11, 10, 3, 1), (30, 11, 2, 1), (219, 74, 5, 1), (14401, 120, 1, -1), (5, 2, 1, -1), (61, 29718, 3805, -1)],
)
def test_known_units(d, x, y, eps):
    s = fundamental_solution(d)
    assert (s.X1, s.Y1, s.epsilon) == (x, y, eps)


def test_sqrt_cf():
    assert sqrt_cf(7).period == (1, 1, 1, 4)
    assert sqrt_cf(2).partial_quotients(5) == [1, 2, 2, 2, 2]
    with pytest.raises(PerfectSquare):
        sqrt_cf(49)
    with pytest.raises(ValueError):
        sqrt_cf(1)


def test_bad_solution_rejected():
    with pytest.raises(ValueError):
        PellSolution(3, 2, 2, 1)


@given(st.sampled_from(NONSQUARE), st.integers(min_value=0, max_value=30))
@settings(max_examples=60, deadline=None)
def test_x_values_solve_the_equation(d, ell):
    s = fundamental_solution(d)
    x = s.x(ell)
    # X_l^2 - d Y_l^2 = eps^l, with Y_l an integer
    y2, r = divmod(x * x - s.epsilon**ell, d)
    assert r == 0 and math.isqrt(y2) ** 2 == y2


@given(st.sampled_from(NONSQUARE[:30]), st.integers(min_value=1, max_value=25))
@settings(max_examples=40, deadline=None)
def test_x_values_are_half_traces(d, ell):
    # X_l = (delta^l + eta^l)/2, compared through certified enclosures
    s = fundamental_solution(d)
    tr = (s.delta_expr**ell + (s.X1 - s.Y1 * sqrt(d)) ** ell) / 2
    assert evaluate(tr, 64).contains(s.x(ell))


def test_x_sequence():
    seq = XSequence(fundamental_solution(3))
    assert seq.values(4) == [1, 2, 7, 26, 97]
    assert seq[10] == fundamental_solution(3).x(10)
    with pytest.raises(IndexError):
        seq[-1]


@given(st.integers(min_value=2, max_value=12), st.sampled_from([1, -1]), st.integers(min_value=1, max_value=10**6))
@settings(max_examples=150, deadline=None)
def test_p_poly_invert(ell, eps, x):
    if eps == 1 and x == 1:
        return
    T = p_poly_eval(ell, eps, x)
    assert p_poly_invert(ell, eps, T) == x
    assert p_poly_invert(ell, eps, T + 1) in (None, x + 1)


def test_p_poly_values():
    assert [p_poly_eval(l, 1, 2) for l in range(5)] == [1, 2, 7, 26, 97]
    assert [p_poly_eval(l, -1, 1) for l in range(5)] == [1, 1, 3, 7, 17]
    assert p_poly_invert(2, 1, 8) is None
    with pytest.raises(ValueError):
        p_poly_eval(2, 0, 3)
    with pytest.raises(ValueError):
        p_poly_invert(1, 1, 5)


@pytest.mark.parametrize(
    "x,eps,d,ell",
    [(7, 1, 3, 2), (26, 1, 3, 3), (199, 1, 11, 2), (241, 1, 30, 2), (10951, 1, 219, 2), (3, 1, 2, 2), (7, -1, 2, 3), (28801, 1, 14401, 2)],
)
def test_normalize_to_fundamental(x, eps, d, ell):
    sol, got = normalize_to_fundamental(x, eps)
    assert (sol.d, got) == (d, ell)


def test_normalize_rejects_trivial():
    with pytest.raises(ValueError):
        normalize_to_fundamental(1, 1)


SAMPLED_D = [2, 3, 5, 6, 7, 11, 13, 30, 61, 94, 109, 219, 421, 14401]


@pytest.mark.parametrize("d", SAMPLED_D)
def test_x_bounds_by_powers_of_delta(d):
    # delta**l / alpha**2 <= X_l < delta**l, certified
    s = fundamental_solution(d)
    for ell in range(1, 51):
        x = s.x(ell)
        assert compare_certified(x, s.delta_expr**ell) is Comparison.LESS
        assert compare_certified(x, s.delta_expr**ell / ALPHA**2) is Comparison.GREATER


@pytest.mark.parametrize("d", SAMPLED_D)
def test_doubling(d):
    s = fundamental_solution(d)
    for ell in range(26):
        assert s.x(2 * ell) == 2 * s.x(ell) ** 2 - s.epsilon**ell


def test_minimality_up_to_500():
    for d in range(2, 501):
        if math.isqrt(d) ** 2 == d:
            continue
        s = fundamental_solution(d)
        assert s.X1**2 - d * s.Y1**2 == s.epsilon
        if s.Y1 <= 2000:
            for y in range(1, s.Y1):
                for eps in (1, -1):
                    x2 = d * y * y + eps
                    assert math.isqrt(x2) ** 2 != x2


def test_delta_at_least_one_plus_sqrt2():
    for d in SAMPLED_D:
        c = compare_certified(fundamental_solution(d).delta_expr, 1 + sqrt(2))
        assert c in (Comparison.GREATER, Comparison.EQUAL)


def test_p_poly_invert_exhaustive_small():
    for ell in range(2, 21):
        for eps in (1, -1):
            for x in range(1, 1001):
                if eps == 1 and x == 1:
                    continue
                assert p_poly_invert(ell, eps, p_poly_eval(ell, eps, x)) == x


def test_unit_219_from_period():
    cf = sqrt_cf(219)
    r = len(cf.period)
    assert cf.convergents(r)[r - 1] == (74, 5)
    assert squarefree_part(5475) == (219, 5)
    assert p_poly_invert(2, 1, 241) == 11
    assert p_poly_invert(2, -1, 28801) == 120
    assert p_poly_eval(3, -1, 1) == 7
