import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from zeckpell.factoring import FactoringCeilingExceeded, factorize, is_probable_prime, squarefree_part


def test_primality_small_range_against_sympy():
    for n in range(-3, 5000):
        assert is_probable_prime(n) == sympy.isprime(n)


@pytest.mark.parametrize(
    "n",
    [
        3215031751,  # strong pseudoprime to bases 2, 3, 5, 7
        3825123056546413051,
        318665857834031151167461,
        2**61 - 1,
        2**89 - 1,
        (2**61 - 1) * (2**31 - 1),
    ],
)
def test_primality_hard_cases(n):
    assert is_probable_prime(n) == sympy.isprime(n)


@given(st.integers(min_value=1, max_value=10**18))
@settings(max_examples=80, deadline=None)
def test_factorize_matches_sympy(n):
    assert factorize(n) == sympy.factorint(n)


def test_factorize_semiprimes():
    p, q = 1000000007, 998244353
    assert factorize(p * q) == {q: 1, p: 1}
    assert factorize(p * p * q) == {q: 1, p: 2}
    big = (2**61 - 1) * 1000000007
    assert factorize(big) == {1000000007: 1, 2**61 - 1: 1}


@given(st.integers(min_value=1, max_value=10**15))
@settings(max_examples=80, deadline=None)
def test_squarefree_part(N):
    d, Y = squarefree_part(N)
    assert d * Y * Y == N
    assert all(e == 1 for e in sympy.factorint(d).values())


def test_squarefree_examples():
    assert squarefree_part(48) == (3, 4)
    assert squarefree_part(1) == (1, 1)
    # 199**2 - 1 = 2**4 3**2 5**2 11
    assert squarefree_part(199**2 - 1)[0] == 11
    assert squarefree_part(28801**2 - 1)[0] == 14401
    assert squarefree_part(10951**2 - 1)[0] == 219


def test_ceiling_and_domain():
    with pytest.raises(FactoringCeilingExceeded):
        factorize(10**41)
    with pytest.raises(ValueError):
        factorize(0)
    assert factorize(10**41, ceiling=10**42)[2] == 41
