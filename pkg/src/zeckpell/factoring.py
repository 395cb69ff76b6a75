"""Integer factorization for squarefree-part extraction.

Trial division by small primes, a deterministic-base Miller-Rabin test and
Brent's variant of Pollard rho. Inputs above a configurable ceiling are
refused rather than left to run for an unbounded time.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from typing import Dict

DEFAULT_CEILING = 10**40

_SMALL_PRIMES = [p for p in range(2, 1000) if all(p % q for q in range(2, int(p**0.5) + 1))]
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


class FactoringCeilingExceeded(ValueError):
    pass


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin; deterministic below 3.3e24, 13 bases above."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES[:13]:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent(n: int, rng: random.Random) -> int:
    if n % 2 == 0:
        return 2
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factorize(n: int, ceiling: int = DEFAULT_CEILING, seed: int = 1) -> Dict[int, int]:
    """Prime factorization as {prime: exponent}."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > ceiling:
        raise FactoringCeilingExceeded(f"{n} exceeds the factoring ceiling {ceiling}")
    out: Counter = Counter()
    for p in _SMALL_PRIMES:
        while n % p == 0:
            out[p] += 1
            n //= p
    rng = random.Random(seed)
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_probable_prime(m):
            out[m] += 1
            continue
        r = math.isqrt(m)
        if r * r == m:
            stack += [r, r]
            continue
        f = _brent(m, rng)
        stack += [f, m // f]
    return dict(sorted(out.items()))


def squarefree_part(N: int, ceiling: int = DEFAULT_CEILING):
    """(d, Y) with N = d * Y**2 and d squarefree."""
    d = Y = 1
    for p, e in factorize(N, ceiling).items():
        if e % 2:
            d *= p
        Y *= p ** (e // 2)
    return d, Y
