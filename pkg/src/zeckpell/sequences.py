"""Fibonacci and Lucas numbers, Zeckendorf representations, two-term sums."""

from __future__ import annotations

import bisect
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple

STRICT = "strict_gap2"
RELAXED = "relaxed"


def _fib_pair(k: int) -> Tuple[int, int]:
    # fast doubling: returns (F_k, F_{k+1})
    if k == 0:
        return 0, 1
    a, b = _fib_pair(k >> 1)
    c = a * (2 * b - a)
    d = a * a + b * b
    if k & 1:
        return d, c + d
    return c, d


def fib(k: int) -> int:
    if k < 0:
        raise ValueError("fib index must be non-negative")
    return _fib_pair(k)[0]


def lucas(k: int) -> int:
    if k < 0:
        raise ValueError("lucas index must be non-negative")
    f, g = _fib_pair(k)
    return 2 * g - f


class _FibTable:
    """Append-only table of F_0, F_1, ... guarded by a writer lock."""

    def __init__(self):
        self._values = [0, 1]
        self._lock = threading.Lock()

    def upto(self, n: int) -> List[int]:
        # snapshot of all Fibonacci numbers <= n
        vals = self._values
        if vals[-1] < n or len(vals) < 3:
            with self._lock:
                vals = self._values
                ext = list(vals)
                while ext[-1] <= n:
                    ext.append(ext[-1] + ext[-2])
                self._values = ext
                vals = ext
        return vals

    def index_of(self, value: int) -> int:
        """Largest k with F_k <= value."""
        vals = self.upto(value)
        return bisect.bisect_right(vals, value) - 1


_TABLE = _FibTable()


@dataclass(frozen=True)
class ZeckendorfRep:
    indices: Tuple[int, ...]

    def __post_init__(self):
        idx = self.indices
        for i, k in enumerate(idx):
            if k < 2:
                raise ValueError("Zeckendorf indices start at 2")
            if i and k - idx[i - 1] < 2:
                raise ValueError("Zeckendorf indices must differ by at least 2")

    def __len__(self):
        return len(self.indices)

    @property
    def value(self) -> int:
        return zeckendorf_decode(self)


def zeckendorf_encode(N: int) -> ZeckendorfRep:
    if N < 0:
        raise ValueError("N must be non-negative")
    out = []
    while N:
        k = _TABLE.index_of(N)
        out.append(k)
        N -= fib(k)
    return ZeckendorfRep(tuple(reversed(out)))


def zeckendorf_decode(rep) -> int:
    indices = rep.indices if isinstance(rep, ZeckendorfRep) else rep
    return sum(fib(k) for k in indices)


@dataclass(frozen=True, order=True)
class TwoTermSum:
    m: int
    n: int

    @property
    def value(self) -> int:
        return fib(self.m) + fib(self.n)

    @property
    def gap(self) -> int:
        return self.n - self.m


def _all_pairs(N: int) -> List[Tuple[int, int]]:
    """Every (m, n) with 0 <= m <= n and F_m + F_n = N."""
    table = _TABLE.upto(N)
    top = bisect.bisect_right(table, N) - 1
    out = []
    for n in range(top, -1, -1):
        rest = N - table[n]
        if rest > table[n]:
            break
        j = bisect.bisect_left(table, rest)
        # F_1 = F_2 = 1, so the value 1 has two indices
        while j <= n and j < len(table) and table[j] == rest:
            out.append((j, n))
            j += 1
    return sorted(out)


def two_term_reps(N: int, gap_policy: str = STRICT, include_zero: bool = True) -> List[TwoTermSum]:
    """Ways of writing N as F_m + F_n with m <= n, in ascending order.

    ``strict_gap2`` returns the canonical pairs: n - m >= 2 and m >= 1, where
    a pair (1, n) is reported as (2, n) since F_1 = F_2 (the pair (1, 3) has
    no such twin and stays). ``relaxed`` returns every other pair, e.g. 2F_7
    for 26 or F_0 + F_n for a Fibonacci number, skipping aliases of the strict
    ones; pairs using F_0 appear only with ``include_zero``.
    """
    if N < 1:
        raise ValueError("N must be positive")
    pairs = _all_pairs(N)
    strict = set()
    for m, n in pairs:
        if m >= 1 and n - m >= 2:
            strict.add((2, n) if m == 1 and n >= 4 else (m, n))
    if gap_policy == STRICT:
        return [TwoTermSum(m, n) for m, n in sorted(strict)]
    if gap_policy != RELAXED:
        raise ValueError(f"unknown gap policy {gap_policy!r}")
    relaxed = []
    for m, n in pairs:
        if (m, n) in strict or (m == 1 and (2, n) in strict) or (m == 2 and (1, n) in strict):
            continue
        if m == 0 and not include_zero:
            continue
        relaxed.append(TwoTermSum(m, n))
    return relaxed


def is_two_term_sum(N: int, relaxed: bool = False) -> bool:
    if N < 1:
        return False
    if len(zeckendorf_encode(N)) <= 2:
        return True
    return relaxed and bool(_all_pairs(N))


def lucas_half_identity_check(n: int) -> Fraction:
    """L_n/2 - F_n - F_{n-3}/2, which vanishes for every multiple of 3."""
    if n < 3 or n % 3:
        raise ValueError("n must be a positive multiple of 3")
    return Fraction(lucas(n), 2) - fib(n) - Fraction(fib(n - 3), 2)


def parity_identity_check(n: int) -> int:
    """F_{2n+1} + F_{2n-5} - 2(F_n + F_{n-2})**2, equal to 4(-1)**n."""
    if n < 3:
        raise ValueError("n must be at least 3")
    return fib(2 * n + 1) + fib(2 * n - 5) - 2 * (fib(n) + fib(n - 2)) ** 2


def norm_one_plus_alpha_pow(k: int) -> int:
    """Norm of 1 + alpha**k from Q(sqrt 5) to Q."""
    if k < 1:
        raise ValueError("k must be positive")
    if k % 2:
        return lucas(k)
    if k % 4 == 2:
        return 5 * fib(k // 2) ** 2
    return lucas(k // 2) ** 2
