"""Pell equations x**2 - d*y**2 = +-1: fundamental units, X_l, P_l polynomials."""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .factoring import DEFAULT_CEILING, FactoringCeilingExceeded, squarefree_part
from .realnum import ConstExpr, as_expr, log, sqrt

__all__ = [
    "FactoringCeilingExceeded",
    "PellSolution",
    "PerfectSquare",
    "SqrtContinuedFraction",
    "XSequence",
    "fundamental_solution",
    "normalize_to_fundamental",
    "p_poly_eval",
    "p_poly_invert",
    "sqrt_cf",
    "squarefree_part",
    "unit_expr",
    "x_value",
]


class PerfectSquare(ValueError):
    pass


@dataclass(frozen=True)
class SqrtContinuedFraction:
    """sqrt(d) = [a0; period, period, ...] with the period stored once."""

    d: int
    a0: int
    period: Tuple[int, ...]

    def partial_quotients(self, count: int) -> List[int]:
        r = len(self.period)
        return [self.a0] + [self.period[i % r] for i in range(count - 1)]

    def convergents(self, count: int) -> List[Tuple[int, int]]:
        out = []
        p0, q0, p1, q1 = 1, 0, self.a0, 1
        out.append((p1, q1))
        for a in self.partial_quotients(count)[1:]:
            p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
            out.append((p1, q1))
        return out


def sqrt_cf(d: int) -> SqrtContinuedFraction:
    if d < 2:
        raise ValueError("d must be at least 2")
    a0 = math.isqrt(d)
    if a0 * a0 == d:
        raise PerfectSquare(f"{d} is a perfect square")
    # standard (m, q, a) recurrence; the period ends at the first a = 2*a0
    m, q, a = 0, 1, a0
    period = []
    while a != 2 * a0:
        m = a * q - m
        q = (d - m * m) // q
        a = (a0 + m) // q
        period.append(a)
    return SqrtContinuedFraction(d, a0, tuple(period))


def unit_expr(x: int, epsilon: int) -> ConstExpr:
    """x + sqrt(x**2 - epsilon), the unit with X_1 = x, without naming d."""
    return as_expr(x) + sqrt(x * x - epsilon)


@dataclass(frozen=True)
class PellSolution:
    d: int
    X1: int
    Y1: int
    epsilon: int

    def __post_init__(self):
        if self.X1 * self.X1 - self.d * self.Y1 * self.Y1 != self.epsilon:
            raise ValueError("not a solution of the Pell equation")

    @property
    def delta_expr(self) -> ConstExpr:
        return as_expr(self.X1) + as_expr(self.Y1) * sqrt(self.d)

    @property
    def log_delta(self) -> ConstExpr:
        return log(self.delta_expr)

    def x(self, ell: int) -> int:
        return x_value(self, ell)


def fundamental_solution(d: int) -> PellSolution:
    """Smallest positive solution of x**2 - d*y**2 = +-1.

    With r the period length of sqrt(d), it is the (r-1)-th convergent and
    the sign is (-1)**r.
    """
    cf = sqrt_cf(d)
    r = len(cf.period)
    p, q = cf.convergents(r)[r - 1]
    return PellSolution(d, p, q, -1 if r % 2 else 1)


def _recurrence(x: int, epsilon: int, ell: int) -> int:
    if ell < 0:
        raise ValueError("index must be non-negative")
    a, b = 1, x
    if ell == 0:
        return 1
    for _ in range(ell - 1):
        a, b = b, 2 * x * b - epsilon * a
    return b


def x_value(sol: PellSolution, ell: int) -> int:
    return _recurrence(sol.X1, sol.epsilon, ell)


def p_poly_eval(ell: int, epsilon: int, x: int) -> int:
    """P_ell(x) = ((x + s)**ell + (x - s)**ell)/2 with s = sqrt(x**2 - epsilon)."""
    if epsilon not in (1, -1):
        raise ValueError("epsilon must be +1 or -1")
    return _recurrence(x, epsilon, ell)


def p_poly_invert(ell: int, epsilon: int, target: int) -> Optional[int]:
    """The x >= 1 with P_ell(x) = target, or None."""
    if ell < 2:
        raise ValueError("inversion needs ell >= 2")
    if target < 1:
        return None
    # P_ell(x) ~ (2x)**ell / 2, so x ~ (2 target)**(1/ell) / 2
    seed = math.exp((math.log(2 * target)) / ell) / 2
    x = max(1, int(seed))
    if p_poly_eval(ell, epsilon, x) > target:
        step = 1
        while x > 1 and p_poly_eval(ell, epsilon, x) > target:
            x = max(1, x - step)
            step *= 2
        lo, hi = x, x + step
    else:
        step = 1
        while p_poly_eval(ell, epsilon, x + step) <= target:
            step *= 2
        lo, hi = x, x + step
    # P is strictly increasing on x >= 1 (constant 1 only for epsilon=+1 at x=1)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if p_poly_eval(ell, epsilon, mid) <= target:
            lo = mid
        else:
            hi = mid
    for cand in (lo, hi):
        if cand >= 1 and p_poly_eval(ell, epsilon, cand) == target:
            return cand
    return None


def normalize_to_fundamental(
    x: int, epsilon: int, ceiling: int = DEFAULT_CEILING
) -> Tuple[PellSolution, int]:
    """Write x as X_ell of a fundamental solution, given x**2 - d*y**2 = epsilon.

    d is the squarefree part of x**2 - epsilon; ell is found by running the
    recurrence of the fundamental unit up to x.
    """
    if x < 1 or (epsilon == 1 and x == 1):
        raise ValueError("x**2 - epsilon must be positive")
    d, _ = squarefree_part(x * x - epsilon, ceiling)
    sol = fundamental_solution(d)
    a, b, ell = 1, sol.X1, 1
    while b < x:
        a, b = b, 2 * sol.X1 * b - sol.epsilon * a
        ell += 1
    if b != x:
        raise ArithmeticError(f"{x} is not an X-value of the unit for d={d}")
    return sol, ell


@dataclass
class XSequence:
    """X_0, X_1, ... of one Pell unit, extended on demand under a lock."""

    base: PellSolution
    _values: List[int] = field(default_factory=list, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def __post_init__(self):
        if not self._values:
            self._values = [1, self.base.X1]

    def __getitem__(self, ell: int) -> int:
        if ell < 0:
            raise IndexError("index must be non-negative")
        vals = self._values
        if ell >= len(vals):
            with self._lock:
                ext = list(self._values)
                x1, eps = self.base.X1, self.base.epsilon
                while len(ext) <= ell:
                    ext.append(2 * x1 * ext[-1] - eps * ext[-2])
                self._values = vals = ext
        return vals[ell]

    def values(self, upto: int) -> List[int]:
        self[upto]
        return self._values[: upto + 1]
