"""Outward-rounded interval enclosures of real numbers.

Endpoints are raw binary floats from ``mpmath.libmp``; every operation rounds
the lower endpoint toward -inf and the upper endpoint toward +inf, so an
interval always contains the exact result of the computation it came from.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from mpmath.libmp import (
    fone,
    from_int,
    from_man_exp,
    from_rational,
    fzero,
    mpf_add,
    mpf_cmp,
    mpf_div,
    mpf_log,
    mpf_mul,
    mpf_neg,
    mpf_sqrt,
    mpf_sub,
    round_ceiling,
    round_floor,
    to_str,
)

Number = Union[int, Fraction]

FLOOR = round_floor
CEIL = round_ceiling

# Transcendental results are widened by this many units in the last place to
# absorb any sub-ulp inaccuracy of the underlying directed-rounding kernels.
_TRANSCENDENTAL_SLACK_ULPS = 4


class NonPositiveLogArgument(ValueError):
    """The argument of a logarithm is not certifiably positive."""


class IntervalDivisionByZero(ZeroDivisionError):
    """The divisor interval contains zero."""


def _to_fraction(x) -> Fraction:
    sign, man, exp, _bc = x
    if not man:
        if x != fzero:
            raise ValueError("non-finite interval endpoint")
        return Fraction(0)
    v = -int(man) if sign else int(man)
    if exp >= 0:
        return Fraction(v << exp)
    return Fraction(v, 1 << -exp)


def _from_number(q: Number, prec: int, rnd: str):
    if isinstance(q, int):
        return from_int(q, prec, rnd)
    q = Fraction(q)
    return from_rational(q.numerator, q.denominator, prec, rnd)


def _ulps(x, prec: int, count: int):
    if x == fzero:
        return fzero
    _sign, _man, exp, bc = x
    return from_man_exp(count, exp + bc - prec)


def _widen_down(x, prec):
    return mpf_sub(x, _ulps(x, prec, _TRANSCENDENTAL_SLACK_ULPS), prec, FLOOR)


def _widen_up(x, prec):
    return mpf_add(x, _ulps(x, prec, _TRANSCENDENTAL_SLACK_ULPS), prec, CEIL)


def _min(a, b):
    return a if mpf_cmp(a, b) <= 0 else b


def _max(a, b):
    return a if mpf_cmp(a, b) >= 0 else b


@dataclass(frozen=True)
class RealInterval:
    """A closed interval [lo, hi] known to contain some exact real number.

    ``precision_bits`` is the working precision used to round the endpoints.
    """

    lo: tuple
    hi: tuple
    precision_bits: int

    def __post_init__(self):
        if mpf_cmp(self.lo, self.hi) > 0:
            raise ValueError("interval with lo > hi")

    # -- construction -----------------------------------------------------

    @classmethod
    def from_number(cls, q: Number, precision_bits: int) -> "RealInterval":
        return cls(
            _from_number(q, precision_bits, FLOOR),
            _from_number(q, precision_bits, CEIL),
            precision_bits,
        )

    @classmethod
    def from_bounds(cls, lo: Number, hi: Number, precision_bits: int) -> "RealInterval":
        return cls(
            _from_number(lo, precision_bits, FLOOR),
            _from_number(hi, precision_bits, CEIL),
            precision_bits,
        )

    def _coerce(self, other) -> "RealInterval":
        if isinstance(other, RealInterval):
            return other
        if isinstance(other, (int, Fraction)):
            return RealInterval.from_number(other, self.precision_bits)
        return NotImplemented

    # -- exact views of the endpoints --------------------------------------

    @property
    def lower(self) -> Fraction:
        return _to_fraction(self.lo)

    @property
    def upper(self) -> Fraction:
        return _to_fraction(self.hi)

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    @property
    def mid(self) -> Fraction:
        return (self.lower + self.upper) / 2

    def __float__(self) -> float:
        return float(self.mid)

    def contains(self, q: Number) -> bool:
        return self.lower <= q <= self.upper

    def overlaps(self, other: "RealInterval") -> bool:
        return mpf_cmp(self.lo, other.hi) <= 0 and mpf_cmp(other.lo, self.hi) <= 0

    def is_positive(self) -> bool:
        return mpf_cmp(self.lo, fzero) > 0

    def is_negative(self) -> bool:
        return mpf_cmp(self.hi, fzero) < 0

    def contains_zero(self) -> bool:
        return not (self.is_positive() or self.is_negative())

    def magnitude_lower(self) -> Fraction:
        """Certified lower bound for |x| over the interval."""
        if self.contains_zero():
            return Fraction(0)
        return min(abs(self.lower), abs(self.upper))

    def floor(self) -> Optional[int]:
        """floor(x) if it is the same for every x in the interval, else None."""
        lo = self.lower
        hi = self.upper
        f = lo.numerator // lo.denominator
        if hi.numerator // hi.denominator == f:
            return f
        return None

    def nearest_integer(self) -> Optional[int]:
        """Nearest integer (ties to even) if unambiguous over the interval."""
        a = _round_half_even(self.lower)
        b = _round_half_even(self.upper)
        if a != b:
            return None
        # An endpoint sitting on a half-integer is ambiguous under perturbation.
        for q in (self.lower, self.upper):
            if (2 * q).denominator == 1 and q.denominator != 1:
                return None
        return a

    def distance_to_nearest_integer(self) -> "RealInterval":
        """Enclosure of ||x|| = min_n |x - n| over the interval."""
        lo, hi = self.lower, self.upper
        if hi - lo >= 1:
            return RealInterval.from_bounds(0, Fraction(1, 2), self.precision_bits)
        ends = (_dist(lo), _dist(hi))
        lower, upper = min(ends), max(ends)
        if _ceil(lo) <= hi:
            lower = Fraction(0)
        if _ceil(lo - Fraction(1, 2)) + Fraction(1, 2) <= hi:
            upper = Fraction(1, 2)
        return RealInterval.from_bounds(lower, upper, self.precision_bits)

    # -- arithmetic --------------------------------------------------------

    def __neg__(self) -> "RealInterval":
        return RealInterval(mpf_neg(self.hi), mpf_neg(self.lo), self.precision_bits)

    def __add__(self, other) -> "RealInterval":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = min(self.precision_bits, other.precision_bits)
        return RealInterval(
            mpf_add(self.lo, other.lo, p, FLOOR), mpf_add(self.hi, other.hi, p, CEIL), p
        )

    __radd__ = __add__

    def __sub__(self, other) -> "RealInterval":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = min(self.precision_bits, other.precision_bits)
        return RealInterval(
            mpf_sub(self.lo, other.hi, p, FLOOR), mpf_sub(self.hi, other.lo, p, CEIL), p
        )

    def __rsub__(self, other) -> "RealInterval":
        return self._coerce(other) - self

    def __mul__(self, other) -> "RealInterval":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = min(self.precision_bits, other.precision_bits)
        pairs = [(a, b) for a in (self.lo, self.hi) for b in (other.lo, other.hi)]
        lo = hi = None
        for a, b in pairs:
            down = mpf_mul(a, b, p, FLOOR)
            up = mpf_mul(a, b, p, CEIL)
            lo = down if lo is None else _min(lo, down)
            hi = up if hi is None else _max(hi, up)
        return RealInterval(lo, hi, p)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RealInterval":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.contains_zero():
            raise IntervalDivisionByZero("divisor interval contains zero")
        p = min(self.precision_bits, other.precision_bits)
        lo = hi = None
        for a in (self.lo, self.hi):
            for b in (other.lo, other.hi):
                down = mpf_div(a, b, p, FLOOR)
                up = mpf_div(a, b, p, CEIL)
                lo = down if lo is None else _min(lo, down)
                hi = up if hi is None else _max(hi, up)
        return RealInterval(lo, hi, p)

    def __rtruediv__(self, other) -> "RealInterval":
        return self._coerce(other) / self

    def __abs__(self) -> "RealInterval":
        if mpf_cmp(self.lo, fzero) >= 0:
            return self
        if mpf_cmp(self.hi, fzero) <= 0:
            return -self
        return RealInterval(fzero, _max(mpf_neg(self.lo), self.hi), self.precision_bits)

    def __pow__(self, k: int) -> "RealInterval":
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return 1 / (self ** (-k))
        if k == 0:
            return RealInterval(fone, fone, self.precision_bits)
        base = abs(self) if k % 2 == 0 else self
        result = None
        while k:
            if k & 1:
                result = base if result is None else result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def sqrt(self) -> "RealInterval":
        if mpf_cmp(self.hi, fzero) < 0:
            raise ValueError("square root of a negative interval")
        p = self.precision_bits
        lo = self.lo if mpf_cmp(self.lo, fzero) > 0 else fzero
        return RealInterval(mpf_sqrt(lo, p, FLOOR), mpf_sqrt(self.hi, p, CEIL), p)

    def log(self) -> "RealInterval":
        if not self.is_positive():
            raise NonPositiveLogArgument("log argument not certifiably positive")
        p = self.precision_bits
        w = p + 10
        lo = mpf_log(self.lo, w, FLOOR)
        hi = mpf_log(self.hi, w, CEIL)
        if self.lo != fone:
            lo = _widen_down(lo, w)
        if self.hi != fone:
            hi = _widen_up(hi, w)
        return RealInterval(
            mpf_add(lo, fzero, p, FLOOR), mpf_add(hi, fzero, p, CEIL), p
        )

    # -- display -----------------------------------------------------------

    def to_decimal_str(self, digits: int = 20) -> str:
        return f"[{to_str(self.lo, digits)}, {to_str(self.hi, digits)}]"

    def __repr__(self) -> str:
        return f"RealInterval({self.to_decimal_str(15)}, prec={self.precision_bits})"


def _round_half_even(q: Fraction) -> int:
    return round(q)


def _dist(q: Fraction) -> Fraction:
    n = _round_half_even(q)
    return abs(q - n)


def _ceil(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)
