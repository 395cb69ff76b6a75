"""Closed grammar of real constants and their certified evaluation.

The grammar covers integers and rationals, square roots, the golden ratio,
the four field operations, integer powers, absolute values and the natural
logarithm. Every constant handled by the package is built from these nodes.

Expressions also have a prefix text form used by the command line and the
expansion cache, e.g. ``(/ (log (/ (sqrt 5) 2)) (log alpha))``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Union

from .interval import RealInterval

DEFAULT_START_BITS = 128
DEFAULT_MAX_BITS = 1 << 20


class PrecisionExhausted(ArithmeticError):
    """The requested accuracy was not reached below the precision cap."""


class ConstExpr:
    """Base class for expression nodes. Nodes are immutable and hashable."""

    __slots__ = ()

    def __add__(self, other):
        return BinOp("+", self, as_expr(other))

    def __radd__(self, other):
        return BinOp("+", as_expr(other), self)

    def __sub__(self, other):
        return BinOp("-", self, as_expr(other))

    def __rsub__(self, other):
        return BinOp("-", as_expr(other), self)

    def __mul__(self, other):
        return BinOp("*", self, as_expr(other))

    def __rmul__(self, other):
        return BinOp("*", as_expr(other), self)

    def __truediv__(self, other):
        return BinOp("/", self, as_expr(other))

    def __rtruediv__(self, other):
        return BinOp("/", as_expr(other), self)

    def __neg__(self):
        return Neg(self)

    def __abs__(self):
        return Abs(self)

    def __pow__(self, k):
        if not isinstance(k, int):
            raise TypeError("only integer powers are part of the grammar")
        return Power(self, k)

    def __str__(self) -> str:
        return to_prefix(self)


@dataclass(frozen=True, eq=True)
class Rational(ConstExpr):
    value: Fraction


@dataclass(frozen=True, eq=True)
class GoldenRatio(ConstExpr):
    pass


@dataclass(frozen=True, eq=True)
class Sqrt(ConstExpr):
    arg: ConstExpr


@dataclass(frozen=True, eq=True)
class Log(ConstExpr):
    arg: ConstExpr


@dataclass(frozen=True, eq=True)
class Abs(ConstExpr):
    arg: ConstExpr


@dataclass(frozen=True, eq=True)
class Neg(ConstExpr):
    arg: ConstExpr


@dataclass(frozen=True, eq=True)
class Power(ConstExpr):
    base: ConstExpr
    exponent: int


@dataclass(frozen=True, eq=True)
class BinOp(ConstExpr):
    op: str
    left: ConstExpr
    right: ConstExpr


ALPHA = GoldenRatio()


def as_expr(x: Union[ConstExpr, int, Fraction, str]) -> ConstExpr:
    if isinstance(x, ConstExpr):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not constants")
    if isinstance(x, (int, Fraction)):
        return Rational(Fraction(x))
    if isinstance(x, str):
        return Rational(Fraction(x))
    raise TypeError(f"cannot use {type(x).__name__} as a constant expression")


def const(x) -> ConstExpr:
    return as_expr(x)


def sqrt(x) -> ConstExpr:
    return Sqrt(as_expr(x))


def log(x) -> ConstExpr:
    return Log(as_expr(x))


# -- evaluation ------------------------------------------------------------


def _eval(expr: ConstExpr, w: int, memo: Dict[int, RealInterval]) -> RealInterval:
    key = id(expr)
    hit = memo.get(key)
    if hit is not None:
        return hit
    if isinstance(expr, Rational):
        r = RealInterval.from_number(expr.value, w)
    elif isinstance(expr, GoldenRatio):
        r = (RealInterval.from_number(5, w).sqrt() + 1) / 2
    elif isinstance(expr, Sqrt):
        inner = _eval(expr.arg, w, memo)
        if inner.is_negative():
            raise ValueError("square root of a negative constant")
        r = inner.sqrt()
    elif isinstance(expr, Log):
        r = _eval(expr.arg, w, memo).log()
    elif isinstance(expr, Abs):
        r = abs(_eval(expr.arg, w, memo))
    elif isinstance(expr, Neg):
        r = -_eval(expr.arg, w, memo)
    elif isinstance(expr, Power):
        r = _eval(expr.base, w, memo) ** expr.exponent
    elif isinstance(expr, BinOp):
        a = _eval(expr.left, w, memo)
        b = _eval(expr.right, w, memo)
        if expr.op == "+":
            r = a + b
        elif expr.op == "-":
            r = a - b
        elif expr.op == "*":
            r = a * b
        elif expr.op == "/":
            r = a / b
        else:
            raise ValueError(f"unknown operator {expr.op!r}")
    else:
        raise TypeError(f"not a constant expression node: {expr!r}")
    memo[key] = r
    return r


def eval_at_working_precision(expr: ConstExpr, working_bits: int) -> RealInterval:
    """One evaluation pass at a fixed working precision, no accuracy target."""
    return _eval(expr, working_bits, {})


def _accurate_enough(iv: RealInterval, precision_bits: int) -> bool:
    scale = max(Fraction(1), iv.magnitude_lower())
    return iv.width <= scale * Fraction(8, 1 << precision_bits)


def evaluate(
    expr: ConstExpr, precision_bits: int, max_precision_bits: int = DEFAULT_MAX_BITS
) -> RealInterval:
    """Enclose ``expr`` with width at most 2**(3 - precision_bits) * max(1, |value|).

    The working precision starts a little above the target and doubles until
    the width criterion holds; cancellation inside the tree is what forces
    the extra rounds.
    """
    if precision_bits < 1:
        raise ValueError("precision_bits must be positive")
    w = precision_bits + 32
    while True:
        iv = _eval(expr, w, {})
        if _accurate_enough(iv, precision_bits):
            return iv
        if w >= max_precision_bits:
            raise PrecisionExhausted(
                f"could not reach {precision_bits} bits below the {max_precision_bits}-bit cap"
            )
        w = min(2 * w, max_precision_bits)


# ``eval`` would shadow the builtin, so the public alias gets a suffix.
eval_expr = evaluate


class Comparison(enum.Enum):
    LESS = "less"
    GREATER = "greater"
    EQUAL = "equal"
    UNDECIDED = "undecided"


def compare_certified(
    a, b, max_precision_bits: int = DEFAULT_MAX_BITS, start_bits: int = DEFAULT_START_BITS
) -> Comparison:
    """Decide a < b or a > b from separated enclosures, or a == b exactly.

    EQUAL is only reported when both sides reduce to the same element of a
    single quadratic field (this covers the golden-ratio rewrite
    alpha**2 = alpha + 1). Otherwise precision doubles from ``start_bits`` up
    to the cap and UNDECIDED is returned if the enclosures never separate.
    """
    a = as_expr(a)
    b = as_expr(b)
    qa, qb = exact_quadratic(a), exact_quadratic(b)
    if qa is not None and qb is not None and qa == qb:
        return Comparison.EQUAL
    diff = a - b
    w = start_bits
    while True:
        try:
            iv = _eval(diff, w, {})
        except (ValueError, ZeroDivisionError):
            iv = None
        if iv is not None:
            if iv.is_positive():
                return Comparison.GREATER
            if iv.is_negative():
                return Comparison.LESS
        if w >= max_precision_bits:
            return Comparison.UNDECIDED
        w = min(2 * w, max_precision_bits)


# -- exact arithmetic in a single quadratic field ----------------------------


@dataclass(frozen=True)
class QuadraticNumber:
    """a + b*sqrt(r) with rational a, b and squarefree r (r = 1 means b = 0)."""

    a: Fraction
    b: Fraction
    r: int

    @staticmethod
    def rational(q) -> "QuadraticNumber":
        return QuadraticNumber(Fraction(q), Fraction(0), 1)

    def _normal(self) -> "QuadraticNumber":
        if self.b == 0 and self.r != 1:
            return QuadraticNumber(self.a, Fraction(0), 1)
        return self

    def _field(self, other: "QuadraticNumber") -> Optional[int]:
        if self.r == 1:
            return other.r
        if other.r == 1 or other.r == self.r:
            return self.r
        return None

    def add(self, o, sign=1):
        r = self._field(o)
        if r is None:
            return None
        return QuadraticNumber(self.a + sign * o.a, self.b + sign * o.b, r)._normal()

    def mul(self, o):
        r = self._field(o)
        if r is None:
            return None
        return QuadraticNumber(
            self.a * o.a + self.b * o.b * r, self.a * o.b + self.b * o.a, r
        )._normal()

    def inverse(self):
        norm = self.a * self.a - self.b * self.b * self.r
        if norm == 0:
            raise ZeroDivisionError("inverse of zero")
        return QuadraticNumber(self.a / norm, -self.b / norm, self.r)._normal()


def _squarefree_split(n: int):
    """n = s**2 * r with r squarefree; trial division, small inputs only."""
    s, r, p = 1, 1, 2
    while p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
            s *= p
        if n % p == 0:
            n //= p
            r *= p
        p += 1
    return s, r * n


_EXACT_SQRT_LIMIT = 10**12


def exact_quadratic(expr: ConstExpr) -> Optional[QuadraticNumber]:
    """Reduce ``expr`` to a + b*sqrt(r) exactly, or None if outside that class."""
    try:
        return _exact(expr)
    except ZeroDivisionError:
        return None


def _exact(expr) -> Optional[QuadraticNumber]:
    if isinstance(expr, Rational):
        return QuadraticNumber.rational(expr.value)
    if isinstance(expr, GoldenRatio):
        return QuadraticNumber(Fraction(1, 2), Fraction(1, 2), 5)
    if isinstance(expr, Neg):
        x = _exact(expr.arg)
        return None if x is None else QuadraticNumber(-x.a, -x.b, x.r)
    if isinstance(expr, Sqrt):
        x = _exact(expr.arg)
        if x is None or x.r != 1 or x.a < 0:
            return None
        num, den = x.a.numerator, x.a.denominator
        if num * den > _EXACT_SQRT_LIMIT:
            return None
        s, r = _squarefree_split(num * den)
        coeff = Fraction(s, den)
        if r == 1:
            return QuadraticNumber.rational(coeff)
        return QuadraticNumber(Fraction(0), coeff, r)
    if isinstance(expr, Power):
        x = _exact(expr.base)
        if x is None or abs(expr.exponent) > 4096:
            return None
        k = expr.exponent
        if k < 0:
            x, k = x.inverse(), -k
        result = QuadraticNumber.rational(1)
        while k:
            if k & 1:
                result = result.mul(x)
            x = x.mul(x)
            k >>= 1
        return result
    if isinstance(expr, BinOp):
        left = _exact(expr.left)
        right = _exact(expr.right)
        if left is None or right is None:
            return None
        if expr.op == "+":
            return left.add(right)
        if expr.op == "-":
            return left.add(right, -1)
        if expr.op == "*":
            return left.mul(right)
        if expr.op == "/":
            return left.mul(right.inverse()) if right._field(left) is not None else None
    return None


# -- prefix text form --------------------------------------------------------

_UNARY = {"sqrt": Sqrt, "log": Log, "abs": Abs, "neg": Neg}
_BINARY = {"+", "-", "*", "/"}


def to_prefix(expr: ConstExpr) -> str:
    if isinstance(expr, Rational):
        v = expr.value
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(expr, GoldenRatio):
        return "alpha"
    if isinstance(expr, Power):
        return f"(^ {to_prefix(expr.base)} {expr.exponent})"
    if isinstance(expr, BinOp):
        return f"({expr.op} {to_prefix(expr.left)} {to_prefix(expr.right)})"
    for name, cls in _UNARY.items():
        if type(expr) is cls:
            return f"({name} {to_prefix(expr.arg)})"
    raise TypeError(f"not a constant expression node: {expr!r}")


class ExpressionSyntaxError(ValueError):
    pass


def _tokenize(text: str):
    return text.replace("(", " ( ").replace(")", " ) ").split()


def parse_prefix(text: str) -> ConstExpr:
    """Parse the prefix form, e.g. ``(/ (log alpha) 2)`` or ``8.2e124``."""
    tokens = _tokenize(text)
    if not tokens:
        raise ExpressionSyntaxError("empty expression")
    expr, pos = _parse(tokens, 0)
    if pos != len(tokens):
        raise ExpressionSyntaxError(f"trailing tokens: {' '.join(tokens[pos:])}")
    return expr


def _parse(tokens, pos):
    tok = tokens[pos]
    if tok == ")":
        raise ExpressionSyntaxError("unexpected ')'")
    if tok != "(":
        return _atom(tok), pos + 1
    if pos + 1 >= len(tokens):
        raise ExpressionSyntaxError("unterminated expression")
    head = tokens[pos + 1]
    pos += 2
    args = []
    while pos < len(tokens) and tokens[pos] != ")":
        if head == "^" and len(args) == 1:
            try:
                args.append(int(tokens[pos]))
            except ValueError:
                raise ExpressionSyntaxError("power exponent must be an integer") from None
            pos += 1
            continue
        node, pos = _parse(tokens, pos)
        args.append(node)
    if pos >= len(tokens):
        raise ExpressionSyntaxError("missing ')'")
    pos += 1
    if head in _UNARY:
        if len(args) != 1:
            raise ExpressionSyntaxError(f"{head} takes one argument")
        return _UNARY[head](args[0]), pos
    if head == "^":
        if len(args) != 2:
            raise ExpressionSyntaxError("^ takes a base and an integer exponent")
        return Power(args[0], args[1]), pos
    if head in _BINARY:
        if len(args) < 2:
            raise ExpressionSyntaxError(f"{head} needs at least two arguments")
        node = args[0]
        for a in args[1:]:
            node = BinOp(head, node, a)
        return node, pos
    raise ExpressionSyntaxError(f"unknown operator {head!r}")


def _atom(tok: str) -> ConstExpr:
    if tok == "alpha":
        return ALPHA
    try:
        return Rational(Fraction(tok))
    except ValueError:
        raise ExpressionSyntaxError(f"bad atom {tok!r}") from None


def approx(expr: ConstExpr, digits: int = 15) -> float:
    """Float approximation, for display only."""
    bits = max(64, int(digits * math.log2(10)) + 8)
    return float(evaluate(expr, bits))
