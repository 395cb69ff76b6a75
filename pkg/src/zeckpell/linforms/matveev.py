"""Logarithmic heights and Matveev's lower bound for linear forms in logarithms."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from ..realnum import (
    ALPHA,
    Comparison,
    ConstExpr,
    as_expr,
    compare_certified,
    evaluate,
    log,
    sqrt,
)

LOG_ALPHA = log(ALPHA)
# c_1 := 1/log(alpha), the factor turning log-scale bounds into index bounds
C1 = 1 / LOG_ALPHA

PELL_UNIT = "pell_unit"
SQRT5_OVER_2 = "sqrt5_over_2"
GOLDEN_RATIO = "golden_ratio"
ONE_PLUS_ALPHA_POW = "one_plus_alpha_pow"


class HypothesisViolation(ValueError):
    """A height parameter A_i is not certifiably large enough."""


@dataclass(frozen=True)
class AlgebraicDescriptor:
    """One of the four algebraic numbers that occur in the linear forms.

    ``delta`` is the Pell unit (a ConstExpr) for PELL_UNIT; ``k`` is the
    exponent in 1 + alpha**k for ONE_PLUS_ALPHA_POW (k < 0 in every use).
    """

    kind: str
    delta: Optional[ConstExpr] = None
    k: Optional[int] = None

    def __post_init__(self):
        if self.kind not in (PELL_UNIT, SQRT5_OVER_2, GOLDEN_RATIO, ONE_PLUS_ALPHA_POW):
            raise ValueError(f"unknown descriptor kind {self.kind!r}")
        if self.kind == PELL_UNIT and self.delta is None:
            raise ValueError("a Pell unit needs its value")
        if self.kind == ONE_PLUS_ALPHA_POW and not self.k:
            raise ValueError("1 + alpha**k needs a nonzero k")

    @classmethod
    def pell_unit(cls, delta) -> "AlgebraicDescriptor":
        return cls(PELL_UNIT, delta=as_expr(delta))

    @classmethod
    def sqrt5_over_2(cls) -> "AlgebraicDescriptor":
        return cls(SQRT5_OVER_2)

    @classmethod
    def golden_ratio(cls) -> "AlgebraicDescriptor":
        return cls(GOLDEN_RATIO)

    @classmethod
    def one_plus_alpha_pow(cls, k: int) -> "AlgebraicDescriptor":
        return cls(ONE_PLUS_ALPHA_POW, k=k)

    @property
    def value(self) -> ConstExpr:
        if self.kind == PELL_UNIT:
            return self.delta
        if self.kind == SQRT5_OVER_2:
            return sqrt(5) / 2
        if self.kind == GOLDEN_RATIO:
            return ALPHA
        return 1 + ALPHA ** self.k


def height_bound(desc: AlgebraicDescriptor) -> ConstExpr:
    """Upper bound for the absolute logarithmic height h(eta).

    h(delta) = log(delta)/2 for a unit of a real quadratic field,
    h(sqrt5/2) = log(5)/2 from 4x**2 - 5, h(alpha) = log(alpha)/2, and
    h(1 + alpha**k) <= |k| h(alpha) + log 2.
    """
    if desc.kind == PELL_UNIT:
        return log(desc.delta) / 2
    if desc.kind == SQRT5_OVER_2:
        return log(5) / 2
    if desc.kind == GOLDEN_RATIO:
        return LOG_ALPHA / 2
    return as_expr(Fraction(abs(desc.k), 2)) * LOG_ALPHA + log(2)


def matveev_prefactor(l: int, d_L: int) -> ConstExpr:
    """3 * 30**(l+3) * l**4.5 * d_L**2 * (1 + log d_L)."""
    return (
        as_expr(3 * 30 ** (l + 3) * l**4 * d_L**2)
        * sqrt(l)
        * (1 + log(d_L))
    )


@dataclass(frozen=True)
class MatveevInstance:
    """Data for one application of Matveev's theorem.

    ``etas`` are optional; when present the A_i are checked against
    max(d_L h(eta_i), |log eta_i|, 0.16).
    """

    l: int
    d_L: int
    D: int
    A: Tuple[ConstExpr, ...]
    coefficients: Tuple[int, ...] = ()
    etas: Tuple[AlgebraicDescriptor, ...] = field(default=(), repr=False)

    def __post_init__(self):
        object.__setattr__(self, "A", tuple(as_expr(a) for a in self.A))
        if len(self.A) != self.l:
            raise ValueError("need one A_i per logarithm")
        if self.D < 3:
            raise ValueError("D must be at least 3")
        if self.coefficients and max(abs(c) for c in self.coefficients) > self.D:
            raise ValueError("D must bound every coefficient")
        if self.etas and len(self.etas) != self.l:
            raise ValueError("need one eta per logarithm")


def _scaled_atom(expr: ConstExpr):
    """(c, key) with expr == c * atom exactly, or None."""
    from ..realnum import BinOp, Rational, to_prefix

    if isinstance(expr, Rational):
        return expr.value, "1"
    if isinstance(expr, BinOp) and expr.op in ("*", "/"):
        lhs, rhs = _scaled_atom(expr.left), _scaled_atom(expr.right)
        if lhs is None or rhs is None:
            return None
        if expr.op == "*" and "1" in (lhs[1], rhs[1]):
            key = rhs[1] if lhs[1] == "1" else lhs[1]
            return lhs[0] * rhs[0], key
        if expr.op == "/" and rhs[1] == "1" and rhs[0] != 0:
            return lhs[0] / rhs[0], lhs[1]
        return None
    return Fraction(1), to_prefix(expr)


def _at_least(a: ConstExpr, need: ConstExpr, max_precision_bits: int) -> bool:
    sa, sn = _scaled_atom(a), _scaled_atom(need)
    if sa is not None and sn is not None and sa[1] == sn[1]:
        atom = a if sa[0] == 0 else a / sa[0]
        if sa[0] >= sn[0] and (sa[0] == 0 or evaluate(atom, 64).is_positive()):
            return True
    c = compare_certified(a, need, max_precision_bits)
    return c in (Comparison.GREATER, Comparison.EQUAL)


def check_hypotheses(inst: MatveevInstance, max_precision_bits: int = 4096) -> None:
    floor016 = as_expr(Fraction(4, 25))
    for i, a in enumerate(inst.A):
        needs = [floor016]
        if inst.etas:
            eta = inst.etas[i]
            needs.append(inst.d_L * height_bound(eta))
            needs.append(abs(log(eta.value)))
        for need in needs:
            if not _at_least(a, need, max_precision_bits):
                raise HypothesisViolation(f"A_{i + 1} = {a} not certified >= {need}")


def matveev_lower_bound(inst: MatveevInstance, check: bool = True) -> ConstExpr:
    """B with log|Lambda| > -B whenever Lambda != 0 (non-vanishing is the caller's)."""
    if check:
        check_hypotheses(inst)
    B = matveev_prefactor(inst.l, inst.d_L) * (1 + log(inst.D))
    for a in inst.A:
        B = B * a
    return B


def matveev_constant(l: int, d_L: int, A: Sequence) -> ConstExpr:
    """The bound without the (1 + log D) factor, for symbolic D."""
    out = matveev_prefactor(l, d_L)
    for a in A:
        out = out * as_expr(a)
    return out
