"""Homogeneous (Legendre) and inhomogeneous (Dujella-Petho) reductions."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Optional

from ..realnum import (
    ConstExpr,
    PrecisionExhausted,
    as_expr,
    eval_at_working_precision,
    evaluate,
    log,
    to_prefix,
)
from ..realnum.expr import DEFAULT_MAX_BITS
from .cf import ContinuedFraction, legendre_bound, real_cf


class NoUsableConvergent(ArithmeticError):
    """No convergent with q > 6M gave a certified positive epsilon."""


@dataclass(frozen=True)
class ReductionOutcome:
    """A certified new bound with what is needed to recheck it."""

    new_bound: int
    engine: str
    certificate: Dict[str, Any] = field(default_factory=dict)
    inputs: Dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "engine": self.engine,
            "new_bound": str(self.new_bound),
            "certificate": self.certificate,
            "inputs": self.inputs,
        }


def _num_str(x) -> str:
    if isinstance(x, ConstExpr):
        return to_prefix(x)
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def exponent_bound(Y, base=None, bits: int = 128) -> int:
    """An integer E with E >= log(Y)/log(base), i.e. the ceiling of an upper enclosure.

    Used for every ``base**k < Y  =>  k <= E`` step; the ceiling keeps the
    conclusion valid even when the quotient is within rounding of an integer.
    """
    from ..realnum import ALPHA

    base = ALPHA if base is None else as_expr(base)
    iv = evaluate(log(as_expr(Y)) / log(base), bits)
    up = iv.upper
    return -((-up.numerator) // up.denominator)


def floor_log_ratio(Y, base, bits: int = 128) -> int:
    """floor of an upper enclosure of log(Y)/log(base)."""
    iv = evaluate(log(as_expr(Y)) / log(as_expr(base)), bits)
    up = iv.upper
    return up.numerator // up.denominator


def homogeneous_reduce(
    cf: ContinuedFraction, M, rhs_coeff, base=None
) -> ReductionOutcome:
    """Bound an exponent from |tau - a/b| < c * N / (base**lam * b) and Legendre.

    With a(M) from the expansion, base**lam < c * (a(M) + 2) * M**2.
    """
    lb = legendre_bound(cf, M)
    Y = Fraction(rhs_coeff) * (lb.a_max + 2) * Fraction(M) ** 2
    lam = exponent_bound(Y, base)
    return ReductionOutcome(
        lam,
        "legendre",
        {"legendre": lb.to_json(), "Y": _num_str(Y)},
        {
            "tau": to_prefix(cf.source),
            "M": _num_str(M),
            "rhs_coeff": _num_str(rhs_coeff),
            "base": to_prefix(as_expr(base)) if base is not None else "alpha",
        },
    )


def _epsilon(tau: ConstExpr, mu: ConstExpr, q: int, M: int, max_bits: int):
    """Enclosure of ||mu q|| - M ||tau q||, refined until its sign is known."""
    w = 2 * q.bit_length() + M.bit_length() + 128
    while True:
        t = eval_at_working_precision(tau * q, w).distance_to_nearest_integer()
        u = eval_at_working_precision(mu * q, w).distance_to_nearest_integer()
        eps = u - t * M
        if eps.is_positive() or eps.is_negative() or w >= max_bits:
            return eps, w
        w = min(2 * w, max_bits)


def dujella_petho(
    tau,
    mu,
    A,
    B,
    M,
    max_tries: int = 25,
    cf: Optional[ContinuedFraction] = None,
    max_precision_bits: int = DEFAULT_MAX_BITS,
) -> ReductionOutcome:
    """No solution of 0 < |m tau - n + mu| < A B**-k with m <= M has k > h.

    Uses the first convergent with q > 6M whose epsilon is certified
    positive; convergents with epsilon <= 0 (or undecided) are skipped, at
    most ``max_tries`` of them, and recorded in the certificate.
    """
    tau, mu, A, B = as_expr(tau), as_expr(mu), as_expr(A), as_expr(B)
    M = int(M)
    if cf is None or cf.first_index_q_exceeds(6 * M) is None:
        cf = real_cf(tau, q_exceeds=6 * M, max_precision_bits=max_precision_bits)
    start = cf.first_index_q_exceeds(6 * M)
    need = start + max_tries
    if cf.certified_through < need:
        cf = real_cf(tau, count=need + 1, max_precision_bits=max_precision_bits)
    skipped = []
    for k in range(start, need + 1):
        q = cf.q(k)
        try:
            eps, w = _epsilon(tau, mu, q, M, max_precision_bits)
        except PrecisionExhausted:
            skipped.append({"index": k, "reason": "precision"})
            continue
        if not eps.is_positive():
            skipped.append({"index": k, "reason": "epsilon<=0" if eps.is_negative() else "undecided"})
            continue
        eps_lo = eps.lower
        h = floor_log_ratio(A * q / as_expr(eps_lo), B)
        return ReductionOutcome(
            h,
            "dujella_petho",
            {
                "index": k,
                "position": k + 1,
                "q": str(q),
                "epsilon": eps.to_decimal_str(12),
                "epsilon_lower": float(eps_lo),
                "skipped": skipped,
                "precision_bits": w,
            },
            {"tau": to_prefix(tau), "mu": to_prefix(mu), "A": to_prefix(A), "B": to_prefix(B), "M": str(M)},
        )
    raise NoUsableConvergent(
        f"no convergent with q > 6M among indices {start}..{need} gave epsilon > 0"
    )
