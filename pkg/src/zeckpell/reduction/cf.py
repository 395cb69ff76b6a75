"""Certified continued fractions of computable reals and the Legendre bound."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

from ..realnum import ConstExpr, PrecisionExhausted, as_expr, eval_at_working_precision, to_prefix
from ..realnum.expr import DEFAULT_MAX_BITS


class InsufficientExpansion(ValueError):
    """The expansion does not reach a denominator above the requested bound."""


@dataclass(frozen=True)
class ContinuedFraction:
    """Partial quotients a_0..a_N of ``source``, each one certified.

    Index convention is 0-based: ``partial_quotients[k]`` is a_k and
    ``convergents[k]`` is p_k/q_k.
    """

    source: ConstExpr
    partial_quotients: Tuple[int, ...]
    convergents: Tuple[Tuple[int, int], ...] = field(repr=False)
    precision_bits: int = 0

    @property
    def certified_through(self) -> int:
        return len(self.partial_quotients) - 1

    def q(self, k: int) -> int:
        return self.convergents[k][1]

    def p(self, k: int) -> int:
        return self.convergents[k][0]

    def first_index_q_exceeds(self, M) -> Optional[int]:
        for k, (_p, q) in enumerate(self.convergents):
            if q > M:
                return k
        return None

    def to_json(self) -> dict:
        return {
            "source": to_prefix(self.source),
            "partial_quotients": [str(a) for a in self.partial_quotients],
            "precision_bits": self.precision_bits,
        }


def convergents_of(quotients) -> List[Tuple[int, int]]:
    out = []
    # (p_{-2}, q_{-2}) = (0, 1), (p_{-1}, q_{-1}) = (1, 0)
    p0, q0, p1, q1 = 0, 1, 1, 0
    for a in quotients:
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        out.append((p1, q1))
    return out


def _quotients_of_interval(lo: Fraction, hi: Fraction, limit: int) -> List[int]:
    """Partial quotients shared by every real in [lo, hi].

    The complete quotient is carried as an exact rational interval; x -> 1/(x - a)
    is decreasing on (a, a + 1), so the image of the interval is exact.
    """
    n1, d1 = lo.numerator, lo.denominator
    n2, d2 = hi.numerator, hi.denominator
    out = []
    while len(out) < limit:
        a = n1 // d1
        if n2 // d2 != a:
            break
        out.append(a)
        r1 = n1 - a * d1
        r2 = n2 - a * d2
        if r1 == 0:
            # lower end sits on an integer, the next quotient is unbounded
            break
        n1, d1, n2, d2 = d2, r2, d1, r1
        if r2 == 0:
            break
    return out


def real_cf(
    x,
    count: Optional[int] = None,
    q_exceeds=None,
    start_bits: int = 256,
    max_precision_bits: int = DEFAULT_MAX_BITS,
) -> ContinuedFraction:
    """Expand ``x`` until ``count`` quotients exist or some q_N > ``q_exceeds``.

    Under ``q_exceeds`` the expansion stops exactly at the minimal such N.
    x is assumed irrational; for a rational x the expansion terminates early
    and PrecisionExhausted is raised once the cap is hit.
    """
    if (count is None) == (q_exceeds is None):
        raise ValueError("give exactly one of count or q_exceeds")
    x = as_expr(x)
    if q_exceeds is not None:
        # q_N > M needs about 2 log2 M bits of agreement
        bound = int(math.ceil(Fraction(q_exceeds))) if not isinstance(q_exceeds, int) else q_exceeds
        start_bits = max(start_bits, 2 * max(1, bound).bit_length() + 64)
    else:
        start_bits = max(start_bits, 4 * count + 64)
    w = start_bits
    limit = count if count is not None else 1 << 30
    while True:
        iv = eval_at_working_precision(x, w)
        qs = _quotients_of_interval(iv.lower, iv.upper, limit)
        convs = convergents_of(qs)
        if count is not None and len(qs) >= count:
            return ContinuedFraction(x, tuple(qs[:count]), tuple(convs[:count]), w)
        if q_exceeds is not None:
            for k, (_p, q) in enumerate(convs):
                if q > q_exceeds:
                    return ContinuedFraction(x, tuple(qs[: k + 1]), tuple(convs[: k + 1]), w)
        if w >= max_precision_bits:
            raise PrecisionExhausted(
                f"only {len(qs)} partial quotients certified at {w} bits"
            )
        w = min(2 * w, max_precision_bits)


@dataclass(frozen=True)
class LegendreBound:
    """Output of the Legendre-type bound for q_N > M.

    ``N`` and ``argmax`` are 0-based indices; ``position`` and
    ``argmax_position`` are the same indices counted from 1.
    """

    N: int
    a_max: int
    argmax: int
    M: int

    @property
    def position(self) -> int:
        return self.N + 1

    @property
    def argmax_position(self) -> int:
        return self.argmax + 1

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "a_max": str(self.a_max),
            "argmax": self.argmax,
            "position": self.position,
            "argmax_position": self.argmax_position,
            "M": str(self.M),
        }


def legendre_bound(cf: ContinuedFraction, M) -> LegendreBound:
    """Minimal N with q_N > M and a(M) = max(a_0..a_N).

    Then |m tau - n| > 1/((a(M) + 2) m) for every 0 < m < M.
    """
    N = cf.first_index_q_exceeds(M)
    if N is None:
        raise InsufficientExpansion(
            f"expansion of {to_prefix(cf.source)} stops at q = {cf.convergents[-1][1]} <= {M}"
        )
    qs = cf.partial_quotients[: N + 1]
    a_max = max(qs)
    return LegendreBound(N, a_max, qs.index(a_max), int(M) if isinstance(M, int) else _ceil(M))


def _ceil(q) -> int:
    q = Fraction(q)
    return -((-q.numerator) // q.denominator)


def verify_prefix(x, quotients, start_bits: int = 128, max_precision_bits: int = DEFAULT_MAX_BITS) -> bool:
    """Certify that the expansion of ``x`` begins with ``quotients``.

    The reals whose expansion starts a_0..a_N fill the interval between
    p_N/q_N and (p_N + p_{N-1})/(q_N + q_{N-1}); one enclosure of x strictly
    inside it settles every quotient at once. Used to re-check cached data.
    """
    x = as_expr(x)
    qs = list(quotients)
    if not qs or any(a < 1 for a in qs[1:]):
        return False
    convs = convergents_of(qs)
    pN, qN = convs[-1]
    pM, qM = convs[-2] if len(convs) > 1 else (1, 0)
    a = Fraction(pN, qN)
    b = Fraction(pN + pM, qN + qM)
    lo, hi = min(a, b), max(a, b)
    w = max(start_bits, 2 * qN.bit_length() + 64)
    while True:
        iv = eval_at_working_precision(x, w)
        if lo < iv.lower and iv.upper < hi:
            return True
        if iv.upper <= lo or iv.lower >= hi or w >= max_precision_bits:
            return False
        w = min(2 * w, max_precision_bits)
