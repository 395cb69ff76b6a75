"""Exact integral LLL and the lower bound for bounded linear forms it yields."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Sequence, Tuple

from ..realnum import ConstExpr, PrecisionExhausted, as_expr, eval_at_working_precision, evaluate, sqrt, to_prefix
from ..realnum.expr import DEFAULT_MAX_BITS


class SingularBasis(ValueError):
    pass


class HypothesisFailed(ArithmeticError):
    """The reduced lattice is too short for the bound; C must be raised."""


try:
    from gmpy2 import mpz as _int
except ImportError:  # pragma: no cover
    _int = int


def _dot(u, v) -> int:
    return sum(a * b for a, b in zip(u, v))


@dataclass(frozen=True)
class LLLResult:
    """Reduced basis with exact Gram-Schmidt data.

    ``d[i]`` is the Gram determinant of the first i vectors (d[0] = 1), so
    ||b_i*||**2 = d[i] / d[i-1] (1-based i), and ``lam[i][j]`` = d[j+1] * mu_ij.
    """

    basis: Tuple[Tuple[int, ...], ...]
    d: Tuple[int, ...]
    lam: Tuple[Tuple[int, ...], ...] = field(repr=False)

    def gs_norms_sq(self) -> List[Fraction]:
        return [Fraction(self.d[i + 1], self.d[i]) for i in range(len(self.basis))]

    def mu(self, i: int, j: int) -> Fraction:
        return Fraction(self.lam[i][j], self.d[j + 1])


def lll_reduce(basis: Sequence[Sequence[int]]) -> LLLResult:
    """Integral LLL with Lovasz parameter 3/4; all arithmetic on integers."""
    b = [[_int(x) for x in v] for v in basis]
    n = len(b)
    if n == 0:
        raise SingularBasis("empty basis")
    d = [_int(1)] + [_int(0)] * n
    lam = [[_int(0)] * n for _ in range(n)]
    d[1] = _dot(b[0], b[0])
    if d[1] == 0:
        raise SingularBasis("zero vector in basis")
    if n == 1:
        return LLLResult((tuple(int(x) for x in b[0]),), tuple(int(x) for x in d), ((0,),))

    def red(k, l):
        # 0-based rows k > l; lam[k][l] relative to d[l+1]
        if 2 * abs(lam[k][l]) > d[l + 1]:
            q = (2 * lam[k][l] + d[l + 1]) // (2 * d[l + 1])
            b[k] = [x - q * y for x, y in zip(b[k], b[l])]
            lam[k][l] -= q * d[l + 1]
            for i in range(l):
                lam[k][i] -= q * lam[l][i]

    def swap(k, kmax):
        b[k], b[k - 1] = b[k - 1], b[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        la = lam[k][k - 1]
        B = (d[k - 1] * d[k + 1] + la * la) // d[k]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - la * t) // d[k]
            lam[i][k - 1] = (B * t + la * lam[i][k]) // d[k + 1]
        d[k] = B

    k, kmax = 1, 0
    while k < n:
        if k > kmax:
            kmax = k
            for j in range(k + 1):
                u = _dot(b[k], b[j])
                for i in range(j):
                    u = (d[i + 1] * u - lam[k][i] * lam[j][i]) // d[i]
                if j < k:
                    lam[k][j] = u
                else:
                    if u == 0:
                        raise SingularBasis("basis vectors are linearly dependent")
                    d[k + 1] = u
        red(k, k - 1)
        # Lovasz: d_k d_{k-2} >= (3/4) d_{k-1}**2 - lam**2, scaled by 4
        if 4 * d[k + 1] * d[k - 1] < 3 * d[k] * d[k] - 4 * lam[k][k - 1] ** 2:
            swap(k, kmax)
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                red(k, l)
            k += 1
    return LLLResult(
        tuple(tuple(int(x) for x in v) for v in b),
        tuple(int(x) for x in d),
        tuple(tuple(int(x) for x in r) for r in lam),
    )


def round_scaled(tau: ConstExpr, C: int, start_bits: int = 64, max_bits: int = DEFAULT_MAX_BITS) -> int:
    """Nearest integer (ties to even) to C * tau from certified enclosures."""
    w = max(start_bits, C.bit_length() + 64)
    expr = as_expr(C) * tau
    while True:
        r = eval_at_working_precision(expr, w).nearest_integer()
        if r is not None:
            return r
        if w >= max_bits:
            raise PrecisionExhausted("C*tau straddles a half-integer at the precision cap")
        w = min(2 * w, max_bits)


@dataclass(frozen=True)
class LatticeProblem:
    tau: Tuple[ConstExpr, ...]
    X: Tuple[int, ...]
    C: int

    def __post_init__(self):
        object.__setattr__(self, "tau", tuple(as_expr(t) for t in self.tau))
        object.__setattr__(self, "X", tuple(int(x) for x in self.X))
        object.__setattr__(self, "C", int(self.C))
        t = len(self.tau)
        if t < 2 or len(self.X) != t:
            raise ValueError("need t >= 2 values of tau and matching X")
        if any(x < 1 for x in self.X):
            raise ValueError("coefficient bounds must be positive")
        if self.C <= (t * max(self.X)) ** t:
            raise ValueError("C must exceed (t X)**t")

    @property
    def t(self) -> int:
        return len(self.tau)

    def permuted(self, order) -> "LatticeProblem":
        return LatticeProblem(tuple(self.tau[i] for i in order), tuple(self.X[i] for i in order), self.C)

    def to_json(self) -> dict:
        return {"tau": [to_prefix(t) for t in self.tau], "X": [str(x) for x in self.X], "C": str(self.C)}


@dataclass(frozen=True)
class LatticeBound:
    """|sum x_i tau_i| >= (sqrt(delta_sq - Q) - T) / C for all |x_i| <= X_i."""

    problem: LatticeProblem
    order: Tuple[int, ...]
    delta_sq: Fraction
    Q: int
    T: Fraction

    @property
    def bound_expr(self) -> ConstExpr:
        return (sqrt(self.delta_sq - self.Q) - as_expr(self.T)) / self.problem.C

    def exceeds(self, threshold) -> bool:
        """Exact test of bound > threshold for a positive rational threshold."""
        thr = Fraction(threshold)
        rhs = self.T + self.problem.C * thr
        return self.delta_sq - self.Q > rhs * rhs

    def log10(self) -> float:
        # display value; exact comparisons go through exceeds()
        return _log10_fraction(evaluate(self.bound_expr, 64).mid)

    def to_json(self) -> dict:
        return {
            "problem": self.problem.to_json(),
            "order": list(self.order),
            "delta_sq": _frac_str(self.delta_sq),
            "Q": str(self.Q),
            "T": _frac_str(self.T),
            "log10_bound": self.log10(),
        }


def _frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _log10_fraction(q: Fraction) -> float:
    return math.log10(q.numerator) - math.log10(q.denominator)


def _magnitude_order(taus) -> List[int]:
    mags = []
    for i, t in enumerate(taus):
        iv = eval_at_working_precision(t, 128)
        mags.append((float(abs(iv.mid)), i))
    # largest |tau| goes last, where it multiplies the scaled coordinate only
    return [i for _m, i in sorted(mags)]


def flacotadas_lower_bound(prob: LatticeProblem, reorder: bool = True) -> LatticeBound:
    """Lower bound for |sum x_i tau_i| over |x_i| <= X_i via an LLL-reduced lattice.

    Lattice rows are b_j = e_j + round(C tau_j) e_t for j < t and
    b_t = round(C tau_t) e_t. With delta the smallest Gram-Schmidt norm of a
    reduced basis, Q = sum_{i<t} X_i**2 and T = (1 + sum X_i)/2, the bound
    holds when delta**2 >= T**2 + Q.

    ``reorder`` permutes the variables so that the largest |tau_i| is last;
    the form is symmetric in the pairs (x_i, tau_i) so this changes only how
    good the bound is. Without it a tiny last tau makes the lattice nearly
    singular and the bound collapses.
    """
    order = tuple(_magnitude_order(prob.tau)) if reorder else tuple(range(prob.t))
    p = prob.permuted(order)
    t, C = p.t, p.C
    scaled = [round_scaled(tau, C) for tau in p.tau]
    if scaled[-1] == 0:
        raise SingularBasis("C * tau_t rounds to zero")
    rows = []
    for j in range(t - 1):
        v = [0] * t
        v[j] = 1
        v[-1] = scaled[j]
        rows.append(v)
    rows.append([0] * (t - 1) + [scaled[-1]])
    red = lll_reduce(rows)
    delta_sq = min(red.gs_norms_sq())
    Q = sum(x * x for x in p.X[:-1])
    T = Fraction(1 + sum(p.X), 2)
    if delta_sq < T * T + Q:
        raise HypothesisFailed(
            f"delta^2 ~ 10^{_log10_fraction(delta_sq):.1f} below T^2 + Q ~ 10^{_log10_fraction(T * T + Q):.1f}"
        )
    return LatticeBound(p, order, delta_sq, Q, T)


@dataclass(frozen=True)
class LogRelation:
    """sum c_i log(eta_i) = 0, verified exactly in one quadratic field."""

    coefficients: Tuple[int, ...]

    def to_json(self) -> dict:
        return {"coefficients": list(self.coefficients)}


def _log_argument(tau: ConstExpr):
    from ..realnum import Log, exact_quadratic

    if not isinstance(tau, Log):
        return None
    return exact_quadratic(tau.arg)


def find_log_relation(taus: Sequence[ConstExpr], height: int = 4):
    """Small integer relation among logarithms of quadratic numbers, or None.

    Candidates come from a numerical scan of the coefficient box [-height,
    height]**t; a candidate is accepted only if prod eta_i**c_i == 1 holds in
    exact arithmetic.
    """
    import itertools

    from ..realnum import QuadraticNumber

    etas = [_log_argument(t) for t in taus]
    if any(e is None for e in etas):
        return None
    vals = [float(eval_at_working_precision(t, 128).mid) for t in taus]
    for cs in itertools.product(range(-height, height + 1), repeat=len(taus)):
        if not any(cs) or next(c for c in cs if c) < 0:
            continue
        if abs(sum(c * v for c, v in zip(cs, vals))) > 1e-9:
            continue
        acc = QuadraticNumber.rational(1)
        ok = True
        for c, e in zip(cs, etas):
            base = e if c > 0 else e.inverse()
            for _ in range(abs(c)):
                acc = acc.mul(base)
                if acc is None:
                    ok = False
                    break
            if not ok:
                break
        if ok and acc == QuadraticNumber.rational(1):
            return LogRelation(tuple(cs))
    return None


def eliminate_relation(prob: LatticeProblem, rel: LogRelation) -> Tuple[LatticeProblem, int]:
    """Drop one tau using the relation; returns the smaller problem and the dropped index.

    With c_j = +-1, tau_j = -c_j sum_{i != j} c_i tau_i, so x_j tau_j folds into
    the other coefficients as x_i - c_j c_i x_j, whose bounds are X_i + |c_i| X_j.
    A zero folded vector means the original form vanishes, which callers
    exclude separately.
    """
    cs = rel.coefficients
    js = [j for j, c in enumerate(cs) if abs(c) == 1]
    if not js:
        raise ValueError("relation has no unit coefficient to eliminate")
    j = js[-1]
    keep = [i for i in range(prob.t) if i != j]
    X = tuple(prob.X[i] + abs(cs[i]) * prob.X[j] for i in keep)
    return LatticeProblem(tuple(prob.tau[i] for i in keep), X, prob.C), j
