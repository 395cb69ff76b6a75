"""Closing bound chains: n < A (log n)**k and the absolute bounds on n1, n2.

Two constant modes exist. ``rigorous`` derives every coefficient from
Matveev's theorem as stated, with 3 * 30**(l+3) as prefactor, under the
working assumption n2 >= N0 (smaller n2 are covered by the final box
anyway). ``paper-compat`` injects the published folded constants and only
recomputes the products and the final solve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Union

from ..realnum import ALPHA, ConstExpr, as_expr, eval_at_working_precision, evaluate, log, sqrt
from .matveev import matveev_prefactor

RIGOROUS = "rigorous"
PAPER_COMPAT = "paper-compat"

Number = Union[int, Fraction]


def upper(expr, bits: int = 128) -> Fraction:
    return evaluate(as_expr(expr), bits).upper


def lower(expr, bits: int = 128) -> Fraction:
    return evaluate(as_expr(expr), bits).lower


def round_up_sig(x, sig: int = 2) -> Fraction:
    """Smallest number with ``sig`` significant decimal digits that is >= x."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("expected a positive number")
    e = math.floor(math.log10(x.numerator) - math.log10(x.denominator))
    # correct the float estimate of the exponent
    while Fraction(10) ** e > x:
        e -= 1
    while Fraction(10) ** (e + 1) <= x:
        e += 1
    unit = Fraction(10) ** (e - sig + 1)
    k = x / unit
    k = -((-k.numerator) // k.denominator)
    return k * unit


def round_down_sig(x, sig: int = 2) -> Fraction:
    """Largest number with ``sig`` significant decimal digits that is <= x."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("expected a positive number")
    e = math.floor(math.log10(x.numerator) - math.log10(x.denominator))
    while Fraction(10) ** e > x:
        e -= 1
    while Fraction(10) ** (e + 1) <= x:
        e += 1
    unit = Fraction(10) ** (e - sig + 1)
    k = x / unit
    return (k.numerator // k.denominator) * unit


def sci(x, digits: int = 3) -> str:
    """Scientific notation for display, e.g. 2.1e150."""
    x = Fraction(x)
    if x == 0:
        return "0"
    e = math.floor(math.log10(abs(x.numerator)) - math.log10(x.denominator))
    m = float(x / Fraction(10) ** e)
    if abs(m) >= 10:
        m /= 10
        e += 1
    s = f"{m:.{digits - 1}f}".rstrip("0").rstrip(".")
    return f"{s}e{e}" if e else s


def _violates(n: int, A: ConstExpr, k: int, max_bits: int) -> bool:
    """True unless n > A (log n)**k is certified."""
    expr = A * log(n) ** k
    w = 128
    while True:
        iv = eval_at_working_precision(expr, w)
        if iv.upper < n:
            return False
        if iv.lower >= n:
            return True
        if w >= max_bits:
            return True
        w *= 2


def solve_log_poly_bound(A, k: int, max_precision_bits: int = 1 << 14) -> int:
    """Smallest N* >= 2 with n > A (log n)**k for every integer n >= N*.

    n/(log n)**k falls until e**k and rises after, so the violating integers
    form one block around e**k; N* is one past its end, found by galloping
    and bisection with certified comparisons (undecided counts as violated).
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    A = as_expr(A)
    if not evaluate(A, 64).is_positive():
        raise ValueError("A must be positive")
    ek = math.exp(k) if k < 700 else float("inf")
    if ek == float("inf"):
        raise OverflowError("k too large")
    cands = {max(2, math.floor(ek)), max(2, math.ceil(ek))}
    bad = [n for n in sorted(cands) if _violates(n, A, k, max_precision_bits)]
    if not bad:
        return 2
    lo = bad[-1]
    step = max(1, lo)
    hi = lo + step
    while _violates(hi, A, k, max_precision_bits):
        lo = hi
        step *= 2
        hi = lo + step
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _violates(mid, A, k, max_precision_bits):
            lo = mid
        else:
            hi = mid
    return hi


@dataclass
class ChainStep:
    name: str
    statement: str
    coefficient: Fraction
    note: str = ""

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "statement": self.statement,
            "coefficient": sci(self.coefficient, 4),
            "note": self.note,
        }


@dataclass
class Stage1Chain:
    mode: str
    bound_n1: int
    bound_n2: int
    c_lambda: Fraction
    c_rho: Fraction
    c_n1: Fraction
    c_xbound: Fraction
    steps: List[ChainStep] = field(default_factory=list)
    n0: int = 0

    def bound_lambda_fn(self, n2) -> Fraction:
        """lambda < c_lambda log n2."""
        return self.c_lambda * upper(log(as_expr(n2)))

    def bound_rho_fn(self, n2) -> Fraction:
        """rho < c_rho (log n2)**2."""
        return self.c_rho * upper(log(as_expr(n2))) ** 2

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "bound_n1": str(self.bound_n1),
            "bound_n2": str(self.bound_n2),
            "c_lambda": sci(self.c_lambda, 4),
            "c_rho": sci(self.c_rho, 4),
            "c_n1": sci(self.c_n1, 4),
            "c_xbound": sci(self.c_xbound, 4),
            "n0": str(self.n0),
            "steps": [s.to_json() for s in self.steps],
        }


# published folded constants, used verbatim in paper-compat mode
PAPER_CONSTANTS = {
    "gamma1": Fraction(72, 10) * 10**15,
    "n_over_nm": Fraction(15, 10) * 10**16,
    "gamma2": Fraction(15, 10) * 10**14,
    "nm": Fraction(32, 10) * 10**14,
    "xbound_ell": Fraction(16, 10) * 10**30,
    "xbound_n": Fraction(48, 10) * 10**30,
    "gamma3": Fraction(26, 10) * 10**10,
    "lambda": Fraction(27, 10) * 10**10,
    "rho_per_lambda": Fraction(68, 10) * 10**12,
    "rho": 2 * Fraction(10) ** 22,
    "gamma5": Fraction(212, 100) * 10**15,
    "n1_per_hh": 5 * Fraction(10) ** 14,
    "n1": Fraction(27, 10) * 10**47,
}

LOG_A = log(ALPHA)
LOG_TAIL = log(1 + ALPHA ** (-2))


def _close(steps, c_xbound: Fraction, c_n1: Fraction, n0: int, mode: str):
    # log delta <= (n1 + 1) log a + log(1 + a**-2) < c_ld (log n2)**4
    ld = c_n1 * upper(LOG_A)
    if mode == RIGOROUS:
        log_n0 = lower(log(n0))
        ld += upper(LOG_A + LOG_TAIL) / log_n0**4
    c_ld = round_up_sig(ld)
    steps.append(ChainStep("log_delta", "log d < c (log n2)^4", c_ld, "from d^l1 <= a^(n1+1)(1 + a^-2)"))
    A = round_up_sig(c_xbound * c_ld * c_ld)
    steps.append(ChainStep("n2_poly", "n2 < c (log n2)^10", A, "index bound with the log d bound"))
    n_star = solve_log_poly_bound(A, 10)
    b2 = max(n_star, n0)
    b2r = round_up_sig(b2)
    bound_n2 = int(b2r)
    steps.append(ChainStep("n2", "n2 < N", b2r, f"solve_log_poly_bound gives N* = {sci(n_star, 6)}"))
    n1v = c_n1 * upper(log(bound_n2)) ** 4
    n1r = round_up_sig(n1v)
    bound_n1 = max(int(n1r), n0 + 2) if mode == RIGOROUS else int(n1r)
    steps.append(ChainStep("n1", "n1 < N", Fraction(bound_n1), "c_n1 (log N2)^4"))
    return bound_n1, bound_n2


def _paper_chain() -> Stage1Chain:
    P = PAPER_CONSTANTS
    steps = [
        ChainStep("gamma1", "log|G1| > -c (n-m) log n log d", P["gamma1"], "four logs, d_L = 4"),
        ChainStep("n_vs_nm", "n < c (n-m) log n log d", P["n_over_nm"]),
        ChainStep("gamma2", "log|G2| > -c log d log n log a", P["gamma2"], "three logs, d_L = 4"),
        ChainStep("n_minus_m", "n-m < c log d log n", P["nm"]),
        ChainStep("xbound_ell", "l < c (log n)^2 log d", P["xbound_ell"]),
        ChainStep("xbound_n", "n < c (log n)^2 (log d)^2", P["xbound_n"]),
        ChainStep("gamma3", "log|G3| > -c log n2 log a", P["gamma3"], "two logs, d_L = 2, D = 3.4 n2"),
        ChainStep("lambda", "lambda < c log n2", P["lambda"]),
        ChainStep("rho_per_lambda", "rho < c lambda log n2", P["rho_per_lambda"]),
        ChainStep("rho", "rho < c (log n2)^2", P["rho"], "published value; the product above is 1.84e23"),
        ChainStep("gamma5", "n1 < c h(eta3) h(eta4) log n2", P["gamma5"]),
        ChainStep("n1_per_hh", "n1 < c (n1-m1)(n2-m2) log n2", P["n1_per_hh"]),
        ChainStep("n1_poly", "n1 < c (log n2)^4", P["n1"]),
    ]
    b1, b2 = _close(steps, P["xbound_n"], P["n1"], 0, PAPER_COMPAT)
    return Stage1Chain(PAPER_COMPAT, b1, b2, P["lambda"], P["rho"], P["n1"], P["xbound_n"], steps, 0)


def _rigorous_chain(n0: int) -> Stage1Chain:
    a = upper(LOG_A)
    a_lo = lower(LOG_A)
    log5 = upper(log(5))
    log2 = upper(log(2))
    log_n0 = lower(log(n0))
    K = {(l, dL): upper(matveev_prefactor(l, dL)) for l, dL in ((4, 4), (3, 4), (2, 2), (3, 2), (4, 2))}
    steps: List[ChainStep] = []

    def kappa(c_D) -> Fraction:
        # 1 + log(c_D n) <= kappa log n for n >= n0
        return (1 + upper(log(as_expr(c_D))) + log_n0) / log_n0 if c_D != 1 else (1 + log_n0) / log_n0

    # G1: l=4, d_L=4, A = 2 log d, 2 log 5, 2 log a, 2(n-m) log a + 4 log 2; D = n
    c_g1 = K[(4, 4)] * 8 * log5 * (2 * a + 2 * log2) * kappa(1)
    c_n = round_up_sig(c_g1 + 7)
    steps.append(ChainStep("n_vs_nm", "n < c (n-m) log n log d", c_n, f"K(4,4) = {sci(K[(4, 4)])}; |G1| < 23/a^n"))
    # G2: l=3, d_L=4, A = 2 log d, 2 log 5, 2 log a; D = n
    c_nm = round_up_sig(K[(3, 4)] * 8 * log5 * kappa(1) + 2)
    steps.append(ChainStep("n_minus_m", "n-m < c log d log n", c_nm, f"K(3,4) = {sci(K[(3, 4)])}; |G2| < 2/a^(n-m)"))
    c_l1 = round_up_sig(c_n * c_nm)
    steps.append(ChainStep("xbound_n", "n < c (log n)^2 (log d)^2", c_l1))
    c_l1_ell = round_up_sig(c_l1 * a * (1 + Fraction(2, n0)))
    steps.append(ChainStep("xbound_ell", "l < c (log n)^2 log d", c_l1_ell))
    # G3: l=2, d_L=2, A = log 5, log a; D = 3.41 n2
    c_D3 = Fraction(341, 100)
    c_lam = round_up_sig(K[(2, 2)] * kappa(c_D3) * log5 + (1 + upper(log(4)) / log_n0) / a_lo)
    steps.append(ChainStep("lambda", "lambda < c log n2", c_lam, "|G3| < 4 n2/a^lambda, D = 3.41 n2"))
    # G4: l=3, d_L=2, A = log 5, log a, lambda log a + 2 log 2; D = c n2
    c_D4 = round_up_sig(upper((log(sqrt(5) / 2) + LOG_TAIL + 25 / ALPHA**2) / LOG_A))
    c_rl = round_up_sig(K[(3, 2)] * kappa(c_D4) * log5 * (a + log2))
    steps.append(ChainStep("rho_per_lambda", "rho < c lambda log n2", c_rl, f"|G4| < 25 n2/a^rho, D = {sci(c_D4)} n2"))
    c_rho = round_up_sig(c_rl * c_lam + (1 + upper(log(25)) / log_n0) / (a_lo * log_n0))
    steps.append(ChainStep("rho", "rho < c (log n2)^2", c_rho))
    # G5: l=4, d_L=2, A = log 5, log a, (n_i - m_i) log a + 2 log 2; D = c n2
    c_D5 = round_up_sig(upper((log(sqrt(5) / 2) + 2 * LOG_TAIL + 46) / LOG_A))
    c_hh = round_up_sig(K[(4, 2)] * kappa(c_D5) * log5 * (a + log2) ** 2)
    steps.append(ChainStep("n1_per_hh", "n1 < c (n1-m1)(n2-m2) log n2", c_hh, f"|G5| < 46 n2/a^(n1-2), D = {sci(c_D5)} n2"))
    tail = (2 + (1 + upper(log(46)) / log_n0) / a_lo) / log_n0**3
    c_n1 = round_up_sig(max(c_hh * c_lam * c_rho + tail, c_rho / log_n0**2))
    steps.append(ChainStep("n1_poly", "n1 < c (log n2)^4", c_n1, "max over the rho = n1 and rho = n_j - m_j cases"))
    b1, b2 = _close(steps, c_l1, c_n1, n0, RIGOROUS)
    return Stage1Chain(RIGOROUS, b1, b2, c_lam, c_rho, c_n1, c_l1, steps, n0)


def stage1_bound_chain(mode: str = RIGOROUS, n0: int = 10**6) -> Stage1Chain:
    """Absolute bounds n1 < B1, n2 < B2 and the functional bounds for lambda and rho."""
    if mode == PAPER_COMPAT:
        return _paper_chain()
    if mode != RIGOROUS:
        raise ValueError(f"unknown mode {mode!r}")
    if n0 < 100:
        raise ValueError("n0 must be at least 100")
    return _rigorous_chain(n0)
