"""The linear forms in logarithms attached to F_m + F_n = X_l."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..realnum import ALPHA, ConstExpr, RealInterval, as_expr, evaluate, log, sqrt

LOG_SQRT5_2 = log(sqrt(5) / 2)
LOG_ALPHA = log(ALPHA)


def log_one_plus_alpha_pow(k: int) -> ConstExpr:
    return log(1 + ALPHA**k)


@dataclass(frozen=True)
class GammaForm:
    """A tagged linear form; ``which`` is one of G1..G5.

    Non-vanishing of these forms is not re-proved here; every form carries
    ``nonvanishing_assumed`` so call sites that rely on it say so.

    G1: l log d + log(sqrt5/2) - n log a - log(1 + a**(m-n))
    G2: l log d + log(sqrt5/2) - n log a
    G3: (l2 - l1) log(sqrt5/2) + (l1 n2 - l2 n1) log a
    G4: (li - lj) log(sqrt5/2) + (ni lj - nj li) log a + lj log(1 + a**(mi-ni))
    G5: (l1 - l2) log(sqrt5/2) + (n1 l2 - n2 l1) log a
        + l2 log(1 + a**(m1-n1)) - l1 log(1 + a**(m2-n2))
    """

    which: str
    ell: int = 0
    n: int = 0
    m: int = 0
    ell2: int = 0
    n2: int = 0
    m2: int = 0
    delta: Optional[ConstExpr] = None
    nonvanishing_assumed: bool = True

    def expr(self) -> ConstExpr:
        w = self.which
        if w in ("G1", "G2"):
            if self.delta is None or self.ell < 1:
                raise ValueError(f"{w} needs a Pell unit and l >= 1")
            g = self.ell * log(self.delta) + LOG_SQRT5_2 - self.n * LOG_ALPHA
            if w == "G1":
                if not self.n > self.m >= 0:
                    raise ValueError("G1 needs n > m >= 0")
                g = g - log_one_plus_alpha_pow(self.m - self.n)
            return g
        l1, n1, m1, l2, n2, m2 = self.ell, self.n, self.m, self.ell2, self.n2, self.m2
        if w == "G3":
            if not 1 <= l1 < l2:
                raise ValueError("G3 needs 1 <= l1 < l2")
            return (l2 - l1) * LOG_SQRT5_2 + (l1 * n2 - l2 * n1) * LOG_ALPHA
        if w == "G4":
            # (li, ni, mi) = (ell, n, m), (lj, nj) = (ell2, n2)
            if not n1 > m1 >= 0:
                raise ValueError("G4 needs ni > mi >= 0")
            return (
                (l1 - l2) * LOG_SQRT5_2
                + (n1 * l2 - n2 * l1) * LOG_ALPHA
                + l2 * log_one_plus_alpha_pow(m1 - n1)
            )
        if w == "G5":
            if not (n1 > m1 >= 0 and n2 > m2 >= 0):
                raise ValueError("G5 needs n_i > m_i >= 0")
            return (
                (l1 - l2) * LOG_SQRT5_2
                + (n1 * l2 - n2 * l1) * LOG_ALPHA
                + l2 * log_one_plus_alpha_pow(m1 - n1)
                - l1 * log_one_plus_alpha_pow(m2 - n2)
            )
        raise ValueError(f"unknown form {w!r}")


def gamma1(delta, ell: int, n: int, m: int) -> GammaForm:
    return GammaForm("G1", ell=ell, n=n, m=m, delta=as_expr(delta))


def gamma2(delta, ell: int, n: int) -> GammaForm:
    return GammaForm("G2", ell=ell, n=n, delta=as_expr(delta))


def gamma3(l1: int, l2: int, n1: int, n2: int) -> GammaForm:
    return GammaForm("G3", ell=l1, n=n1, ell2=l2, n2=n2)


def gamma4(li: int, lj: int, ni: int, nj: int, mi: int) -> GammaForm:
    return GammaForm("G4", ell=li, n=ni, m=mi, ell2=lj, n2=nj)


def gamma5(l1: int, l2: int, n1: int, n2: int, m1: int, m2: int) -> GammaForm:
    return GammaForm("G5", ell=l1, n=n1, m=m1, ell2=l2, n2=n2, m2=m2)


def gamma_eval(form: GammaForm, precision: int = 128) -> RealInterval:
    return evaluate(form.expr(), precision)
