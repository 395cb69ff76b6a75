"""The P-polynomial search and the final exhaustive box search."""

from __future__ import annotations

import math
import time
from typing import Dict, List, Tuple

from ..factoring import DEFAULT_CEILING
from ..pell import PellSolution, normalize_to_fundamental, p_poly_eval, p_poly_invert
from ..realnum import ALPHA, evaluate, log, sqrt
from ..sequences import RELAXED, STRICT, fib, two_term_reps
from .records import PRow, SearchBox, SolutionRecord, StageReport


def ell1_bound(n1_max: int) -> int:
    """l1 log(delta) <= (n1 + 1) log(alpha) + log(1 + alpha**-2), delta >= 1 + sqrt2."""
    q = ((n1_max + 1) * log(ALPHA) + log(1 + ALPHA ** (-2))) / log(1 + sqrt(2))
    up = evaluate(q, 128).upper
    return up.numerator // up.denominator


def _targets(n_max: int, strict: bool = True):
    """(n, m, F_m + F_n) with n <= n_max; strict means n - m >= 2."""
    fibs = [fib(k) for k in range(n_max + 1)]
    for n in range(2 if strict else 1, n_max + 1):
        top = n - 2 if strict else n
        for m in range(0, top + 1):
            yield n, m, fibs[m] + fibs[n]


def _invert_all(T: int, ell_lo: int, ell_hi: int, small: Dict[Tuple[int, int], Tuple[int, int]]):
    """(ell, eps, X) with P_ell^eps(X) = T over ell in [ell_lo, ell_hi]."""
    out = []
    for ell in range(ell_lo, ell_hi + 1):
        if ell == 1:
            for eps in (1, -1):
                out.append((1, eps, T))
            continue
        done = True
        for eps in (1, -1):
            p1, p2 = small[(ell, eps)]
            if p2 > T:
                # only X = 1 can still work
                if p1 == T:
                    out.append((ell, eps, 1))
                if eps == -1 and p1 <= T:
                    done = False
                continue
            done = False
            x = p_poly_invert(ell, eps, T)
            if x is not None:
                out.append((ell, eps, x))
        if done and T != 1:
            break
    return out


def _small_values(ell_hi: int):
    return {(ell, eps): (p_poly_eval(ell, eps, 1), p_poly_eval(ell, eps, 2)) for ell in range(2, ell_hi + 1) for eps in (1, -1)}


def _normalize(X: int, eps: int, ceiling: int):
    sol, power = normalize_to_fundamental(X, eps, ceiling)
    Y2 = (X * X - eps) // sol.d
    Y = math.isqrt(Y2)
    return sol, power, Y


def search_p_polynomials(
    n1_max: int,
    ell1_range: Tuple[int, int],
    ceiling: int = DEFAULT_CEILING,
    capped: bool = False,
):
    """All (n1, m1, l1, X1) with P_l1^+-(X1) = F_m1 + F_n1, n1 - m1 >= 2.

    Returns (rows, solutions, report); ``solutions`` are the distinct
    normalized Pell units, + sign first, each by increasing X1. Rows with
    X1 = 1 and sign + are the Y1 = 0 family and are kept but flagged.
    """
    t0 = time.perf_counter()
    lo, hi = ell1_range
    if lo < 1 or hi < lo:
        raise ValueError("bad ell1 range")
    small = _small_values(hi)
    rows: List[PRow] = []
    sols: Dict[int, PellSolution] = {}
    excluded5 = 0
    for n, m, T in _targets(n1_max):
        for ell, eps, X in _invert_all(T, lo, hi, small):
            if X == 1 and eps == 1:
                rows.append(PRow(n, m, ell, 1, 1, degenerate=True))
                continue
            sol, power, Y = _normalize(X, eps, ceiling)
            if sol.d == 5:
                # settled separately, the reductions assume d != 5
                excluded5 += 1
                continue
            rows.append(PRow(n, m, ell, X, eps, sol.d, Y, sol.X1, power))
            sols.setdefault(sol.d, sol)
    rows.sort(key=lambda r: (-r.epsilon, r.n, r.m, r.ell))
    order = sorted(sols.values(), key=lambda s: (-s.epsilon, s.X1))
    main = [r for r in rows if not r.degenerate]
    degenerate = [r for r in rows if r.degenerate]
    rep = StageReport(
        "p_search",
        inputs={"n1_max": n1_max, "ell1_min": lo, "ell1_max": hi},
        outputs={
            "rows": len(main),
            "degenerate_rows": len(degenerate),
            "d5_rows_excluded": excluded5,
            "units": [{"d": s.d, "X1": s.X1, "Y1": s.Y1, "epsilon": s.epsilon} for s in order],
        },
        certificates=[r.to_json() for r in main],
        certified=not capped and lo == 1,
    )
    if capped:
        rep.notes.append("search ranges capped below the derived bounds")
    if lo > 1:
        rep.notes.append("l1 = 1 branch not searched (every target solves it)")
    for r in main:
        if r.power and r.power > 1:
            rep.notes.append(f"X1 = {r.X1} is X_{r.power} of d = {r.d}; grouped under d = {r.d}")
    rep.wall_time = time.perf_counter() - t0
    return rows, order, rep


def records_for_unit(sol: PellSolution, ell_max: int) -> List[SolutionRecord]:
    """Every l <= ell_max with X_l = F_m + F_n, strict and relaxed."""
    out = []
    a, b = 1, sol.X1
    for ell in range(1, ell_max + 1):
        for policy in (STRICT, RELAXED):
            for rep in two_term_reps(b, policy):
                out.append(SolutionRecord(sol.d, sol.epsilon, ell, rep.m, rep.n, b, policy, sol.X1))
        a, b = b, 2 * sol.X1 * b - sol.epsilon * a
    return out


def box_units(box: SearchBox, ceiling: int = DEFAULT_CEILING) -> Dict[int, PellSolution]:
    """Pell units reached from some target F_m + F_n in the box and some l1."""
    small = _small_values(box.ell_max)
    units: Dict[int, PellSolution] = {}
    seen = set()
    for _n, _m, T in _targets(box.n_max, strict=False):
        if T in seen:
            continue
        seen.add(T)
        for _ell, eps, X in _invert_all(T, 1, box.ell_max, small):
            if X == 1 and eps == 1:
                continue
            sol, _power, _Y = _normalize(X, eps, ceiling)
            units.setdefault(sol.d, sol)
    return units


def search_final_box(box: SearchBox, ceiling: int = DEFAULT_CEILING, skip_d5: bool = True):
    """Records grouped by squarefree d over every unit reachable from the box.

    Returns (groups, report). Groups hold every l <= box.ell_max with a hit;
    d = 5 is skipped by default since it is settled separately.
    """
    t0 = time.perf_counter()
    units = box_units(box, ceiling)
    groups: Dict[int, List[SolutionRecord]] = {}
    for d, sol in sorted(units.items()):
        if skip_d5 and d == 5:
            continue
        recs = records_for_unit(sol, box.ell_max)
        if recs:
            groups[d] = recs
    multi = sorted(d for d, rs in groups.items() if len({r.ell for r in rs}) >= 2)
    listed = sorted(d for d, rs in groups.items() if any(r.ell >= 2 for r in rs))
    rep = StageReport(
        "final_box",
        inputs={"box": box.to_json()},
        outputs={
            "units": len(units),
            "groups": len(groups),
            "multi_ell_d": multi,
            "higher_ell_d": listed,
            "single_ell1_groups": sum(1 for d, rs in groups.items() if {r.ell for r in rs} == {1}),
        },
    )
    rep.wall_time = time.perf_counter() - t0
    return groups, rep
