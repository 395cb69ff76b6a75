"""Dujella-Petho passes over the Pell units found by the P-polynomial search."""

from __future__ import annotations

import time
from fractions import Fraction
from typing import Optional, Sequence

from ..pell import PellSolution
from ..realnum import ALPHA, evaluate, log, sqrt
from ..reduction import dujella_petho
from .cache import CFCache
from .config import Config
from .records import StageReport

LOG_A = log(ALPHA)
MU_MAIN = log(sqrt(5) / 2) / LOG_A
A_FIRST = Fraction(21, 5)  # |l2 tau - n2 + mu| < 4.2 alpha**-(n2-m2)
A_SECOND = Fraction(239, 5)  # |l2 tau - n2 + mu_k| < 47.8 alpha**-n2


def mu_shifted(k: int):
    """log((sqrt5/2) / (1 + alpha**-k)) / log(alpha)."""
    return log((sqrt(5) / 2) / (1 + ALPHA ** (-k))) / LOG_A


def tau_of(sol: PellSolution):
    return log(sol.delta_expr) / LOG_A


def _prepared_cf(cache: CFCache, tau, M: int, tries: int, max_bits: int):
    cf = cache.expansion(tau, q_exceeds=6 * M, max_precision_bits=max_bits)
    return cache.expansion(tau, count=cf.certified_through + tries + 2, max_precision_bits=max_bits)


def dp_pass(units: Sequence[PellSolution], M: int, cfg: Config, cache: CFCache, max_tries: int = 25):
    """One first-then-second Dujella-Petho pass; returns (n2 bound, table, details)."""
    table = []
    overall = 0
    worst = None
    hw = 0
    for s, sol in enumerate(units, start=1):
        tau = tau_of(sol)
        cf = _prepared_cf(cache, tau, M, max_tries, cfg.max_precision_bits)
        first = dujella_petho(tau, MU_MAIN, A_FIRST, ALPHA, M, max_tries, cf, cfg.max_precision_bits)
        h_s = first.new_bound
        hw = max(hw, first.certificate["precision_bits"])
        second_max, arg = 0, None
        for k in range(1, h_s + 1):
            out = dujella_petho(tau, mu_shifted(k), A_SECOND, ALPHA, M, max_tries, cf, cfg.max_precision_bits)
            hw = max(hw, out.certificate["precision_bits"])
            if out.new_bound > second_max:
                second_max, arg = out.new_bound, (k, out.certificate["position"])
        table.append(
            {
                "s": s,
                "d": sol.d,
                "delta": f"{sol.X1}+{sol.Y1}*sqrt({sol.d})",
                "position": first.certificate["position"],
                "epsilon_lower": first.certificate["epsilon_lower"],
                "skipped": len(first.certificate["skipped"]),
                "h": h_s,
                "second_max": second_max,
                "second_argmax_k": arg[0] if arg else None,
            }
        )
        if second_max > overall:
            overall, worst = second_max, s
    return overall, table, {"worst_s": worst, "precision_high_water": hw}


def ell2_bound(units: Sequence[PellSolution], n2_max: int) -> int:
    """Largest l2 with delta**l2 <= 2 alpha**n2 over the given units."""
    best = 0
    for sol in units:
        q = (log(2) + n2_max * LOG_A) / log(sol.delta_expr)
        up = evaluate(q, 128).upper
        best = max(best, up.numerator // up.denominator)
    return best


def run_bd_stage(units: Sequence[PellSolution], bound_n2: int, cfg: Optional[Config] = None, cache: Optional[CFCache] = None) -> StageReport:
    """Iterate Dujella-Petho passes from bound_n2 until the bound on n2 stops falling."""
    if not units:
        raise ValueError("need at least one Pell unit")
    cfg = cfg or Config()
    cache = cache or CFCache(cfg.cache_dir)
    t0 = time.perf_counter()
    M = int(bound_n2)
    passes = []
    hw = 0
    while True:
        n2, table, info = dp_pass(units, M, cfg, cache)
        hw = max(hw, info["precision_high_water"])
        passes.append({"M": M, "n2_max": n2, "table": table, "worst_s": info["worst_s"]})
        if n2 >= M:
            break
        M = n2
    n2_max = min(M, passes[-1]["n2_max"])
    ell2 = ell2_bound(units, n2_max)
    rep = StageReport(
        "bd",
        inputs={"bound_n2": int(bound_n2), "units": [u.d for u in units]},
        outputs={
            "n2_max": n2_max,
            "n1_max": n2_max + 2,
            "ell2_max": ell2,
            "ell_box": max(ell2, cfg.ell_box_floor),
            "pass_bounds": [p["n2_max"] for p in passes],
        },
        certificates=passes,
        precision_high_water=hw,
    )
    if cfg.ell_box_floor > ell2:
        rep.notes.append(f"box uses l2 <= {cfg.ell_box_floor}, above the computed {ell2}")
    rep.wall_time = time.perf_counter() - t0
    return rep
