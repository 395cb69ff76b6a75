"""Stage 1 (absolute bounds) and the iterated first-reduction cycle."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Callable, Iterable, List, Optional

from ..linforms import PAPER_COMPAT, Stage1Chain, round_down_sig, round_up_sig, sci, solve_log_poly_bound, stage1_bound_chain
from ..realnum import ALPHA, evaluate, log, sqrt
from ..reduction import (
    HypothesisFailed,
    LatticeProblem,
    eliminate_relation,
    exponent_bound,
    find_log_relation,
    flacotadas_lower_bound,
    homogeneous_reduce,
    legendre_bound,
)
from .cache import CFCache
from .config import Config, sample_points
from .records import StageReport

LOG_A = log(ALPHA)
TAU_MAIN = log(sqrt(5) / 2) / LOG_A

# coefficients of the inequalities the reductions start from
LAMBDA_COEFF = Fraction(42, 5)  # |tau - a/b| < 8.4 n2 / (alpha**lam b)
GAMMA4_COEFF = 25  # |G4| < 25 n2 alpha**-rho
GAMMA5_COEFF = 46  # |G5| < 46 n2 alpha**-(n1-2)
EQUAL_COEFF = 96  # lambda = chi branch, alpha**(n1-2) < 96 (a + 2) n2 (l2 - l1)

# published floors for the LLL minima, checked (never assumed) in paper-compat mode
PAPER_FLOORS = {
    1: (Fraction(1, 10**608), Fraction(1, 10**1215)),
    2: (Fraction(79, 10**175), Fraction(27, 10**348)),
}


def pmap(fn: Callable, items: Iterable, workers: int = 1) -> List:
    """Order-preserving map, over a process pool when workers > 1."""
    items = list(items)
    if workers <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


def run_stage1(cfg: Optional[Config] = None) -> tuple:
    """(StageReport, Stage1Chain) for the configured constant mode."""
    cfg = cfg or Config()
    t0 = time.perf_counter()
    chain = stage1_bound_chain(cfg.mode, cfg.n0)
    rep = StageReport(
        "stage1",
        inputs={"mode": cfg.mode, "n0": cfg.n0 if cfg.mode != PAPER_COMPAT else None},
        outputs={"bound_n1": chain.bound_n1, "bound_n2": chain.bound_n2},
        certificates=[chain.to_json()],
    )
    if cfg.mode == PAPER_COMPAT:
        rep.notes.append("published folded constants injected; only products and the final solve are recomputed")
    else:
        rep.notes.append(f"valid for n2 >= {cfg.n0}; smaller n2 fall inside the final search box")
    rep.wall_time = time.perf_counter() - t0
    return rep, chain


def coefficient_bound(M: int, mode: str) -> int:
    """X with |x_i| <= X for the LLL forms, from |x_i| < 3.4 n2."""
    c = Fraction(17, 5) if mode == PAPER_COMPAT else Fraction(341, 100)
    return int(round_up_sig(c * M))


def _lattice_point(args):
    taus, X, C = args
    prob = LatticeProblem(taus, (X,) * len(taus), C)
    info = {}
    try:
        lb = flacotadas_lower_bound(prob)
    except HypothesisFailed:
        rel = find_log_relation(prob.tau)
        if rel is None:
            raise
        prob, dropped = eliminate_relation(prob, rel)
        info = {"relation": list(rel.coefficients), "dropped": dropped}
        lb = flacotadas_lower_bound(prob)
    low = evaluate(lb.bound_expr, 64).lower
    return lb, low, info


def _gamma4_point(args):
    lam, X, C = args
    taus = (log(sqrt(5) / 2), LOG_A, log(1 + ALPHA ** (-lam)))
    lb, low, info = _lattice_point((taus, X, C))
    return lam, lb, low, info


def _gamma5_point(args):
    lam, chi, X, C = args
    taus = (log(sqrt(5) / 2), LOG_A, log(1 + ALPHA ** (-lam)), log(1 + ALPHA ** (-chi)))
    lb, low, info = _lattice_point((taus, X, C))
    return (lam, chi), lb, low, info


def tau_equal(lam: int):
    """|log(2/sqrt5) + log(1 + alpha**lam)| / log(alpha), the lambda = chi constant."""
    return abs(log(2 / sqrt(5)) + log(1 + ALPHA**lam)) / LOG_A


def _floor_from(points, published: Optional[Fraction]):
    """The lower bound used for the minimum: published floor if every point beats it."""
    lows = [p[2] for p in points]
    if not lows:
        return None, "empty"
    if published is not None and all(p[1].exceeds(published) for p in points):
        return published, "published floor verified at every swept point"
    m = min(lows)
    if m <= 0:
        raise ArithmeticError("non-positive lattice lower bound")
    return round_down_sig(m), "computed minimum"


def run_reduction_cycle(
    bound_n2: int,
    chain: Stage1Chain,
    cfg: Optional[Config] = None,
    cycle: int = 1,
    cache: Optional[CFCache] = None,
) -> StageReport:
    """One pass: lambda, rho, n1 and a new bound on n2 from the old one."""
    cfg = cfg or Config()
    cache = cache or CFCache(cfg.cache_dir)
    if bound_n2 < 100:
        raise ValueError("bound_n2 must be at least 100")
    t0 = time.perf_counter()
    M = int(bound_n2)
    certs = []
    hw = 0
    compat = cfg.mode == PAPER_COMPAT
    floors = PAPER_FLOORS.get(cycle, (None, None)) if compat else (None, None)

    # lambda from the homogeneous form and Legendre's bound
    cf = cache.expansion(TAU_MAIN, q_exceeds=M, max_precision_bits=cfg.max_precision_bits)
    hw = max(hw, cf.precision_bits)
    lam_out = homogeneous_reduce(cf, M, LAMBDA_COEFF)
    lam_max = lam_out.new_bound
    certs.append({"step": "lambda", **lam_out.to_json()})

    X = coefficient_bound(M, cfg.mode)
    c4 = 20 if cycle == 1 else 7
    c5 = 7 if cycle == 1 else 11
    C4 = (c4 * X) ** 5
    C5 = (c5 * X) ** 9

    # rho from the three-term form over lambda
    lams = sample_points(2, lam_max, cfg.gamma4_samples)
    g4 = pmap(_gamma4_point, [(lam, X, C4) for lam in lams], cfg.workers)
    floor4, how4 = _floor_from(g4, floors[0])
    rho_max = exponent_bound(GAMMA4_COEFF * Fraction(M) / floor4)
    certs.append(
        {
            "step": "gamma4",
            "X": X,
            "C": f"({c4}X)^5",
            "lambdas": lams,
            "log10_bounds": [round(p[1].log10(), 2) for p in g4],
            "floor": sci(floor4),
            "floor_source": how4,
            "relations": {str(p[0]): p[3] for p in g4 if p[3]},
            "rho_max": rho_max,
        }
    )

    # the rho = n_j - m_j branch, lambda < chi, four-term form
    pairs = []
    for lam in sample_points(2, lam_max, cfg.gamma5_lambda_samples):
        for chi in sample_points(lam + 1, rho_max, cfg.gamma5_chi_samples):
            pairs.append((lam, chi))
    g5 = pmap(_gamma5_point, [(lam, chi, X, C5) for lam, chi in pairs], cfg.workers)
    floor5, how5 = _floor_from(g5, floors[1])
    n1_lt = 2 + exponent_bound(GAMMA5_COEFF * Fraction(M) / floor5) if floor5 else 0
    certs.append(
        {
            "step": "gamma5",
            "X": X,
            "C": f"({c5}X)^9",
            "pairs": [list(p) for p in pairs],
            "log10_bounds": [round(p[1].log10(), 2) for p in g5],
            "floor": sci(floor5) if floor5 else None,
            "floor_source": how5,
            "relations": {f"{p[0][0]},{p[0][1]}": p[3] for p in g5 if p[3]},
            "n1_max": n1_lt,
        }
    )

    # lambda = chi branch: Legendre bound for tau_lambda over lambda
    eq_lams = sample_points(2, lam_max, cfg.equal_branch_samples)
    eq_lams = sorted(set(eq_lams) | {x for x in cfg.extra_equal_lambdas if 2 <= x <= lam_max})
    best = None
    spikes = []
    for lam in eq_lams:
        cfl = cache.expansion(tau_equal(lam), q_exceeds=M, max_precision_bits=cfg.max_precision_bits)
        hw = max(hw, cfl.precision_bits)
        lb = legendre_bound(cfl, M)
        if best is None or lb.a_max > best[1].a_max:
            best = (lam, lb)
        spikes.append((lam, lb.a_max))
    a_eq = best[1].a_max
    n1_eq = 2 + exponent_bound(EQUAL_COEFF * (a_eq + 2) * Fraction(M) ** 2)
    certs.append(
        {
            "step": "equal_branch",
            "lambdas": len(eq_lams),
            "argmax_lambda": best[0],
            "a_max": a_eq,
            "legendre": best[1].to_json(),
            "spikes": [[lam, a] for lam, a in spikes],
            "n1_max": n1_eq,
        }
    )

    n1_max = max(rho_max, n1_lt, n1_eq)
    # log delta <= l1 log delta <= (n1 + 1) log alpha + log(1 + alpha**-2)
    ld = evaluate((n1_max + 1) * LOG_A + log(1 + ALPHA ** (-2)), 128).upper
    A = round_up_sig(chain.c_xbound * ld * ld)
    n_star = solve_log_poly_bound(A, 2)
    new_b2 = min(int(round_up_sig(n_star)), M)
    certs.append({"step": "close", "log_delta_max": sci(ld, 5), "A": sci(A), "n_star": n_star, "new_bound_n2": new_b2})

    rep = StageReport(
        f"cycle{cycle}",
        inputs={"bound_n2": M, "mode": cfg.mode},
        outputs={
            "lambda_max": lam_max,
            "rho_max": rho_max,
            "n1_lambda_lt_chi": n1_lt,
            "n1_lambda_eq_chi": n1_eq,
            "n1_max": n1_max,
            "log_delta_max": float(ld),
            "bound_n2": new_b2,
        },
        certificates=certs,
        precision_high_water=hw,
        certified=cfg.full_sweeps,
    )
    if not cfg.full_sweeps:
        rep.notes.append("LLL and equal-branch sweeps sampled; minima are over the sampled points only")
    rep.wall_time = time.perf_counter() - t0
    return rep
