"""One test per acceptance criterion; each prints a PASS/FAIL line."""

import itertools
import random
import time
from fractions import Fraction

import mpmath
import pytest
from conftest import ACCEPTANCE_LINES

from zeckpell.linforms import PAPER_COMPAT, RIGOROUS, stage1_bound_chain
from zeckpell.pipeline import (
    SolutionRecord,
    make_config,
    run_bd_stage,
    search_p_polynomials,
    tau_equal,
    verify_theorem,
)
from zeckpell.pipeline.cache import CFCache
from zeckpell.pipeline.cycle import TAU_MAIN, _gamma4_point, _gamma5_point
from zeckpell.pell import fundamental_solution
from zeckpell.realnum import ALPHA, Comparison, compare_certified, evaluate, log, sqrt
from zeckpell.reduction import HypothesisFailed, LatticeProblem, flacotadas_lower_bound, legendre_bound, real_cf
from zeckpell.sequences import (
    fib,
    lucas,
    lucas_half_identity_check,
    norm_one_plus_alpha_pow,
    parity_identity_check,
    zeckendorf_decode,
    zeckendorf_encode,
)


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


def record(n, ok, detail, elapsed):
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail} ({elapsed:.2f} s)"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_criterion_01_main_continued_fraction():
    with Timer() as t:
        cf = real_cf(TAU_MAIN, count=12)
    want_a = (0, 4, 3, 5, 7, 3, 1, 8, 45, 1, 3, 1)
    want_c = [(1, 4), (3, 13), (16, 69), (115, 496), (361, 1557), (476, 2053)]
    ok = cf.partial_quotients == want_a and list(cf.convergents[1:7]) == want_c and t.elapsed < 1
    record(1, ok, f"quotients {list(cf.partial_quotients)}", t.elapsed)


@pytest.mark.parametrize("M,N,a,argpos", [(21 * 10**149, 282, 258, None), (44 * 10**40, 89, 161, 73)])
def test_criterion_02_legendre(M, N, a, argpos):
    with Timer() as t:
        lb = legendre_bound(real_cf(TAU_MAIN, q_exceeds=M), M)
    ok = lb.position == N and lb.a_max == a and (argpos is None or lb.argmax + 1 == argpos)
    record(2, ok, f"M={M:.1e}: position {lb.position}, a(M) {lb.a_max} at position {lb.argmax + 1}", t.elapsed)


def test_criterion_03_lambda_bounds(compat_report):
    with Timer() as t:
        out = {s["id"]: s["outputs"] for s in compat_report["stages"]}
        lams = [int(out["cycle1"]["lambda_max"]), int(out["cycle2"]["lambda_max"])]
    record(3, lams == [1455, 414], f"lambda bounds {lams}", t.elapsed)


def test_criterion_04_equal_branch_quotient():
    with Timer() as t:
        cf = real_cf(tau_equal(312), count=230)
        a = cf.partial_quotients[223]
    record(4, a == 1000002, f"a_223 of the lambda = 312 constant is {a}", t.elapsed)


X_PUB = 72 * 10**149


@pytest.mark.parametrize("lam", [2, 100, 312, 777, 1455])
def test_criterion_05_lll_three_terms(lam):
    with Timer() as t:
        _, lb, low, info = _gamma4_point((lam, X_PUB, (20 * X_PUB) ** 5))
    ok = lb.exceeds(Fraction(1, 10**608))
    record(5, ok, f"t=3 lambda={lam}: log10 bound {lb.log10():.1f} > -608", t.elapsed)


@pytest.mark.parametrize("lam,chi", [(2, 3), (50, 700), (1455, 1454)])
def test_criterion_05_lll_four_terms(lam, chi):
    with Timer() as t:
        _, lb, low, info = _gamma5_point((lam, chi, X_PUB, (7 * X_PUB) ** 9))
    ok = lb.exceeds(Fraction(1, 10**1215))
    extra = f", relation {info['relation']} eliminated" if info else ""
    record(5, ok, f"t=4 ({lam},{chi}): log10 bound {lb.log10():.1f} > -1215{extra}", t.elapsed)


PUB_H = [204, 204, 203, 206, 209, 203]


def test_criterion_06_dujella_petho_table(tmp_path):
    cfg = make_config("ci")
    with Timer() as t:
        _, units, _ = search_p_polynomials(100, (2, 60), capped=True)
        rep = run_bd_stage(units, 33 * 10**39, cfg, CFCache(str(tmp_path)))
        table = rep.certificates[0]["table"]
        hs = [row["h"] for row in table]
        eps_ok = all(row["epsilon_lower"] > 0 for row in table)
        passes = [int(b) for b in rep.outputs["pass_bounds"]]
    ok = (
        len(hs) == 6
        and all(abs(h - p) <= 2 for h, p in zip(hs, PUB_H))
        and eps_ok
        and passes[0] <= 228
        and int(rep.outputs["n2_max"]) <= 42
        and int(rep.outputs["ell_box"]) <= 25
    )
    record(6, ok, f"h={hs}, passes {passes}, l box {rep.outputs['ell_box']}", t.elapsed)


def test_criterion_07_p_polynomial_search():
    with Timer() as t:
        rows, units, rep = search_p_polynomials(100, (2, 60), capped=True)
        main = [r for r in rows if not r.degenerate]
    ok = len(main) == 11 and rep.outputs["degenerate_rows"] == 59 and [u.d for u in units] == [3, 11, 30, 219, 2, 14401]
    record(7, ok, f"{len(main)} rows, {rep.outputs['degenerate_rows']} degenerate, units {[u.d for u in units]}", t.elapsed)


def test_criterion_08_final_box_and_theorem(ci_report):
    with Timer() as t:
        v = verify_theorem(ci_report)
    ok = v.passed and ci_report["exceptional_d"] == [2, 3, 5, 11, 30]
    record(8, ok, f"verdict {'PASS' if v.passed else 'FAIL'}, exceptional d {ci_report['exceptional_d']}", t.elapsed)


def test_criterion_09_d5():
    with Timer() as t:
        sol = fundamental_solution(5)
        xs = [sol.x(1), sol.x(2), sol.x(3)]
        z = zeckendorf_encode(38)
    ok = xs == [2, 9, 38] and tuple(z.indices) == (2, 4, 9)
    record(9, ok, f"X = {xs}, Zeckendorf(38) indices {tuple(z.indices)}", t.elapsed)


def test_criterion_10_identities(ci_report):
    with Timer() as t:
        par = all(parity_identity_check(n) == 4 * (-1) ** n for n in range(3, 201))
        luc = all(lucas_half_identity_check(n) == 0 for n in range(3, 301, 3))
        # the norm of 1 + alpha**k is (1 + alpha**k)(1 + beta**k) = 1 + L_k + (-1)**k
        nrm = all(norm_one_plus_alpha_pow(k) == 1 + lucas(k) + (-1) ** k for k in range(1, 201))
        e3 = e5 = True
        for r in map(SolutionRecord.from_json, ci_report["solutions"]):
            s = fundamental_solution(r.d)
            e3 &= compare_certified(r.value, s.delta_expr**r.ell) is Comparison.LESS
            e3 &= compare_certified(r.value, s.delta_expr**r.ell / ALPHA**2) is not Comparison.LESS
            if r.n >= 3:
                gap = r.n - r.ell * log(s.delta_expr) / log(ALPHA)
                e5 &= abs(evaluate(gap, 64)).upper <= 2 and r.ell < r.n
        fibs = [fib(k) for k in range(2, 32)]
        zr = all(zeckendorf_decode(zeckendorf_encode(N)) == N for N in range(1, 10**6 + 1, 7))
        zr &= all(sum(fibs[i - 2] for i in zeckendorf_encode(N).indices) == N for N in range(1, 10**6 + 1, 13))
    ok = par and luc and nrm and e3 and e5 and zr
    detail = f"parity {par}, lucas-half {luc}, norm {nrm}, size {e3}, exponent {e5}, zeckendorf {zr}"
    record(10, ok, detail, t.elapsed)


@pytest.mark.slow
def test_criterion_10_zeckendorf_exhaustive():
    with Timer() as t:
        ok = all(zeckendorf_decode(zeckendorf_encode(N)) == N for N in range(1, 10**6 + 1))
    record(10, ok, "Zeckendorf round trip for every N <= 1e6", t.elapsed)


def _true_min(taus, X):
    vals = []
    for tau in taus:
        iv = evaluate(tau, 120)
        vals.append(mpmath.mpf(iv.mid.numerator) / iv.mid.denominator)
    best = None
    for xs in itertools.product(*(range(-x, x + 1) for x in X)):
        if any(xs):
            v = abs(mpmath.fsum(a * b for a, b in zip(xs, vals)))
            best = v if best is None else min(best, v)
    return best


def test_criterion_11_bound_chain_and_lattice_soundness():
    with Timer() as t:
        rig = stage1_bound_chain(RIGOROUS)
        cmp_ = stage1_bound_chain(PAPER_COMPAT)
        within = (4 * 10**57 <= rig.bound_n1 <= 4 * 10**60) and (21 * 10**149 <= rig.bound_n2 <= 21 * 10**152)
        compat = cmp_.bound_n2 == 21 * 10**149 and cmp_.bound_n1 <= 4 * 10**57
        rng = random.Random(2024)
        primes = [2, 3, 5, 7, 11, 13, 17, 19, 23]
        sound = 0
        with mpmath.workdps(30):
            for _ in range(100):
                k = rng.choice([2, 3])
                taus = [log(p) if rng.random() < 0.7 else sqrt(p) for p in rng.sample(primes, k)]
                X = [rng.randint(1, 20) for _ in range(k)]
                C = 10**8
                while True:
                    try:
                        lb = flacotadas_lower_bound(LatticeProblem(taus, X, C))
                        break
                    except HypothesisFailed:
                        C *= 100
                tm = _true_min(taus, X)
                sound += not lb.exceeds(Fraction(mpmath.nstr(tm * (1 + mpmath.mpf(10) ** -12), 20)))
    ok = within and compat and sound == 100
    detail = f"rigorous n1 {rig.bound_n1:.1e} n2 {rig.bound_n2:.1e}; compat n2 {cmp_.bound_n2:.1e}; lattice bounds sound {sound}/100"
    record(11, ok, detail, t.elapsed)
