"""Command line entry point: ``zeckpell <group> <command> ...``."""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from typing import List, Optional

from . import __version__


def _int(text: str) -> int:
    """Integers, also written like 3.3e40 or 21/5 (rounded up)."""
    q = Fraction(text.replace("_", ""))
    return math.ceil(q)


def _dump(obj) -> None:
    json.dump(obj, sys.stdout, indent=1)
    sys.stdout.write("\n")


def _expr(text: str):
    from .realnum import parse_prefix

    return parse_prefix(text)


def cmd_zeckendorf(args) -> int:
    from .sequences import RELAXED, STRICT, two_term_reps, zeckendorf_encode

    rep = zeckendorf_encode(args.N)
    _dump(
        {
            "N": str(args.N),
            "indices": list(rep.indices),
            "terms": len(rep),
            "strict_pairs": [[p.m, p.n] for p in two_term_reps(args.N, STRICT)],
            "relaxed_pairs": [[p.m, p.n] for p in two_term_reps(args.N, RELAXED)],
        }
    )
    return 0


def cmd_pell_fundamental(args) -> int:
    from .pell import fundamental_solution

    s = fundamental_solution(args.d)
    _dump({"d": str(s.d), "X1": str(s.X1), "Y1": str(s.Y1), "epsilon": s.epsilon})
    return 0


def cmd_pell_x(args) -> int:
    from .pell import fundamental_solution

    s = fundamental_solution(args.d)
    _dump({"d": str(s.d), "ell": args.ell, "X": str(s.x(args.ell))})
    return 0


def cmd_bounds_chain(args) -> int:
    from .linforms import PAPER_COMPAT, RIGOROUS, stage1_bound_chain

    chain = stage1_bound_chain(PAPER_COMPAT if args.paper_compat else RIGOROUS, args.n0)
    _dump(chain.to_json())
    return 0


def cmd_reduce_cf(args) -> int:
    from .reduction import legendre_bound, real_cf

    x = _expr(args.expr)
    if args.q_exceeds is not None:
        M = _int(args.q_exceeds)
        cf = real_cf(x, q_exceeds=M)
        out = cf.to_json()
        out["legendre"] = legendre_bound(cf, M).to_json()
    else:
        cf = real_cf(x, count=args.count)
        out = cf.to_json()
    out["convergents"] = [f"{p}/{q}" for p, q in cf.convergents[: args.show]]
    _dump(out)
    return 0


def cmd_reduce_bd(args) -> int:
    from .reduction import NoUsableConvergent, dujella_petho

    try:
        out = dujella_petho(_expr(args.tau), _expr(args.mu), _expr(args.A), _expr(args.B), _int(args.M), args.max_tries)
    except NoUsableConvergent as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _dump(out.to_json())
    return 0


def cmd_reduce_lll(args) -> int:
    from .reduction import HypothesisFailed, LatticeProblem, flacotadas_lower_bound

    taus = [_expr(t) for t in args.tau]
    X = [_int(x) for x in args.X]
    if len(X) == 1:
        X = X * len(taus)
    try:
        lb = flacotadas_lower_bound(LatticeProblem(taus, X, _int(args.C)), reorder=not args.no_reorder)
    except HypothesisFailed as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _dump(lb.to_json())
    return 0


def cmd_prove_run(args) -> int:
    from .pipeline import load_config, make_config, run_all, verify_theorem, write_figures, write_json, write_tables

    over = {"workers": args.workers, "cache_dir": args.cache}
    cfg = load_config(args.config, **over) if args.config else make_config(args.profile, args.paper_compat, **over)
    log = None if args.quiet else (lambda msg: print(msg, file=sys.stderr))
    report = run_all(cfg, stop_after=args.stage, log=log)
    if args.stage is None or args.stage == "final_box":
        verdict = verify_theorem(report)
        report["verdict"] = verdict.to_json()
    write_json(report, args.out)
    outdir = args.tables or _sibling(args.out)
    paths = write_tables(report, outdir)
    if not args.no_figures:
        paths += write_figures(report, args.figures or _sibling(args.out, "figures"))
    # delimited summary on stdout
    print("stage\tcertified\twall_time")
    for s in report["stages"]:
        print(f"{s['id']}\t{str(s['certified']).lower()}\t{s['wall_time']}")
    if "verdict" in report:
        print(f"verdict\t{'PASS' if report['verdict']['passed'] else 'FAIL'}\t{report['exceptional_d']}")
        for p in paths:
            print(f"file\t{p}", file=sys.stderr)
        return 0 if report["verdict"]["passed"] else 1
    return 0


def _sibling(path: str, name: Optional[str] = None) -> str:
    import os

    base = os.path.dirname(os.path.abspath(path))
    return os.path.join(base, name) if name else base


def cmd_prove_verify(args) -> int:
    from .pipeline import read_json, verify_theorem

    verdict = verify_theorem(read_json(args.report))
    for c in verdict.checks:
        print(f"{'PASS' if c['ok'] else 'FAIL'}\t{c['check']}\t{c['detail']}")
    print(f"{'PASS' if verdict.passed else 'FAIL'}\toverall")
    return 0 if verdict.passed else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zeckpell", description=__doc__)
    p.add_argument("--version", action="version", version=f"zeckpell {__version__}")
    sub = p.add_subparsers(dest="group", required=True)

    z = sub.add_parser("zeckendorf", help="Zeckendorf and two-term representations of N")
    z.add_argument("N", type=int)
    z.set_defaults(fn=cmd_zeckendorf)

    pell = sub.add_parser("pell", help="Pell equation x^2 - d y^2 = +-1").add_subparsers(dest="cmd", required=True)
    f = pell.add_parser("fundamental", help="fundamental solution")
    f.add_argument("d", type=int)
    f.set_defaults(fn=cmd_pell_fundamental)
    x = pell.add_parser("x", help="X_ell from the fundamental solution")
    x.add_argument("d", type=int)
    x.add_argument("ell", type=int)
    x.set_defaults(fn=cmd_pell_x)

    bounds = sub.add_parser("bounds", help="absolute bounds").add_subparsers(dest="cmd", required=True)
    c = bounds.add_parser("chain", help="stage-1 bound chain")
    c.add_argument("--paper-compat", action="store_true", help="use the published folded constants")
    c.add_argument("--n0", type=_int, default=10**6, help="assumed lower limit for n2 (rigorous mode)")
    c.set_defaults(fn=cmd_bounds_chain)

    red = sub.add_parser("reduce", help="reduction engines; numbers in prefix form").add_subparsers(dest="cmd", required=True)
    cf = red.add_parser("cf", help="certified continued fraction")
    cf.add_argument("expr", help='e.g. "(/ (log (/ (sqrt 5) 2)) (log alpha))"')
    g = cf.add_mutually_exclusive_group(required=True)
    g.add_argument("--count", type=int)
    g.add_argument("--q-exceeds")
    cf.add_argument("--show", type=int, default=8, help="convergents to print")
    cf.set_defaults(fn=cmd_reduce_cf)
    bd = red.add_parser("bd", help="Dujella-Petho reduction")
    bd.add_argument("--tau", required=True)
    bd.add_argument("--mu", required=True)
    bd.add_argument("--A", required=True)
    bd.add_argument("--B", default="alpha")
    bd.add_argument("--M", required=True)
    bd.add_argument("--max-tries", type=int, default=25)
    bd.set_defaults(fn=cmd_reduce_bd)
    ll = red.add_parser("lll", help="lattice lower bound for a bounded linear form")
    ll.add_argument("--tau", action="append", required=True, help="repeat once per term")
    ll.add_argument("--X", action="append", required=True, help="one bound, or one per term")
    ll.add_argument("--C", required=True)
    ll.add_argument("--no-reorder", action="store_true")
    ll.set_defaults(fn=cmd_reduce_lll)

    pr = sub.add_parser("prove", help="full pipeline").add_subparsers(dest="cmd", required=True)
    run = pr.add_parser("run", help="run the stages and write a report")
    run.add_argument("--profile", choices=["ci", "full"], default="ci")
    run.add_argument("--paper-compat", action="store_true")
    run.add_argument("--stage", choices=["d5", "stage1", "cycles", "p_search", "bd", "final_box"], help="stop after this stage")
    run.add_argument("--out", default="report.json")
    run.add_argument("--tables", help="directory for TSV tables (default: next to the report)")
    run.add_argument("--figures", help="directory for PNG figures (default: figures/ next to the report)")
    run.add_argument("--no-figures", action="store_true")
    run.add_argument("--config", help="JSON config file")
    run.add_argument("--cache", help="continued-fraction cache directory")
    run.add_argument("--workers", type=int)
    run.add_argument("--quiet", action="store_true")
    run.set_defaults(fn=cmd_prove_run)
    ver = pr.add_parser("verify", help="recheck a report")
    ver.add_argument("report")
    ver.set_defaults(fn=cmd_prove_verify)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
