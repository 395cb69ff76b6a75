"""Full run orchestration and the independent check of the final claim."""

from __future__ import annotations

import platform
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

from .. import __version__
from ..linforms import sci
from ..pell import PerfectSquare, fundamental_solution
from ..sequences import STRICT, zeckendorf_encode
from .bd import run_bd_stage
from .cache import CFCache
from .config import Config, sample_points
from .cycle import run_reduction_cycle, run_stage1
from .d5 import d5_analysis
from .records import SearchBox, SolutionRecord, StageReport
from .search import ell1_bound, records_for_unit, search_final_box, search_p_polynomials

EXPECTED_EXCEPTIONS = (2, 3, 5, 11, 30)
EXPECTED_SINGLES = (219, 14401)
STAGE_IDS = ("d5", "stage1", "cycles", "p_search", "bd", "final_box")


def _versions() -> dict:
    import mpmath

    out = {"zeckpell": __version__, "python": platform.python_version(), "mpmath": mpmath.__version__}
    try:
        import gmpy2

        out["gmpy2"] = gmpy2.version()
    except ImportError:  # pragma: no cover
        out["gmpy2"] = None
    return out


def exceptional_set(records) -> List[int]:
    by_d: Dict[int, set] = {}
    for r in records:
        by_d.setdefault(r.d, set()).add(r.ell)
    return sorted(d for d, ells in by_d.items() if len(ells) >= 2)


def run_all(cfg: Optional[Config] = None, stop_after: Optional[str] = None, log: Optional[Callable[[str], None]] = None) -> dict:
    """Run every stage in order and assemble the JSON-ready report."""
    cfg = cfg or Config()
    if stop_after is not None and stop_after not in STAGE_IDS:
        raise ValueError(f"unknown stage {stop_after!r}; choose from {STAGE_IDS}")
    say = log or (lambda _msg: None)
    cache = CFCache(cfg.cache_dir)
    t0 = time.perf_counter()
    stages: List[StageReport] = []
    report = {"config": cfg.to_json(), "versions": _versions(), "stages": [], "solutions": [], "exceptional_d": []}

    def done(sid):
        report["stages"] = [s.to_json() for s in stages]
        report["wall_time"] = round(time.perf_counter() - t0, 3)
        return stop_after == sid

    records5, rep = d5_analysis()
    stages.append(rep)
    say("d5: X_1 = 2 and X_2 = 9 only")
    if done("d5"):
        return report

    rep, chain = run_stage1(cfg)
    stages.append(rep)
    b2, n1 = chain.bound_n2, chain.bound_n1
    say(f"stage1: n1 <= {sci(n1)}, n2 <= {sci(b2)}")
    if done("stage1"):
        return report

    for c in range(1, cfg.cycles + 1):
        rep = run_reduction_cycle(b2, chain, cfg, c, cache)
        stages.append(rep)
        b2, n1 = rep.outputs["bound_n2"], rep.outputs["n1_max"]
        say(f"cycle {c}: lambda <= {rep.outputs['lambda_max']}, rho <= {rep.outputs['rho_max']}, n1 <= {n1}, n2 <= {sci(b2)}")
    if done("cycles"):
        return report

    l1_hi = ell1_bound(n1)
    p_n1 = n1 if cfg.p_n1_cap is None else min(n1, cfg.p_n1_cap)
    p_l1 = l1_hi if cfg.p_ell1_max is None else min(l1_hi, cfg.p_ell1_max)
    capped = p_n1 < n1 or p_l1 < l1_hi
    rows, units, rep = search_p_polynomials(p_n1, (cfg.p_ell1_min, p_l1), cfg.factoring_ceiling, capped)
    rep.inputs.update({"derived_n1_max": n1, "derived_ell1_max": l1_hi})
    stages.append(rep)
    if cfg.include_ell1_one:
        # l1 = 1: every target is X_1 of some unit; run Dujella-Petho on a sample of them
        _r1, units1, rep1 = search_p_polynomials(min(p_n1, 40), (1, 1), cfg.factoring_ceiling, True)
        known = {u.d for u in units}
        extra = [u for u in units1 if u.d not in known]
        picks = sample_points(0, len(extra) - 1, cfg.ell1_one_samples) if extra else []
        rep1.stage = "p_search_ell1"
        rep1.outputs["sampled_units"] = [extra[i].d for i in picks]
        stages.append(rep1)
    say(f"p_search: {rep.outputs['rows']} rows, units d = {[u.d for u in units]}")
    if done("p_search"):
        return report

    rep = run_bd_stage(units, b2, cfg, cache)
    stages.append(rep)
    if cfg.include_ell1_one and picks:
        rep1 = run_bd_stage([extra[i] for i in picks], b2, cfg, cache)
        rep1.stage = "bd_ell1"
        rep1.certified = cfg.ell1_one_samples is None
        stages.append(rep1)
        rep.outputs["n2_max"] = max(rep.outputs["n2_max"], rep1.outputs["n2_max"])
    n2 = rep.outputs["n2_max"]
    say(f"bd: n2 <= {n2}, l2 <= {rep.outputs['ell2_max']} (passes {rep.outputs['pass_bounds']})")
    if done("bd"):
        return report

    box = SearchBox(
        max(rep.outputs["ell_box"], cfg.ell_box_floor),
        max(n2, cfg.n2_box_floor),
        max(n2 + 2, cfg.n1_box_floor),
    )
    groups, rep = search_final_box(box, cfg.factoring_ceiling)
    keep = sorted(set(rep.outputs["multi_ell_d"]) | set(rep.outputs["higher_ell_d"]))
    if cfg.stability_widen:
        wide = box.widened(cfg.stability_widen)
        g2, rep2 = search_final_box(wide, cfg.factoring_ceiling)
        new = sorted((set(rep2.outputs["multi_ell_d"]) | set(rep2.outputs["higher_ell_d"])) - set(keep))
        rep.certificates.append({"stability_box": wide.to_json(), "new_groups": new})
        if new:
            rep.certified = False
            rep.notes.append(f"widened box finds new groups {new}")
    stages.append(rep)
    solutions = sorted(set(records5) | {r for d in keep for r in groups[d]})
    report["solutions"] = [r.to_json() for r in solutions]
    report["exceptional_d"] = exceptional_set(solutions)
    report["summary"] = {
        "box": box.to_json(),
        "exceptional_d": report["exceptional_d"],
        "single_solution_d": sorted(d for d in keep if d not in report["exceptional_d"]),
        "certified": all(s.certified for s in stages),
    }
    say(f"final box {box.to_json()}: exceptional d = {report['exceptional_d']}")
    done("final_box")
    return report


@dataclass
class Verdict:
    passed: bool
    checks: List[dict] = field(default_factory=list)

    def add(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks.append({"check": name, "ok": bool(ok), "detail": detail})
        if not ok:
            self.passed = False

    def to_json(self) -> dict:
        return {"passed": self.passed, "checks": self.checks}


def _stage(report: dict, sid: str) -> Optional[dict]:
    for s in report.get("stages", []):
        if s.get("id") == sid:
            return s
    return None


def verify_theorem(report: dict) -> Verdict:
    """Recheck a report's solution list from scratch.

    Every record is re-verified exactly, each d group is regenerated from the
    fundamental unit over the report's box and compared, the set of d with
    two or more values of l must be {2, 3, 5, 11, 30}, and 219 and 14401
    must appear with exactly one l.
    """
    v = Verdict(True)
    try:
        recs = [SolutionRecord.from_json(r) for r in report.get("solutions", [])]
    except (KeyError, ValueError, TypeError) as exc:
        v.add("records_parse", False, str(exc))
        return v
    bad = [r for r in recs if not r.verify()]
    v.add("records_exact", not bad, f"{len(bad)} records fail F_m + F_n = X_l" if bad else f"{len(recs)} records")
    wide = [r for r in recs if len(zeckendorf_encode(r.value)) > 2]
    v.add("zeckendorf_at_most_two", not wide, f"{len(wide)} values need three or more terms")

    box = _stage(report, "final_box")
    ell_max = int(box["inputs"]["box"]["ell_max"]) if box else 25
    by_d: Dict[int, set] = {}
    for r in recs:
        by_d.setdefault(r.d, set()).add(r)
    mismatched = []
    for d, got in sorted(by_d.items()):
        try:
            sol = fundamental_solution(d)
        except (PerfectSquare, ValueError):
            mismatched.append(d)
            continue
        if d == 5:
            from .d5 import d5_analysis

            want = set(d5_analysis(60)[0])
        else:
            want = set(records_for_unit(sol, ell_max))
        if got != want:
            mismatched.append(d)
    v.add("groups_regenerate", not mismatched, f"groups differing from regeneration: {mismatched}")

    exc = exceptional_set(recs)
    v.add("exceptional_set", tuple(exc) == EXPECTED_EXCEPTIONS, f"found {exc}")
    v.add("exceptional_field", list(report.get("exceptional_d", [])) == exc, "report field matches the records")
    for d in EXPECTED_SINGLES:
        ells = {r.ell for r in recs if r.d == d}
        v.add(f"single_{d}", len(ells) == 1, f"l values {sorted(ells)}")
    strict = {r.d for r in recs if r.gap_class == STRICT}
    v.add("strict_present", set(EXPECTED_EXCEPTIONS) - {5} <= strict, "every exceptional d other than 5 has strict records")

    # bounds on n2 never grow from one stage to the next
    seq = []
    for s in report.get("stages", []):
        out = s.get("outputs", {})
        for key in ("bound_n2", "n2_max"):
            if key in out and s.get("id") != "bd_ell1":
                seq.append(int(out[key]))
    v.add("monotone_n2", all(a >= b for a, b in zip(seq, seq[1:])), f"n2 bounds {seq}")
    return v
