import copy
import json
import os

import pytest

from zeckpell.linforms import RIGOROUS
from zeckpell.pell import fundamental_solution
from zeckpell.pipeline import (
    CFCache,
    Config,
    SearchBox,
    SolutionRecord,
    coefficient_bound,
    d5_analysis,
    ell1_bound,
    exceptional_set,
    load_config,
    make_config,
    read_json,
    records_for_unit,
    run_all,
    sample_points,
    search_final_box,
    search_p_polynomials,
    verify_theorem,
    write_figures,
    write_json,
    write_tables,
)
from zeckpell.pipeline.cache import expr_key
from zeckpell.realnum import ALPHA, Comparison, compare_certified, evaluate, log, sqrt
from zeckpell.sequences import RELAXED, STRICT

# (d, ell, value) of every record, strict and relaxed
EXPECTED = {
    (2, 1, 1), (2, 2, 3), (2, 3, 7),
    (3, 1, 2), (3, 2, 7), (3, 3, 26), (3, 4, 97),
    (5, 1, 2), (5, 2, 9),
    (11, 1, 10), (11, 2, 199),
    (30, 1, 11), (30, 2, 241),
    (219, 2, 10951),
    (14401, 2, 28801),
}  # fmt: skip

P_ROWS = {
    # (n, m, ell, X1, epsilon)
    (5, 3, 2, 2, 1), (8, 5, 3, 2, 1), (11, 6, 2, 7, 1), (11, 6, 4, 2, 1),
    (12, 10, 2, 10, 1), (13, 6, 2, 11, 1), (21, 5, 2, 74, 1),
    (3, 1, 2, 1, -1), (4, 0, 2, 1, -1), (5, 3, 3, 1, -1), (23, 12, 2, 120, -1),
}  # fmt: skip


def test_solution_record_checks():
    r = SolutionRecord(3, 1, 2, 3, 5, 7, STRICT, 2)
    assert r.verify()
    assert SolutionRecord.from_json(r.to_json()) == r
    assert not SolutionRecord(3, 1, 2, 3, 5, 8, STRICT, 2).verify()
    assert not SolutionRecord(7, 1, 2, 3, 5, 7, STRICT, 2).verify()
    with pytest.raises(ValueError):
        SolutionRecord(3, 1, 2, 4, 5, 8, STRICT, 2)
    assert SolutionRecord(3, 1, 3, 7, 7, 26, RELAXED, 2).verify()


def test_search_box():
    b = SearchBox(25, 42, 44)
    assert b.n_max == 44
    assert b.widened(5) == SearchBox(30, 47, 49)
    with pytest.raises(ValueError):
        SearchBox(1, 42, 44)


def test_d5_analysis():
    recs, rep = d5_analysis()
    assert {(r.ell, r.value) for r in recs} == {(1, 2), (2, 9)}
    assert {(r.m, r.n) for r in recs if r.ell == 2} == {(2, 6)}
    assert all(r.verify() for r in recs)
    assert rep.certified
    assert rep.certificates[2] == {"zeckendorf_38": [2, 4, 9], "terms": 3}
    assert rep.certificates[1]["failures"] == []


def test_p_search_rows():
    rows, units, rep = search_p_polynomials(100, (2, 60), capped=True)
    main = [r for r in rows if not r.degenerate]
    assert {(r.n, r.m, r.ell, r.X1, r.epsilon) for r in main} == P_ROWS
    assert [u.d for u in units] == [3, 11, 30, 219, 2, 14401]
    assert rep.outputs["degenerate_rows"] == 59
    assert rep.outputs["d5_rows_excluded"] == 2
    # X1 = 7 for d = 12 is X_2 of the d = 3 unit
    row = next(r for r in main if r.X1 == 7)
    assert (row.d, row.fundamental_X1, row.power) == (3, 2, 2)
    assert not rep.certified


def test_ell1_bound():
    # delta >= 1 + sqrt 2 and delta**l1 <= alpha**(n1 + 1)(1 + alpha**-2)
    assert ell1_bound(100) == 55
    assert ell1_bound(1) == 1


def test_records_for_unit():
    recs = records_for_unit(fundamental_solution(3), 6)
    assert {(r.ell, r.value) for r in recs} == {(1, 2), (2, 7), (3, 26), (4, 97)}


def test_final_box_small():
    groups, rep = search_final_box(SearchBox(25, 42, 44))
    got = {(d, r.ell, r.value) for d in rep.outputs["higher_ell_d"] for r in groups[d]}
    assert got == {t for t in EXPECTED if t[0] != 5}
    assert rep.outputs["multi_ell_d"] == [2, 3, 11, 30]


def test_ci_report_verdict(ci_report):
    v = verify_theorem(ci_report)
    assert v.passed, v.checks
    assert ci_report["exceptional_d"] == [2, 3, 5, 11, 30]
    assert {(int(r["d"]), r["ell"], int(r["value"])) for r in ci_report["solutions"]} == EXPECTED


def test_ci_report_stages(ci_report):
    ids = [s["id"] for s in ci_report["stages"]]
    assert ids == ["d5", "stage1", "cycle1", "cycle2", "cycle3", "p_search", "bd", "final_box"]
    cyc = {s["id"]: s["outputs"] for s in ci_report["stages"]}
    assert cyc["cycle1"]["lambda_max"] == "1473"
    assert cyc["cycle2"]["lambda_max"] == "415"
    bd = cyc["bd"]
    assert int(bd["n2_max"]) <= 42 and int(bd["ell2_max"]) <= 25
    # sampled sweeps are never reported as certified
    assert not ci_report["summary"]["certified"]


def test_box_stability(ci_report):
    final = next(s for s in ci_report["stages"] if s["id"] == "final_box")
    stab = [c for c in final["certificates"] if "stability_box" in c]
    assert stab and stab[0]["new_groups"] == []
    assert final["certified"]


def _alpha_exponent_gap(rec):
    sol = fundamental_solution(rec.d)
    return rec.n - rec.ell * log(sol.delta_expr) / log(ALPHA)


def test_emitted_solutions_satisfy_size_relations(ci_report):
    recs = [SolutionRecord.from_json(r) for r in ci_report["solutions"]]
    for r in recs:
        sol = fundamental_solution(r.d)
        # delta**l / alpha**2 <= X_l < delta**l
        assert compare_certified(r.value, sol.delta_expr**r.ell) is Comparison.LESS
        assert compare_certified(r.value, sol.delta_expr**r.ell / ALPHA**2) is not Comparison.LESS
        if r.n >= 3 and r.gap_class == STRICT:
            iv = evaluate(_alpha_exponent_gap(r), 64)
            assert abs(iv).upper <= 2
            assert r.ell < r.n


def _drop(report, pred):
    rep = copy.deepcopy(report)
    rep["solutions"] = [r for r in rep["solutions"] if not pred(r)]
    return rep


def test_verify_rejects_tampering(ci_report):
    failed = lambda v: {c["check"] for c in v.checks if not c["ok"]}  # noqa: E731
    v = verify_theorem(_drop(ci_report, lambda r: r["d"] == "3"))
    assert not v.passed and "exceptional_set" in failed(v)
    # losing one record of a group is caught by regeneration
    v = verify_theorem(_drop(ci_report, lambda r: r["d"] == "3" and r["ell"] == 4))
    assert not v.passed and failed(v) == {"groups_regenerate"}
    # losing a whole single-l group is caught by the named singles
    v = verify_theorem(_drop(ci_report, lambda r: r["d"] == "14401"))
    assert failed(v) == {"single_14401"}
    rep = copy.deepcopy(ci_report)
    # fabricated d = 7 pair: X_1 = 8 and X_2 = 127, neither a sum of two Fibonacci numbers
    rep["solutions"] += [
        SolutionRecord(7, 1, 1, 2, 6, 8, STRICT, 8).to_json(),
        SolutionRecord(7, 1, 2, 5, 11, 127, STRICT, 8).to_json(),
    ]
    v = verify_theorem(rep)
    assert not v.passed and {"records_exact", "exceptional_set"} <= failed(v)
    rep = copy.deepcopy(ci_report)
    rep["exceptional_d"] = [2, 3, 11, 30]
    assert "exceptional_field" in failed(verify_theorem(rep))
    rep = copy.deepcopy(ci_report)
    rep["solutions"][0]["d"] = "oops"
    assert not verify_theorem(rep).passed


def test_exceptional_set():
    recs = [SolutionRecord(3, 1, 2, 3, 5, 7, STRICT, 2), SolutionRecord(3, 1, 3, 5, 8, 26, STRICT, 2)]
    assert exceptional_set(recs) == [3]
    assert exceptional_set(recs[:1]) == []


def test_report_files(ci_report, tmp_path):
    p = tmp_path / "report.json"
    write_json(ci_report, str(p))
    back = read_json(str(p))
    assert back["exceptional_d"] == ci_report["exceptional_d"]
    assert verify_theorem(back).passed
    tables = write_tables(back, str(tmp_path))
    sol = (tmp_path / "solutions.tsv").read_text().splitlines()
    assert sol[0].split("\t")[:3] == ["d", "epsilon", "ell"]
    assert len(sol) == 1 + len(back["solutions"])
    assert len(tables) == 2
    figs = write_figures(back, str(tmp_path / "figures"))
    assert {os.path.basename(f) for f in figs} == {
        "n2_bounds.png",
        "gamma4_bounds.png",
        "equal_branch_quotients.png",
        "dp_bounds.png",
    }
    for f in figs:
        with open(f, "rb") as fh:
            assert fh.read(8) == b"\x89PNG\r\n\x1a\n"


def test_cache_round_trip_and_corruption(tmp_path):
    tau = log(sqrt(5) / 2) / log(ALPHA)
    c1 = CFCache(str(tmp_path))
    cf = c1.expansion(tau, q_exceeds=10**40)
    assert c1.misses == 1
    c2 = CFCache(str(tmp_path))
    again = c2.expansion(tau, q_exceeds=10**40)
    assert c2.hits == 1 and again.partial_quotients == cf.partial_quotients
    # flip one quotient and fix up nothing else: checksum rejects it
    path = tmp_path / (expr_key(tau) + ".json")
    data = json.loads(path.read_text())
    data["partial_quotients"][5] = str(int(data["partial_quotients"][5]) + 1)
    path.write_text(json.dumps(data))
    c3 = CFCache(str(tmp_path))
    fresh = c3.expansion(tau, q_exceeds=10**40)
    assert c3.rejected == 1 and fresh.partial_quotients == cf.partial_quotients
    # a consistent checksum over wrong quotients is caught by re-certification
    from zeckpell.pipeline.cache import _checksum

    data = json.loads(path.read_text())
    data["partial_quotients"][5] = str(int(data["partial_quotients"][5]) + 1)
    data["checksum"] = _checksum(data["source"], [int(a) for a in data["partial_quotients"]])
    path.write_text(json.dumps(data))
    c4 = CFCache(str(tmp_path))
    assert c4.expansion(tau, q_exceeds=10**40).partial_quotients == cf.partial_quotients
    assert c4.rejected == 1
    path.write_text("{not json")
    c5 = CFCache(str(tmp_path))
    c5.expansion(tau, count=10)
    assert c5.rejected == 1


def test_config(tmp_path):
    cfg = make_config("ci")
    assert cfg.mode == RIGOROUS and not cfg.full_sweeps
    assert make_config("full").full_sweeps
    assert make_config("ci", paper_compat=True).paper_compat
    assert make_config("ci", workers=None).workers == 1
    with pytest.raises(ValueError):
        make_config("huge")
    with pytest.raises(ValueError):
        Config(mode="loose")
    with pytest.raises(ValueError):
        Config(cycles=0)
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps({"profile": "ci", "paper_compat": True, "cycles": 2, "n0": "1000000"}))
    cfg = load_config(str(p))
    assert cfg.cycles == 2 and cfg.paper_compat and cfg.n0 == 10**6
    assert json.loads(json.dumps(cfg.to_json()))["cycles"] == 2


def test_sample_points():
    assert sample_points(2, 6, None) == [2, 3, 4, 5, 6]
    pts = sample_points(2, 1455, 5)
    assert pts[0] == 2 and pts[-1] == 1455 and len(pts) == 5
    assert sample_points(5, 4, 3) == []
    assert sample_points(2, 100, 1) == [2]


def test_coefficient_bound():
    assert coefficient_bound(21 * 10**149, "paper-compat") == 72 * 10**149
    assert coefficient_bound(21 * 10**149, RIGOROUS) >= 7161 * 10**146


def test_stop_after():
    rep = run_all(make_config("ci"), stop_after="stage1")
    assert [s["id"] for s in rep["stages"]] == ["d5", "stage1"]
    with pytest.raises(ValueError):
        run_all(make_config("ci"), stop_after="nope")


def test_compat_cycles(compat_report):
    out = {s["id"]: s["outputs"] for s in compat_report["stages"]}
    assert out["cycle1"]["lambda_max"] == "1455"
    assert out["cycle2"]["lambda_max"] == "414"
    assert int(out["cycle1"]["bound_n2"]) <= 45 * 10**40
    assert verify_theorem(compat_report).passed
