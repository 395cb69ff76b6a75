"""Report files: JSON, tab-separated tables, and figures."""

from __future__ import annotations

import csv
import json
import os
from typing import Dict, List


def write_json(report: dict, path: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(report, fh, indent=1, sort_keys=False)
        fh.write("\n")


def read_json(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


SOLUTION_FIELDS = ["d", "epsilon", "ell", "m", "n", "value", "gap_class", "X1"]


def solution_rows(report: dict) -> List[Dict[str, str]]:
    return [{k: str(r[k]) for k in SOLUTION_FIELDS} for r in report.get("solutions", [])]


def stage_rows(report: dict) -> List[Dict[str, str]]:
    rows = []
    for s in report.get("stages", []):
        outs = s.get("outputs", {})
        flat = ";".join(f"{k}={v}" for k, v in outs.items() if not isinstance(v, (list, dict)))
        rows.append(
            {
                "stage": s["id"],
                "certified": str(s.get("certified", True)).lower(),
                "wall_time": str(s.get("wall_time", "")),
                "precision_high_water": str(s.get("precision_high_water", 0)),
                "outputs": flat,
            }
        )
    return rows


def write_tsv(rows: List[Dict[str, str]], path: str, fields: List[str]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=fields, delimiter="\t", lineterminator="\n")
        w.writeheader()
        w.writerows(rows)


def write_tables(report: dict, directory: str) -> List[str]:
    os.makedirs(directory, exist_ok=True)
    paths = []
    p = os.path.join(directory, "solutions.tsv")
    write_tsv(solution_rows(report), p, SOLUTION_FIELDS)
    paths.append(p)
    p = os.path.join(directory, "stages.tsv")
    write_tsv(stage_rows(report), p, ["stage", "certified", "wall_time", "precision_high_water", "outputs"])
    paths.append(p)
    return paths


def write_figures(report: dict, directory: str) -> List[str]:
    """PNG figures of the bound trajectory, LLL minima, equal-branch spikes and D-P bounds."""
    import math

    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    os.makedirs(directory, exist_ok=True)
    stages = report.get("stages", [])
    out = []

    # bound on n2 after each stage, log10 scale
    names, vals = [], []
    for s in stages:
        o = s.get("outputs", {})
        for key in ("bound_n2", "n2_max"):
            if key in o:
                names.append(s["id"])
                vals.append(math.log10(int(o[key])))
    if vals:
        fig, ax = plt.subplots(figsize=(6, 3.5))
        ax.plot(range(len(vals)), vals, marker="o")
        ax.set_xticks(range(len(vals)), names, rotation=30, ha="right")
        ax.set_ylabel("log10 bound on n2")
        ax.set_title("Bound on n2 by stage")
        fig.tight_layout()
        p = os.path.join(directory, "n2_bounds.png")
        fig.savefig(p, dpi=110)
        plt.close(fig)
        out.append(p)

    cycles = [s for s in stages if s["id"].startswith("cycle")]
    if cycles:
        fig, ax = plt.subplots(figsize=(6, 3.5))
        for s in cycles:
            g4 = next(c for c in s["certificates"] if c.get("step") == "gamma4")
            ax.plot([int(x) for x in g4["lambdas"]], g4["log10_bounds"], marker=".", label=s["id"])
        ax.set_xlabel("lambda")
        ax.set_ylabel("log10 lattice lower bound")
        ax.set_title("Three-term form: lower bounds over lambda")
        ax.legend()
        fig.tight_layout()
        p = os.path.join(directory, "gamma4_bounds.png")
        fig.savefig(p, dpi=110)
        plt.close(fig)
        out.append(p)

        fig, ax = plt.subplots(figsize=(6, 3.5))
        for s in cycles:
            eq = next(c for c in s["certificates"] if c.get("step") == "equal_branch")
            xs = [int(a) for a, _ in eq["spikes"]]
            ys = [math.log10(int(b)) for _, b in eq["spikes"]]
            ax.plot(xs, ys, marker=".", linestyle="none", label=s["id"])
        ax.set_xlabel("lambda")
        ax.set_ylabel("log10 largest partial quotient")
        ax.set_title("Equal-exponent branch: a(M) over lambda")
        ax.legend()
        fig.tight_layout()
        p = os.path.join(directory, "equal_branch_quotients.png")
        fig.savefig(p, dpi=110)
        plt.close(fig)
        out.append(p)

    bd = next((s for s in stages if s["id"] == "bd"), None)
    if bd:
        fig, ax = plt.subplots(figsize=(8, 3.8))
        for i, ps in enumerate(bd["certificates"]):
            ss = [int(r["s"]) for r in ps["table"]]
            ax.plot(ss, [int(r["h"]) for r in ps["table"]], marker="o", label=f"pass {i + 1}: h_s")
            ax.plot(ss, [int(r["second_max"]) for r in ps["table"]], marker="x", linestyle="--", label=f"pass {i + 1}: n2 bound")
        ax.set_xlabel("unit index s")
        ax.set_ylabel("bound")
        ax.set_yscale("log")
        ax.set_title("Dujella-Petho bounds per unit")
        ax.legend(fontsize=7, loc="center left", bbox_to_anchor=(1.02, 0.5))
        fig.tight_layout()
        p = os.path.join(directory, "dp_bounds.png")
        fig.savefig(p, dpi=110)
        plt.close(fig)
        out.append(p)
    return out
