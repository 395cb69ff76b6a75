"""The d = 5 case, where X = L_n / 2 with 3 | n."""

from __future__ import annotations

import time
from typing import List, Tuple

from ..sequences import RELAXED, STRICT, fib, lucas, lucas_half_identity_check, two_term_reps, zeckendorf_encode
from .records import SolutionRecord, StageReport


def _records_for(value: int, ell: int) -> List[SolutionRecord]:
    out = []
    for policy in (STRICT, RELAXED):
        for rep in two_term_reps(value, policy):
            out.append(SolutionRecord(5, -1, ell, rep.m, rep.n, value, policy, 2))
    return out


def d5_analysis(bound: int = 300) -> Tuple[List[SolutionRecord], StageReport]:
    """Records for d = 5 and the certificate that X_ell fails for n >= 10.

    X_ell(5) = L_{3 ell}/2 = F_n + F_{n-3}/2 with n = 3 ell, and for n >= 10
    F_{n-5} < F_{n-3}/2 < F_{n-4} rules out a second Fibonacci term; this is
    checked exactly for every n up to ``bound``.
    """
    t0 = time.perf_counter()
    identity_ok = all(lucas_half_identity_check(n) == 0 for n in range(3, bound + 1, 3))
    between = [n for n in range(10, bound + 1) if not (2 * fib(n - 5) < fib(n - 3) < 2 * fib(n - 4))]
    records: List[SolutionRecord] = []
    small = {}
    for n in (3, 6, 9):
        value = lucas(n) // 2
        recs = _records_for(value, n // 3)
        small[n] = {"value": value, "representations": len(recs)}
        records.extend(recs)
    z38 = zeckendorf_encode(38)
    report = StageReport(
        "d5",
        inputs={"bound": bound},
        outputs={
            "values": {str(n): v for n, v in small.items()},
            "ells": sorted({r.ell for r in records}),
        },
        certificates=[
            {"lucas_half_identity": identity_ok, "checked_multiples_of_3_upto": bound},
            {"fibonacci_gap_exclusion_from": 10, "upto": bound, "failures": between},
            {"zeckendorf_38": list(z38.indices), "terms": len(z38)},
        ],
        certified=identity_ok and not between,
    )
    report.wall_time = time.perf_counter() - t0
    return records, report
