"""Run profiles and configuration loading."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, replace
from typing import List, Optional

from ..factoring import DEFAULT_CEILING
from ..linforms import PAPER_COMPAT, RIGOROUS


@dataclass(frozen=True)
class Config:
    """Knobs for one proof run.

    ``gamma4_samples``/``gamma5_lambda_samples``/``gamma5_chi_samples`` and
    ``equal_branch_samples`` pick evenly spaced sweep points; None means the
    whole range (stride 1), which is what certification needs.
    ``p_n1_cap``/``p_ell1_max`` cap the P-polynomial search below the derived
    bounds; a capped run is reported as not certified. The ``*_box_floor``
    values only ever enlarge the final search box.
    """

    profile: str = "ci"
    mode: str = RIGOROUS
    n0: int = 10**6
    cycles: int = 3
    gamma4_samples: Optional[int] = 5
    gamma5_lambda_samples: Optional[int] = 2
    gamma5_chi_samples: Optional[int] = 2
    equal_branch_samples: Optional[int] = 40
    extra_equal_lambdas: List[int] = field(default_factory=lambda: [312])
    p_n1_cap: Optional[int] = 100
    p_ell1_min: int = 2
    p_ell1_max: Optional[int] = 60
    include_ell1_one: bool = False
    ell_box_floor: int = 25
    n2_box_floor: int = 42
    n1_box_floor: int = 44
    ell1_one_samples: Optional[int] = 20
    stability_widen: int = 5
    max_precision_bits: int = 1 << 20
    factoring_ceiling: int = DEFAULT_CEILING
    workers: int = 1
    cache_dir: Optional[str] = None

    def __post_init__(self):
        if self.mode not in (RIGOROUS, PAPER_COMPAT):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.cycles < 1:
            raise ValueError("at least one reduction cycle is needed")
        if self.p_ell1_min < 1:
            raise ValueError("ell1 starts at 1")

    @property
    def paper_compat(self) -> bool:
        return self.mode == PAPER_COMPAT

    @property
    def full_sweeps(self) -> bool:
        return all(
            s is None
            for s in (
                self.gamma4_samples,
                self.gamma5_lambda_samples,
                self.gamma5_chi_samples,
                self.equal_branch_samples,
            )
        )

    def to_json(self) -> dict:
        out = asdict(self)
        out["n0"] = str(self.n0)
        out["factoring_ceiling"] = str(self.factoring_ceiling)
        return out


PROFILES = {
    "ci": Config(),
    "full": Config(
        profile="full",
        gamma4_samples=None,
        gamma5_lambda_samples=None,
        gamma5_chi_samples=None,
        equal_branch_samples=None,
        extra_equal_lambdas=[],
        p_n1_cap=None,
        p_ell1_max=None,
        ell1_one_samples=None,
    ),
}


def make_config(profile: str = "ci", paper_compat: bool = False, **overrides) -> Config:
    if profile not in PROFILES:
        raise ValueError(f"unknown profile {profile!r}; choose from {sorted(PROFILES)}")
    cfg = PROFILES[profile]
    if paper_compat:
        cfg = replace(cfg, mode=PAPER_COMPAT)
    overrides = {k: v for k, v in overrides.items() if v is not None}
    return replace(cfg, **overrides) if overrides else cfg


def load_config(path: str, **overrides) -> Config:
    """A JSON file with a ``profile`` key plus any Config field."""
    with open(path) as fh:
        data = json.load(fh)
    profile = data.pop("profile", "ci")
    compat = data.pop("paper_compat", False)
    for key in ("n0", "factoring_ceiling"):
        if key in data:
            data[key] = int(data[key])
    data.update({k: v for k, v in overrides.items() if v is not None})
    return make_config(profile, compat, **data)


def sample_points(lo: int, hi: int, count: Optional[int]) -> List[int]:
    """Evenly spaced integers in [lo, hi] including both ends; all of them if count is None."""
    if hi < lo:
        return []
    if count is None or hi - lo + 1 <= count:
        return list(range(lo, hi + 1))
    if count < 2:
        return [lo]
    step = (hi - lo) / (count - 1)
    return sorted({lo + round(i * step) for i in range(count)})
