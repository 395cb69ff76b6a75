"""Plain data carried between pipeline stages and into the report."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from ..pell import p_poly_eval
from ..sequences import STRICT, fib


def _int_str(x):
    # report integers as decimal strings so nothing is lost in JSON
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, int):
        return str(x)
    if isinstance(x, dict):
        return {k: _int_str(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_int_str(v) for v in x]
    return x


@dataclass(frozen=True, order=True)
class SolutionRecord:
    """F_m + F_n = X_ell(d) for the Pell equation x**2 - d y**2 = epsilon."""

    d: int
    epsilon: int
    ell: int
    m: int
    n: int
    value: int
    gap_class: str = STRICT
    X1: int = 0

    def __post_init__(self):
        if self.ell < 1 or self.m < 0 or self.n < self.m:
            raise ValueError("need ell >= 1 and 0 <= m <= n")
        if self.gap_class == STRICT and self.n - self.m < 2:
            raise ValueError("strict records need n - m >= 2")

    def verify(self) -> bool:
        if fib(self.m) + fib(self.n) != self.value:
            return False
        if self.X1:
            if self.X1 * self.X1 - self.epsilon <= 0:
                return False
            # X_ell = P_ell(X1), and x**2 - epsilon must carry the squarefree d
            if (self.X1 * self.X1 - self.epsilon) % self.d:
                return False
            return p_poly_eval(self.ell, self.epsilon, self.X1) == self.value
        return True

    def to_json(self) -> dict:
        return {
            "d": str(self.d),
            "epsilon": self.epsilon,
            "ell": self.ell,
            "m": self.m,
            "n": self.n,
            "value": str(self.value),
            "gap_class": self.gap_class,
            "X1": str(self.X1),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SolutionRecord":
        return cls(
            int(obj["d"]),
            int(obj["epsilon"]),
            int(obj["ell"]),
            int(obj["m"]),
            int(obj["n"]),
            int(obj["value"]),
            obj.get("gap_class", STRICT),
            int(obj.get("X1", 0)),
        )


@dataclass
class StageReport:
    stage: str
    inputs: Dict[str, Any] = field(default_factory=dict)
    outputs: Dict[str, Any] = field(default_factory=dict)
    certificates: List[Any] = field(default_factory=list)
    wall_time: float = 0.0
    precision_high_water: int = 0
    certified: bool = True
    notes: List[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "id": self.stage,
            "inputs": _int_str(self.inputs),
            "outputs": _int_str(self.outputs),
            "certificates": _int_str(self.certificates),
            "wall_time": round(self.wall_time, 3),
            "precision_high_water": self.precision_high_water,
            "certified": self.certified,
            "notes": list(self.notes),
        }


@dataclass(frozen=True)
class SearchBox:
    """1 <= ell1 < ell2 <= ell_max, n2 <= n2_max, n1 <= n1_max."""

    ell_max: int
    n2_max: int
    n1_max: int
    strict: bool = True

    def __post_init__(self):
        if self.ell_max < 2 or self.n2_max < 2 or self.n1_max < 2:
            raise ValueError("box too small")

    @property
    def n_max(self) -> int:
        return max(self.n1_max, self.n2_max)

    def widened(self, k: int) -> "SearchBox":
        return SearchBox(self.ell_max + k, self.n2_max + k, self.n1_max + k, self.strict)

    def to_json(self) -> dict:
        return {"ell_max": self.ell_max, "n2_max": self.n2_max, "n1_max": self.n1_max}


@dataclass(frozen=True)
class PRow:
    """One hit of P_ell(X1) = F_m + F_n."""

    n: int
    m: int
    ell: int
    X1: int
    epsilon: int
    d: Optional[int] = None
    Y1: Optional[int] = None
    fundamental_X1: Optional[int] = None
    power: Optional[int] = None
    degenerate: bool = False

    def to_json(self) -> dict:
        return _int_str(
            {
                "n": self.n,
                "m": self.m,
                "ell": self.ell,
                "X1": self.X1,
                "epsilon": self.epsilon,
                "d": self.d,
                "Y1": self.Y1,
                "fundamental_X1": self.fundamental_X1,
                "power": self.power,
                "degenerate": self.degenerate,
            }
        )
