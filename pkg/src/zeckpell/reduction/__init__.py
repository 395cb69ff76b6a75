"""Continued-fraction, Dujella-Petho and lattice reductions of exponent bounds."""

from .cf import (
    ContinuedFraction,
    InsufficientExpansion,
    LegendreBound,
    convergents_of,
    legendre_bound,
    real_cf,
    verify_prefix,
)
from .davenport import (
    NoUsableConvergent,
    ReductionOutcome,
    dujella_petho,
    exponent_bound,
    floor_log_ratio,
    homogeneous_reduce,
)
from .lattice import (
    HypothesisFailed,
    LatticeBound,
    LatticeProblem,
    LLLResult,
    LogRelation,
    SingularBasis,
    eliminate_relation,
    find_log_relation,
    flacotadas_lower_bound,
    lll_reduce,
    round_scaled,
)

__all__ = [
    "ContinuedFraction",
    "HypothesisFailed",
    "InsufficientExpansion",
    "LLLResult",
    "LatticeBound",
    "LatticeProblem",
    "LegendreBound",
    "LogRelation",
    "NoUsableConvergent",
    "ReductionOutcome",
    "SingularBasis",
    "convergents_of",
    "dujella_petho",
    "eliminate_relation",
    "exponent_bound",
    "find_log_relation",
    "flacotadas_lower_bound",
    "floor_log_ratio",
    "homogeneous_reduce",
    "legendre_bound",
    "lll_reduce",
    "real_cf",
    "round_scaled",
    "verify_prefix",
]
