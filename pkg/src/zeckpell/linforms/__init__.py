"""Heights, Matveev's bound, the forms G1..G5 and the absolute bound chain."""

from .chain import (
    PAPER_COMPAT,
    PAPER_CONSTANTS,
    RIGOROUS,
    ChainStep,
    Stage1Chain,
    round_down_sig,
    round_up_sig,
    sci,
    solve_log_poly_bound,
    stage1_bound_chain,
)
from .gamma import GammaForm, gamma1, gamma2, gamma3, gamma4, gamma5, gamma_eval
from .matveev import (
    C1,
    AlgebraicDescriptor,
    HypothesisViolation,
    MatveevInstance,
    check_hypotheses,
    height_bound,
    matveev_lower_bound,
    matveev_prefactor,
)

__all__ = [
    "C1",
    "PAPER_COMPAT",
    "PAPER_CONSTANTS",
    "RIGOROUS",
    "AlgebraicDescriptor",
    "ChainStep",
    "GammaForm",
    "HypothesisViolation",
    "MatveevInstance",
    "Stage1Chain",
    "check_hypotheses",
    "gamma1",
    "gamma2",
    "gamma3",
    "gamma4",
    "gamma5",
    "gamma_eval",
    "height_bound",
    "matveev_lower_bound",
    "matveev_prefactor",
    "round_down_sig",
    "round_up_sig",
    "sci",
    "solve_log_poly_bound",
    "stage1_bound_chain",
]
