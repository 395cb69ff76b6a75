"""Stage orchestration, searches, report assembly and the final check."""

from .bd import dp_pass, ell2_bound, run_bd_stage
from .cache import CFCache
from .config import PROFILES, Config, load_config, make_config, sample_points
from .cycle import coefficient_bound, run_reduction_cycle, run_stage1, tau_equal
from .d5 import d5_analysis
from .records import PRow, SearchBox, SolutionRecord, StageReport
from .report import read_json, write_figures, write_json, write_tables
from .search import box_units, ell1_bound, records_for_unit, search_final_box, search_p_polynomials
from .theorem import EXPECTED_EXCEPTIONS, STAGE_IDS, Verdict, exceptional_set, run_all, verify_theorem

__all__ = [
    "CFCache",
    "Config",
    "EXPECTED_EXCEPTIONS",
    "PRow",
    "PROFILES",
    "STAGE_IDS",
    "SearchBox",
    "SolutionRecord",
    "StageReport",
    "Verdict",
    "box_units",
    "coefficient_bound",
    "d5_analysis",
    "dp_pass",
    "ell1_bound",
    "ell2_bound",
    "exceptional_set",
    "load_config",
    "make_config",
    "read_json",
    "records_for_unit",
    "run_all",
    "run_bd_stage",
    "run_reduction_cycle",
    "run_stage1",
    "sample_points",
    "search_final_box",
    "search_p_polynomials",
    "tau_equal",
    "verify_theorem",
    "write_figures",
    "write_json",
    "write_tables",
]
