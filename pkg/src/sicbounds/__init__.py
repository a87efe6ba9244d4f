"""Bounds on the symmetric rate of secure broadcast with side information.

n independent uniform messages are encoded into one public broadcast.
Each party wants some messages, already holds others, and may be
forbidden from learning anything about a prohibited set.  The package
computes a chain of upper bounds on the best symmetric rate (largest
acyclic set, its partition-sharpened refinement, a chain bound over
message sequences, and a set-function LP solved in exact rational
arithmetic), an achievable lower bound from security chains, and an
exhaustive zero-error code search at toy sizes for cross-validation.
"""

from .acyclic import (
    AcyclicWitness,
    h_mais,
    is_acyclic_wrt,
    mais_bound,
    verify_witness,
)
from .bits import format_set, indices_of, iter_bits, iter_subsets, mask_of, popcount
from .chains import SbacResult, chain_height, sbac_bound
from .lognum import LogNum
from .lower import LowerResult, decoding_closure, security_chain_lower
from .lp import (
    SetFunctionSolution,
    SpmResult,
    build_spm_lp,
    lp_text,
    spm_check_tuple,
    spm_symmetric,
)
from .model import (
    MAX_MESSAGES,
    Party,
    ProblemError,
    ProblemFormatError,
    ProblemInstance,
    ProblemValidationError,
    Violation,
    derive_interfering,
    parse_problem,
    problem_to_json,
    serialize_problem,
    serialize_problem_json,
    validate,
)
from .oracle import (
    CodeTable,
    CodeVerdict,
    OracleLimitError,
    OracleSearch,
    Rate,
    check_code,
    entropic_g,
    entropic_violations,
    is_feasible_at,
    oracle_best_rate,
)
from .partition import GPartition, g_partition
from .report import BoundReport, compute_bounds, report_json, report_to_dict
from .smais import SMaisResult, smais_bound
from .values import DEGENERATE_ZERO, INFINITE, BoundValue, Marker, format_value

__version__ = "0.1.0"

__all__ = [
    "AcyclicWitness",
    "BoundReport",
    "BoundValue",
    "CodeTable",
    "CodeVerdict",
    "DEGENERATE_ZERO",
    "GPartition",
    "INFINITE",
    "LogNum",
    "LowerResult",
    "MAX_MESSAGES",
    "Marker",
    "OracleLimitError",
    "OracleSearch",
    "Party",
    "ProblemError",
    "ProblemFormatError",
    "ProblemInstance",
    "ProblemValidationError",
    "Rate",
    "SMaisResult",
    "SbacResult",
    "SetFunctionSolution",
    "SpmResult",
    "Violation",
    "build_spm_lp",
    "chain_height",
    "check_code",
    "compute_bounds",
    "decoding_closure",
    "derive_interfering",
    "entropic_g",
    "entropic_violations",
    "format_set",
    "format_value",
    "g_partition",
    "h_mais",
    "indices_of",
    "is_acyclic_wrt",
    "is_feasible_at",
    "iter_bits",
    "iter_subsets",
    "lp_text",
    "mais_bound",
    "mask_of",
    "oracle_best_rate",
    "parse_problem",
    "popcount",
    "problem_to_json",
    "report_json",
    "report_to_dict",
    "sbac_bound",
    "security_chain_lower",
    "serialize_problem",
    "serialize_problem_json",
    "smais_bound",
    "spm_check_tuple",
    "spm_symmetric",
    "validate",
    "verify_witness",
]
