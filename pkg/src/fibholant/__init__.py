"""Polynomial-time Holant evaluation for generalized Fibonacci gates on domains 3 and 4."""

from .engine import (
    Gate,
    SignatureGrid,
    ValidationReport,
    holant_eval,
    merge_cross,
    merge_self,
    validate_grid,
    verify_gate,
)
from .errors import (
    BasisError,
    DocumentError,
    EnumerationCapExceeded,
    GridError,
    HolantError,
    InvalidParams,
    MergeViolation,
    NotFibonacci,
    SignatureError,
    Underdetermined,
)
from .fibonacci_d3 import (
    BasisReport,
    FibParamsD3,
    OrthoTripleD3,
    d3_check_params,
    d3_complete_from_top,
    d3_fit_params,
    d3_generate,
    d3_params_from_basis,
    d3_recover_basis,
    d3_verify_gate,
)
from .fibonacci_d4 import (
    FibParamsD4,
    OrthoQuadD4,
    d4_check_params,
    d4_check_side_relations,
    d4_complete_from_top,
    d4_fit_params,
    d4_generate,
    d4_params_from_basis,
    d4_verify_gate,
)
from .oracle import holant_bruteforce
from .signature import (
    Signature,
    Tolerance,
    count_of_rank,
    entry_count,
    evaluate,
    rank_of_count,
)

__version__ = "0.1.0"
