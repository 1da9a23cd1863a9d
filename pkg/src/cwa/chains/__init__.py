"""Exact integer chain-complex algebra."""

from .complex import (
    ChainComplex,
    ChainHomotopy,
    ChainMap,
    DegreeHomology,
    HomologySummary,
    InvalidComplexError,
    Violation,
    check_complex,
    check_map,
    compose,
    direct_sum,
    euler_characteristic,
    homology,
    homotopy_violation,
    inclusion,
    is_subcomplex,
    mapping_cone,
    quotient_complex,
    restrict,
    validate_complex,
    validate_map,
)
from .matrix import Matrix, block, format_matrix, parse_matrix
from .snf import SmithForm, integer_kernel, rank, smith_decomposition, smith_normal_form

__all__ = [
    "ChainComplex", "ChainHomotopy", "ChainMap", "DegreeHomology", "HomologySummary",
    "InvalidComplexError", "Matrix", "SmithForm", "Violation", "block",
    "check_complex", "check_map", "compose", "direct_sum", "euler_characteristic",
    "format_matrix", "homology", "homotopy_violation", "inclusion", "integer_kernel", "is_subcomplex",
    "mapping_cone", "parse_matrix", "quotient_complex", "rank", "restrict",
    "smith_decomposition", "smith_normal_form", "validate_complex", "validate_map",
]
