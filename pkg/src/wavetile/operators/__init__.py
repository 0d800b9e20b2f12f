"""Bilinear operators: paraproducts, BHT, vector-valued wrappers, ranges."""

from .bht import BHTModelSpec, BhtKernelResult, bht_kernel, bht_model
from .leibniz import LeibnizExponents, leibniz_sides
from .paraproducts import (
    AlphaParaproductResult,
    LocalizationSpec,
    ParaproductSpec,
    alpha_paraproduct,
    alpha_symbol_coefficients,
    classical_paraproduct,
    default_alpha_n_max,
    discretized_paraproduct,
    localized_paraproduct,
    shifted_paraproduct,
    telescoping_decomposition,
    tensor_paraproduct,
    trilinear_form,
)
from .ranges import (
    RangeMembership,
    RangeQuery,
    bht_range_membership,
    format_range_query,
    literal_case_member,
    literal_disagreement_levels,
    parse_range_query,
    scalar_range_member,
)
from .vector import vector_valued_apply

__all__ = [
    "AlphaParaproductResult",
    "BHTModelSpec",
    "BhtKernelResult",
    "LeibnizExponents",
    "LocalizationSpec",
    "ParaproductSpec",
    "RangeMembership",
    "RangeQuery",
    "alpha_paraproduct",
    "alpha_symbol_coefficients",
    "bht_kernel",
    "bht_model",
    "bht_range_membership",
    "classical_paraproduct",
    "default_alpha_n_max",
    "discretized_paraproduct",
    "format_range_query",
    "leibniz_sides",
    "literal_case_member",
    "literal_disagreement_levels",
    "localized_paraproduct",
    "parse_range_query",
    "scalar_range_member",
    "shifted_paraproduct",
    "telescoping_decomposition",
    "tensor_paraproduct",
    "trilinear_form",
    "vector_valued_apply",
]
