"""Norms of elementary operators x -> sum_j a_j x b_j on matrix algebras."""

from ._elemnorm import (
    Certificate,
    ElementaryOperator,
    ElemnormError,
    GrowthRow,
    GrowthTable,
    NormReport,
    cb_norm,
    equality_gap,
    first_row_transpose_operator,
    functional_norm,
    growth_check,
    haagerup_upper_bound,
    knorm,
    linearly_independent,
    norm_s1,
    norm_tgm,
    oracle_norm_unitary,
    random_operator,
    s1_vector_norm,
    sharp_mean,
    tgm,
    transpose_operator,
)

__all__ = [
    "Certificate",
    "ElementaryOperator",
    "ElemnormError",
    "GrowthRow",
    "GrowthTable",
    "NormReport",
    "cb_norm",
    "equality_gap",
    "first_row_transpose_operator",
    "functional_norm",
    "growth_check",
    "haagerup_upper_bound",
    "knorm",
    "linearly_independent",
    "norm_s1",
    "norm_tgm",
    "oracle_norm_unitary",
    "random_operator",
    "s1_vector_norm",
    "sharp_mean",
    "tgm",
    "transpose_operator",
]
