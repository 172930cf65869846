"""sinklab: a matrix-scaling laboratory.

Sinkhorn alternate scaling with full diagnostics, exact closed-form limits
for the two-value symmetric 3x3 classes and the two-block MBN family,
polynomial root solving for the one class without a radical closed form,
equivalence classification with limit pushforward, and exact-rational
termination and approximation experiments.
"""

from .a7 import (
    A7Solution,
    Polynomial,
    a7_back_substitute,
    a7_limit,
    a7_octic,
    descartes_positive_count,
    groebner_residuals_k2,
    positive_roots,
)
from .classify import ClassLabel, TwoValueProfile, classify, limit_of, two_value_profile
from .closed_forms import (
    CANONICAL_LABELS,
    CanonicalLimit,
    MbnLimit,
    MbnParams,
    canonical_asymptote,
    canonical_limit,
    canonical_matrix,
    mbn_asymptote,
    mbn_limit,
    mbn_limit_matrix,
    mbn_matrix,
)
from .engine import (
    SinkhornOptions,
    SinkhornResult,
    col_normalize,
    row_normalize,
    sinkhorn,
    symmetric_scaling,
    target_sinkhorn,
)
from .errors import (
    ClassificationError,
    InputError,
    NumericError,
    ResourceLimitError,
    SinklabError,
)
from .matrix import (
    DiagScaling,
    Permutation,
    PositiveMatrix,
    apply_scaling,
    col_sums,
    conjugate,
    is_doubly_stochastic,
    permute_dilate,
    row_sums,
)
from .rational import (
    A2RationalLimit,
    RationalMatrix,
    TerminationReport,
    a2_rational_limit,
    cube_root_convergents,
    exact_scaling_trace,
    parse_rational,
    triangular_parameter,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # matrix
    "PositiveMatrix",
    "DiagScaling",
    "Permutation",
    "row_sums",
    "col_sums",
    "is_doubly_stochastic",
    "apply_scaling",
    "permute_dilate",
    "conjugate",
    # engine
    "SinkhornOptions",
    "SinkhornResult",
    "sinkhorn",
    "target_sinkhorn",
    "symmetric_scaling",
    "row_normalize",
    "col_normalize",
    # closed forms
    "MbnParams",
    "MbnLimit",
    "CanonicalLimit",
    "CANONICAL_LABELS",
    "mbn_limit",
    "mbn_matrix",
    "mbn_limit_matrix",
    "mbn_asymptote",
    "canonical_matrix",
    "canonical_limit",
    "canonical_asymptote",
    # a7
    "Polynomial",
    "A7Solution",
    "a7_octic",
    "descartes_positive_count",
    "positive_roots",
    "a7_back_substitute",
    "a7_limit",
    "groebner_residuals_k2",
    # classify
    "TwoValueProfile",
    "ClassLabel",
    "two_value_profile",
    "classify",
    "limit_of",
    # rational
    "RationalMatrix",
    "TerminationReport",
    "A2RationalLimit",
    "parse_rational",
    "exact_scaling_trace",
    "triangular_parameter",
    "a2_rational_limit",
    "cube_root_convergents",
    # errors
    "SinklabError",
    "InputError",
    "NumericError",
    "ClassificationError",
    "ResourceLimitError",
]
