"""Numerical Hardy-space toolkit: the Lambda functional and frak-N norm, Hadamard
multipliers with Cesaro/Abel machinery, and finite sections of Toeplitz operators."""

__version__ = "0.1.0"

from .core_fn import (
    AnalyticPoly,
    BoundaryGrid,
    DiskPoint,
    boundary_samples,
    cauchy_transform,
    eval_poly,
    poisson_extension,
    poisson_kernel,
    random_poly,
    smirnov_check,
)
from .multipliers import (
    Family,
    MultiplierSeq,
    abel_decompose,
    alpha_norm,
    build_family,
    cesaro_mean,
    hadamard,
    is_concave_paper,
    is_decreasing,
    lemma1_check,
    partial_sum,
    sum_log_check,
    theorem2_check,
    theorem4_propagate,
)
from .norms import (
    NormEstimate,
    NormParams,
    difference_quotient,
    frakn_norm,
    hinf_norm,
    hp_norm,
    lambda_functional,
)
from .toeplitz import (
    NormCertificate,
    Space,
    ToeplitzTruncation,
    apply,
    build_truncation,
    certify,
    h2_spectral_norm,
    lower_bound_norm,
    quadrature_apply,
)
