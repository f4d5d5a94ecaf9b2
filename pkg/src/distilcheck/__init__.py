"""distilcheck: numerics for two-copy distillability of the boundary Werner state.

The package constructs the distillability projectors Q_n for the C^4 (x) C^4
boundary Werner state, maximizes their overlap with Schmidt-rank-k states,
certifies the <= 1/2 overlap ("half-property") for structured state classes,
and reproduces the closed-form and numerical bounds with independent oracles.
"""

__version__ = "0.1.0"

from .matrix_iso import ABPair, QSubspaceVector, appendix_max, is_normal_projection
from .measures import IsotropicTwoPairState, twirl, twirl_pure
from .optimize import OptimizationReport, RankKState, SeesawConfig, max_overlap_rank_k, overlap
from .projectors import (
    QnOperator,
    WernerParams,
    build_qn_direct,
    build_qn_recursive,
    qn_gamma_spectrum,
    two_copy_projector,
    werner_density,
)
from .tensor import (
    Cut,
    PureState,
    SchmidtDecomposition,
    partial_trace,
    partial_transpose,
    schmidt,
    standard_ops,
    tensor_product,
)

__all__ = [
    "ABPair",
    "Cut",
    "IsotropicTwoPairState",
    "OptimizationReport",
    "PureState",
    "QSubspaceVector",
    "QnOperator",
    "RankKState",
    "SchmidtDecomposition",
    "SeesawConfig",
    "WernerParams",
    "appendix_max",
    "build_qn_direct",
    "build_qn_recursive",
    "is_normal_projection",
    "max_overlap_rank_k",
    "overlap",
    "partial_trace",
    "partial_transpose",
    "qn_gamma_spectrum",
    "schmidt",
    "standard_ops",
    "tensor_product",
    "twirl",
    "twirl_pure",
    "two_copy_projector",
    "werner_density",
    "__version__",
]
