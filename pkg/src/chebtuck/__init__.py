"""Chebyshev interpolation with randomized Tucker compression, and its
application to low-rank kernel interaction matrices."""

from .chebyshev import ChebGrid, Interval
from .dtensor import IndexSet, full_index_set
from .funapprox import (
    CompressedInterpolant,
    CountedFunction,
    Domain,
    build_full_tensor,
    build_interpolant,
    evaluate,
    evaluate_many,
    load_interpolant,
    sample_error,
    save_interpolant,
)
from .kernels import (
    BoundingBox,
    KernelSpec,
    LowRankKernel,
    SvdKernel,
    dense_kernel_matrix,
    kernel_lowrank,
    max_norm_relative_error,
    recompress,
    symmetric_lowrank,
    trace_relative_error,
)
from .randla import SketchConfig, gaussian_matrix, rrid, theorem1_bound, truncated_svd
from .tucker import (
    TuckerTensor,
    hosvd,
    method1,
    method2,
    method3,
    reconstruct,
    relative_error,
)

__version__ = "0.1.0"
