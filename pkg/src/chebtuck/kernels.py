"""Low-rank approximation of kernel interaction matrices.

The kernel kappa(x, y) between points in two well-separated boxes is viewed
as a smooth function of 2D variables (D source coordinates, then D target
coordinates) and interpolated on a tensor-product Chebyshev grid.  With
U_j / V_j the per-dimension cardinal-value matrices at the points and M the
grid-value tensor, the interaction matrix factors as

    K(X, Y) ~= F_s M_(1:D) F_t^T,   F_s = U_D |x| ... |x| U_1,

(|x| the row-wise Khatri-Rao product).  Compressing M in the Tucker format
with factors A_k gives the small form F_s -> Uhat_j = U_j A_j and core
Mhat = G_(1:D), of rank ell^D with ell = rank + oversample.  A further QR +
truncated-SVD pass recompresses to an ordinary rank-r SVD form.

The symmetric one-box variant shares factors between the two halves of the
mode list, which keeps the implied matrix symmetric and supports
Gaussian-process style trace diagnostics without ever forming the matrix.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from functools import reduce
from pathlib import Path

import numpy as np

from . import container
from .chebyshev import ChebGrid, Interval, s_matrix, subsample_indices
from .dtensor import (
    IndexSet,
    full_index_set,
    multi_mode_product,
    rowwise_khatri_rao,
    subtensor,
    unfold,
    unfold_first,
)
from .randla import (
    SketchConfig,
    gaussian_matrix,
    generator,
    row_interpolation,
    rrid,
    truncated_svd,
)
from .tucker import hosvd as _hosvd_dense

__all__ = [
    "KernelSpec",
    "KERNEL_NAMES",
    "BoundingBox",
    "diam",
    "dist",
    "is_strongly_admissible",
    "dense_kernel_matrix",
    "KernelGridSource",
    "build_factors",
    "kernel_lowrank",
    "symmetric_lowrank",
    "LowRankKernel",
    "SvdKernel",
    "apply",
    "transpose_apply",
    "recompress",
    "randsvd_kernel",
    "trace_relative_error",
    "max_norm_relative_error",
    "experiment_boxes_2d",
    "experiment_boxes_3d",
    "uniform_points",
    "bounding_box_of",
    "read_points_csv",
    "write_points_csv",
    "save_lowrank",
    "load_lowrank",
]


def _phi_laplace3d(rho):
    return 1.0 / rho


def _phi_biharmonic(rho):
    return 1.0 / rho**2


def _phi_laplace2d(rho):
    return -np.log(rho)


def _phi_thinplate(rho):
    return rho**2 * np.log(rho)


def _phi_multiquadric(rho):
    return np.sqrt(1.0 + rho**2)


def _phi_gaussian(rho):
    return np.exp(-(rho**2))


def _phi_matern12(rho):
    return np.exp(-rho)


def _phi_matern32(rho):
    t = np.sqrt(3.0) * rho
    return (1.0 + t) * np.exp(-t)


def _phi_matern52(rho):
    t = np.sqrt(5.0) * rho
    return (1.0 + t + t**2 / 3.0) * np.exp(-t)


def _phi_sqexp(rho):
    return np.exp(-0.5 * rho**2)


# name -> (phi, finite at rho=0, uses the scale parameter)
_CATALOG = {
    "laplace3d": (_phi_laplace3d, False, False),
    "biharmonic": (_phi_biharmonic, False, False),
    "laplace2d": (_phi_laplace2d, False, False),
    "thinplate": (_phi_thinplate, False, False),
    "multiquadric": (_phi_multiquadric, True, True),
    "gaussian": (_phi_gaussian, True, True),
    "matern12": (_phi_matern12, True, True),
    "matern32": (_phi_matern32, True, True),
    "matern52": (_phi_matern52, True, True),
    "sqexp": (_phi_sqexp, True, True),
}

KERNEL_NAMES = tuple(_CATALOG)


@dataclass(frozen=True)
class KernelSpec:
    """Radial kernel kappa(x, y) = phi(r) with r = ||x - y||_2 / sigma.

    ``sigma`` may be a per-dimension tuple for the anisotropic
    squared-exponential kernel ``sqexp`` (phi = exp(-rho^2 / 2) with
    rho^2 = sum_j ((x_j - y_j)/sigma_j)^2); every other kernel takes a
    scalar scale, and the scale-free kernels ignore it.
    """

    name: str
    sigma: float | tuple[float, ...] = 1.0

    def __post_init__(self):
        if self.name not in _CATALOG:
            raise ValueError(
                f"unknown kernel {self.name!r}; choose from {KERNEL_NAMES}"
            )
        sigma = self.sigma
        if np.isscalar(sigma):
            sigma = float(sigma)
            if sigma <= 0:
                raise ValueError("sigma must be positive")
        else:
            sigma = tuple(float(s) for s in sigma)
            if any(s <= 0 for s in sigma):
                raise ValueError("all sigma entries must be positive")
            if self.name != "sqexp":
                raise ValueError(
                    f"per-dimension sigma is only supported by 'sqexp', not {self.name!r}"
                )
        object.__setattr__(self, "sigma", sigma)

    @property
    def finite_at_zero(self) -> bool:
        return _CATALOG[self.name][1]

    def scale_vector(self, dim: int) -> np.ndarray:
        """Per-dimension coordinate scaling 1/sigma_j."""
        if not _CATALOG[self.name][2]:
            return np.ones(dim)
        if np.isscalar(self.sigma):
            return np.full(dim, 1.0 / self.sigma)
        if len(self.sigma) != dim:
            raise ValueError(
                f"kernel has {len(self.sigma)} scales but points have dimension {dim}"
            )
        return 1.0 / np.asarray(self.sigma)

    def phi(self, rho):
        rho = np.asarray(rho, dtype=float)
        if not self.finite_at_zero and np.any(rho == 0.0):
            raise ValueError(f"kernel {self.name!r} is singular at r = 0")
        return _CATALOG[self.name][0](rho)


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned box in 1, 2, or 3 spatial dimensions."""

    intervals: tuple[Interval, ...]

    def __post_init__(self):
        intervals = tuple(self.intervals)
        object.__setattr__(self, "intervals", intervals)
        if not 1 <= len(intervals) <= 3:
            raise ValueError("boxes support 1 to 3 spatial dimensions")

    @property
    def dim(self) -> int:
        return len(self.intervals)

    def grids(self, n: int) -> list[ChebGrid]:
        return [ChebGrid(iv, n) for iv in self.intervals]

    def contains(self, points) -> bool:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if points.shape[1] != self.dim:
            return False
        lo = np.array([iv.lo for iv in self.intervals])
        hi = np.array([iv.hi for iv in self.intervals])
        return bool(np.all(points >= lo) and np.all(points <= hi))


def diam(box: BoundingBox) -> float:
    """Euclidean diameter sqrt(sum (hi_j - lo_j)^2)."""
    return float(np.sqrt(sum(iv.length**2 for iv in box.intervals)))


def dist(b1: BoundingBox, b2: BoundingBox) -> float:
    """Minimum distance between any two points of the boxes; 0 on overlap."""
    if b1.dim != b2.dim:
        raise ValueError("boxes must share a dimension")
    gaps = []
    for i1, i2 in zip(b1.intervals, b2.intervals):
        gaps.append(max(0.0, i2.lo - i1.hi, i1.lo - i2.hi))
    return float(np.sqrt(sum(g**2 for g in gaps)))


def is_strongly_admissible(b1: BoundingBox, b2: BoundingBox, eta: float) -> bool:
    """max(diam) <= eta * dist; overlapping boxes are never admissible."""
    if eta <= 0:
        raise ValueError("eta must be positive")
    d = dist(b1, b2)
    if d == 0.0:
        return False
    return max(diam(b1), diam(b2)) <= eta * d


def _scaled_rho(x_points, y_points, spec: KernelSpec) -> np.ndarray:
    x = np.atleast_2d(np.asarray(x_points, dtype=float))
    y = np.atleast_2d(np.asarray(y_points, dtype=float))
    if x.shape[1] != y.shape[1]:
        raise ValueError("point clouds must share a dimension")
    w = spec.scale_vector(x.shape[1])
    rho2 = np.zeros((x.shape[0], y.shape[0]))
    for d in range(x.shape[1]):
        rho2 += ((x[:, d, None] - y[None, :, d]) * w[d]) ** 2
    return np.sqrt(rho2)


def dense_kernel_matrix(x_points, y_points, spec: KernelSpec) -> np.ndarray:
    """Exact pairwise kernel matrix; the test oracle for every low-rank form."""
    return spec.phi(_scaled_rho(x_points, y_points, spec))


class KernelGridSource:
    """Entry-access handle for the order-2D tensor of kernel values on the
    tensor-product grids of a source and a target box.

    Blocks are evaluated by broadcasting per-dimension squared differences,
    so only the requested entries are ever computed; ``eval_count``
    accumulates the number of kernel values served.
    """

    def __init__(self, spec: KernelSpec, source_grids, target_grids):
        if len(source_grids) != len(target_grids):
            raise ValueError("source and target grids must share a dimension")
        self.spec = spec
        self.sdim = len(source_grids)
        w = spec.scale_vector(self.sdim)
        self._scaled_nodes = [g.nodes * w[d] for d, g in enumerate(source_grids)]
        self._scaled_nodes += [g.nodes * w[d] for d, g in enumerate(target_grids)]
        self.eval_count = 0

    @property
    def extents(self) -> tuple[int, ...]:
        return tuple(len(nodes) for nodes in self._scaled_nodes)

    def block(self, sets) -> np.ndarray:
        sets = tuple(sets)
        ndim = 2 * self.sdim
        if len(sets) != ndim:
            raise ValueError(f"need {ndim} index sets, got {len(sets)}")
        shape = tuple(len(s) for s in sets)
        rho2 = np.zeros(shape)
        for d in range(self.sdim):
            s = self._scaled_nodes[d][sets[d].zero_based()]
            t = self._scaled_nodes[self.sdim + d][sets[self.sdim + d].zero_based()]
            s_shape = [1] * ndim
            s_shape[d] = s.size
            t_shape = [1] * ndim
            t_shape[self.sdim + d] = t.size
            rho2 = rho2 + (s.reshape(s_shape) - t.reshape(t_shape)) ** 2
        values = self.spec.phi(np.sqrt(rho2))
        self.eval_count += values.size
        return values

    def full(self) -> np.ndarray:
        return self.block([full_index_set(e) for e in self.extents])


def build_factors(points, box: BoundingBox, grids, factors=None) -> list[np.ndarray]:
    """Per-dimension cardinal-value matrices U_j (rows sum to one); with
    Tucker factors supplied, returns the compressed Uhat_j = U_j A_j."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if not box.contains(points):
        raise ValueError("points fall outside the interpolation box")
    out = [s_matrix(grids[d], points[:, d]) for d in range(box.dim)]
    if factors is not None:
        out = [u @ a for u, a in zip(out, factors)]
    return out


@dataclass
class LowRankKernel:
    """K(X, Y) ~= F_s * core_matrix * F_t^T with Khatri-Rao structured
    factors kept per dimension; the core is stored as the order-2D tensor
    and unfolded on demand."""

    source_factors: list[np.ndarray]
    target_factors: list[np.ndarray]
    core: np.ndarray
    provenance: dict = field(default_factory=dict)
    eval_count: int = 0
    rng_draws: int = 0

    def __post_init__(self):
        if len(self.source_factors) != len(self.target_factors):
            raise ValueError("need matching source/target factor counts")
        if self.core.ndim != 2 * len(self.source_factors):
            raise ValueError("core order must be twice the spatial dimension")

    @property
    def spatial_dim(self) -> int:
        return len(self.source_factors)

    @property
    def core_matrix(self) -> np.ndarray:
        return unfold_first(self.core, self.spatial_dim)

    def source_matrix(self) -> np.ndarray:
        return _kr_chain(self.source_factors)

    def target_matrix(self) -> np.ndarray:
        return _kr_chain(self.target_factors)

    def matrix(self) -> np.ndarray:
        """Explicit dense matrix; for oracles and small problems only."""
        return self.source_matrix() @ self.core_matrix @ self.target_matrix().T


@dataclass
class SvdKernel:
    """Recompressed form K(X, Y) ~= left * diag(s) * right^T."""

    left: np.ndarray
    singular_values: np.ndarray
    right: np.ndarray

    def matrix(self) -> np.ndarray:
        return (self.left * self.singular_values) @ self.right.T


def _kr_chain(factors) -> np.ndarray:
    """Row-wise Khatri-Rao chain U_D |x| ... |x| U_1 (dimension 1 fastest)."""
    return reduce(rowwise_khatri_rao, reversed(list(factors)))


_LETTERS = "abc"


def _contract_points(factors, w_tensor) -> np.ndarray:
    # y[i, k] = sum over grid multi-index of W[j1..jD, k] * prod_d U_d[i, j_d]
    dim = len(factors)
    sub = _LETTERS[:dim]
    spec = ",".join("i" + c for c in sub) + "," + sub + "k->ik"
    return np.einsum(spec, *factors, w_tensor, optimize=True)


def _expand_points(factors, v) -> np.ndarray:
    # z[j1..jD, k] = sum_i v[i, k] * prod_d U_d[i, j_d]
    dim = len(factors)
    sub = _LETTERS[:dim]
    spec = "ik," + ",".join("i" + c for c in sub) + "->" + sub + "k"
    return np.einsum(spec, v, *factors, optimize=True)


def _apply_factored(src, tgt, core_matrix, vec) -> np.ndarray:
    vec = np.asarray(vec, dtype=float)
    single = vec.ndim == 1
    v = vec[:, None] if single else vec
    n_t = tgt[0].shape[0]
    if v.shape[0] != n_t:
        raise ValueError(f"vector length {v.shape[0]} does not match {n_t} points")
    dim = len(tgt)
    ell_t = int(np.prod([a.shape[1] for a in tgt]))
    z = _expand_points(tgt, v).reshape(ell_t, -1, order="F")
    w = core_matrix @ z
    w_tensor = w.reshape(tuple(a.shape[1] for a in src) + (-1,), order="F")
    y = _contract_points(src, w_tensor)
    return y[:, 0] if single else y


def apply(lrk: LowRankKernel, vec) -> np.ndarray:
    """Matrix-vector product with the implied matrix, without forming it.

    Cost O((N_s + N_t) * ell^D + ell^(2D)) per vector; also accepts a matrix
    of stacked vectors.
    """
    return _apply_factored(
        lrk.source_factors, lrk.target_factors, lrk.core_matrix, vec
    )


def transpose_apply(lrk: LowRankKernel, vec) -> np.ndarray:
    """Product with the transpose of the implied matrix."""
    return _apply_factored(
        lrk.target_factors, lrk.source_factors, lrk.core_matrix.T, vec
    )


def recompress(lrk: LowRankKernel, target_rank: int) -> SvdKernel:
    """QR the explicit Khatri-Rao factors, SVD-truncate the small middle
    matrix, and assemble an ordinary rank-``target_rank`` SVD form."""
    fs = lrk.source_matrix()
    ft = lrk.target_matrix()
    if target_rank > min(fs.shape[1], ft.shape[1]):
        raise ValueError(f"target rank {target_rank} exceeds the factored rank")
    qs, rs = np.linalg.qr(fs)
    qt, rt = np.linalg.qr(ft)
    b = rs @ lrk.core_matrix @ rt.T
    u, s, vh = truncated_svd(b, target_rank)
    return SvdKernel(qs @ u, s, qt @ vh.T)


def _compress_source(source: KernelGridSource, n, method, rank, oversample, levels, seed):
    from .tucker import method1, method2, method3

    if method == "m2":
        sample = subsample_indices(n, levels)
        return method2(source, rank, oversample, sample, seed)
    full = source.full()
    if method == "hosvd":
        return _hosvd_dense(full, rank + oversample)
    if method == "m1":
        return method1(full, rank, oversample, seed)
    if method == "m3":
        return method3(full, rank, oversample, seed)
    raise ValueError(f"unknown method {method!r}")


def kernel_lowrank(
    x_points,
    y_points,
    boxes,
    spec: KernelSpec,
    n: int,
    method: str = "m1",
    rank: int = 5,
    oversample: int = 5,
    levels: int = 1,
    seed: int = 0,
) -> LowRankKernel:
    """Compress the interaction matrix between two boxed point clouds.

    The kernel is treated as a function of 2D variables on the product of
    the boxes, its grid-value tensor compressed by the chosen method, and
    the per-dimension factors evaluated at the points.  Singular kernels
    require strictly separated boxes.
    """
    box_s, box_t = boxes
    x = np.atleast_2d(np.asarray(x_points, dtype=float))
    y = np.atleast_2d(np.asarray(y_points, dtype=float))
    if box_s.dim != box_t.dim:
        raise ValueError("boxes must share a dimension")
    if not spec.finite_at_zero and dist(box_s, box_t) <= 0.0:
        raise ValueError(
            f"kernel {spec.name!r} is singular and the boxes touch: "
            f"diam = {diam(box_s):.6g}/{diam(box_t):.6g}, dist = {dist(box_s, box_t):.6g}"
        )
    grids_s = box_s.grids(n)
    grids_t = box_t.grids(n)
    source = KernelGridSource(spec, grids_s, grids_t)
    tk = _compress_source(source, n, method, rank, oversample, levels, seed)
    dim = box_s.dim
    uhats = build_factors(x, box_s, grids_s, tk.factors[:dim])
    vhats = build_factors(y, box_t, grids_t, tk.factors[dim:])
    provenance = {
        "kernel": spec.name,
        "sigma": spec.sigma,
        "n": n,
        "method": method,
        "rank": rank,
        "oversample": oversample,
        "levels": levels,
        "seed": seed,
        "boxes": [[[iv.lo, iv.hi] for iv in b.intervals] for b in (box_s, box_t)],
    }
    return LowRankKernel(
        uhats, vhats, tk.core, provenance, source.eval_count, tk.rng_draws
    )


def symmetric_lowrank(
    points,
    box: BoundingBox,
    spec: KernelSpec,
    n: int,
    method: str = "m2",
    rank: int = 5,
    seed: int = 0,
    oversample: int = 0,
    levels: int = 1,
    max_dense: int = 1 << 26,
) -> LowRankKernel:
    """Symmetric one-box compression K(X, X) ~= F * Mhat * F^T.

    Factor matrices are computed along the first D modes only and reused
    for the mirrored modes, so the implied matrix is exactly symmetric.
    For the interpolatory methods the core consists of original tensor
    entries at the mirrored cross indices; only the subsampled route m2
    avoids materializing all n^(2D) grid values, so the dense routes are
    size-guarded by ``max_dense``.
    """
    if not spec.finite_at_zero:
        raise ValueError(
            f"kernel {spec.name!r} is singular on the diagonal; the symmetric "
            "construction needs a kernel finite at r = 0"
        )
    x = np.atleast_2d(np.asarray(points, dtype=float))
    grids = box.grids(n)
    source = KernelGridSource(spec, grids, grids)
    dim = box.dim
    ndim = 2 * dim
    ell = rank + oversample
    factors: list[np.ndarray] = []
    selected: list[IndexSet] = []
    draws = 0
    if method == "m2":
        sample = subsample_indices(n, levels)
        n_b = len(sample)
        if ell > min(n, n_b ** (ndim - 1)):
            raise ValueError("rank + oversample exceeds the subsampled width")
        full = full_index_set(n)
        for j in range(1, dim + 1):
            sets = [sample] * ndim
            sets[j - 1] = full
            res = rrid(
                unfold(source.block(sets), j),
                SketchConfig(rank, oversample, seed),
                stream=j,
            )
            draws += n_b ** (ndim - 1) * ell
            factors.append(res.factor)
            selected.append(res.selected)
        core = source.block(selected + selected)
    else:
        if n**ndim > max_dense:
            raise ValueError(
                f"method {method!r} materializes {n**ndim} grid values "
                f"(> {max_dense}); use method 'm2'"
            )
        full_t = source.full()
        if method == "hosvd":
            for j in range(1, dim + 1):
                u, _, _ = np.linalg.svd(unfold(full_t, j), full_matrices=False)
                factors.append(u[:, :ell])
            core = multi_mode_product(
                full_t,
                [(a.T, j + 1) for j, a in enumerate(factors)]
                + [(a.T, dim + j + 1) for j, a in enumerate(factors)],
            )
            selected = None
        elif method == "m1":
            for j in range(1, dim + 1):
                res = rrid(
                    unfold(full_t, j), SketchConfig(rank, oversample, seed), stream=j
                )
                draws += n ** (ndim - 1) * ell
                factors.append(res.factor)
                selected.append(res.selected)
            core = subtensor(full_t, selected + selected)
        elif method == "m3":
            omegas = [
                gaussian_matrix(n, ell, seed, stream=k) for k in range(1, ndim)
            ]
            draws = (ndim - 1) * n * ell
            for j in range(1, dim + 1):
                remaining = [k for k in range(1, ndim + 1) if k != j]
                contracted = multi_mode_product(
                    full_t, [(omegas[i].T, k) for i, k in enumerate(remaining)]
                )
                u, _, _ = np.linalg.svd(unfold(contracted, j), full_matrices=False)
                res = row_interpolation(u[:, :ell])
                factors.append(res.factor)
                selected.append(res.selected)
            core = subtensor(full_t, selected + selected)
        else:
            raise ValueError(f"unknown method {method!r}")
    uhats = build_factors(x, box, grids, factors)
    provenance = {
        "kernel": spec.name,
        "sigma": spec.sigma,
        "n": n,
        "method": method,
        "rank": rank,
        "oversample": oversample,
        "levels": levels,
        "seed": seed,
        "symmetric": True,
        "boxes": [[[iv.lo, iv.hi] for iv in box.intervals]],
    }
    return LowRankKernel(
        uhats, uhats, core, provenance, source.eval_count, draws
    )


def randsvd_kernel(
    x_points,
    y_points,
    boxes,
    spec: KernelSpec,
    n: int,
    rank: int,
    oversample: int = 5,
    seed: int = 0,
) -> SvdKernel:
    """Randomized SVD of the uncompressed interpolation form F_s M F_t^T,
    truncated to ``rank``; the matrix baseline for the tensor methods."""
    box_s, box_t = boxes
    if not spec.finite_at_zero and dist(box_s, box_t) <= 0.0:
        raise ValueError(f"kernel {spec.name!r} is singular and the boxes touch")
    grids_s = box_s.grids(n)
    grids_t = box_t.grids(n)
    source = KernelGridSource(spec, grids_s, grids_t)
    base = LowRankKernel(
        build_factors(x_points, box_s, grids_s),
        build_factors(y_points, box_t, grids_t),
        source.full(),
    )
    ell = rank + oversample
    n_t = base.target_factors[0].shape[0]
    if ell > min(base.source_factors[0].shape[0], n_t):
        raise ValueError("sketch size exceeds the number of points")
    omega = gaussian_matrix(n_t, ell, seed, stream=1)
    q, _ = np.linalg.qr(apply(base, omega))
    b = transpose_apply(base, q).T
    u, s, vh = truncated_svd(b, rank)
    return SvdKernel(q @ u, s, vh.T)


def trace_relative_error(points, spec: KernelSpec, lrk: LowRankKernel) -> float:
    """|trace(K) - trace(Khat)| / trace(K) from diagonals only.

    trace(K) is the exact sum of kappa(x_i, x_i); trace(Khat) contracts the
    factor rows with the core without forming the implied matrix.
    """
    x = np.atleast_2d(np.asarray(points, dtype=float))
    diag = spec.phi(np.zeros(x.shape[0]))
    trace_exact = float(np.sum(diag))
    if trace_exact == 0.0:
        raise ValueError("exact trace is zero; relative error undefined")
    f = lrk.source_matrix()
    trace_hat = float(np.einsum("ij,jk,ik->", f, lrk.core_matrix, f, optimize=True))
    return abs(trace_exact - trace_hat) / trace_exact


def max_norm_relative_error(dense, approx) -> float:
    """Elementwise max-norm error of a factored form against the dense oracle."""
    dense = np.asarray(dense, dtype=float)
    denom = float(np.max(np.abs(dense)))
    if denom == 0.0:
        raise ValueError("max-norm of the reference matrix is zero")
    return float(np.max(np.abs(dense - approx.matrix())) / denom)


def experiment_boxes_2d(side: float, separation: float, angle: float):
    """Source box cornered at the origin; target box of the same side with
    its corner at distance ``separation`` along ``angle`` in the plane."""
    box_s = BoundingBox((Interval(0.0, side), Interval(0.0, side)))
    ox = separation * np.cos(angle)
    oy = separation * np.sin(angle)
    box_t = BoundingBox((Interval(ox, ox + side), Interval(oy, oy + side)))
    return box_s, box_t


def experiment_boxes_3d(side: float, separation: float):
    """First-octant source/target cubes with corners ``separation`` apart
    along the main diagonal."""
    o = separation / np.sqrt(3.0)
    box_s = BoundingBox((Interval(0.0, side),) * 3)
    box_t = BoundingBox((Interval(o, o + side),) * 3)
    return box_s, box_t


def uniform_points(box: BoundingBox, count: int, seed: int, stream: int = 0) -> np.ndarray:
    """Uniformly random points inside the box, seeded."""
    u = generator(seed, stream).random((count, box.dim))
    lo = np.array([iv.lo for iv in box.intervals])
    length = np.array([iv.length for iv in box.intervals])
    return lo + u * length


def bounding_box_of(points, pad: float = 1e-9) -> BoundingBox:
    """Axis-aligned bounding box of a cloud, padded relatively so boundary
    points remain strictly containable."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    intervals = []
    for d in range(points.shape[1]):
        lo, hi = float(points[:, d].min()), float(points[:, d].max())
        width = max(hi - lo, 1.0)
        intervals.append(Interval(lo - pad * width, hi + pad * width))
    return BoundingBox(tuple(intervals))


def read_points_csv(path) -> np.ndarray:
    """Point cloud from CSV: one point per line, comma-separated coordinates,
    optional single header line."""
    rows = []
    with open(path, newline="") as handle:
        for i, row in enumerate(csv.reader(handle)):
            if not row:
                continue
            try:
                rows.append([float(v) for v in row])
            except ValueError:
                if i == 0:
                    continue
                raise ValueError(f"non-numeric row {i + 1} in {path}")
    if not rows:
        raise ValueError(f"no points found in {path}")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError(f"inconsistent column counts in {path}")
    return np.asarray(rows, dtype=float)


def write_points_csv(path, points) -> None:
    points = np.atleast_2d(np.asarray(points, dtype=float))
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        for row in points:
            writer.writerow([repr(float(v)) for v in row])


def save_lowrank(lrk: LowRankKernel, path) -> None:
    """Write factors, core, and provenance in the shared container format."""
    header = {
        "format": "chebtuck-lowrank",
        "version": 1,
        "spatial_dim": lrk.spatial_dim,
        "eval_count": lrk.eval_count,
        "rng_draws": lrk.rng_draws,
        "provenance": lrk.provenance,
    }
    arrays = {"core": lrk.core}
    for d, a in enumerate(lrk.source_factors):
        arrays[f"source_{d}"] = a
    for d, a in enumerate(lrk.target_factors):
        arrays[f"target_{d}"] = a
    container.save_container(path, header, arrays)


def load_lowrank(path) -> LowRankKernel:
    header, arrays = container.load_container(path)
    if header.get("format") != "chebtuck-lowrank":
        raise ValueError(f"{path} is not a low-rank kernel container")
    dim = int(header["spatial_dim"])
    return LowRankKernel(
        [arrays[f"source_{d}"] for d in range(dim)],
        [arrays[f"target_{d}"] for d in range(dim)],
        arrays["core"],
        header.get("provenance", {}),
        int(header["eval_count"]),
        int(header["rng_draws"]),
    )
