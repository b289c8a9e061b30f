"""Tucker compression of dense tensors.

Four compression routes are provided:

* :func:`hosvd` -- the classical baseline with orthonormal factors,
* :func:`method1` -- a randomized interpolatory decomposition of every mode
  unfolding, giving a structure-preserving core of original tensor entries,
* :func:`method2` -- the same, but run on a subsampled tensor read through an
  entry-access handle, so only a small fraction of entries is ever touched,
* :func:`method3` -- sketches built from Kronecker products of small shared
  Gaussian matrices, which needs far fewer random numbers.

Mode j of a decomposition uses the independent random stream (seed, j), so
results are deterministic and modes could be processed in parallel.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dtensor import (
    IndexSet,
    frobenius_distance,
    full_index_set,
    mode_product,
    multi_mode_product,
    subtensor,
    unfold,
)
from .randla import SketchConfig, gaussian_matrix, row_interpolation, rrid

__all__ = [
    "TuckerTensor",
    "ArraySource",
    "hosvd",
    "method1",
    "method2",
    "method3",
    "reconstruct",
    "relative_error",
]


@dataclass
class TuckerTensor:
    """Core tensor, one factor matrix per mode, and (for the interpolatory
    methods) the selected cross index sets.  ``rng_draws`` counts the
    Gaussian variates consumed while building the decomposition."""

    core: np.ndarray
    factors: list[np.ndarray]
    selected: list[IndexSet] | None = None
    rng_draws: int = 0

    def __post_init__(self):
        if len(self.factors) != self.core.ndim:
            raise ValueError("need one factor per core mode")
        for ax, a in enumerate(self.factors):
            if a.shape[1] != self.core.shape[ax]:
                raise ValueError(
                    f"factor {ax + 1} has {a.shape[1]} columns, "
                    f"core extent is {self.core.shape[ax]}"
                )

    @property
    def extents(self) -> tuple[int, ...]:
        return tuple(a.shape[0] for a in self.factors)

    @property
    def ranks(self) -> tuple[int, ...]:
        return self.core.shape


class ArraySource:
    """Entry-access handle over an in-memory tensor.

    Sources expose ``extents`` and ``block(sets)`` where ``sets`` is one
    IndexSet per mode; ``reads`` accumulates the number of entries served,
    which makes evaluation-count claims testable.
    """

    def __init__(self, data):
        self.data = np.asarray(data, dtype=float)
        self.reads = 0

    @property
    def extents(self) -> tuple[int, ...]:
        return self.data.shape

    def block(self, sets) -> np.ndarray:
        out = subtensor(self.data, sets)
        self.reads += out.size
        return out


def _normalize_ranks(ranks, ndim: int) -> tuple[int, ...]:
    if np.isscalar(ranks):
        return (int(ranks),) * ndim
    ranks = tuple(int(r) for r in ranks)
    if len(ranks) != ndim:
        raise ValueError(f"need {ndim} ranks, got {len(ranks)}")
    return ranks


def hosvd(tensor, ranks) -> TuckerTensor:
    """Truncated higher-order SVD: factor j holds the leading left singular
    vectors of the mode-j unfolding; the core is the full projection."""
    t = np.asarray(tensor, dtype=float)
    ranks = _normalize_ranks(ranks, t.ndim)
    factors = []
    for j in range(1, t.ndim + 1):
        r = ranks[j - 1]
        if r > t.shape[j - 1]:
            raise ValueError(f"rank {r} exceeds extent {t.shape[j - 1]} in mode {j}")
        u, _, _ = np.linalg.svd(unfold(t, j), full_matrices=False)
        factors.append(u[:, :r])
    core = multi_mode_product(t, [(a.T, j + 1) for j, a in enumerate(factors)])
    return TuckerTensor(core, factors)


def method1(tensor, rank: int, oversample: int, seed: int) -> TuckerTensor:
    """Interpolatory Tucker compression: an independent randomized row
    decomposition of every mode unfolding, core = entries at the selected
    cross indices."""
    t = np.asarray(tensor, dtype=float)
    cfg = SketchConfig(rank, oversample, seed)
    if any(cfg.ell > e for e in t.shape):
        raise ValueError(f"rank + oversample = {cfg.ell} exceeds an extent of {t.shape}")
    factors, selected = [], []
    draws = 0
    for j in range(1, t.ndim + 1):
        unf = unfold(t, j)
        res = rrid(unf, cfg, stream=j)
        draws += unf.shape[1] * cfg.ell
        factors.append(res.factor)
        selected.append(res.selected)
    core = subtensor(t, selected)
    return TuckerTensor(core, factors, selected, rng_draws=draws)


def method2(source, rank: int, oversample: int, sample: IndexSet, seed: int) -> TuckerTensor:
    """Interpolatory compression from a subsampled tensor.

    ``source`` is an entry-access handle (``extents`` plus ``block``); for
    mode j only the fibers with all other modes restricted to ``sample`` are
    read, and finally the core cross.  The total entries read are at most
    N*n*n_b^(N-1) + (rank+oversample)^N.  With the full index set as the
    sample this reproduces :func:`method1` bit for bit.
    """
    extents = tuple(source.extents)
    ndim = len(extents)
    n = extents[0]
    if any(e != n for e in extents):
        raise ValueError(f"subsampled compression expects equal extents, got {extents}")
    if sample.parent_extent != n:
        raise ValueError(f"sample set is for extent {sample.parent_extent}, tensor has {n}")
    cfg = SketchConfig(rank, oversample, seed)
    n_b = len(sample)
    if cfg.ell > min(n, n_b ** (ndim - 1)):
        raise ValueError(
            f"rank + oversample = {cfg.ell} exceeds min(n, n_b^(N-1)) = "
            f"{min(n, n_b ** (ndim - 1))}"
        )
    factors, selected = [], []
    draws = 0
    full = full_index_set(n)
    for j in range(1, ndim + 1):
        sets = [sample] * ndim
        sets[j - 1] = full
        block = source.block(sets)
        res = rrid(unfold(block, j), cfg, stream=j)
        draws += n_b ** (ndim - 1) * cfg.ell
        factors.append(res.factor)
        selected.append(res.selected)
    core = source.block(selected)
    return TuckerTensor(core, factors, selected, rng_draws=draws)


def method3(tensor, rank: int, oversample: int, seed: int) -> TuckerTensor:
    """Interpolatory compression with Kronecker-structured sketches.

    N-1 shared Gaussian matrices of shape n x (rank+oversample) are drawn
    once; for mode j the tensor is contracted with them along the remaining
    modes (in ascending order), then rows are selected from the orthonormal
    basis of the small unfolding.  Only (N-1)*n*(rank+oversample) random
    numbers are generated in total.
    """
    t = np.asarray(tensor, dtype=float)
    ndim = t.ndim
    n = t.shape[0]
    if any(e != n for e in t.shape):
        raise ValueError(f"Kronecker sketching expects equal extents, got {t.shape}")
    cfg = SketchConfig(rank, oversample, seed)
    if cfg.ell > n:
        raise ValueError(f"rank + oversample = {cfg.ell} exceeds extent {n}")
    omegas = [gaussian_matrix(n, cfg.ell, seed, stream=k) for k in range(1, ndim)]
    draws = (ndim - 1) * n * cfg.ell
    factors, selected = [], []
    for j in range(1, ndim + 1):
        remaining = [k for k in range(1, ndim + 1) if k != j]
        x = multi_mode_product(t, [(omegas[i].T, k) for i, k in enumerate(remaining)])
        # leading ell-dimensional basis of the sketched unfolding; the
        # unfolding has ell^(N-1) columns, so a plain thin QR would not
        # truncate the rank
        u, _, _ = np.linalg.svd(unfold(x, j), full_matrices=False)
        res = row_interpolation(u[:, : cfg.ell])
        factors.append(res.factor)
        selected.append(res.selected)
    core = subtensor(t, selected)
    return TuckerTensor(core, factors, selected, rng_draws=draws)


def reconstruct(tk: TuckerTensor) -> np.ndarray:
    """Expand a Tucker representation back to a dense tensor."""
    return multi_mode_product(tk.core, [(a, j + 1) for j, a in enumerate(tk.factors)])


def relative_error(tensor, tk: TuckerTensor) -> float:
    """Frobenius distance between tensor and reconstruction, relative to
    the tensor norm."""
    t = np.asarray(tensor, dtype=float)
    norm = np.linalg.norm(t.ravel())
    if norm == 0.0:
        raise ValueError("relative error is undefined for the zero tensor")
    return frobenius_distance(t, reconstruct(tk)) / norm
