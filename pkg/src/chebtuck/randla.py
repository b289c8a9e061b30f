"""Seeded randomized linear algebra: Gaussian sketching, range finding,
pivoted-QR row selection, and the interpolatory decomposition built from them.

Randomness comes exclusively from numpy's counter-based Philox generator
keyed by ``(seed, stream)``, so every operation is bit-reproducible and
independent streams can be derived for concurrent work without shared
state.  The range finder and the row-interpolatory decomposition follow
Halko, Martinsson & Tropp (SIAM Review 2011); row selection uses
Businger-Golub column-pivoted QR (LAPACK ``geqp3``).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .dtensor import IndexSet

__all__ = [
    "SketchConfig",
    "RridResult",
    "generator",
    "gaussian_matrix",
    "range_finder",
    "pivot_select",
    "row_interpolation",
    "rrid",
    "truncated_svd",
    "theorem1_bound",
]

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class SketchConfig:
    """Target rank, oversampling, and master seed for a randomized sketch."""

    rank: int
    oversample: int = 5
    seed: int = 0

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be positive")
        if self.oversample < 0:
            raise ValueError("oversampling must be nonnegative")
        if self.seed < 0:
            raise ValueError("seed must be a nonnegative 64-bit integer")

    @property
    def ell(self) -> int:
        return self.rank + self.oversample


@dataclass
class RridResult:
    """Interpolatory factor F and the selected row indices J, with
    F[J, :] equal to the identity by construction."""

    factor: np.ndarray
    selected: IndexSet


def generator(seed: int, stream: int = 0) -> np.random.Generator:
    """Philox generator for the (seed, stream) pair; streams are independent."""
    if seed < 0 or stream < 0:
        raise ValueError("seed and stream must be nonnegative")
    return np.random.Generator(
        np.random.Philox(key=[seed & _MASK64, stream & _MASK64])
    )


def gaussian_matrix(rows: int, cols: int, seed: int, stream: int = 0) -> np.ndarray:
    """i.i.d. standard normal matrix; identical arguments give identical bits."""
    if rows < 1 or cols < 1:
        raise ValueError("matrix dimensions must be positive")
    return generator(seed, stream).standard_normal((rows, cols))


def range_finder(x, cfg: SketchConfig, stream: int = 0) -> np.ndarray:
    """Orthonormal basis approximating the range of x, from a Gaussian sketch."""
    x = np.asarray(x, dtype=float)
    m, n = x.shape
    if cfg.ell > min(m, n):
        raise ValueError(
            f"sketch size {cfg.ell} exceeds min dimension {min(m, n)}"
        )
    omega = gaussian_matrix(n, cfg.ell, cfg.seed, stream)
    q, _ = np.linalg.qr(x @ omega)
    return q


def pivot_select(qt, count: int) -> IndexSet:
    """First ``count`` pivot columns of Businger-Golub column-pivoted QR."""
    qt = np.asarray(qt, dtype=float)
    if count > qt.shape[1]:
        raise ValueError(f"cannot select {count} of {qt.shape[1]} columns")
    _, _, piv = scipy.linalg.qr(qt, pivoting=True, mode="economic")
    return IndexSet(tuple(int(j) + 1 for j in piv[:count]), qt.shape[1])


def row_interpolation(q) -> RridResult:
    """Pick well-conditioned rows of q and form F = q @ inv(q[J, :]).

    The inverse is applied through an LU solve; F reproduces the selected
    rows exactly up to roundoff.
    """
    q = np.asarray(q, dtype=float)
    selected = pivot_select(q.T, q.shape[1])
    rows = q[selected.zero_based(), :]
    try:
        factor = np.linalg.solve(rows.T, q.T).T
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(
            "selected row block is singular; pivoting failed on a "
            "rank-deficient basis"
        ) from exc
    return RridResult(factor, selected)


def rrid(x, cfg: SketchConfig, stream: int = 0) -> RridResult:
    """Randomized row interpolatory decomposition: x ~= F @ x[J, :].

    Sketch, orthonormalize, then select rows by pivoted QR on the basis.
    The rows indexed by J are reproduced exactly in exact arithmetic.
    """
    return row_interpolation(range_finder(x, cfg, stream))


def truncated_svd(b, rank: int):
    """Leading rank-``rank`` SVD factors (u, s, vh) of a dense matrix."""
    b = np.asarray(b, dtype=float)
    if rank > min(b.shape):
        raise ValueError(f"rank {rank} exceeds min dimension {min(b.shape)}")
    u, s, vh = np.linalg.svd(b, full_matrices=False)
    return u[:, :rank], s[:rank], vh[:rank, :]


def theorem1_bound(mode_singular_values, rank: int, oversample: int, n: int) -> float:
    """Expected-error bound for the per-mode interpolatory compression of an
    order-N tensor with the given mode-unfolding singular values:

        sum_{j=1}^N g(n, ell)^j * ((1 + rank/(oversample-1))
                                   * sum_{i>rank} sigma_i^2(mode j))^{1/2}

    with g(n, ell) = sqrt(1 + 4*ell*(n - ell)) and ell = rank + oversample.
    Requires oversample >= 2, below which the expectation diverges.
    """
    if oversample < 2:
        raise ValueError("the expectation bound requires oversampling >= 2")
    ell = rank + oversample
    if ell >= n:
        raise ValueError(f"need rank + oversample < n, got {ell} >= {n}")
    g = np.sqrt(1.0 + 4.0 * ell * (n - ell))
    amplification = 1.0 + rank / (oversample - 1.0)
    total = 0.0
    for j, sv in enumerate(mode_singular_values, start=1):
        sv = np.asarray(sv, dtype=float)
        tail = float(np.sum(sv[rank:] ** 2))
        total += g**j * np.sqrt(amplification * tail)
    return float(total)
