"""Dense N-mode tensor algebra.

A tensor here is a plain ``numpy.ndarray``; mode ``j`` lives on axis
``j - 1``.  The linear ordering of entries is column-major (mode 1 varies
fastest), i.e. Fortran order, and every unfolding below is defined relative
to that single convention (Kolda & Bader, SIAM Review 2009).  Modes and
index sets are 1-based at the API boundary; everything internal is 0-based
numpy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "IndexSet",
    "full_index_set",
    "from_linear",
    "to_linear",
    "unfold",
    "fold",
    "unfold_first",
    "mode_product",
    "multi_mode_product",
    "subtensor",
    "rowwise_khatri_rao",
    "frobenius_distance",
]


@dataclass(frozen=True)
class IndexSet:
    """Ordered, duplicate-free 1-based indices into a single tensor mode."""

    indices: tuple[int, ...]
    parent_extent: int

    def __post_init__(self):
        indices = tuple(int(i) for i in self.indices)
        object.__setattr__(self, "indices", indices)
        if len(set(indices)) != len(indices):
            raise ValueError("index set contains duplicates")
        if any(i < 1 or i > self.parent_extent for i in indices):
            raise ValueError(
                f"indices must lie in [1, {self.parent_extent}], got {indices}"
            )

    def __len__(self) -> int:
        return len(self.indices)

    def zero_based(self) -> np.ndarray:
        """The same indices as a 0-based integer array."""
        return np.asarray(self.indices, dtype=np.intp) - 1


def full_index_set(extent: int) -> IndexSet:
    """IndexSet selecting every index 1..extent."""
    return IndexSet(tuple(range(1, extent + 1)), extent)


def _check_mode(mode: int, ndim: int) -> None:
    if not 1 <= mode <= ndim:
        raise ValueError(f"mode {mode} out of range for an order-{ndim} tensor")


def from_linear(values, extents) -> np.ndarray:
    """Reassemble a tensor from its column-major linear ordering."""
    extents = tuple(int(e) for e in extents)
    values = np.asarray(values, dtype=float)
    if values.size != int(np.prod(extents)):
        raise ValueError("value count does not match the extents")
    return values.reshape(extents, order="F")


def to_linear(tensor) -> np.ndarray:
    """Entries of ``tensor`` in the column-major linear ordering."""
    return np.asarray(tensor).ravel(order="F")


def unfold(tensor, mode: int) -> np.ndarray:
    """Mode-``mode`` unfolding: columns are the mode fibers, with
    lower-numbered remaining modes varying fastest."""
    t = np.asarray(tensor)
    _check_mode(mode, t.ndim)
    return np.moveaxis(t, mode - 1, 0).reshape(t.shape[mode - 1], -1, order="F")


def fold(matrix, mode: int, extents) -> np.ndarray:
    """Inverse of :func:`unfold` for the given target extents."""
    extents = tuple(int(e) for e in extents)
    _check_mode(mode, len(extents))
    rest = extents[: mode - 1] + extents[mode:]
    arr = np.asarray(matrix).reshape((extents[mode - 1],) + rest, order="F")
    return np.moveaxis(arr, 0, mode - 1)


def unfold_first(tensor, j: int) -> np.ndarray:
    """Unfolding of modes 1..j against modes j+1..N, shape
    (I_1···I_j) x (I_{j+1}···I_N)."""
    t = np.asarray(tensor)
    if not 1 <= j < t.ndim:
        raise ValueError(f"j={j} must satisfy 1 <= j < {t.ndim}")
    lead = int(np.prod(t.shape[:j]))
    return t.reshape(lead, -1, order="F")


def mode_product(tensor, matrix, mode: int) -> np.ndarray:
    """Mode-``mode`` product; satisfies unfold(result, mode) == matrix @ unfold(tensor, mode)."""
    t = np.asarray(tensor)
    a = np.asarray(matrix)
    _check_mode(mode, t.ndim)
    if a.ndim != 2 or a.shape[1] != t.shape[mode - 1]:
        raise ValueError(
            f"matrix of shape {a.shape} cannot multiply mode {mode} "
            f"of extent {t.shape[mode - 1]}"
        )
    out = np.tensordot(a, t, axes=(1, mode - 1))
    return np.moveaxis(out, 0, mode - 1)


def multi_mode_product(tensor, factors) -> np.ndarray:
    """Apply (matrix, mode) pairs along distinct modes; order-independent."""
    t = np.asarray(tensor)
    modes = [mode for _, mode in factors]
    if len(set(modes)) != len(modes):
        raise ValueError(f"duplicate modes in factor list: {modes}")
    for matrix, mode in factors:
        t = mode_product(t, matrix, mode)
    return t


def subtensor(tensor, sets) -> np.ndarray:
    """Copy the entries indexed by one IndexSet per mode."""
    t = np.asarray(tensor)
    sets = tuple(sets)
    if len(sets) != t.ndim:
        raise ValueError(f"need {t.ndim} index sets, got {len(sets)}")
    for ax, s in enumerate(sets):
        if s.parent_extent != t.shape[ax]:
            raise ValueError(
                f"index set for mode {ax + 1} expects extent {s.parent_extent}, "
                f"tensor has {t.shape[ax]}"
            )
    return t[np.ix_(*(s.zero_based() for s in sets))].copy()


def rowwise_khatri_rao(a, b) -> np.ndarray:
    """Row-wise Khatri-Rao product: row i is kron(a[i], b[i]).

    The second operand's column index varies fastest, so reducing
    ``[U_D, ..., U_1]`` left to right makes mode 1 fastest, matching the
    column-major vectorization used by :func:`unfold_first`.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2 or b.ndim != 2 or a.shape[0] != b.shape[0]:
        raise ValueError(f"row counts must match, got {a.shape} and {b.shape}")
    m = a.shape[0]
    return (a[:, :, None] * b[:, None, :]).reshape(m, -1)


def frobenius_distance(t1, t2) -> float:
    """Frobenius norm of the elementwise difference."""
    t1 = np.asarray(t1)
    t2 = np.asarray(t2)
    if t1.shape != t2.shape:
        raise ValueError(f"shape mismatch: {t1.shape} vs {t2.shape}")
    return float(np.linalg.norm((t1 - t2).ravel()))
