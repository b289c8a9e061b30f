"""Chebyshev points of the first kind and cardinal interpolation.

Interpolation on an interval [a, b] uses the nodes eta_k = I(xi_k), where
xi_k = cos((2k-1) pi / (2n)) and I is the affine map from [-1, 1].  The
cardinal polynomial through the nodes is

    S_n(eta_i, x) = 1/n + (2/n) * sum_{k=1}^{n-1} T_k(xi_i) T_k(I^{-1}(x)),

so that g(x) is approximated by sum_k g(eta_k) S_n(eta_k, x).  Chebyshev
polynomials are evaluated by the three-term recurrence rather than
cos(k*arccos x), which loses accuracy near the interval ends.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .dtensor import IndexSet

__all__ = [
    "Interval",
    "ChebGrid",
    "cheb_nodes",
    "affine_map",
    "inverse_map",
    "s_vector",
    "s_matrix",
    "interpolate_1d",
    "subsample_indices",
    "lebesgue_estimate",
]


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        object.__setattr__(self, "lo", float(self.lo))
        object.__setattr__(self, "hi", float(self.hi))
        if not self.lo < self.hi:
            raise ValueError(f"degenerate interval [{self.lo}, {self.hi}]")

    @property
    def length(self) -> float:
        return self.hi - self.lo


def cheb_nodes(n: int) -> np.ndarray:
    """First-kind Chebyshev points cos((2k-1) pi / (2n)), k=1..n, descending."""
    if n < 1:
        raise ValueError("need at least one node")
    k = np.arange(1, n + 1)
    return np.cos((2 * k - 1) * np.pi / (2 * n))


def affine_map(interval: Interval, x):
    """Map [-1, 1] onto the interval: x -> (x+1)(hi-lo)/2 + lo."""
    return (np.asarray(x, dtype=float) + 1.0) * (interval.length / 2.0) + interval.lo


def inverse_map(interval: Interval, x):
    """Map the interval back onto [-1, 1]."""
    return 2.0 * (np.asarray(x, dtype=float) - interval.lo) / interval.length - 1.0


@dataclass(frozen=True)
class ChebGrid:
    """n first-kind Chebyshev nodes on an interval, in descending order."""

    interval: Interval
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("grid needs at least one node")

    @cached_property
    def nodes(self) -> np.ndarray:
        return affine_map(self.interval, cheb_nodes(self.n))


def _cheb_t_table(x: np.ndarray, n: int) -> np.ndarray:
    """T_0..T_{n-1} evaluated at the points x, via the stable recurrence."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    table = np.empty((x.size, n))
    table[:, 0] = 1.0
    if n > 1:
        table[:, 1] = x
    for k in range(2, n):
        table[:, k] = 2.0 * x * table[:, k - 1] - table[:, k - 2]
    return table


@lru_cache(maxsize=None)
def _reference_table(n: int) -> np.ndarray:
    # T_k(xi_i) for the reference nodes; shared by every grid of size n
    return _cheb_t_table(cheb_nodes(n), n)


def s_matrix(grid: ChebGrid, xs) -> np.ndarray:
    """Rows of cardinal values: entry (i, j) is S_n(eta_j, xs[i])."""
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    n = grid.n
    if n == 1:
        return np.ones((xs.size, 1))
    tx = _cheb_t_table(inverse_map(grid.interval, xs), n)
    ref = _reference_table(n)
    return (1.0 + 2.0 * (tx[:, 1:] @ ref[:, 1:].T)) / n


def s_vector(grid: ChebGrid, x: float) -> np.ndarray:
    """Cardinal interpolation row (S_n(eta_1, x), ..., S_n(eta_n, x))."""
    return s_matrix(grid, [x])[0]


def interpolate_1d(grid: ChebGrid, fvals, x: float) -> float:
    """Value at x of the polynomial interpolating fvals at the grid nodes."""
    fvals = np.asarray(fvals, dtype=float)
    if fvals.shape != (grid.n,):
        raise ValueError(f"expected {grid.n} node values, got shape {fvals.shape}")
    return float(s_vector(grid, x) @ fvals)


def subsample_indices(n: int, levels: int) -> IndexSet:
    """1-based indices of the n-point grid that form the (n/3^levels)-point grid.

    First-kind nodes are nested by factors of three: eta_k on an n-point grid
    equals eta_{3k-1} on a 3n-point grid.  Iterating gives the index formula
    j_k = 3^l * k - (3^l - 1)/2 for l levels.  Requires 3^levels | n.
    """
    if levels < 1:
        raise ValueError("levels must be >= 1")
    step = 3**levels
    if n % step:
        raise ValueError(f"n={n} is not divisible by 3^{levels}={step}")
    k = np.arange(1, n // step + 1)
    indices = step * k - (step - 1) // 2
    return IndexSet(tuple(int(i) for i in indices), n)


def lebesgue_estimate(grid: ChebGrid, sample_count: int) -> float:
    """Max over a uniform sample of sum_i |S_n(eta_i, x)|.

    A lower bound on the Lebesgue constant of the grid, which for
    first-kind Chebyshev nodes grows only like O(log n).
    """
    if sample_count < 2:
        raise ValueError("need at least two sample points")
    xs = np.linspace(grid.interval.lo, grid.interval.hi, sample_count)
    return float(np.abs(s_matrix(grid, xs)).sum(axis=1).max())
