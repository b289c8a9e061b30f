"""Built-in test functions for the experiment drivers.

All functions take an (m, N) array of points and return (m,) values.
"""

from __future__ import annotations

import numpy as np

from .chebyshev import Interval
from .funapprox import Domain

__all__ = ["runge3", "sine_mix", "tanh_ridge", "otl_circuit", "BUILTIN"]


def runge3(points):
    """Three-dimensional Runge function 1 / (1 + 25 (x^2 + y^2 + z^2))."""
    points = np.asarray(points, dtype=float)
    return 1.0 / (1.0 + 25.0 * np.sum(points**2, axis=1))


def sine_mix(points):
    """sin(x + y z): smooth with rapidly decaying multilinear ranks."""
    points = np.asarray(points, dtype=float)
    return np.sin(points[:, 0] + points[:, 1] * points[:, 2])


def tanh_ridge(points):
    """tanh(3 (x + y + z)): a steep ridge along the diagonal."""
    points = np.asarray(points, dtype=float)
    return np.tanh(3.0 * np.sum(points, axis=1))


def otl_circuit(points):
    """Midpoint voltage of the OTL push-pull circuit.

    Inputs (in order): resistances R_b1 in [50, 150], R_b2 in [25, 70],
    R_f in [0.5, 3], R_c1 in [1.2, 2.5], R_c2 in [0.25, 1.2], and the
    current gain beta in [50, 300]; a standard six-variable screening
    benchmark.
    """
    p = np.asarray(points, dtype=float)
    rb1, rb2, rf, rc1, rc2, beta = (p[:, k] for k in range(6))
    vb1 = 12.0 * rb2 / (rb1 + rb2)
    bden = beta * (rc2 + 9.0) + rf
    term1 = (vb1 + 0.74) * beta * (rc2 + 9.0) / bden
    term2 = 11.35 * rf / bden
    term3 = 0.74 * rf * beta * (rc2 + 9.0) / (bden * rc1)
    return term1 + term2 + term3


_CUBE3 = Domain((Interval(-1.0, 1.0),) * 3)

OTL_DOMAIN = Domain(
    (
        Interval(50.0, 150.0),
        Interval(25.0, 70.0),
        Interval(0.5, 3.0),
        Interval(1.2, 2.5),
        Interval(0.25, 1.2),
        Interval(50.0, 300.0),
    )
)

BUILTIN: dict[str, tuple] = {
    "f1": (runge3, _CUBE3),
    "f2": (sine_mix, _CUBE3),
    "f3": (tanh_ridge, _CUBE3),
    "otl": (otl_circuit, OTL_DOMAIN),
}
