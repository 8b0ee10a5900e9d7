"""Quadrature helpers: Gauss-Legendre grids and chain (transfer-matrix) integrals.

Multidimensional integrals in this package all have a chain structure
f_1(x_1) K_1(x_1,x_2) f_2(x_2) ... K_{m-1}(x_{m-1},x_m) f_m(x_m); they are
evaluated as matrix-vector products over per-coordinate Gauss-Legendre grids,
with the error estimated by re-running at a higher order.  One-dimensional
(semi-)infinite integrals go through scipy's adaptive Gauss-Kronrod rules.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import QuadratureNotConvergedError

__all__ = ["gauss_legendre", "chain_value", "with_refinement"]


@lru_cache(maxsize=64)
def _leggauss(n: int):
    return np.polynomial.legendre.leggauss(n)


def gauss_legendre(n: int, a: float, b: float) -> Tuple[np.ndarray, np.ndarray]:
    """n-point Gauss-Legendre nodes and weights on [a, b]."""
    x, w = _leggauss(n)
    return 0.5 * (b - a) * x + 0.5 * (a + b), 0.5 * (b - a) * w


def chain_value(
    node_weights: Sequence[np.ndarray],
    kernels: Sequence[Optional[np.ndarray]],
) -> float:
    """Fold a chain integral: sum over grids of prod(node factors) * prod(kernels).

    node_weights[i] already contains quadrature weights; kernels[i] couples
    coordinate i to i+1 (len(kernels) == len(node_weights) - 1).
    """
    v = np.array(node_weights[0], dtype=float)
    for K, w in zip(kernels, node_weights[1:]):
        v = (v @ K) * w
    return float(v.sum())


def with_refinement(
    build: Callable[[int], float],
    order: int,
    tol: float,
    what: str = "chain quadrature",
) -> Tuple[float, float]:
    """Evaluate build(order), refine until two successive orders agree within tol.

    Returns (value, error_estimate); raises QuadratureNotConvergedError if the
    estimate is still above tol after a few refinements.
    """
    prev = build(order)
    for _ in range(3):
        order = int(order * 1.5) + 1
        cur = build(order)
        err = abs(cur - prev)
        if err <= tol * max(1.0, abs(cur)):
            return cur, err
        prev = cur
    raise QuadratureNotConvergedError(
        f"{what}: error estimate {err:.3g} above tol {tol:.3g} at order {order}"
    )
