"""Closed-form limit kernels, special constants, and spectral measures.

Everything here is a pure evaluator: killed-Brownian-motion heat kernel,
the squared-radial Cauchy (Biane) kernel, semicircle process marginals and
transitions, their stationary time change, the shifted Marchenko-Pastur
measure, Chebyshev generating functions, and the boundary-tilt normalizing
constant evaluated through the scaled complementary error function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy import special

from .errors import InvalidGridError, InvalidParamsError, OutOfSupportError

__all__ = [
    "KernelParams",
    "killed_bm_kernel",
    "norm_const_ac",
    "eta_fdd_pdf",
    "biane_kernel",
    "semicircle_marginal",
    "semicircle_transition",
    "semicircle_kernels",
    "stationary_u_marginal",
    "stationary_u_transition",
    "stationary_U_kernels",
    "MixedMeasure",
    "mp_measure",
    "chebyshev_generating",
    "chebyshev_polynomials",
]

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class KernelParams:
    """Boundary-tilt rates (a, c) plus optional time/model parameters."""

    a: float
    c: float
    sigma: Optional[float] = None
    t: Optional[float] = None
    s: Optional[float] = None


def killed_bm_kernel(t: float, x, y):
    """Heat kernel of Brownian motion absorbed at zero.

    (2 pi t)^(-1/2) [exp(-(x-y)^2/2t) - exp(-(x+y)^2/2t)] for x, y > 0,
    zero otherwise.  Accepts scalars or arrays.
    """
    if t <= 0:
        raise InvalidParamsError("t must be > 0")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    z = 1.0 / math.sqrt(2 * math.pi * t)
    val = z * (np.exp(-((x - y) ** 2) / (2 * t)) - np.exp(-((x + y) ** 2) / (2 * t)))
    val = np.where((x > 0) & (y > 0), val, 0.0)
    return val if val.ndim else float(val)


def norm_const_ac(a: float, c: float) -> float:
    """Normalizing constant of the boundary-tilted killed-BM bridge density.

    Closed form in H(x) = exp(x^2) erfc(x); requires a + c > 0.  The
    symmetric branch is used when a and c nearly coincide, which avoids the
    cancellation in the (a^2 - c^2) denominator.
    """
    if a + c <= 0:
        raise InvalidParamsError("need a + c > 0")
    if abs(a - c) < 1e-8 * (1.0 + abs(a)):
        m = 0.5 * (a + c)
        return float((2 + m * m) / (2 * SQRT2 * m) * special.erfcx(m / 2)
                     - 1.0 / math.sqrt(2 * math.pi))
    num = a * special.erfcx(a / 2) - c * special.erfcx(c / 2)
    return float(SQRT2 * num / (a * a - c * c))


def eta_fdd_pdf(grid: Sequence[float], values: Sequence[float], kp: KernelParams):
    """Joint density of the limit height process at grid points.

    grid must be strictly increasing from 0 to 1; the density at positive
    values (y_0, ..., y_d) is exp(-(c y_0 + a y_d)/sqrt2) times the product
    of killed-BM kernels over consecutive grid gaps, normalized by
    norm_const_ac(a, c).  Zero whenever some y_k <= 0.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) < 2 or grid[0] != 0.0 or grid[-1] != 1.0:
        raise InvalidGridError("grid must run from 0 to 1")
    if np.any(np.diff(grid) <= 0):
        raise InvalidGridError("grid must be strictly increasing")
    y = np.asarray(values, dtype=float)
    if y.shape[-1] != len(grid):
        raise InvalidGridError("values must match the grid length")
    if np.any(y <= 0):
        return 0.0 if y.ndim == 1 else np.zeros(y.shape[:-1])
    dens = np.exp(-(kp.c * y[..., 0] + kp.a * y[..., -1]) / SQRT2)
    for k in range(1, len(grid)):
        dens = dens * killed_bm_kernel(grid[k] - grid[k - 1], y[..., k - 1], y[..., k])
    dens = dens / norm_const_ac(kp.a, kp.c)
    return float(dens) if np.ndim(dens) == 0 else dens


def biane_kernel(t: float, x, y):
    """Transition density (2/pi) t sqrt(y) / (t^4 + (y-x)^2 + 2(y+x) t^2) on R+."""
    if t <= 0:
        raise InvalidParamsError("t must be > 0")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    val = (2 / math.pi) * t * np.sqrt(np.maximum(y, 0.0)) / (
        t**4 + (y - x) ** 2 + 2 * (y + x) * t**2
    )
    val = np.where((x >= 0) & (y >= 0), val, 0.0)
    return val if val.ndim else float(val)


def semicircle_marginal(t: float, x):
    """Semicircle density sqrt(4t - x^2) / (2 pi t) on [-2 sqrt(t), 2 sqrt(t)]."""
    if t <= 0:
        raise InvalidParamsError("t must be > 0")
    x = np.asarray(x, dtype=float)
    inside = np.abs(x) <= 2 * math.sqrt(t)
    val = np.where(inside, np.sqrt(np.maximum(4 * t - x * x, 0.0)) / (2 * math.pi * t), 0.0)
    return val if val.ndim else float(val)


def semicircle_transition(s: float, t: float, x: float, y):
    """Transition density of the semicircle Markov process from time s to t.

    Requires 0 < s < t and a conditioning point with |x| <= 2 sqrt(s);
    returns 0 for y outside [-2 sqrt(t), 2 sqrt(t)].
    """
    if not 0 < s < t:
        raise InvalidParamsError("need 0 < s < t")
    if abs(x) > 2 * math.sqrt(s):
        raise OutOfSupportError(f"|x|={abs(x):.6g} outside [-2 sqrt(s), 2 sqrt(s)]")
    y = np.asarray(y, dtype=float)
    inside = np.abs(y) <= 2 * math.sqrt(t)
    num = (t - s) * np.sqrt(np.maximum(4 * t - y * y, 0.0))
    den = t * x * x + s * y * y - (s + t) * x * y + (t - s) ** 2
    val = np.where(inside, num / (2 * math.pi * den), 0.0)
    return val if val.ndim else float(val)


def semicircle_kernels(s: float, t: float, x: float, y: float) -> Tuple[float, float]:
    """(marginal at time t evaluated at y, transition s->t from x to y)."""
    return semicircle_marginal(t, y), semicircle_transition(s, t, x, y)


def stationary_u_marginal(y):
    """Stationary marginal: semicircle density on [-2, 2]."""
    return semicircle_marginal(1.0, y)


def stationary_u_transition(ds: float, y_from: float, y_to):
    """Transition density over a time gap ds of the stationary [-2,2] process."""
    if ds <= 0:
        raise InvalidParamsError("time gap must be > 0")
    if abs(y_from) > 2:
        raise OutOfSupportError("conditioning point outside [-2, 2]")
    y = np.asarray(y_to, dtype=float)
    inside = np.abs(y) <= 2
    num = np.sqrt(np.maximum(4 - y * y, 0.0)) * (math.exp(2 * ds) - 1)
    den = (
        -2 * y * y_from * math.cosh(ds)
        + 2 * math.cosh(2 * ds)
        + y * y
        + y_from * y_from
        - 2
    )
    val = np.where(inside, num / (2 * math.pi * den), 0.0)
    return val if val.ndim else float(val)


def stationary_U_kernels(ds: float, y: float, y_prev: float) -> Tuple[float, float]:
    """(stationary marginal at y, transition from y_prev to y over gap ds)."""
    return stationary_u_marginal(y), stationary_u_transition(ds, y_prev, y)


@dataclass(frozen=True)
class MixedMeasure:
    """Absolutely continuous part on (-2, 2) plus an optional atom."""

    rho: float
    atom_location: Optional[float]
    atom_mass: float

    def density(self, x):
        x = np.asarray(x, dtype=float)
        inside = np.abs(x) < 2
        num = np.sqrt(np.maximum(4 - x * x, 0.0))
        den = 1 - x * self.rho + self.rho**2
        val = np.where(inside, num / (2 * math.pi * den), 0.0)
        return val if val.ndim else float(val)


def mp_measure(rho: float) -> MixedMeasure:
    """Shifted Marchenko-Pastur measure: density plus atom at rho + 1/rho.

    The atom appears for rho > 1 with mass 1 - rho^(-2).
    """
    if rho <= 0:
        raise InvalidParamsError("rho must be > 0")
    mass = max(0.0, 1 - 1 / rho**2)
    loc = rho + 1 / rho if mass > 0 else None
    return MixedMeasure(rho, loc, mass)


def chebyshev_generating(x: float, z: float) -> float:
    """Generating function 1 / (1 - x z + z^2) for |z| < 1, x in [-2, 2]."""
    if abs(z) >= 1:
        raise InvalidParamsError("need |z| < 1")
    return 1.0 / (1 - x * z + z * z)


def chebyshev_polynomials(x: float, n: int) -> np.ndarray:
    """Values p_0(x), ..., p_n(x) of the rescaled Chebyshev-II family.

    Three-term recurrence x p_k = p_{k+1} + p_{k-1} with p_0 = 1, p_{-1} = 0;
    on [-2, 2] these satisfy |p_k(x)| <= k + 1.
    """
    if n < 0:
        raise InvalidParamsError("n must be >= 0")
    out = np.empty(n + 1)
    out[0] = 1.0
    if n >= 1:
        out[1] = x
    for k in range(1, n):
        out[k + 1] = x * out[k] - out[k - 1]
    return out
