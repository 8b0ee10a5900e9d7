"""Transfer-operator dynamic programming: weighted path counts and partition sums.

The altitude-indexed recursion runs in plain Python so that exact rational
weights (``fractions.Fraction``) flow through unchanged; the partition-sum
routines for the geometric model use numpy rows with per-row rescaling so that
quantities on the (2+sigma)^L scale never overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import InvalidParamsError, TruncationInsufficientError
from .model import ModelParams, WeightModel
from .paths import ENUMERATION_CAP

__all__ = [
    "transfer_count",
    "partition_function",
    "partition_function_exact",
    "matrix_ansatz_eval",
    "PartitionResult",
    "backward_rows",
]


def transfer_count(L: int, i: int, j: int, w: WeightModel):
    """Total weight of all Motzkin paths of length L from altitude i to j.

    Forward DP over altitudes; exact when the weight maps return exact
    numbers, float otherwise.
    """
    if L < 0 or i < 0 or j < 0:
        raise InvalidParamsError("L, i, j must be nonnegative")
    if abs(i - j) > L:
        return 0
    top = i + L  # highest altitude reachable from i
    v = [0] * (top + 2)
    v[i] = 1
    for _ in range(L):
        nxt = [0] * (top + 2)
        for n in range(top + 1):
            x = v[n]
            if x == 0:
                continue
            nxt[n + 1] = nxt[n + 1] + x * w.a(n)
            b = x * w.b(n)
            if b:
                nxt[n] = nxt[n] + b
            if n > 0:
                nxt[n - 1] = nxt[n - 1] + x * w.c(n)
        v = nxt
    return v[j]


def _tail_log(N: int, L: int, sigma: float, rho0: float, rho1: float,
              log_step_bound: Optional[float] = None) -> float:
    """log of the certified absolute tail for truncation at altitude N.

    Bounds the total weight of paths that ever exceed altitude N: such a
    path starts at i > N - L, its edge weight is at most (row-sum bound)^L,
    and beta decays like rho1^i up to a max(rho1, 1/rho1)^L endpoint swing.
    """
    q = rho0 * rho1
    if log_step_bound is None:
        log_step_bound = L * math.log(2 + sigma)
    return (
        log_step_bound
        + L * abs(math.log(rho1))
        + max(N + 1 - L, 0) * math.log(q)
        - math.log1p(-q)
    )


def backward_rows(L: int, sigma: float, rho0: float, rho1: float, n_max: int):
    """Normalized backward partial-sum rows for the geometric model.

    Returns (H, logscale) where row k of H is proportional to
    h_k(n) = sum_j W_{n,j}^{(L-k)} beta_j truncated at altitude n_max
    (absorbing-zero above), and exp(logscale[k]) recovers the true scale.
    """
    n = np.arange(n_max + 1)
    H = np.empty((L + 1, n_max + 1))
    logscale = np.empty(L + 1)
    row = np.power(float(rho1), n)
    m = row.max()
    H[L] = row / m
    logscale[L] = math.log(m)
    for k in range(L, 0, -1):
        r = H[k]
        prev = sigma * r
        prev[:-1] += r[1:]
        prev[1:] += r[:-1]
        m = prev.max()
        H[k - 1] = prev / m
        logscale[k - 1] = logscale[k] + math.log(m)
    return H, logscale


@dataclass(frozen=True)
class PartitionResult:
    """Partition sum with a certified relative truncation tail."""

    log_value: float
    tail_bound: float
    n_max: int

    @property
    def value(self) -> float:
        return math.exp(self.log_value)

    def __iter__(self):
        yield self.value
        yield self.tail_bound


def partition_function(params: ModelParams, eps: float = 1e-12) -> PartitionResult:
    """Normalizing constant of the path measure, by backward DP.

    The altitude cut n_max is chosen so the certified tail is below
    eps relative to the computed sum.  log_value is exact to DP rounding;
    .value may overflow to inf for very long paths (use log_value there).
    """
    if eps <= 0:
        raise InvalidParamsError("eps must be > 0")
    sigma, L = params.sigma, params.L
    rho0, rho1 = params.rho0, params.rho1
    # crude lower bound on the partition sum, from single paths
    log_lb = max(L * math.log(sigma), L * math.log(rho1),
                 (L % 2) * math.log(sigma))
    q = rho0 * rho1
    n_max = L + 8
    while _tail_log(n_max, L, sigma, rho0, rho1) > math.log(eps) + log_lb:
        n_max += max(8, int(math.ceil(math.log(10) / -math.log(q))))
    for _ in range(64):
        H, logscale = backward_rows(L, sigma, rho0, rho1, n_max)
        n = np.arange(n_max + 1)
        alpha = np.exp(n * math.log(rho0))
        total = math.fsum(alpha * H[0])
        log_value = logscale[0] + math.log(total)
        tail = math.exp(_tail_log(n_max, L, sigma, rho0, rho1) - log_value)
        if tail <= eps:
            return PartitionResult(log_value, tail, n_max)
        n_max *= 2
    raise TruncationInsufficientError("certified tail did not reach eps")


def partition_function_exact(L: int, sigma, rho0, rho1, cap: int = ENUMERATION_CAP):
    """Exact partition sum for rational parameters, via step-sequence recursion.

    Marginalizes the starting altitude of each increment sequence with the
    geometric series sum_{g >= -min} (rho0 rho1)^g in closed form, so the
    result is an exact Fraction when the inputs are.  Cost 3^L.
    """
    if L > cap:
        raise InvalidParamsError(f"L={L} exceeds exact-mode cap {cap}")
    if rho0 <= 0 or rho1 <= 0 or rho0 * rho1 >= 1:
        raise InvalidParamsError("need rho0, rho1 > 0 with rho0*rho1 < 1")
    q = rho0 * rho1
    total = 0

    def rec(k, cur, mn, weight):
        nonlocal total
        if k == L:
            total = total + weight * rho1**cur * q ** (-mn)
            return
        rec(k + 1, cur + 1, mn, weight)
        rec(k + 1, cur, mn, weight * sigma)
        rec(k + 1, cur - 1, min(mn, cur - 1), weight)

    rec(0, 0, 0, 1)
    return total / (1 - q)


def matrix_ansatz_eval(
    L: int,
    s: Sequence[float],
    t: Sequence[float],
    u: Sequence[float],
    z0: float,
    z1: float,
    w: WeightModel,
    N: Optional[int] = None,
    tol: float = 1e-10,
):
    """Boundary-vector product through L tridiagonal transfer matrices.

    Evaluates <W_alpha(z0)| prod_k (s_k A + t_k C + u_k B) |V_beta(z1)> with
    the matrices truncated to altitudes 0..N.  For the geometric model N is
    chosen automatically from a certified geometric tail; pass N explicitly
    for other models (no certification then).
    """
    if len(s) != L or len(t) != L or len(u) != L:
        raise InvalidParamsError("s, t, u must each have length L")
    if not (0 < z0 <= 1 and 0 < z1 <= 1):
        raise InvalidParamsError("z0, z1 must lie in (0, 1]")
    geometric = w.is_geometric
    if N is None:
        if not geometric:
            raise InvalidParamsError("automatic truncation needs a geometric model")
        log_step = math.fsum(
            math.log(sk + w.sigma * uk + tk) for sk, tk, uk in zip(s, t, u)
        )
        r0, r1 = w.rho0 * z0, w.rho1 * z1
        lb = min(0.0, log_step)  # crude: the value is at least min(1, prod of row sums)-ish
        N = L + 8
        while (
            _tail_log(N, L, 0.0, r0, r1, log_step_bound=log_step)
            > math.log(tol) + lb
        ):
            N += 8
    ns = np.arange(N + 1)
    a = np.array([float(w.a(int(n))) for n in ns])
    b = np.array([float(w.b(int(n))) for n in ns])
    c = np.array([float(w.c(int(n))) for n in ns[1:]])
    with np.errstate(over="ignore"):
        v = np.array([float(w.alpha(int(n))) for n in ns]) * np.power(float(z0), ns)
    logscale = 0.0
    for k in range(L):
        nxt = u[k] * b * v
        nxt[1:] += s[k] * a[:-1] * v[:-1]
        nxt[:-1] += t[k] * c * v[1:]
        m = np.abs(nxt).max()
        if m == 0:
            return 0.0
        logscale += math.log(m)
        v = nxt / m
    beta = np.array([float(w.beta(int(n))) for n in ns]) * np.power(float(z1), ns)
    value = math.fsum(v * beta)
    if geometric and value > 0:
        log_step = math.fsum(
            math.log(sk + w.sigma * uk + tk) for sk, tk, uk in zip(s, t, u)
        )
        tail = math.exp(
            _tail_log(N, L, 0.0, w.rho0 * z0, w.rho1 * z1, log_step_bound=log_step)
            - logscale - math.log(value)
        )
        if tail > tol:
            raise TruncationInsufficientError(
                f"certified tail {tail:.3g} exceeds tol {tol:.3g}; increase N"
            )
    return value * math.exp(logscale)
