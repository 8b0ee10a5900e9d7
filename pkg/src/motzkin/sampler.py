"""Exact path sampling and the reweighted-random-walk sampler.

Two independent routes to the same path measure:

* backward-table sampling: draw the first altitude from the exact marginal,
  then each step from its conditional given the backward partial sums;
* an i.i.d. {+1,0,-1} walk reweighted by the explicit Radon-Nikodym factor
  of the increment law (exponential boundary form).

Random streams are counter-based (Philox) and split per worker chunk, so a
fixed (seed, workers) pair reproduces the sample stream exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Tuple

import numpy as np

from .errors import InvalidParamsError
from .model import ModelParams
from .transfer import backward_rows, _tail_log

__all__ = [
    "BackwardTable",
    "build_backward_table",
    "sample_path",
    "sample_paths",
    "WalkSample",
    "sample_reweighted_walk",
    "sample_reweighted_walks",
    "increment_law_exact",
    "reweighted_increment_law_exact",
    "write_paths_csv",
    "write_paths_json",
]


@dataclass(frozen=True)
class BackwardTable:
    """Backward partial-sum table for exact sequential sampling.

    Row k holds h_k(n) = sum_j W_{n,j}^{(L-k)} beta_j up to a per-row scale
    factor exp(logscale[k]); altitudes above n_max are treated as absorbing
    zero and the discarded mass is certified below tail_eps relative error.
    """

    params: ModelParams
    n_max: int
    rows: np.ndarray       # (L+1, n_max+1), each row scaled to max 1
    logscale: np.ndarray   # (L+1,)
    tail_eps: float

    @property
    def L(self) -> int:
        return self.params.L

    def row(self, k: int) -> np.ndarray:
        """Unscaled row k; may overflow for long paths (use rows/logscale then)."""
        return self.rows[k] * math.exp(self.logscale[k])

    def log_partition(self) -> float:
        n = np.arange(self.n_max + 1)
        alpha = np.power(self.params.rho0, n)
        return self.logscale[0] + math.log(math.fsum(alpha * self.rows[0]))


def build_backward_table(params: ModelParams, eps: float = 1e-12) -> BackwardTable:
    """Build the sampling table with certified relative truncation error eps."""
    if eps <= 0:
        raise InvalidParamsError("eps must be > 0")
    sigma, L = params.sigma, params.L
    rho0, rho1 = params.rho0, params.rho1
    q = rho0 * rho1
    log_lb = max(L * math.log(sigma), L * math.log(rho1), (L % 2) * math.log(sigma))
    n_max = L + 8
    while _tail_log(n_max, L, sigma, rho0, rho1) > math.log(eps) + log_lb:
        n_max += max(8, int(math.ceil(math.log(10) / -math.log(q))))
    while True:
        rows, logscale = backward_rows(L, sigma, rho0, rho1, n_max)
        n = np.arange(n_max + 1)
        log_part = logscale[0] + math.log(math.fsum(np.power(rho0, n) * rows[0]))
        tail = math.exp(_tail_log(n_max, L, sigma, rho0, rho1) - log_part)
        if tail <= eps:
            return BackwardTable(params, n_max, rows, logscale, tail)
        n_max *= 2


def _start_cdf(table: BackwardTable) -> np.ndarray:
    n = np.arange(table.n_max + 1)
    p = np.power(table.params.rho0, n) * table.rows[0]
    cdf = np.cumsum(p)
    return cdf / cdf[-1]


def sample_paths(
    table: BackwardTable,
    M: int,
    seed: int,
    workers: int = 1,
) -> np.ndarray:
    """Draw M paths; returns an (M, L+1) int array of altitudes.

    The stream is split into `workers` Philox substreams in fixed order, so
    results are reproducible for a given (seed, workers) and independent of
    any execution parallelism.
    """
    if M < 0 or workers < 1:
        raise InvalidParamsError("need M >= 0 and workers >= 1")
    L = table.L
    out = np.empty((M, L + 1), dtype=np.int64)
    if M == 0:
        return out
    sigma = table.params.sigma
    cdf0 = _start_cdf(table)
    bounds = np.linspace(0, M, workers + 1).astype(int)
    streams = np.random.SeedSequence(seed).spawn(workers)
    for w in range(workers):
        lo, hi = bounds[w], bounds[w + 1]
        if hi == lo:
            continue
        rng = np.random.Generator(np.random.Philox(streams[w]))
        out[lo:hi] = _sample_chunk(table, hi - lo, rng, sigma, cdf0)
    return out


def _sample_chunk(table, m, rng, sigma, cdf0):
    L, n_max = table.L, table.n_max
    alt = np.searchsorted(cdf0, rng.random(m), side="left").astype(np.int64)
    chunk = np.empty((m, L + 1), dtype=np.int64)
    chunk[:, 0] = alt
    pad = np.zeros(1)
    for k in range(1, L + 1):
        h = np.concatenate((table.rows[k], pad))  # h[n_max+1] = 0
        p_up = h[alt + 1]
        p_hz = sigma * h[alt]
        p_dn = np.where(alt > 0, h[np.maximum(alt - 1, 0)], 0.0)
        tot = p_up + p_hz + p_dn
        u = rng.random(m) * tot
        step = np.where(u < p_up, 1, np.where(u < p_up + p_hz, 0, -1))
        alt = alt + step
        chunk[:, k] = alt
    return chunk


def sample_path(table: BackwardTable, rng_seed: int) -> np.ndarray:
    """Single exactly-distributed path as a length-(L+1) altitude array."""
    return sample_paths(table, 1, rng_seed)[0]


@dataclass(frozen=True)
class WalkSample:
    """An i.i.d.-increment walk together with its importance weight."""

    walk: np.ndarray
    importance_weight: float


def _require_exponential(params: ModelParams):
    if params.boundary_form != "exponential":
        raise InvalidParamsError(
            "the reweighted-walk sampler implements the exponential boundary form only"
        )


def sample_reweighted_walks(
    params: ModelParams,
    M: int,
    seed: int,
    workers: int = 1,
) -> Tuple[np.ndarray, np.ndarray]:
    """M i.i.d. {+1,0,-1} walks with importance weights for the increment law.

    Steps are +1/0/-1 with probabilities 1/(2+sigma), sigma/(2+sigma),
    1/(2+sigma); the weight is exp((a+c) min_k S_k / sqrt(L) - a S_L / sqrt(L)).
    Weighted averages of path functionals, normalized by the mean weight,
    estimate expectations under the exact increment law.
    """
    _require_exponential(params)
    if M < 0 or workers < 1:
        raise InvalidParamsError("need M >= 0 and workers >= 1")
    L, sigma = params.L, params.sigma
    walks = np.empty((M, L + 1), dtype=np.int64)
    weights = np.empty(M)
    if M == 0:
        return walks, weights
    p_move = 1.0 / (2 + sigma)
    bounds = np.linspace(0, M, workers + 1).astype(int)
    streams = np.random.SeedSequence(seed).spawn(workers)
    sqrtL = math.sqrt(L)
    a_bnd, c_bnd = params.a_bnd, params.c_bnd
    for w in range(workers):
        lo, hi = bounds[w], bounds[w + 1]
        if hi == lo:
            continue
        rng = np.random.Generator(np.random.Philox(streams[w]))
        u = rng.random((hi - lo, L))
        steps = np.where(u < p_move, 1, np.where(u < 2 * p_move, -1, 0))
        walks[lo:hi, 0] = 0
        np.cumsum(steps, axis=1, out=walks[lo:hi, 1:])
        mins = np.minimum(walks[lo:hi].min(axis=1), 0)
        weights[lo:hi] = np.exp(
            ((a_bnd + c_bnd) * mins - a_bnd * walks[lo:hi, -1]) / sqrtL
        )
    return walks, weights


def sample_reweighted_walk(params: ModelParams, rng_seed: int) -> WalkSample:
    walks, weights = sample_reweighted_walks(params, 1, rng_seed)
    return WalkSample(walks[0], float(weights[0]))


def _iter_step_seqs(L):
    """All step sequences in {+1,0,-1}^L with running minimum and #horizontal."""
    seq = []

    def rec(k, cur, mn, nh):
        if k == L:
            yield tuple(seq), mn, nh
            return
        for s in (1, 0, -1):
            seq.append(s)
            yield from rec(k + 1, cur + s, min(mn, cur + s), nh + (s == 0))
            seq.pop()

    yield from rec(0, 0, 0, 0)


def increment_law_exact(L: int, sigma, rho0, rho1) -> Dict[tuple, Fraction]:
    """Exact law of the step sequence (gamma_k - gamma_{k-1}) under the path measure.

    Sums the geometric starting-altitude series in closed form; exact for
    Fraction parameters.  Cost 3^L, intended for L <= 8 oracle checks.
    """
    if rho0 <= 0 or rho1 <= 0 or rho0 * rho1 >= 1:
        raise InvalidParamsError("need rho0, rho1 > 0 with rho0*rho1 < 1")
    q = rho0 * rho1
    law = {}
    for steps, mn, nh in _iter_step_seqs(L):
        end = sum(steps)
        # sum over starting altitudes g >= -mn of rho0^g rho1^(g+end) sigma^nh
        law[steps] = sigma**nh * rho1**end * q ** (-mn) / (1 - q)
    total = sum(law.values())
    return {s: v / total for s, v in law.items()}


def reweighted_increment_law_exact(L: int, sigma, rho0, rho1) -> Dict[tuple, Fraction]:
    """Law of the i.i.d. walk reweighted by the Radon-Nikodym factor.

    The walk law puts mass sigma^#horiz / (2+sigma)^L on each step sequence;
    the factor (rho0 rho1)^(-min) rho1^(end) is normalized by its mean.
    Agrees with increment_law_exact identically, in exact arithmetic.
    """
    weighted = {}
    for steps, mn, nh in _iter_step_seqs(L):
        walk_mass = sigma**nh / (2 + sigma) ** L
        rn = (rho0 * rho1) ** (-mn) * rho1 ** sum(steps)
        weighted[steps] = walk_mass * rn
    norm = sum(weighted.values())
    return {s: v / norm for s, v in weighted.items()}


def write_paths_csv(fp, paths: np.ndarray, meta: Optional[dict] = None):
    """One path per row, altitudes as columns; '#' lines carry provenance."""
    if meta:
        for key in sorted(meta):
            fp.write(f"# {key}={meta[key]}\n")
    L = paths.shape[1] - 1
    fp.write(",".join(f"g{k}" for k in range(L + 1)) + "\n")
    for row in paths:
        fp.write(",".join(str(int(v)) for v in row) + "\n")


def write_paths_json(fp, paths: np.ndarray, meta: Optional[dict] = None):
    doc = {
        "meta": dict(sorted((meta or {}).items())),
        "paths": [[int(v) for v in row] for row in paths],
    }
    json.dump(doc, fp, sort_keys=True, separators=(",", ":"))
    fp.write("\n")
