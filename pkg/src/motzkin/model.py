"""Weight models and scaling parametrizations for random Motzkin paths.

A path of length L is weighted by a product of edge weights (``a`` for up
steps, ``b`` for horizontal, ``c`` for down, each indexed by the altitude at
the left end of the edge) times boundary weights ``alpha[first altitude] *
beta[last altitude]``.  The constant model with geometric boundary weights
``alpha_n = rho0**n``, ``beta_n = rho1**n`` is the default; arbitrary
altitude-dependent sequences are accepted through callables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

from .errors import InvalidParamsError

Number = Union[int, float]
WeightFn = Callable[[int], Number]


def _as_fn(spec, name: str) -> WeightFn:
    """Accept a constant, a sequence, or a callable as an altitude map."""
    if callable(spec):
        return spec
    if isinstance(spec, Sequence) and not isinstance(spec, (str, bytes)):
        seq = list(spec)

        def from_seq(n, _seq=seq, _name=name):
            if n >= len(_seq):
                raise InvalidParamsError(f"{_name} sequence too short for altitude {n}")
            return _seq[n]

        return from_seq
    return lambda n, _v=spec: _v


@dataclass(frozen=True)
class WeightModel:
    """Edge weights (a, b, c) and boundary weights (alpha, beta) as altitude maps.

    ``a(n)`` weighs the up step from altitude n, ``b(n)`` the horizontal step
    at n, ``c(n)`` the down step from n (queried for n >= 1 only).  The
    geometric fields are populated by :meth:`geometric` and enable certified
    truncation bounds; they are ``None`` for general models.
    """

    a: WeightFn
    b: WeightFn
    c: WeightFn
    alpha: WeightFn
    beta: WeightFn
    sigma: Optional[Number] = None
    rho0: Optional[Number] = None
    rho1: Optional[Number] = None

    @classmethod
    def geometric(cls, sigma: Number, rho0: Number, rho1: Number) -> "WeightModel":
        """Constant step weights a=c=1, b=sigma with alpha_n=rho0^n, beta_n=rho1^n.

        Exact (rational) arithmetic is preserved when sigma, rho0, rho1 are
        `fractions.Fraction` or int.
        """
        if sigma <= 0:
            raise InvalidParamsError("sigma must be > 0")
        if rho0 <= 0 or rho1 <= 0 or rho0 * rho1 >= 1:
            raise InvalidParamsError("need rho0, rho1 > 0 with rho0*rho1 < 1")
        one = sigma / sigma  # 1 in the same numeric type
        return cls(
            a=lambda n: one,
            b=lambda n: sigma,
            c=lambda n: one,
            alpha=lambda n: rho0**n,
            beta=lambda n: rho1**n,
            sigma=sigma,
            rho0=rho0,
            rho1=rho1,
        )

    @classmethod
    def delta_boundary(cls, sigma: Number = 1) -> "WeightModel":
        """Constant step weights with point-mass boundaries at altitude zero."""
        if sigma <= 0:
            raise InvalidParamsError("sigma must be > 0")
        one = sigma / sigma
        zero = sigma - sigma
        delta0 = lambda n: one if n == 0 else zero
        return cls(a=lambda n: one, b=lambda n: sigma, c=lambda n: one,
                   alpha=delta0, beta=delta0, sigma=sigma)

    @classmethod
    def general(cls, a=1, b=1, c=1, alpha=None, beta=None) -> "WeightModel":
        """Build from constants, sequences, or callables; default boundary is delta_0."""
        one_if_zero = lambda n: 1 if n == 0 else 0
        return cls(
            a=_as_fn(a, "a"),
            b=_as_fn(b, "b"),
            c=_as_fn(c, "c"),
            alpha=_as_fn(alpha, "alpha") if alpha is not None else one_if_zero,
            beta=_as_fn(beta, "beta") if beta is not None else one_if_zero,
        )

    @property
    def is_geometric(self) -> bool:
        return self.rho0 is not None and self.rho1 is not None

    def row_sum_bound(self) -> float:
        """Upper bound on a(n)+b(n)+c(n); only available for geometric models."""
        if self.sigma is None:
            raise InvalidParamsError("row sum bound requires the constant-weight model")
        return 2 + self.sigma


@dataclass(frozen=True)
class ModelParams:
    """Scaling parametrization: boundary decay rates tied to sqrt(L).

    ``boundary_form='linear'`` sets rho0 = 1 - c_bnd/sqrt(L) and
    rho1 = 1 - a_bnd/sqrt(L); ``'exponential'`` uses exp(-c_bnd/sqrt(L)) and
    exp(-a_bnd/sqrt(L)).  Requires sigma > 0 and a_bnd + c_bnd > 0, plus
    rho0*rho1 in (0,1) at the given L (validated numerically here rather than
    via an a-priori threshold on L).
    """

    sigma: float
    L: int
    a_bnd: float
    c_bnd: float
    boundary_form: str = "linear"

    def __post_init__(self):
        if self.sigma <= 0:
            raise InvalidParamsError("sigma must be > 0")
        if self.L < 1:
            raise InvalidParamsError("L must be a positive integer")
        if self.a_bnd + self.c_bnd <= 0:
            raise InvalidParamsError("need a_bnd + c_bnd > 0")
        if self.boundary_form not in ("linear", "exponential"):
            raise InvalidParamsError(f"unknown boundary_form {self.boundary_form!r}")
        r0, r1 = self.rho0, self.rho1
        if r0 <= 0 or r1 <= 0 or not (0 < r0 * r1 < 1):
            raise InvalidParamsError(
                f"boundary weights invalid at L={self.L}: rho0={r0:.6g}, rho1={r1:.6g}, "
                f"rho0*rho1={r0 * r1:.6g} must lie in (0,1)"
            )

    @property
    def rho0(self) -> float:
        s = self.c_bnd / math.sqrt(self.L)
        return 1.0 - s if self.boundary_form == "linear" else math.exp(-s)

    @property
    def rho1(self) -> float:
        s = self.a_bnd / math.sqrt(self.L)
        return 1.0 - s if self.boundary_form == "linear" else math.exp(-s)

    @property
    def a_prime(self) -> float:
        return 2 * self.a_bnd / math.sqrt(2 + self.sigma)

    @property
    def c_prime(self) -> float:
        return 2 * self.c_bnd / math.sqrt(2 + self.sigma)

    def weight_model(self) -> WeightModel:
        return WeightModel.geometric(self.sigma, self.rho0, self.rho1)

    def with_length(self, L: int) -> "ModelParams":
        return ModelParams(self.sigma, L, self.a_bnd, self.c_bnd, self.boundary_form)
