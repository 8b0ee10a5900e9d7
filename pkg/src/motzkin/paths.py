"""Motzkin path objects: validation, step statistics, weights, enumeration."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, List, Sequence, Tuple

from .errors import CapExceededError, NegativeAltitudeError, StepTooLargeError
from .model import WeightModel

ENUMERATION_CAP = 12  # 3**12 raw step sequences keeps brute force under a second


@dataclass(frozen=True)
class MotzkinPath:
    """A nonnegative lattice path with steps in {+1, 0, -1}.

    ``altitudes`` has length L+1 for a path of length L; L = 0 (a single
    point) is allowed.
    """

    altitudes: Tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.altitudes) - 1

    @property
    def steps(self) -> Tuple[int, ...]:
        a = self.altitudes
        return tuple(a[k] - a[k - 1] for k in range(1, len(a)))

    def indicators(self) -> Tuple[Tuple[int, int, int], ...]:
        """Per-step (up, horizontal, down) indicator triples; they sum to 1."""
        return tuple(
            (1 if s > 0 else 0, 1 if s == 0 else 0, 1 if s < 0 else 0)
            for s in self.steps
        )


def validate_path(altitudes: Sequence[int]) -> MotzkinPath:
    """Check nonnegativity and unit step bounds, returning a MotzkinPath.

    Raises NegativeAltitudeError or StepTooLargeError on the first violation.
    """
    alts = tuple(int(a) for a in altitudes)
    if not alts:
        raise StepTooLargeError("altitude sequence must be nonempty")
    for k, a in enumerate(alts):
        if a < 0:
            raise NegativeAltitudeError(f"altitude {a} at position {k}")
        if k and abs(a - alts[k - 1]) > 1:
            raise StepTooLargeError(
                f"step {a - alts[k - 1]:+d} at position {k} exceeds unit size"
            )
    return MotzkinPath(alts)


@dataclass(frozen=True)
class StepCounts:
    """Cumulative up/horizontal/down step counts of a path.

    ``up(x)`` etc. count steps up to position floor(L*x) for x in [0, 1];
    integer positions can be queried via ``at(k)``.
    """

    cum_up: Tuple[int, ...]
    cum_horiz: Tuple[int, ...]
    cum_down: Tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.cum_up) - 1

    def at(self, k: int) -> Tuple[int, int, int]:
        return self.cum_up[k], self.cum_horiz[k], self.cum_down[k]

    def _pos(self, x: float) -> int:
        if not 0 <= x <= 1:
            raise ValueError("x must lie in [0, 1]")
        return math.floor(self.length * x)

    def up(self, x: float) -> int:
        return self.cum_up[self._pos(x)]

    def horiz(self, x: float) -> int:
        return self.cum_horiz[self._pos(x)]

    def down(self, x: float) -> int:
        return self.cum_down[self._pos(x)]


def step_counts(path: MotzkinPath) -> StepCounts:
    u = h = d = 0
    cu, ch, cd = [0], [0], [0]
    for s in path.steps:
        u += s > 0
        h += s == 0
        d += s < 0
        cu.append(u)
        ch.append(h)
        cd.append(d)
    return StepCounts(tuple(cu), tuple(ch), tuple(cd))


def path_weight(path: MotzkinPath, w: WeightModel):
    """Product of edge weights along the path; boundary factors not included."""
    total = 1
    alts = path.altitudes
    for k in range(1, len(alts)):
        n = alts[k - 1]
        s = alts[k] - n
        if s > 0:
            total = total * w.a(n)
        elif s == 0:
            total = total * w.b(n)
        else:
            total = total * w.c(n)
    return total


def boundary_weight(path: MotzkinPath, w: WeightModel):
    """alpha at the first altitude times beta at the last."""
    return w.alpha(path.altitudes[0]) * w.beta(path.altitudes[-1])


def iter_paths(L: int, i: int, j: int) -> Iterator[MotzkinPath]:
    """Yield all Motzkin paths of length L from altitude i to j, lexicographically.

    Lexicographic order is on the altitude sequences.  No cap is enforced
    here; see enumerate_paths for the public capped entry point.
    """
    if i < 0 or j < 0:
        return
    prefix = [i]

    def rec(k: int):
        cur = prefix[-1]
        if k == L:
            if cur == j:
                yield MotzkinPath(tuple(prefix))
            return
        # remaining steps must be able to reach j
        for s in (-1, 0, 1):
            nxt = cur + s
            if nxt < 0 or abs(nxt - j) > L - k - 1:
                continue
            prefix.append(nxt)
            yield from rec(k + 1)
            prefix.pop()

    yield from rec(0)


def enumerate_paths(L: int, i: int, j: int, cap: int = ENUMERATION_CAP) -> List[MotzkinPath]:
    """All paths in the (L, i, j) family, lexicographically ordered.

    Raises CapExceededError when L > cap (default 12) to bound the 3**L blowup.
    """
    if L < 0:
        raise CapExceededError("L must be nonnegative")
    if L > cap:
        raise CapExceededError(f"L={L} exceeds enumeration cap {cap}")
    if L == 0:
        return [MotzkinPath((i,))] if i == j and i >= 0 else []
    return list(iter_paths(L, i, j))
