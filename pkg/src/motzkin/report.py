"""Comparison reports: rows of empirical-vs-limit checks with error budgets.

Serialization is deterministic (sorted keys, repr floats, no timestamps) so
that identical runs produce byte-identical files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import List, Optional

SCHEMA_VERSION = 1

CSV_HEADER = "L,statistic,value,stderr,limit,gap_over_err,verdict"


@dataclass(frozen=True)
class ReportRow:
    """One comparison: an estimate, its error budget, and a reference value.

    For Monte Carlo rows stderr is the standard error of the estimate; for
    deterministic (quadrature-only) rows it carries the tolerance.  The
    verdict is pass iff |value - limit| <= k * stderr + tol.
    """

    statistic: str
    value: float
    stderr: float
    limit: float
    L: Optional[int] = None
    k: float = 3.0
    tol: float = 0.0
    error: Optional[str] = None

    @property
    def gap(self) -> float:
        return abs(self.value - self.limit)

    @property
    def gap_over_err(self) -> float:
        return self.gap / self.stderr if self.stderr > 0 else float("inf")

    @property
    def verdict(self) -> str:
        if self.error is not None:
            return f"fail:{self.error}"
        return "pass" if self.gap <= self.k * self.stderr + self.tol else "fail"


@dataclass
class ConvergenceReport:
    """A batch of comparison rows plus provenance metadata."""

    meta: dict = field(default_factory=dict)
    rows: List[ReportRow] = field(default_factory=list)

    def add(self, **kw) -> ReportRow:
        row = ReportRow(**kw)
        self.rows.append(row)
        return row

    @property
    def all_pass(self) -> bool:
        return all(r.verdict == "pass" for r in self.rows)

    @property
    def n_failed(self) -> int:
        return sum(r.verdict != "pass" for r in self.rows)

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "meta": dict(sorted(self.meta.items())),
            "rows": [
                {
                    "L": r.L,
                    "statistic": r.statistic,
                    "value": repr(r.value),
                    "stderr": repr(r.stderr),
                    "limit": repr(r.limit),
                    "gap_over_err": repr(r.gap_over_err),
                    "verdict": r.verdict,
                }
                for r in self.rows
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":")) + "\n"

    def to_csv(self) -> str:
        lines = [f"# schema_version={SCHEMA_VERSION}"]
        for key in sorted(self.meta):
            lines.append(f"# {key}={self.meta[key]}")
        lines.append(CSV_HEADER)
        for r in self.rows:
            lines.append(
                f"{'' if r.L is None else r.L},{r.statistic},{r.value!r},"
                f"{r.stderr!r},{r.limit!r},{r.gap_over_err!r},{r.verdict}"
            )
        return "\n".join(lines) + "\n"

    def to_gnuplot(self, x_field: str = "L", y_field: str = "gap") -> str:
        """Two-column data file (x, y) for plotting convergence curves."""
        lines = [f"# {x_field} {y_field}"]
        for r in self.rows:
            x = getattr(r, x_field) if x_field != "L" else r.L
            y = getattr(r, y_field)
            if x is None:
                continue
            lines.append(f"{x} {y!r}")
        return "\n".join(lines) + "\n"

    def summary(self) -> str:
        lines = []
        for r in self.rows:
            tag = f"L={r.L} " if r.L is not None else ""
            lines.append(
                f"[{r.verdict.upper():4s}] {tag}{r.statistic}: value={r.value:.8g} "
                f"limit={r.limit:.8g} gap/err={r.gap_over_err:.3g}"
            )
        lines.append(
            f"{len(self.rows) - self.n_failed}/{len(self.rows)} rows pass"
        )
        return "\n".join(lines)
