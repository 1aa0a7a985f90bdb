"""Run reports and their table / json-lines / csv renderings."""
from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass, field
from typing import Any, Literal, Mapping, Optional, Union

from .linalg import Observable
from .scenarios.model import BoundReport, Scenario
from .tension import heisenberg_picture, tension_degree

DEFAULT_REPORT_TOL = 1e-9
SIG_DIGITS = 12
# Values this small are reported as exact zeros so golden files stay stable.
SNAP_ZERO = 1e-12

Format = Literal["table", "json-lines", "csv"]
Extra = Union[bool, int, float, str]


def report_tolerance() -> float:
    raw = os.environ.get("TENSIONLAB_TOL")
    if raw is None or raw == "":
        return DEFAULT_REPORT_TOL
    tol = float(raw)
    if not math.isfinite(tol) or tol < 0:
        raise ValueError(f"TENSIONLAB_TOL must be a nonnegative number, got {raw!r}")
    return tol


def canonical_number(x: Optional[float]) -> Optional[float]:
    if x is None:
        return None
    x = float(x)
    if abs(x) < SNAP_ZERO:
        return 0.0
    return float(format(x, f".{SIG_DIGITS}g"))


def _canonical_extra(v: Extra) -> Extra:
    if isinstance(v, bool) or isinstance(v, (int, str)):
        return v
    return canonical_number(v)


@dataclass(frozen=True)
class RunReport:
    """Outcome of one scenario or demo run.

    Numbers are stored rounded to 12 significant digits so that the
    machine formats round-trip exactly.  ``timing`` is wall-clock seconds;
    it is shown in tables only and ignored by equality.
    """

    scenario: str
    quantum_value: Optional[float]
    classical_bound: Optional[float]
    lp_verdict: str
    violation: bool
    tension: tuple[tuple[str, float], ...] = ()
    extras: Mapping[str, Extra] = field(default_factory=dict)
    timing: float = field(default=0.0, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "quantum_value", canonical_number(self.quantum_value))
        object.__setattr__(self, "classical_bound", canonical_number(self.classical_bound))
        object.__setattr__(
            self, "tension", tuple((str(p), canonical_number(d)) for p, d in self.tension)
        )
        object.__setattr__(
            self, "extras", {k: _canonical_extra(v) for k, v in sorted(self.extras.items())}
        )
        if self.lp_verdict not in ("FEASIBLE", "INFEASIBLE", "N/A"):
            raise ValueError(f"unknown lp verdict {self.lp_verdict!r}")

    def to_dict(self) -> dict[str, Any]:
        return {
            "scenario": self.scenario,
            "quantum_value": self.quantum_value,
            "classical_bound": self.classical_bound,
            "lp_verdict": self.lp_verdict,
            "violation": self.violation,
            "tension": [{"pair": p, "degree": d} for p, d in self.tension],
            "extras": dict(self.extras),
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "RunReport":
        return cls(
            scenario=d["scenario"],
            quantum_value=d["quantum_value"],
            classical_bound=d["classical_bound"],
            lp_verdict=d["lp_verdict"],
            violation=d["violation"],
            tension=tuple((t["pair"], t["degree"]) for t in d["tension"]),
            extras=d["extras"],
        )


def tension_table(s: Scenario) -> tuple[tuple[str, float], ...]:
    """Commutator norm for every observable pair, in declaration order.

    Temporal scenarios compare Heisenberg-picture observables, i.e. each
    step's observable transported back through the evolution before it.
    """
    obs: dict[str, Observable] = dict(s.observables)
    if s.temporal:
        u_total = None
        for name, u in s.temporal_sequence:
            if u is not None:
                u_total = u if u_total is None else u @ u_total
            if u_total is not None:
                obs[name] = heisenberg_picture(s.observables[name], u_total)
    names = list(obs)
    rows = []
    for i in range(len(names)):
        for j in range(i + 1, len(names)):
            rows.append((f"{names[i]}|{names[j]}", tension_degree(obs[names[i]], obs[names[j]])))
    return tuple(rows)


def report_from_bounds(
    s: Scenario, b: BoundReport, extras: Optional[Mapping[str, Extra]] = None, timing: float = 0.0
) -> RunReport:
    return RunReport(
        scenario=s.name,
        quantum_value=b.quantum_value,
        classical_bound=b.classical_bound,
        lp_verdict="FEASIBLE" if b.lp_feasible else "INFEASIBLE",
        violation=b.violation,
        tension=tension_table(s),
        extras=extras or {},
        timing=timing,
    )


def format_number(x: Any) -> str:
    if x is None:
        return "-"
    if isinstance(x, bool):
        return "yes" if x else "no"
    if isinstance(x, float):
        return format(x, f".{SIG_DIGITS}g")
    return str(x)


def emit_report(r: RunReport, fmt: Format = "table") -> str:
    if fmt == "json-lines":
        return json.dumps(r.to_dict(), sort_keys=True, separators=(",", ":")) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["pair", "degree"])
        for pair, degree in r.tension:
            w.writerow([pair, format_number(degree)])
        return buf.getvalue()
    if fmt != "table":
        raise ValueError(f"unknown format {fmt!r}")
    lines = [
        f"scenario         {r.scenario}",
        f"quantum value    {format_number(r.quantum_value)}",
        f"classical bound  {format_number(r.classical_bound)}",
        f"joint dist. LP   {r.lp_verdict}",
        f"verdict          {'VIOLATION' if r.violation else 'within classical bound'}",
    ]
    if r.extras:
        lines.append("details")
        width = max(len(k) for k in r.extras)
        lines += [f"  {k:<{width}}  {format_number(v)}" for k, v in r.extras.items()]
    if r.tension:
        lines.append("tension (commutator norm)")
        width = max(len(p) for p, _ in r.tension)
        lines += [f"  {p:<{width}}  {format_number(d)}" for p, d in r.tension]
    lines.append(f"time             {r.timing:.3f} s")
    return "\n".join(lines) + "\n"


def parse_report(text: str) -> RunReport:
    """Inverse of the json-lines rendering (first non-empty line)."""
    line = next(ln for ln in text.splitlines() if ln.strip())
    return RunReport.from_dict(json.loads(line))
