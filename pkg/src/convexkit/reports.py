"""Report records and the gap aggregation shared by all checkers."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

ATOL = 1e-9
RTOL = 1e-9


@dataclass(frozen=True)
class InequalityReport:
    """Outcome of checking one inequality over one or many configurations.

    Gaps are oriented so that gap >= 0 means the inequality holds. When
    every point passes, ``min_gap`` is the smallest gap; otherwise it is the
    gap at the point that violates its own tolerance the most. ``max_gap``
    is the gap at the point where gap / tolerance is largest, so an equality
    case holds iff ``-tolerance <= min_gap`` and ``max_gap <= max_gap_tolerance``.
    """

    name: str
    checks_run: int
    min_gap: float
    witness: tuple
    tolerance: float
    passed: bool
    paper_ref: str = ""
    sub_reports: tuple["InequalityReport", ...] = ()
    notes: tuple[str, ...] = ()
    max_gap: float = float("nan")
    max_gap_tolerance: float = float("nan")

    @property
    def is_equality(self) -> bool:
        """Every gap lies within its tolerance on both sides."""
        return self.passed and bool(self.max_gap <= self.max_gap_tolerance)

    def to_dict(self) -> dict:
        out = {"kind": "inequality", "name": self.name, "paper_ref": self.paper_ref,
               "passed": self.passed, "checks_run": self.checks_run,
               "min_gap": self.min_gap, "witness": list(self.witness),
               "tolerance": self.tolerance, "max_gap": self.max_gap}
        if self.notes:
            out["notes"] = list(self.notes)
        if self.sub_reports:
            out["sub_reports"] = [r.to_dict() for r in self.sub_reports]
        return out


def tolerance_for(scale, atol: float = ATOL, rtol: float = RTOL):
    return atol + rtol * np.abs(scale)


def _ratio(gaps, tols):
    """gap / tolerance, with a zero tolerance mapping to 0 or +-inf by the gap's sign."""
    gaps = np.asarray(gaps, dtype=float)
    tols = np.asarray(tols, dtype=float)
    with np.errstate(all="ignore"):
        return np.where(tols > 0, gaps / np.where(tols > 0, tols, 1.0), np.sign(gaps) * np.inf)


def summarize(name: str, gaps, scales, witnesses, *, paper_ref: str = "",
              atol: float = ATOL, rtol: float = RTOL, notes: Sequence[str] = (),
              extra_tolerance=None) -> InequalityReport:
    """Collapse per-point gaps into a report.

    ``witnesses`` is an (N, k) array of argument tuples in lexicographic
    order; argmin picks the first occurrence, so ties resolve to the
    lexicographically smallest witness. ``extra_tolerance`` (per point) is
    added to atol + rtol * scale, e.g. for quadrature error.
    """
    gaps = np.ravel(np.asarray(gaps, dtype=float))
    scales = np.ravel(np.asarray(scales, dtype=float))
    witnesses = np.asarray(witnesses, dtype=float).reshape(len(gaps), -1)
    if len(gaps) == 0:
        return InequalityReport(name, 0, float("inf"), (), atol, True, paper_ref,
                                notes=tuple(notes))
    tols = tolerance_for(scales, atol, rtol)
    if extra_tolerance is not None:
        tols = tols + np.ravel(np.asarray(extra_tolerance, dtype=float))
    bad_gap = ~np.isfinite(gaps)
    if np.any(bad_gap):
        i = int(np.argmax(bad_gap))
    else:
        ratio = _ratio(gaps, tols)
        i = int(np.argmin(ratio)) if ratio.min() < -1 else int(np.argmin(gaps))
    gap, tol = float(gaps[i]), float(tols[i])
    passed = bool(np.isfinite(gap) and gap >= -tol)
    j = int(np.argmax(np.where(np.isfinite(gaps), _ratio(gaps, tols), np.inf)))
    return InequalityReport(name, len(gaps), gap, tuple(float(v) for v in witnesses[i]),
                            tol, passed, paper_ref, notes=tuple(notes),
                            max_gap=float(gaps[j]), max_gap_tolerance=float(tols[j]))


def combine(name: str, reports: Sequence[InequalityReport], *, paper_ref: str = "",
            notes: Sequence[str] = ()) -> InequalityReport:
    """Report that passes iff every sub-report passes."""
    reports = tuple(reports)
    run = [r for r in reports if r.checks_run]
    checks = sum(r.checks_run for r in reports)
    if not run:
        return InequalityReport(name, 0, float("inf"), (), ATOL, True, paper_ref,
                                reports, tuple(notes))
    failing = [r for r in run if not r.passed]
    if failing:
        worst = min(failing, key=lambda r: float(_ratio(r.min_gap, r.tolerance)))
    else:
        worst = min(run, key=lambda r: r.min_gap)
    top = max(run, key=lambda r: float(_ratio(r.max_gap, r.max_gap_tolerance))
              if np.isfinite(r.max_gap) else np.inf)
    return InequalityReport(name, checks, worst.min_gap, worst.witness, worst.tolerance,
                            not failing, paper_ref, reports, tuple(notes),
                            max_gap=top.max_gap, max_gap_tolerance=top.max_gap_tolerance)


@dataclass(frozen=True)
class HHReport:
    """A three-member Hermite-Hadamard chain lower <= middle <= upper."""

    name: str
    a: float
    b: float
    lower: float
    middle: float
    upper: float
    tolerance: float
    paper_ref: str = ""

    @property
    def lower_gap(self) -> float:
        return self.middle - self.lower

    @property
    def upper_gap(self) -> float:
        return self.upper - self.middle

    @property
    def passed(self) -> bool:
        return min(self.lower_gap, self.upper_gap) >= -self.tolerance

    def to_dict(self) -> dict:
        return {"kind": "hermite_hadamard", "name": self.name, "paper_ref": self.paper_ref,
                "passed": self.passed, "interval": [self.a, self.b], "lower": self.lower,
                "middle": self.middle, "upper": self.upper, "lower_gap": self.lower_gap,
                "upper_gap": self.upper_gap, "min_gap": min(self.lower_gap, self.upper_gap),
                "tolerance": self.tolerance}


@dataclass(frozen=True)
class BoundReport:
    """A closed-form deviation bound against the sample's actual statistic."""

    bound_name: str
    bound_value: float
    actual_value: float
    intermediates: dict = field(default_factory=dict)
    paper_ref: str = ""
    notes: tuple[str, ...] = ()

    @property
    def slack(self) -> float:
        return self.bound_value - self.actual_value

    @property
    def tolerance(self) -> float:
        return 1e-9 * max(1.0, abs(self.bound_value))

    @property
    def passed(self) -> bool:
        return self.slack >= -self.tolerance

    @property
    def name(self) -> str:
        return self.bound_name

    def to_dict(self) -> dict:
        out = {"kind": "bound", "name": self.bound_name, "paper_ref": self.paper_ref,
               "passed": self.passed, "bound_value": self.bound_value,
               "actual_value": self.actual_value, "slack": self.slack,
               "tolerance": self.tolerance, "intermediates": dict(self.intermediates)}
        if self.notes:
            out["notes"] = list(self.notes)
        return out
