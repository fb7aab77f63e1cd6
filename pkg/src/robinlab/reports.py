"""Report records shared by the radial and inequality modules.

Convention: `lhs` is always the side asserted greater-or-equal, `deficit` is
lhs - rhs, and a report passes iff deficit >= -tolerance. Checks of strict
positivity fold their required margin into `rhs`; composite checks (several
conditions in one report) store their worst margin as the deficit. The
`term_provenance` map documents which formula term landed on which side.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class InequalityReport:
    name: str
    lhs: float
    rhs: float
    deficit: float
    tolerance: float
    passed: bool
    inputs: dict = field(default_factory=dict)
    term_provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.tolerance > 0.0:
            raise ValueError("tolerance must be positive")
        if abs(self.deficit - (self.lhs - self.rhs)) > 1e-12 * max(
            1.0, abs(self.lhs), abs(self.rhs)
        ):
            raise ValueError("deficit must equal lhs - rhs")
        if self.passed != (self.deficit >= -self.tolerance):
            raise ValueError("passed must equal (deficit >= -tolerance)")

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "deficit": self.deficit,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "inputs": dict(self.inputs),
            "term_provenance": dict(self.term_provenance),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "InequalityReport":
        return cls(**d)


def make_report(name, lhs, rhs, tolerance, inputs=None, term_provenance=None):
    """Build a report; pass/fail and deficit follow from the convention."""
    lhs = float(lhs)
    rhs = float(rhs)
    deficit = lhs - rhs
    return InequalityReport(
        name=name,
        lhs=lhs,
        rhs=rhs,
        deficit=deficit,
        tolerance=float(tolerance),
        passed=bool(deficit >= -tolerance),
        inputs=dict(inputs or {}),
        term_provenance=dict(term_provenance or {}),
    )


@dataclass(frozen=True)
class SweepResult:
    """Aggregated sweep over a shape family.

    rows: list of dicts, one per (shape, check) grid point, carrying the
    report fields plus shape context (family parameters, lambda_q, E, inf_u,
    perimeter, area, asymmetry).
    """

    family: str
    rows: list
    n_pass: int
    n_fail: int
    empirical_constant: float | None = None
    notes: dict = field(default_factory=dict)

    @property
    def all_passed(self) -> bool:
        return self.n_fail == 0
