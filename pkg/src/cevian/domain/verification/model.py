"""Plans and reports of the randomized verification suites."""
from __future__ import annotations

import enum
from typing import Any

import pydantic


class Suite(str, enum.Enum):
    """What a verification run confronts with its oracle."""

    THEOREM1 = "theorem1"
    THEOREM2 = "theorem2"
    EQ2 = "eq2"
    DECOMPOSITION = "decomposition"
    MOEBIUS = "moebius"
    AFFINE = "affine"
    SEGMENT_RATIO = "segment_ratio"


class TrialPlan(pydantic.BaseModel):
    """A seeded verification run."""

    model_config = pydantic.ConfigDict(frozen=True)

    suite: Suite
    n: int = pydantic.Field(ge=2)
    trials: int = pydantic.Field(ge=1)
    seed: int = pydantic.Field(ge=0, lt=2**64)
    tol: float = pydantic.Field(gt=0.0)

    @pydantic.model_validator(mode="after")
    def _check_suite_dimension(self) -> TrialPlan:
        if self.suite is Suite.MOEBIUS and self.n != 2:
            raise ValueError("The moebius suite is about triangles, it requires n = 2")
        return self


class Violation(pydantic.BaseModel):
    """A failed check. ``trial`` is -1 for the deterministic probes."""

    model_config = pydantic.ConfigDict(frozen=True)

    trial: int
    digest: str
    check: str
    margin: float
    """How far past its tolerance the check went (> 0)."""


class VerificationReport(pydantic.BaseModel):
    """Outcome of a suite. Everything but ``elapsed`` is a function of the plan."""

    model_config = pydantic.ConfigDict(frozen=True)

    plan: TrialPlan
    violations: tuple[Violation, ...]
    worst_margin: float
    max_ratio_observed: float
    bound: float | None
    passed: bool
    elapsed: float
    """Seconds."""

    @pydantic.model_validator(mode="after")
    def _check_consistency(self) -> VerificationReport:
        if self.passed == bool(self.violations):
            raise ValueError("A report passes if and only if it has no violation")
        if any(violation.margin > self.worst_margin for violation in self.violations):
            raise ValueError("worst_margin must dominate every violation margin")
        return self

    def summary(self) -> dict[str, Any]:
        """The flat record the CLI serializes."""
        return {
            "suite": self.plan.suite.value,
            "n": self.plan.n,
            "trials": self.plan.trials,
            "seed": self.plan.seed,
            "tol": self.plan.tol,
            "passed": self.passed,
            "worst_margin": self.worst_margin,
            "max_ratio_observed": self.max_ratio_observed,
            "bound": self.bound,
            "violations": [violation.model_dump() for violation in self.violations],
            "elapsed": self.elapsed,
        }
