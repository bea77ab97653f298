"""Decision problem data model.

A route-selection problem is a set of alternatives (routes) rated on a set of
criteria (QoS metrics). Each criterion carries a nature (benefit or cost), a
weight, and an optional preferred value interval. An absent bound means the
column extremum, so ``[None, 5]`` reads "anything up to 5".
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

import numpy as np

WEIGHT_SUM_TOL = 1e-9


class Nature(Enum):
    """Optimisation direction of a criterion."""

    BENEFIT = "benefit"  # higher is better
    COST = "cost"  # lower is better


class IsocovError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(IsocovError):
    """A decision problem or topology violates a modelling assumption."""

    def __init__(self, issues: Sequence["ValidationIssue"] | str):
        if isinstance(issues, str):
            self.issues: tuple[ValidationIssue, ...] = ()
            super().__init__(issues)
        else:
            self.issues = tuple(issues)
            super().__init__("; ".join(str(i) for i in self.issues))


class InvariantError(IsocovError):
    """An internal consistency check on computed results failed."""


@dataclass(frozen=True)
class ValidationIssue:
    subject: str  # criterion name, alternative id, or "problem"
    rule: str
    message: str

    def __str__(self) -> str:
        return f"{self.subject}: {self.message} [{self.rule}]"


@dataclass(frozen=True)
class CriterionSpec:
    name: str
    nature: Nature
    weight: float
    lower_bound: Optional[float] = None
    upper_bound: Optional[float] = None

    def __post_init__(self):
        if not isinstance(self.nature, Nature):
            object.__setattr__(self, "nature", Nature(self.nature))

    @property
    def is_benefit(self) -> bool:
        return self.nature is Nature.BENEFIT

    def opened(self) -> "CriterionSpec":
        """Same criterion with both bounds removed."""
        return CriterionSpec(self.name, self.nature, self.weight)


@dataclass(frozen=True)
class DecisionProblem:
    """Alternatives x criteria ratings plus the hard/soft constraint flag.

    ``ratings`` is stored as a read-only float64 array of shape (m, n).
    """

    alternatives: tuple[str, ...]
    criteria: tuple[CriterionSpec, ...]
    ratings: np.ndarray = field(repr=False)
    hard: bool = False

    def __post_init__(self):
        object.__setattr__(self, "alternatives", tuple(str(a) for a in self.alternatives))
        object.__setattr__(self, "criteria", tuple(self.criteria))
        ratings = np.array(self.ratings, dtype=np.float64)
        if ratings.ndim == 1 and ratings.size == 0:
            ratings = ratings.reshape(0, len(self.criteria))
        if ratings.ndim != 2:
            raise ValueError(f"ratings must be a 2-D matrix, got {ratings.ndim} dimension(s)")
        ratings.setflags(write=False)
        object.__setattr__(self, "ratings", ratings)
        object.__setattr__(self, "hard", bool(self.hard))

    @property
    def shape(self) -> tuple[int, int]:
        return self.ratings.shape

    @property
    def weights(self) -> np.ndarray:
        return np.array([c.weight for c in self.criteria], dtype=np.float64)

    @property
    def benefit_mask(self) -> np.ndarray:
        return np.array([c.is_benefit for c in self.criteria], dtype=bool)

    def column(self, name: str) -> np.ndarray:
        for j, c in enumerate(self.criteria):
            if c.name == name:
                return self.ratings[:, j]
        raise KeyError(name)

    def with_open_constraints(self) -> "DecisionProblem":
        """Copy of the problem where every constraint spans the full data range."""
        return DecisionProblem(
            self.alternatives, tuple(c.opened() for c in self.criteria), self.ratings, self.hard
        )

    def with_hard(self, hard: bool) -> "DecisionProblem":
        return DecisionProblem(self.alternatives, self.criteria, self.ratings, hard)

    def __eq__(self, other):
        if not isinstance(other, DecisionProblem):
            return NotImplemented
        return (
            self.alternatives == other.alternatives
            and self.criteria == other.criteria
            and self.hard == other.hard
            and self.ratings.shape == other.ratings.shape
            and bool(np.array_equal(self.ratings, other.ratings))
        )

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True)
class ResolvedCriterion:
    """A criterion with its open bounds replaced by the column extrema."""

    spec: CriterionSpec
    col_min: float
    col_max: float
    a: float
    b: float

    @property
    def spread(self) -> float:
        """Largest distance from the interval to either end of the data range."""
        return max(self.a - self.col_min, self.col_max - self.b)

    def contains(self, d: float) -> bool:
        return self.a <= d <= self.b


def _is_number(x) -> bool:
    return isinstance(x, (int, float, np.floating, np.integer)) and not isinstance(x, bool)


def validate(problem: DecisionProblem, clamp_bounds: bool = False) -> list[ValidationIssue]:
    """Check every modelling assumption and return the violations found.

    Nothing is raised; an empty list means the problem can be ranked. With
    ``clamp_bounds`` the constraint-inside-data-range rule is not reported,
    since :func:`resolve` will clamp instead.
    """
    issues: list[ValidationIssue] = []
    m, n = problem.ratings.shape
    if len(problem.alternatives) == 0:
        issues.append(ValidationIssue("problem", "non-empty", "at least one alternative is required"))
    if len(problem.criteria) == 0:
        issues.append(ValidationIssue("problem", "non-empty", "at least one criterion is required"))
    if (m, n) != (len(problem.alternatives), len(problem.criteria)):
        issues.append(
            ValidationIssue(
                "problem",
                "shape",
                f"ratings are {m}x{n} but there are {len(problem.alternatives)} alternatives "
                f"and {len(problem.criteria)} criteria",
            )
        )
        return issues

    seen: set[str] = set()
    for alt in problem.alternatives:
        if alt in seen:
            issues.append(ValidationIssue(alt, "unique-id", "duplicate alternative id"))
        seen.add(alt)
    for i, alt in enumerate(problem.alternatives):
        for j, crit in enumerate(problem.criteria):
            if not math.isfinite(problem.ratings[i, j]):
                issues.append(
                    ValidationIssue(alt, "finite", f"rating for {crit.name!r} is not finite")
                )

    seen = set()
    total = 0.0
    weights_ok = True
    for j, crit in enumerate(problem.criteria):
        if crit.name in seen:
            issues.append(ValidationIssue(crit.name, "unique-name", "duplicate criterion name"))
        seen.add(crit.name)
        if not _is_number(crit.weight) or not math.isfinite(crit.weight):
            issues.append(ValidationIssue(crit.name, "weight-range", "weight is not a finite number"))
            weights_ok = False
            continue
        if not 0.0 <= crit.weight <= 1.0:
            issues.append(ValidationIssue(crit.name, "weight-range", f"weight {crit.weight} not in [0, 1]"))
        total += crit.weight

        lo, hi = crit.lower_bound, crit.upper_bound
        bad_bound = False
        for label, bound in (("lower_bound", lo), ("upper_bound", hi)):
            if bound is not None and (not _is_number(bound) or not math.isfinite(bound)):
                issues.append(ValidationIssue(crit.name, "finite-bound", f"{label} is not a finite number"))
                bad_bound = True
        if bad_bound:
            continue
        if lo is not None and hi is not None and lo > hi:
            issues.append(
                ValidationIssue(crit.name, "bound-order", f"lower_bound > upper_bound ({lo} > {hi})")
            )
            continue
        col = problem.ratings[:, j]
        if clamp_bounds or m == 0 or not np.all(np.isfinite(col)):
            continue
        col_min, col_max = float(col.min()), float(col.max())
        if lo is not None and lo < col_min:
            issues.append(
                ValidationIssue(
                    crit.name, "bound-in-range", f"lower_bound {lo} below data minimum {col_min}"
                )
            )
        if hi is not None and hi > col_max:
            issues.append(
                ValidationIssue(
                    crit.name, "bound-in-range", f"upper_bound {hi} above data maximum {col_max}"
                )
            )
        # A bound on the wrong side of the data leaves an empty resolved interval.
        if lo is not None and hi is None and lo > col_max:
            issues.append(
                ValidationIssue(crit.name, "bound-in-range", f"lower_bound {lo} above data maximum {col_max}")
            )
        if hi is not None and lo is None and hi < col_min:
            issues.append(
                ValidationIssue(crit.name, "bound-in-range", f"upper_bound {hi} below data minimum {col_min}")
            )

    if weights_ok and problem.criteria and abs(total - 1.0) > WEIGHT_SUM_TOL:
        issues.append(ValidationIssue("problem", "weight-sum", f"weights sum to {total!r}, not 1"))
    return issues


def resolve(problem: DecisionProblem, clamp_bounds: bool = False) -> list[ResolvedCriterion]:
    """Replace open bounds by column extrema.

    Raises:
        ValidationError: if the problem does not validate, or (without
            ``clamp_bounds``) a bound lies outside its column's data range.
    """
    issues = validate(problem, clamp_bounds=clamp_bounds)
    if issues:
        raise ValidationError(issues)
    resolved = []
    for j, crit in enumerate(problem.criteria):
        col = problem.ratings[:, j]
        col_min, col_max = float(col.min()), float(col.max())
        a = col_min if crit.lower_bound is None else float(crit.lower_bound)
        b = col_max if crit.upper_bound is None else float(crit.upper_bound)
        if clamp_bounds:
            a = min(max(a, col_min), col_max)
            b = min(max(b, col_min), col_max)
        if not col_min <= a <= b <= col_max:
            raise ValidationError(
                [ValidationIssue(crit.name, "bound-in-range", f"interval [{a}, {b}] not inside [{col_min}, {col_max}]")]
            )
        resolved.append(ResolvedCriterion(crit, col_min, col_max, a, b))
    return resolved
