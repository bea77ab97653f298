"""Constraint-aware ideal-solution ranking.

Pipeline, per problem:

1. degree of constraint satisfaction ``f_ij`` for every rating,
2. vector normalisation of the rating columns,
3. weighting ``p_ij = N_ij * w_j * f_ij``,
4. positive/negative ideal vectors and Euclidean distances to both,
5. closeness ``S- / (S- + S+)``; with hard constraints, alternatives that
   miss any interval are shifted down by 1 into ``[-1, 0]``,
6. stable descending sort on the score (hard mode breaks a tie at 0 in
   favour of the constraint-satisfying alternative).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .model import (
    DecisionProblem,
    InvariantError,
    Nature,
    ResolvedCriterion,
    resolve,
)

DEGENERATE_CLOSENESS = 0.5


class Method(Enum):
    ISOCOV_HARD = "isocov-hard"
    ISOCOV_SOFT = "isocov-soft"
    TOPSIS = "topsis"


@dataclass(frozen=True)
class SatisfactionMatrix:
    degrees: np.ndarray  # (m, n), every entry in (0, 1]
    v_flags: np.ndarray  # (m,), True iff the row meets every interval


@dataclass(frozen=True)
class WeightedMatrix:
    normalized: np.ndarray
    weighted: np.ndarray
    pis: np.ndarray
    nis: np.ndarray


@dataclass(frozen=True)
class ScoreRow:
    alternative: str
    s_plus: float
    s_minus: float
    closeness: float
    score: float
    v_flag: bool
    rank: int


@dataclass(frozen=True)
class Intermediates:
    criteria: tuple[str, ...]
    alternatives: tuple[str, ...]  # input order; matrices below follow it
    degrees: np.ndarray
    v_flags: np.ndarray
    normalized: np.ndarray
    weighted: np.ndarray
    pis: np.ndarray
    nis: np.ndarray


@dataclass(frozen=True)
class RankingReport:
    method: Method
    rows: tuple[ScoreRow, ...]  # ascending by rank
    intermediates: Optional[Intermediates] = None

    def by_alternative(self) -> dict[str, ScoreRow]:
        return {r.alternative: r for r in self.rows}

    def in_input_order(self) -> list[ScoreRow]:
        if self.intermediates is None:
            raise ValueError("input order is only known when intermediates are kept")
        lookup = self.by_alternative()
        return [lookup[a] for a in self.intermediates.alternatives]

    @property
    def best(self) -> ScoreRow:
        return self.rows[0]


def satisfaction_degree(d: float, crit: ResolvedCriterion) -> float:
    """Closeness of one rating to its criterion's preferred interval.

    Benefit criteria score 1 inside the interval and decay linearly outside.
    Cost criteria score ``1/(M+1)`` inside and ``distance/M`` outside, where
    ``M`` is the larger gap between the interval and the data range.
    Intervals are closed at both ends.
    """
    if not crit.col_min <= d <= crit.col_max:
        raise ValueError(f"rating {d} outside column range [{crit.col_min}, {crit.col_max}]")
    a, b = crit.a, crit.b
    spread = crit.spread
    inside = a <= d <= b
    if crit.spec.nature is Nature.BENEFIT:
        if inside:
            return 1.0
        gap = a - d if d < a else d - b
        return 1.0 - gap / (spread + 1.0)
    if inside:
        return 1.0 / (spread + 1.0)
    # unreachable when spread == 0: the interval then covers the whole range
    assert spread > 0, "out-of-interval cost rating with zero spread"
    gap = a - d if d < a else d - b
    return gap / spread


def satisfaction_matrix(
    problem: DecisionProblem, resolved: Sequence[ResolvedCriterion]
) -> SatisfactionMatrix:
    m, n = problem.ratings.shape
    degrees = np.empty((m, n), dtype=np.float64)
    inside = np.ones(m, dtype=bool)
    for j, crit in enumerate(resolved):
        for i in range(m):
            d = float(problem.ratings[i, j])
            degrees[i, j] = satisfaction_degree(d, crit)
            if not crit.contains(d):
                inside[i] = False
    return SatisfactionMatrix(degrees, inside)


def normalize(problem: DecisionProblem) -> np.ndarray:
    """Divide each column by its Euclidean norm; all-zero columns stay zero."""
    ratings = problem.ratings
    norms = np.sqrt((ratings**2).sum(axis=0))
    out = np.zeros_like(ratings)
    nz = norms != 0
    out[:, nz] = ratings[:, nz] / norms[nz]
    return out


def weighted_matrix(
    problem: DecisionProblem,
    resolved: Optional[Sequence[ResolvedCriterion]],
    F: Optional[SatisfactionMatrix],
) -> WeightedMatrix:
    """Weight the normalised matrix and extract the ideal vectors.

    ``F=None`` means every degree is 1 (plain TOPSIS weighting). ``resolved``
    is accepted for signature symmetry but only criterion natures are used.
    """
    normalized = normalize(problem)
    weighted = normalized * problem.weights
    if F is not None:
        weighted = weighted * F.degrees
    benefit = problem.benefit_mask
    col_max = weighted.max(axis=0)
    col_min = weighted.min(axis=0)
    pis = np.where(benefit, col_max, col_min)
    nis = np.where(benefit, col_min, col_max)
    return WeightedMatrix(normalized, weighted, pis, nis)


def _ranks(scores: Sequence[float], tiebreak: Optional[Sequence[bool]] = None) -> list[int]:
    if tiebreak is None:
        order = sorted(range(len(scores)), key=lambda i: -scores[i])
    else:
        order = sorted(range(len(scores)), key=lambda i: (-scores[i], not tiebreak[i]))
    ranks = [0] * len(scores)
    for pos, i in enumerate(order):
        ranks[i] = pos + 1
    return ranks


def score(
    problem: DecisionProblem,
    wm: WeightedMatrix,
    F: Optional[SatisfactionMatrix],
    hard: Optional[bool] = None,
) -> list[ScoreRow]:
    """Distances, closeness and final scores, returned in input order.

    ``hard`` defaults to ``problem.hard``. Ties keep input order, except
    that in hard mode a constraint-satisfying alternative wins a tie at 0
    against a violating one (closeness 0 vs closeness 1 shifted down).
    """
    if hard is None:
        hard = problem.hard
    m = len(problem.alternatives)
    v_flags = np.ones(m, dtype=bool) if F is None else F.v_flags
    s_plus = np.sqrt(((wm.pis - wm.weighted) ** 2).sum(axis=1))
    s_minus = np.sqrt(((wm.weighted - wm.nis) ** 2).sum(axis=1))
    closeness = []
    scores = []
    for i in range(m):
        denom = s_minus[i] + s_plus[i]
        c = DEGENERATE_CLOSENESS if denom == 0 else float(s_minus[i] / denom)
        closeness.append(c)
        scores.append(c - 1.0 if hard and not v_flags[i] else c)
    ranks = _ranks(scores, [bool(v) for v in v_flags] if hard else None)
    return [
        ScoreRow(
            alternative=problem.alternatives[i],
            s_plus=float(s_plus[i]),
            s_minus=float(s_minus[i]),
            closeness=closeness[i],
            score=scores[i],
            v_flag=bool(v_flags[i]),
            rank=ranks[i],
        )
        for i in range(m)
    ]


def build_report(
    method: Method,
    problem: DecisionProblem,
    rows: Sequence[ScoreRow],
    wm: WeightedMatrix,
    F: Optional[SatisfactionMatrix],
) -> RankingReport:
    m, n = problem.ratings.shape
    if F is None:
        F = SatisfactionMatrix(np.ones((m, n)), np.ones(m, dtype=bool))
    inter = Intermediates(
        criteria=tuple(c.name for c in problem.criteria),
        alternatives=problem.alternatives,
        degrees=F.degrees,
        v_flags=F.v_flags,
        normalized=wm.normalized,
        weighted=wm.weighted,
        pis=wm.pis,
        nis=wm.nis,
    )
    report = RankingReport(method, tuple(sorted(rows, key=lambda r: r.rank)), inter)
    check_report(report)
    return report


def rank_isocov(
    problem: DecisionProblem, hard: Optional[bool] = None, clamp_bounds: bool = False
) -> RankingReport:
    """Rank alternatives with value constraints.

    Args:
        problem: the decision problem; its ``hard`` flag is used unless
            overridden.
        hard: force hard (True) or soft (False) constraint handling.
        clamp_bounds: clamp out-of-range bounds instead of rejecting them.

    Raises:
        ValidationError: the problem fails validation.
    """
    if hard is None:
        hard = problem.hard
    resolved = resolve(problem, clamp_bounds=clamp_bounds)
    F = satisfaction_matrix(problem, resolved)
    wm = weighted_matrix(problem, resolved, F)
    rows = score(problem, wm, F, hard=hard)
    method = Method.ISOCOV_HARD if hard else Method.ISOCOV_SOFT
    return build_report(method, problem, rows, wm, F)


def check_report(report: RankingReport) -> None:
    """Raise :class:`InvariantError` if a report is internally inconsistent."""
    ranks = [r.rank for r in report.rows]
    if ranks != list(range(1, len(ranks) + 1)):
        raise InvariantError(f"ranks are not 1..m in row order: {ranks}")
    hard = report.method is Method.ISOCOV_HARD
    prev = None
    for r in report.rows:
        if r.s_plus < 0 or r.s_minus < 0 or not 0.0 <= r.closeness <= 1.0:
            raise InvariantError(f"{r.alternative}: distance or closeness out of range")
        lo, hi = (0.0, 1.0) if (r.v_flag or not hard) else (-1.0, 0.0)
        if not lo <= r.score <= hi:
            raise InvariantError(f"{r.alternative}: score {r.score} outside [{lo}, {hi}]")
        if prev is not None and r.score > prev:
            raise InvariantError("rows are not in descending score order")
        prev = r.score
