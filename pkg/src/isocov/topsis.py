"""Classical TOPSIS: vector normalisation, weighted Euclidean distances to the
ideal and anti-ideal, closeness coefficient. Value constraints and the hard
flag of the problem are ignored.
"""

from __future__ import annotations

from .engine import Method, RankingReport, build_report, score, weighted_matrix
from .model import DecisionProblem, ValidationError, validate


def rank_topsis(problem: DecisionProblem) -> RankingReport:
    unconstrained = problem.with_open_constraints()
    issues = validate(unconstrained)
    if issues:
        raise ValidationError(issues)
    wm = weighted_matrix(unconstrained, None, None)
    rows = score(unconstrained, wm, None, hard=False)
    return build_report(Method.TOPSIS, unconstrained, rows, wm, None)
