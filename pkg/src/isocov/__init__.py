"""Constraint-aware multi-criteria route ranking."""

from .engine import (
    Method,
    RankingReport,
    SatisfactionMatrix,
    ScoreRow,
    WeightedMatrix,
    normalize,
    rank_isocov,
    satisfaction_degree,
    satisfaction_matrix,
    score,
    weighted_matrix,
)
from .model import (
    CriterionSpec,
    DecisionProblem,
    InvariantError,
    IsocovError,
    Nature,
    ResolvedCriterion,
    ValidationError,
    ValidationIssue,
    resolve,
    validate,
)
from .topology import (
    AggregationRule,
    Link,
    MetricRule,
    Topology,
    build_problem,
    enumerate_routes,
)
from .topsis import rank_topsis
from .fixtures import fixture_path

__all__ = [
    "AggregationRule",
    "CriterionSpec",
    "DecisionProblem",
    "InvariantError",
    "IsocovError",
    "Link",
    "Method",
    "MetricRule",
    "Nature",
    "RankingReport",
    "ResolvedCriterion",
    "SatisfactionMatrix",
    "ScoreRow",
    "Topology",
    "ValidationError",
    "ValidationIssue",
    "WeightedMatrix",
    "build_problem",
    "enumerate_routes",
    "fixture_path",
    "normalize",
    "rank_isocov",
    "rank_topsis",
    "resolve",
    "satisfaction_degree",
    "satisfaction_matrix",
    "score",
    "validate",
    "weighted_matrix",
]
