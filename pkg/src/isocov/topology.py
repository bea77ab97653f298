"""Route enumeration over a directed topology and per-route metric aggregation.

Links carry per-metric values; a route's metric is folded from its links by
an aggregation rule (sum for additive metrics such as delay, min for a
bottleneck metric such as throughput, mean for data rate, edge count for hop
count).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Mapping, Optional, Sequence

from .model import CriterionSpec, DecisionProblem, IsocovError, ValidationError


class TopologyError(ValidationError):
    """Structural problem in a topology or in building a problem from it."""


class RouteLimitExceeded(IsocovError):
    def __init__(self, limit: int):
        self.limit = limit
        super().__init__(f"more than {limit} routes; raise the cap or prune the topology")


class AggregationRule(Enum):
    SUM = "sum"
    MIN = "min"
    MAX = "max"
    MEAN = "mean"
    HOP_COUNT = "hop_count"


@dataclass(frozen=True)
class MetricRule:
    rule: AggregationRule
    cap: Optional[float] = None  # upper clip applied after aggregation

    def apply(self, values: Sequence[float]) -> float:
        if self.rule is AggregationRule.HOP_COUNT:
            out = float(len(values))
        elif self.rule is AggregationRule.SUM:
            out = math.fsum(values)
        elif self.rule is AggregationRule.MIN:
            out = min(values)
        elif self.rule is AggregationRule.MAX:
            out = max(values)
        else:
            out = math.fsum(values) / len(values)
        if self.cap is not None:
            out = min(out, self.cap)
        return float(out)


def _norm_name(name: str) -> str:
    return " ".join(name.lower().replace("_", " ").replace("-", " ").split())


# Used when a metric has no explicit rule. Keys are normalised names.
DEFAULT_RULES: Mapping[str, MetricRule] = MappingProxyType(
    {
        "delay": MetricRule(AggregationRule.SUM),
        "e2ed": MetricRule(AggregationRule.SUM),
        "end to end delay": MetricRule(AggregationRule.SUM),
        "jitter": MetricRule(AggregationRule.SUM),
        "hop count": MetricRule(AggregationRule.HOP_COUNT),
        "hops": MetricRule(AggregationRule.HOP_COUNT),
        "data rate": MetricRule(AggregationRule.MEAN),
        "packet loss": MetricRule(AggregationRule.SUM, cap=100.0),
        "throughput": MetricRule(AggregationRule.MIN),
    }
)


@dataclass(frozen=True)
class Link:
    source: str
    target: str
    metrics: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "source", str(self.source))
        object.__setattr__(self, "target", str(self.target))
        object.__setattr__(self, "metrics", MappingProxyType({str(k): float(v) for k, v in self.metrics.items()}))


@dataclass(frozen=True)
class Topology:
    """Directed graph with per-link metric values and a source/destination pair.

    Raises:
        TopologyError: on dangling endpoints, duplicate links, a link missing
            a declared metric, or ``source == destination``.
    """

    nodes: tuple[str, ...]
    links: tuple[Link, ...]
    source: str
    destination: str
    rules: Mapping[str, MetricRule] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(str(v) for v in self.nodes))
        object.__setattr__(self, "links", tuple(self.links))
        object.__setattr__(self, "source", str(self.source))
        object.__setattr__(self, "destination", str(self.destination))
        object.__setattr__(self, "rules", MappingProxyType(dict(self.rules)))
        node_set = set(self.nodes)
        if len(node_set) != len(self.nodes):
            raise TopologyError("duplicate node id")
        for label, node in (("source", self.source), ("destination", self.destination)):
            if node not in node_set:
                raise TopologyError(f"{label} {node!r} is not a declared node")
        if self.source == self.destination:
            raise TopologyError("source and destination must differ")
        declared = self.metric_names
        seen = set()
        for k, link in enumerate(self.links):
            tag = f"link #{k} ({link.source} -> {link.target})"
            for end in (link.source, link.target):
                if end not in node_set:
                    raise TopologyError(f"{tag} references unknown node {end!r}")
            if (link.source, link.target) in seen:
                raise TopologyError(f"{tag} duplicates an earlier link")
            seen.add((link.source, link.target))
            missing = [name for name in declared if name not in link.metrics]
            if missing:
                raise TopologyError(f"{tag} has no value for metric(s) {', '.join(missing)}")

    @property
    def metric_names(self) -> list[str]:
        """Metrics that every link must carry, in first-seen order."""
        names: dict[str, None] = {}
        for link in self.links:
            for name in link.metrics:
                names.setdefault(name)
        for name, rule in self.rules.items():
            if rule.rule is not AggregationRule.HOP_COUNT:
                names.setdefault(name)
        return list(names)

    def successors(self) -> dict[str, list[str]]:
        adj: dict[str, list[str]] = {v: [] for v in self.nodes}
        for link in self.links:
            adj[link.source].append(link.target)
        for v in adj:
            adj[v].sort()
        return adj

    def link(self, u: str, v: str) -> Link:
        for link in self.links:
            if link.source == u and link.target == v:
                return link
        raise KeyError((u, v))

    def rule_for(self, metric: str) -> Optional[MetricRule]:
        if metric in self.rules:
            return self.rules[metric]
        return DEFAULT_RULES.get(_norm_name(metric))


def enumerate_routes(topo: Topology, max_routes: Optional[int] = None) -> list[tuple[str, ...]]:
    """All simple source->destination paths, in lexicographic node-id order.

    Depth-first search with sorted successor lists emits paths in
    lexicographic order directly, because no route is a prefix of another.

    Raises:
        RouteLimitExceeded: more than ``max_routes`` routes exist.
    """
    adj = topo.successors()
    target = topo.destination
    routes: list[tuple[str, ...]] = []
    path = [topo.source]
    on_path = {topo.source}
    # explicit stack of successor iterators; avoids recursion limits on long chains
    stack = [iter(adj[topo.source])]
    while stack:
        nxt = next(stack[-1], None)
        if nxt is None:
            stack.pop()
            on_path.discard(path.pop())
            continue
        if nxt in on_path:
            continue
        if nxt == target:
            routes.append(tuple(path) + (nxt,))
            if max_routes is not None and len(routes) > max_routes:
                raise RouteLimitExceeded(max_routes)
            continue
        path.append(nxt)
        on_path.add(nxt)
        stack.append(iter(adj[nxt]))
    return routes


def route_label(route: Sequence[str]) -> str:
    return " -> ".join(route)


def build_problem(
    topo: Topology,
    criteria: Sequence[CriterionSpec],
    hard: bool = False,
    max_routes: Optional[int] = None,
) -> tuple[DecisionProblem, list[tuple[str, ...]]]:
    """Enumerate routes and aggregate link metrics into a decision matrix.

    Alternatives are named ``a1 .. am`` in enumeration order; the routes are
    returned alongside so callers can map ids back to node sequences.

    Raises:
        TopologyError: a criterion has no matching metric or rule, or the
            destination is unreachable.
    """
    link_metrics = set()
    for link in topo.links:
        link_metrics.update(link.metrics)
    rules = []
    for crit in criteria:
        rule = topo.rule_for(crit.name)
        if rule is None:
            if crit.name in link_metrics:
                raise TopologyError(f"no aggregation rule for metric {crit.name!r}")
            raise TopologyError(f"unknown metric {crit.name!r}")
        if rule.rule is not AggregationRule.HOP_COUNT and crit.name not in link_metrics:
            raise TopologyError(f"unknown metric {crit.name!r}: no link carries it")
        rules.append(rule)

    routes = enumerate_routes(topo, max_routes=max_routes)
    if not routes:
        raise TopologyError(f"no route from {topo.source!r} to {topo.destination!r}")
    by_pair = {(link.source, link.target): link for link in topo.links}
    ratings = []
    for route in routes:
        hops = [by_pair[u, v] for u, v in zip(route, route[1:])]
        ratings.append(
            [rule.apply([h.metrics.get(crit.name, 0.0) for h in hops]) for crit, rule in zip(criteria, rules)]
        )
    ids = [f"a{k + 1}" for k in range(len(routes))]
    return DecisionProblem(ids, tuple(criteria), ratings, hard), routes
