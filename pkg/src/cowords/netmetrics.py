"""Keyword network construction, cluster-level metrics, and the strategic diagram.

The network links two keywords iff their correlation is strictly positive,
carrying the correlation as edge weight.  Per cluster we report size, median
member frequency, mean pairwise co-occurrence, density (median weight of
internal edges) and centrality (sum of squared weights of edges that cross
the cluster boundary).  A median split over (centrality, density) assigns
each cluster to one of four strategic-diagram quadrants.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from typing import Mapping, Sequence

from .cluster import ClusterAssignment
from .corpus import FrequencyTable
from .matrix import CooccurrenceMatrix, CorrelationMatrix

QUADRANT_I = "I"
QUADRANT_II = "II"
QUADRANT_III = "III"
QUADRANT_IV = "IV"

QUADRANT_LABELS: Mapping[str, str] = {
    QUADRANT_I: "motor themes",
    QUADRANT_II: "basic and transversal themes",
    QUADRANT_III: "developed but isolated themes",
    QUADRANT_IV: "emerging or declining themes",
}


@dataclass(frozen=True)
class NetworkNode:
    keyword: str
    occurrences: int


@dataclass(frozen=True)
class NetworkEdge:
    """Undirected edge stored with source < target lexicographically."""

    source: str
    target: str
    weight: float


@dataclass(frozen=True)
class KeywordNetwork:
    nodes: tuple[NetworkNode, ...]
    edges: tuple[NetworkEdge, ...]

    def __post_init__(self) -> None:
        for e in self.edges:
            if e.source == e.target:
                raise ValueError(f"self-edge on {e.source!r}")
            if e.source > e.target:
                raise ValueError(f"edge ({e.source!r}, {e.target!r}) not in sorted order")
            if e.weight <= 0:
                raise ValueError(f"non-positive edge weight {e.weight} on ({e.source!r}, {e.target!r})")

    def keywords(self) -> tuple[str, ...]:
        return tuple(node.keyword for node in self.nodes)

    def degree(self, keyword: str) -> int:
        return sum(1 for e in self.edges if keyword in (e.source, e.target))

    def edge_weight(self, a: str, b: str) -> float | None:
        if a > b:
            a, b = b, a
        for e in self.edges:
            if e.source == a and e.target == b:
                return e.weight
        return None


@dataclass(frozen=True)
class ClusterMetrics:
    cluster_id: int
    n: int
    median_freq: float
    cw_freq: float
    density: float
    centrality: float


@dataclass(frozen=True)
class StrategicPoint:
    """One cluster's position in the strategic diagram.

    ``margin`` is the absolute distance of (x, y) from the two medians; small
    margins mark clusters whose quadrant assignment is fragile.
    """

    cluster_id: int
    x: float  # centrality
    y: float  # density
    quadrant: str
    margin: tuple[float, float]


def build_network(corr: CorrelationMatrix, occurrences: FrequencyTable) -> KeywordNetwork:
    """Network over the correlation matrix's keywords.

    Edges exist iff the correlation is strictly positive; zero and negative
    correlations produce no edge.
    """
    counts = occurrences.counts()
    nodes = tuple(
        NetworkNode(keyword=kw, occurrences=counts.get(kw, 0)) for kw in corr.keywords
    )
    edges = []
    n = len(corr.keywords)
    for i in range(n):
        for j in range(i + 1, n):
            weight = float(corr.values[i, j])
            if weight > 0:
                edges.append(
                    NetworkEdge(
                        source=corr.keywords[i],
                        target=corr.keywords[j],
                        weight=weight,
                    )
                )
    return KeywordNetwork(nodes=nodes, edges=tuple(edges))


def cluster_metrics(
    net: KeywordNetwork,
    assign: ClusterAssignment,
    cooc: CooccurrenceMatrix,
    freq: FrequencyTable,
) -> tuple[ClusterMetrics, ...]:
    """Per-cluster summary statistics, ordered by cluster id.

    density: median weight of edges with both endpoints inside the cluster
    (0 with no internal edges).  centrality: sum of squared weights of edges
    with exactly one endpoint inside.  cw_freq: mean co-occurrence count over
    all unordered member pairs (0 for singletons).
    """
    network_keywords = set(net.keywords())
    labeled = set(assign.labels)
    if network_keywords != labeled:
        raise ValueError(
            "network and cluster assignment cover different keywords: "
            f"{sorted(network_keywords ^ labeled)[:5]} ..."
        )
    counts = freq.counts()
    cooc_index = {kw: i for i, kw in enumerate(cooc.keywords)}
    internal: dict[int, list[float]] = {cid: [] for cid in range(1, assign.k + 1)}
    boundary: dict[int, float] = {cid: 0.0 for cid in range(1, assign.k + 1)}
    for e in net.edges:
        cs, ct = assign.labels[e.source], assign.labels[e.target]
        if cs == ct:
            internal[cs].append(e.weight)
        else:
            boundary[cs] += e.weight**2
            boundary[ct] += e.weight**2

    out = []
    for cid, members in sorted(assign.clusters().items()):
        member_counts = sorted(counts.get(kw, 0) for kw in members)
        pair_coocs = [
            int(cooc.values[cooc_index[a], cooc_index[b]])
            for idx, a in enumerate(members)
            for b in members[idx + 1:]
        ]
        out.append(
            ClusterMetrics(
                cluster_id=cid,
                n=len(members),
                median_freq=float(statistics.median(member_counts)),
                cw_freq=float(statistics.fmean(pair_coocs)) if pair_coocs else 0.0,
                density=float(statistics.median(internal[cid])) if internal[cid] else 0.0,
                centrality=boundary[cid],
            )
        )
    return tuple(out)


def strategic_diagram(metrics: Sequence[ClusterMetrics]) -> tuple[StrategicPoint, ...]:
    """Median-split quadrant assignment over (centrality, density).

    A cluster exactly on a median line falls to the low side: quadrant I
    requires being strictly above both medians.
    """
    if not metrics:
        raise ValueError("strategic diagram requires at least one cluster")
    median_x = float(statistics.median([m.centrality for m in metrics]))
    median_y = float(statistics.median([m.density for m in metrics]))
    points = []
    for m in metrics:
        high_x = m.centrality > median_x
        high_y = m.density > median_y
        if high_x and high_y:
            quadrant = QUADRANT_I
        elif high_x:
            quadrant = QUADRANT_II
        elif high_y:
            quadrant = QUADRANT_III
        else:
            quadrant = QUADRANT_IV
        points.append(
            StrategicPoint(
                cluster_id=m.cluster_id,
                x=m.centrality,
                y=m.density,
                quadrant=quadrant,
                margin=(abs(m.centrality - median_x), abs(m.density - median_y)),
            )
        )
    return tuple(points)


def filter_network(net: KeywordNetwork, min_weight: float) -> KeywordNetwork:
    """Drop edges below min_weight, then drop nodes left without any edge."""
    if min_weight < 0:
        raise ValueError(f"min_weight must be non-negative, got {min_weight}")
    edges = tuple(e for e in net.edges if e.weight >= min_weight)
    connected = {e.source for e in edges} | {e.target for e in edges}
    nodes = tuple(node for node in net.nodes if node.keyword in connected)
    return KeywordNetwork(nodes=nodes, edges=edges)
