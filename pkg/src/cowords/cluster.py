"""Agglomerative hierarchical clustering and multi-coder consensus matrices.

Two configurations are supported: Ward linkage over squared Euclidean
distances (the main keyword-correlation pipeline) and average linkage, usable
with either metric but paired with Bray-Curtis for consensus clustering.
Merging follows the Lance-Williams recurrence; ties in the minimum
inter-cluster distance are broken by the lexicographically smallest
(left node id, right node id) pair so results are deterministic.

Node ids follow the usual convention: leaves are 0..n-1 and the cluster
created by merge step s gets id n+s.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

SQUARED_EUCLIDEAN = "squared-euclidean"
BRAY_CURTIS = "bray-curtis"
METRICS = (SQUARED_EUCLIDEAN, BRAY_CURTIS)

WARD = "ward"
AVERAGE = "average"
LINKAGES = (WARD, AVERAGE)

_METRIC_ALIASES = {
    "sqeuclidean": SQUARED_EUCLIDEAN,
    "squared-euclidean": SQUARED_EUCLIDEAN,
    "braycurtis": BRAY_CURTIS,
    "bray-curtis": BRAY_CURTIS,
}


def normalize_metric(name: str) -> str:
    try:
        return _METRIC_ALIASES[name.lower()]
    except KeyError:
        raise ValueError(f"unknown distance metric {name!r} (use one of {METRICS})") from None


def validate_linkage_metric(linkage: str, metric: str) -> None:
    """Ward linkage is only meaningful on squared Euclidean distances."""
    if linkage not in LINKAGES:
        raise ValueError(f"unknown linkage {linkage!r} (use one of {LINKAGES})")
    metric = normalize_metric(metric)
    if linkage == WARD and metric != SQUARED_EUCLIDEAN:
        raise ValueError("ward linkage requires the squared-euclidean metric")


def pairwise_distances(vectors: Sequence[Sequence[float]], metric: str) -> np.ndarray:
    """Symmetric distance matrix between row vectors.

    Bray-Curtis is sum(|u_i - v_i|) / sum(u_i + v_i) and requires
    non-negative entries; a pair whose entries sum to zero gets distance 0
    with a warning.
    """
    metric = normalize_metric(metric)
    x = np.asarray(vectors, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError(f"expected a 2-D array of row vectors, got shape {x.shape}")
    n = x.shape[0]
    d = np.zeros((n, n), dtype=np.float64)
    if metric == SQUARED_EUCLIDEAN:
        for i in range(n):
            diff = x[i + 1:] - x[i]
            d[i, i + 1:] = (diff**2).sum(axis=1)
    else:
        if (x < 0).any():
            raise ValueError("bray-curtis requires non-negative vector entries")
        zero_pairs = 0
        for i in range(n):
            num = np.abs(x[i + 1:] - x[i]).sum(axis=1)
            den = (x[i + 1:] + x[i]).sum(axis=1)
            row = np.zeros_like(num)
            nonzero = den > 0
            row[nonzero] = num[nonzero] / den[nonzero]
            zero_pairs += int((~nonzero).sum())
            d[i, i + 1:] = row
        if zero_pairs:
            warnings.warn(
                f"{zero_pairs} vector pair(s) with zero total mass; "
                "bray-curtis distance defined as 0 for them",
                stacklevel=2,
            )
    d += d.T
    return d


@dataclass(frozen=True)
class Merge:
    """One agglomeration step: nodes ``left`` and ``right`` (left < right)
    joined at ``height`` into new node ``node``."""

    left: int
    right: int
    height: float
    node: int


@dataclass(frozen=True)
class Dendrogram:
    leaves: tuple[str, ...]
    merges: tuple[Merge, ...]

    @property
    def n_leaves(self) -> int:
        return len(self.leaves)

    def heights(self) -> tuple[float, ...]:
        return tuple(m.height for m in self.merges)

    def to_records(self) -> dict:
        return {
            "leaves": list(self.leaves),
            "merges": [
                {"left": m.left, "right": m.right, "height": m.height, "node": m.node}
                for m in self.merges
            ],
        }

    @classmethod
    def from_records(cls, data: dict) -> "Dendrogram":
        return cls(
            leaves=tuple(data["leaves"]),
            merges=tuple(
                Merge(m["left"], m["right"], float(m["height"]), m["node"])
                for m in data["merges"]
            ),
        )


def agglomerate(
    distances: np.ndarray,
    linkage: str,
    leaves: Sequence[str] | None = None,
) -> Dendrogram:
    """Agglomerate a distance matrix into a full merge tree.

    Cluster-to-cluster distances are maintained with the Lance-Williams
    update for the chosen linkage.  For Ward the input must be squared
    Euclidean distances; heights are then the recurrence's merge costs
    (2 * |A||B|/(|A|+|B|) * ||centroid_A - centroid_B||^2).

    Args:
        distances: Square symmetric matrix with zero diagonal.
        linkage: ``"ward"`` or ``"average"``.
        leaves: Optional labels; defaults to stringified indices.

    Returns:
        Dendrogram with exactly n-1 merges for n leaves.
    """
    if linkage not in LINKAGES:
        raise ValueError(f"unknown linkage {linkage!r} (use one of {LINKAGES})")
    d = np.array(distances, dtype=np.float64)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise ValueError(f"distance matrix must be square, got shape {d.shape}")
    if not np.isfinite(d).all():
        raise ValueError("distance matrix contains non-finite entries")
    if not np.allclose(d, d.T, atol=1e-12):
        raise ValueError("distance matrix must be symmetric")
    n = d.shape[0]
    if n == 0:
        raise ValueError("cannot agglomerate an empty distance matrix")
    labels = tuple(leaves) if leaves is not None else tuple(str(i) for i in range(n))
    if len(labels) != n:
        raise ValueError(f"{len(labels)} leaf labels for {n} points")

    work = d.copy()
    np.fill_diagonal(work, np.inf)
    node_of_slot = np.arange(n, dtype=np.int64)  # node id currently held by each slot
    sizes = np.ones(n, dtype=np.int64)
    active = np.ones(n, dtype=bool)
    merges: list[Merge] = []

    for step in range(n - 1):
        masked = np.where(active[:, None] & active[None, :], work, np.inf)
        height = float(masked.min())
        # Tie rule: among all pairs at the minimum, pick the smallest
        # (left node id, right node id) with left < right.
        tie_slots = np.argwhere(masked == height)
        best: tuple[int, int] | None = None
        best_slots: tuple[int, int] | None = None
        for a, b in tie_slots:
            ids = (int(node_of_slot[a]), int(node_of_slot[b]))
            if ids[0] >= ids[1]:
                continue
            if best is None or ids < best:
                best = ids
                best_slots = (int(a), int(b))
        assert best is not None and best_slots is not None
        sa, sb = best_slots
        si, sj = int(sizes[sa]), int(sizes[sb])
        others = active.copy()
        others[[sa, sb]] = False
        if linkage == AVERAGE:
            new_row = (si * work[sa] + sj * work[sb]) / (si + sj)
        else:  # ward
            sk = sizes.astype(np.float64)
            new_row = (
                (sk + si) * work[sa] + (sk + sj) * work[sb] - sk * height
            ) / (sk + si + sj)
        new_node = n + step
        work[sa, :] = np.where(others, new_row, np.inf)
        work[:, sa] = work[sa, :]
        work[sb, :] = np.inf
        work[:, sb] = np.inf
        active[sb] = False
        sizes[sa] = si + sj
        node_of_slot[sa] = new_node
        merges.append(Merge(left=best[0], right=best[1], height=height, node=new_node))

    return Dendrogram(leaves=labels, merges=tuple(merges))


@dataclass(frozen=True)
class ClusterAssignment:
    """A cut of the dendrogram into k labeled clusters (ids 1..k).

    Cluster ids are ordered by each cluster's smallest leaf index, so the
    labeling is deterministic.
    """

    labels: Mapping[str, int]
    k: int

    def members(self, cluster_id: int) -> tuple[str, ...]:
        return tuple(kw for kw, cid in self.labels.items() if cid == cluster_id)

    def clusters(self) -> dict[int, tuple[str, ...]]:
        out: dict[int, list[str]] = {cid: [] for cid in range(1, self.k + 1)}
        for kw, cid in self.labels.items():
            out[cid].append(kw)
        return {cid: tuple(kws) for cid, kws in out.items()}

    def to_records(self) -> dict:
        return {"k": self.k, "labels": dict(self.labels)}

    @classmethod
    def from_records(cls, data: dict) -> "ClusterAssignment":
        return cls(labels=dict(data["labels"]), k=int(data["k"]))


def cut_to_k(dendrogram: Dendrogram, k: int) -> ClusterAssignment:
    """Undo the last k-1 merges, yielding k clusters labeled 1..k."""
    n = dendrogram.n_leaves
    if not (1 <= k <= n):
        raise ValueError(f"k must be in [1, {n}], got {k}")
    members: dict[int, list[int]] = {i: [i] for i in range(n)}
    for merge in dendrogram.merges[: n - k]:
        members[merge.node] = members.pop(merge.left) + members.pop(merge.right)
    clusters = sorted(members.values(), key=min)
    labels: dict[str, int] = {}
    for cid, leaf_indices in enumerate(clusters, start=1):
        for idx in sorted(leaf_indices):
            labels[dendrogram.leaves[idx]] = cid
    return ClusterAssignment(labels=labels, k=k)


def cluster_vectors(
    labels: Sequence[str],
    vectors: Sequence[Sequence[float]],
    metric: str = SQUARED_EUCLIDEAN,
    linkage: str = WARD,
) -> Dendrogram:
    """Distance computation plus agglomeration in one validated step."""
    validate_linkage_metric(linkage, metric)
    return agglomerate(pairwise_distances(vectors, metric), linkage, leaves=labels)


@dataclass(frozen=True, eq=False)
class CoClusterIndicator:
    """Boolean keyword-pair matrix: 1 iff one coder put both keywords in a
    common code.  The diagonal marks keywords the coder covered at all."""

    keywords: tuple[str, ...]
    values: np.ndarray  # shape (n, n), dtype bool

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=bool)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)


@dataclass(frozen=True, eq=False)
class ConsensusMatrix:
    """Per-pair count of coders whose codings co-cluster the two keywords."""

    keywords: tuple[str, ...]
    values: np.ndarray  # shape (n, n), dtype int64
    n_coders: int

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=np.int64)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)


def code_map_indicator(code_map, keywords: Sequence[str]) -> CoClusterIndicator:
    """Derive one coder's co-cluster indicator over a fixed keyword universe.

    Two keywords co-cluster iff their code sets intersect; keywords absent
    from the map share no code with anything (including themselves).
    """
    kws = tuple(keywords)
    n = len(kws)
    values = np.zeros((n, n), dtype=bool)
    code_sets = [code_map.codes(kw) for kw in kws]
    for i in range(n):
        if not code_sets[i]:
            continue
        for j in range(i, n):
            if code_sets[i] & code_sets[j]:
                values[i, j] = values[j, i] = True
    return CoClusterIndicator(keywords=kws, values=values)


def consensus_matrix(indicators: Iterable[CoClusterIndicator]) -> ConsensusMatrix:
    """Element-wise sum of per-coder co-cluster indicators."""
    indicators = list(indicators)
    if not indicators:
        raise ValueError("consensus requires at least one coder indicator")
    keywords = indicators[0].keywords
    for ind in indicators[1:]:
        if ind.keywords != keywords:
            raise ValueError("coder indicators cover different keyword universes")
    total = np.zeros((len(keywords), len(keywords)), dtype=np.int64)
    for ind in indicators:
        total += ind.values.astype(np.int64)
    return ConsensusMatrix(keywords=keywords, values=total, n_coders=len(indicators))


def consensus_dendrogram(consensus: ConsensusMatrix) -> Dendrogram:
    """Cluster the joint coder matrix: Bray-Curtis over its rows, average linkage."""
    distances = pairwise_distances(consensus.values.astype(np.float64), BRAY_CURTIS)
    return agglomerate(distances, AVERAGE, leaves=consensus.keywords)
