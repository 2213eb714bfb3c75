"""Pipeline orchestration: run the full analysis, persist it as a snapshot
directory, and emit the tabular/graph exports.

The pipeline order is: venue/year filter, frequency table, document-keyword
matrix (threshold + exclusions), co-occurrence, correlation, clustering,
network, cluster metrics, strategic diagram, trends.  A snapshot bundles
every stage's output with the configuration that produced it; identical
corpus + configuration give byte-identical snapshot files and exports.
"""

from __future__ import annotations

import csv
import io
import json
import statistics
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from . import cluster as _cluster
from . import netmetrics as _net
from . import trends as _trends
from .corpus import (
    FORMAT_RECORDS,
    Corpus,
    FrequencyEntry,
    FrequencyTable,
    filter_corpus,
    frequency_table,
    parse_corpus,
    serialize_corpus,
)
from .matrix import (
    CooccurrenceMatrix,
    CorrelationMatrix,
    DocTermMatrix,
    build_doc_term_matrix,
    cooccurrence,
    correlation,
)

SNAPSHOT_VERSION = 1

_SNAPSHOT_FILES = (
    "snapshot.json",
    "papers.json",
    "frequency.json",
    "doc_term.json",
    "cooccurrence.json",
    "correlation.json",
    "dendrogram.json",
    "clusters.json",
    "network.json",
    "strategic.json",
    "trends.json",
)


class PipelineError(RuntimeError):
    """Pipeline failure annotated with the stage that raised it."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"[{stage}] {cause}")
        self.stage = stage
        self.cause = cause


class SnapshotValidationError(ValueError):
    pass


@dataclass(frozen=True)
class PipelineConfig:
    """Everything that determines a snapshot besides the corpus itself."""

    clusters: int
    min_occurrence: int = 0
    excluded: tuple[str, ...] = ()
    linkage: str = _cluster.WARD
    metric: str = _cluster.SQUARED_EUCLIDEAN
    years: tuple[int, int] | None = None
    venues: tuple[str, ...] | None = None
    trend_top: int = 15

    def __post_init__(self) -> None:
        _cluster.validate_linkage_metric(self.linkage, self.metric)
        object.__setattr__(self, "metric", _cluster.normalize_metric(self.metric))
        object.__setattr__(self, "excluded", tuple(self.excluded))
        if self.venues is not None:
            object.__setattr__(self, "venues", tuple(self.venues))
        if self.clusters < 1:
            raise ValueError(f"clusters must be >= 1, got {self.clusters}")
        if self.min_occurrence < 0:
            raise ValueError(f"min_occurrence must be >= 0, got {self.min_occurrence}")
        if self.trend_top < 1:
            raise ValueError(f"trend_top must be >= 1, got {self.trend_top}")
        if self.years is not None and self.years[0] > self.years[1]:
            raise ValueError(f"year range {self.years} is empty")

    def to_records(self) -> dict:
        return {
            "clusters": self.clusters,
            "min_occurrence": self.min_occurrence,
            "excluded": list(self.excluded),
            "linkage": self.linkage,
            "metric": self.metric,
            "years": list(self.years) if self.years else None,
            "venues": list(self.venues) if self.venues is not None else None,
            "trend_top": self.trend_top,
        }

    @classmethod
    def from_records(cls, data: Mapping) -> "PipelineConfig":
        return cls(
            clusters=int(data["clusters"]),
            min_occurrence=int(data["min_occurrence"]),
            excluded=tuple(data["excluded"]),
            linkage=data["linkage"],
            metric=data["metric"],
            years=tuple(data["years"]) if data.get("years") else None,
            venues=tuple(data["venues"]) if data.get("venues") is not None else None,
            trend_top=int(data.get("trend_top", 15)),
        )


@dataclass(frozen=True)
class CorpusDigest:
    """Headline corpus counts, computed after venue/year filtering but
    before frequency thresholds or exclusions."""

    n_papers: int
    n_papers_with_keywords: int
    n_unique_keywords: int
    n_occurrences: int

    def to_records(self) -> dict:
        return {
            "papers": self.n_papers,
            "papers_with_keywords": self.n_papers_with_keywords,
            "unique_keywords": self.n_unique_keywords,
            "occurrences": self.n_occurrences,
        }

    @classmethod
    def from_records(cls, data: Mapping) -> "CorpusDigest":
        return cls(
            n_papers=int(data["papers"]),
            n_papers_with_keywords=int(data["papers_with_keywords"]),
            n_unique_keywords=int(data["unique_keywords"]),
            n_occurrences=int(data["occurrences"]),
        )


def corpus_digest(corpus: Corpus) -> CorpusDigest:
    table = frequency_table(corpus)
    return CorpusDigest(
        n_papers=len(corpus.papers),
        n_papers_with_keywords=sum(1 for p in corpus.papers if p.has_keywords),
        n_unique_keywords=len(table.entries),
        n_occurrences=table.total,
    )


@dataclass(frozen=True)
class AnalysisSnapshot:
    config: PipelineConfig
    digest: CorpusDigest
    corpus: Corpus
    frequency: FrequencyTable
    doc_term: DocTermMatrix
    cooc: CooccurrenceMatrix
    corr: CorrelationMatrix
    dendrogram: _cluster.Dendrogram
    assignment: _cluster.ClusterAssignment
    metrics: tuple[_net.ClusterMetrics, ...]
    strategic: tuple[_net.StrategicPoint, ...]
    network: _net.KeywordNetwork
    trend_years: tuple[int, int]
    trend_series: Mapping[str, tuple[tuple[int, int], ...]]
    trend_fits: Mapping[str, _trends.TrendFit]
    trend_table: tuple[_trends.TrendFit, ...]
    powerlaw: _trends.PowerLawFit | None = None


def run_pipeline(corpus: Corpus, config: PipelineConfig) -> AnalysisSnapshot:
    """Execute every analysis stage; any stage failure is re-raised as a
    PipelineError naming the stage."""

    def stage(name: str, fn, *args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except PipelineError:
            raise
        except Exception as exc:
            raise PipelineError(name, exc) from exc

    venues_filter = set(config.venues) if config.venues is not None else None
    working = stage("filter", filter_corpus, corpus, venues=venues_filter, years=config.years)
    digest = stage("filter", corpus_digest, working)
    freq = stage("frequency", frequency_table, working)
    powerlaw = None
    if sum(1 for e in freq.entries if e.count >= 1) >= 3:
        powerlaw = stage("frequency", _trends.powerlaw_fit, freq)

    doc_term = stage(
        "matrix",
        build_doc_term_matrix,
        working,
        min_occurrence=config.min_occurrence,
        excluded=config.excluded,
    )
    cooc = stage("matrix", cooccurrence, doc_term)
    corr = stage("correlation", correlation, doc_term)

    def _cluster_stage():
        vectors = [corr.row(kw) for kw in corr.keywords]
        distances = _cluster.pairwise_distances(vectors, config.metric)
        dendrogram = _cluster.agglomerate(distances, config.linkage, leaves=corr.keywords)
        k = min(config.clusters, len(corr.keywords))
        return dendrogram, _cluster.cut_to_k(dendrogram, k)

    dendrogram, assignment = stage("cluster", _cluster_stage)
    network = stage("network", _net.build_network, corr, freq)
    metrics = stage("metrics", _net.cluster_metrics, network, assignment, cooc, freq)
    strategic = stage("strategic", _net.strategic_diagram, metrics)

    def _trend_stage():
        if config.years:
            lo, hi = config.years
        else:
            observed = working.years()
            if not observed:
                raise ValueError("corpus has no papers to derive a year range from")
            lo, hi = min(observed), max(observed)
        year_list = list(range(lo, hi + 1))
        series: dict[str, tuple[tuple[int, int], ...]] = {}
        fits: dict[str, _trends.TrendFit] = {}
        for kw in corr.keywords:
            kw_series = _trends.yearly_counts(working, kw, year_list)
            series[kw] = kw_series
            if len(kw_series) >= 3:
                fits[kw] = _trends.linear_trend(
                    kw, [(y, float(c)) for y, c in kw_series]
                )
        table = (
            _trends.rank_trends(working, config.trend_top, year_list)
            if len(year_list) >= 3
            else ()
        )
        return (lo, hi), series, fits, table

    trend_years, trend_series, trend_fits, trend_table = stage("trends", _trend_stage)

    return AnalysisSnapshot(
        config=config,
        digest=digest,
        corpus=working,
        frequency=freq,
        doc_term=doc_term,
        cooc=cooc,
        corr=corr,
        dendrogram=dendrogram,
        assignment=assignment,
        metrics=metrics,
        strategic=strategic,
        network=network,
        trend_years=trend_years,
        trend_series=trend_series,
        trend_fits=trend_fits,
        trend_table=trend_table,
        powerlaw=powerlaw,
    )


def top_keywords(
    corpus: Corpus,
    n: int,
    venues: set[str] | None = None,
    excluded: Sequence[str] = (),
) -> FrequencyTable:
    """Top-n keyword counts after venue filtering and exclusions.

    Ranks are reassigned after exclusion so the table is self-consistent.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    working = filter_corpus(corpus, venues=venues)
    drop = set(excluded)
    counts: dict[str, int] = {}
    for paper in working.papers:
        for kw in set(paper.keywords) - drop:
            counts[kw] = counts.get(kw, 0) + 1
    ordered = sorted(counts.items(), key=lambda item: (-item[1], item[0]))[:n]
    return FrequencyTable(
        entries=tuple(
            FrequencyEntry(keyword=kw, count=count, rank=rank)
            for rank, (kw, count) in enumerate(ordered, start=1)
        )
    )


def _dump_json(data) -> str:
    return json.dumps(data, ensure_ascii=False, sort_keys=True, indent=2) + "\n"


def _trend_fit_records(fit: _trends.TrendFit) -> dict:
    return {
        "keyword": fit.keyword,
        "total": fit.total_count,
        "slope": fit.slope,
        "stderr": fit.stderr,
        "p_value": fit.p_value,
        "years": list(fit.years),
        "significant": fit.significant,
    }


def _trend_fit_from_records(data: Mapping) -> _trends.TrendFit:
    return _trends.TrendFit(
        keyword=data["keyword"],
        total_count=int(data["total"]),
        slope=float(data["slope"]),
        stderr=float(data["stderr"]),
        p_value=float(data["p_value"]),
        years=(int(data["years"][0]), int(data["years"][1])),
    )


def save_snapshot(snapshot: AnalysisSnapshot, directory: str | Path) -> None:
    """Write the snapshot as a directory of JSON files (UTF-8, sorted keys)."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    files: dict[str, str] = {}
    files["snapshot.json"] = _dump_json(
        {
            "version": SNAPSHOT_VERSION,
            "config": snapshot.config.to_records(),
            "digest": snapshot.digest.to_records(),
            "corpus": {
                "provenance": snapshot.corpus.provenance,
                "keyword_kind": snapshot.corpus.keyword_kind,
            },
        }
    )
    files["papers.json"] = serialize_corpus(snapshot.corpus, FORMAT_RECORDS).decode("utf-8")
    files["frequency.json"] = _dump_json(
        {
            "entries": [
                {"keyword": e.keyword, "count": e.count, "rank": e.rank}
                for e in snapshot.frequency.entries
            ]
        }
    )
    files["doc_term.json"] = _dump_json(snapshot.doc_term.to_records())
    files["cooccurrence.json"] = _dump_json(
        {
            "keywords": list(snapshot.cooc.keywords),
            "values": snapshot.cooc.values.astype(int).tolist(),
        }
    )
    files["correlation.json"] = _dump_json(
        {
            "keywords": list(snapshot.corr.keywords),
            "values": snapshot.corr.values.tolist(),
            "constant_keywords": list(snapshot.corr.constant_keywords),
        }
    )
    files["dendrogram.json"] = _dump_json(snapshot.dendrogram.to_records())
    files["clusters.json"] = _dump_json(
        {
            "assignment": snapshot.assignment.to_records(),
            "metrics": [
                {
                    "cluster": m.cluster_id,
                    "n": m.n,
                    "median_freq": m.median_freq,
                    "cw_freq": m.cw_freq,
                    "density": m.density,
                    "centrality": m.centrality,
                }
                for m in snapshot.metrics
            ],
        }
    )
    files["network.json"] = _dump_json(
        {
            "nodes": [
                {"keyword": node.keyword, "occurrences": node.occurrences}
                for node in snapshot.network.nodes
            ],
            "edges": [
                {"source": e.source, "target": e.target, "weight": e.weight}
                for e in snapshot.network.edges
            ],
        }
    )
    files["strategic.json"] = _dump_json(strategic_records(snapshot))
    files["trends.json"] = _dump_json(
        {
            "years": list(snapshot.trend_years),
            "series": {
                kw: [[year, count] for year, count in series]
                for kw, series in snapshot.trend_series.items()
            },
            "fits": {
                kw: _trend_fit_records(fit) for kw, fit in snapshot.trend_fits.items()
            },
            "table": [_trend_fit_records(f) for f in snapshot.trend_table],
            "powerlaw": (
                {
                    "alpha": snapshot.powerlaw.alpha,
                    "r_squared": snapshot.powerlaw.r_squared,
                    "intercept": snapshot.powerlaw.intercept,
                    "n_points": snapshot.powerlaw.n_points,
                    "degenerate": snapshot.powerlaw.degenerate,
                }
                if snapshot.powerlaw
                else None
            ),
        }
    )
    for name, payload in files.items():
        (directory / name).write_text(payload, encoding="utf-8")


def load_snapshot(directory: str | Path) -> AnalysisSnapshot:
    directory = Path(directory)
    missing = [name for name in _SNAPSHOT_FILES if not (directory / name).exists()]
    if missing:
        raise SnapshotValidationError(
            f"snapshot directory {directory} is missing files: {', '.join(missing)}"
        )

    def read(name: str):
        return json.loads((directory / name).read_text(encoding="utf-8"))

    head = read("snapshot.json")
    if head.get("version") != SNAPSHOT_VERSION:
        raise SnapshotValidationError(
            f"unsupported snapshot version {head.get('version')!r}"
        )
    config = PipelineConfig.from_records(head["config"])
    digest = CorpusDigest.from_records(head["digest"])
    corpus_meta = head.get("corpus", {})
    corpus = parse_corpus(
        (directory / "papers.json").read_bytes(),
        FORMAT_RECORDS,
        provenance=corpus_meta.get("provenance", str(directory)),
        keyword_kind=corpus_meta.get("keyword_kind", "author"),
    )
    freq_data = read("frequency.json")
    frequency = FrequencyTable(
        entries=tuple(
            FrequencyEntry(keyword=e["keyword"], count=int(e["count"]), rank=int(e["rank"]))
            for e in freq_data["entries"]
        )
    )
    doc_term = DocTermMatrix.from_records(read("doc_term.json"))
    cooc_data = read("cooccurrence.json")
    cooc = CooccurrenceMatrix(
        keywords=tuple(cooc_data["keywords"]),
        values=np.asarray(cooc_data["values"], dtype=np.int64),
    )
    corr_data = read("correlation.json")
    corr = CorrelationMatrix(
        keywords=tuple(corr_data["keywords"]),
        values=np.asarray(corr_data["values"], dtype=np.float64),
        constant_keywords=tuple(corr_data["constant_keywords"]),
    )
    dendrogram = _cluster.Dendrogram.from_records(read("dendrogram.json"))
    clusters_data = read("clusters.json")
    assignment = _cluster.ClusterAssignment.from_records(clusters_data["assignment"])
    metrics = tuple(
        _net.ClusterMetrics(
            cluster_id=int(m["cluster"]),
            n=int(m["n"]),
            median_freq=float(m["median_freq"]),
            cw_freq=float(m["cw_freq"]),
            density=float(m["density"]),
            centrality=float(m["centrality"]),
        )
        for m in clusters_data["metrics"]
    )
    network_data = read("network.json")
    network = _net.KeywordNetwork(
        nodes=tuple(
            _net.NetworkNode(keyword=n["keyword"], occurrences=int(n["occurrences"]))
            for n in network_data["nodes"]
        ),
        edges=tuple(
            _net.NetworkEdge(
                source=e["source"], target=e["target"], weight=float(e["weight"])
            )
            for e in network_data["edges"]
        ),
    )
    strategic_data = read("strategic.json")
    strategic = tuple(
        _net.StrategicPoint(
            cluster_id=int(p["cluster"]),
            x=float(p["x"]),
            y=float(p["y"]),
            quadrant=p["quadrant"],
            margin=(float(p["margin"][0]), float(p["margin"][1])),
        )
        for p in strategic_data["points"]
    )
    trends_data = read("trends.json")
    trend_series = {
        kw: tuple((int(y), int(c)) for y, c in series)
        for kw, series in trends_data["series"].items()
    }
    trend_fits = {
        kw: _trend_fit_from_records(f) for kw, f in trends_data["fits"].items()
    }
    trend_table = tuple(_trend_fit_from_records(f) for f in trends_data["table"])
    pl = trends_data.get("powerlaw")
    powerlaw = (
        _trends.PowerLawFit(
            alpha=float(pl["alpha"]),
            r_squared=float(pl["r_squared"]),
            intercept=float(pl["intercept"]),
            n_points=int(pl["n_points"]),
            degenerate=bool(pl["degenerate"]),
        )
        if pl
        else None
    )
    snapshot = AnalysisSnapshot(
        config=config,
        digest=digest,
        corpus=corpus,
        frequency=frequency,
        doc_term=doc_term,
        cooc=cooc,
        corr=corr,
        dendrogram=dendrogram,
        assignment=assignment,
        metrics=metrics,
        strategic=strategic,
        network=network,
        trend_years=(int(trends_data["years"][0]), int(trends_data["years"][1])),
        trend_series=trend_series,
        trend_fits=trend_fits,
        trend_table=trend_table,
        powerlaw=powerlaw,
    )
    validate_snapshot(snapshot)
    return snapshot


def validate_snapshot(snapshot: AnalysisSnapshot) -> None:
    """Cross-check the keyword universes of all snapshot parts.

    Raises SnapshotValidationError on any inconsistency; services use this
    to fail fast at startup.
    """
    retained = snapshot.doc_term.keywords
    problems: list[str] = []
    if snapshot.corr.keywords != retained:
        problems.append("correlation keywords differ from document-term keywords")
    if snapshot.cooc.keywords != retained:
        problems.append("co-occurrence keywords differ from document-term keywords")
    if snapshot.dendrogram.leaves != retained:
        problems.append("dendrogram leaves differ from document-term keywords")
    if set(snapshot.assignment.labels) != set(retained):
        problems.append("cluster assignment covers a different keyword set")
    if sorted(m.cluster_id for m in snapshot.metrics) != list(
        range(1, snapshot.assignment.k + 1)
    ):
        problems.append("cluster metrics do not cover cluster ids 1..k")
    if sorted(p.cluster_id for p in snapshot.strategic) != sorted(
        m.cluster_id for m in snapshot.metrics
    ):
        problems.append("strategic points do not match cluster metrics")
    if snapshot.network.keywords() != retained:
        problems.append("network nodes differ from document-term keywords")
    corpus_ids = {p.id for p in snapshot.corpus.papers}
    if not set(snapshot.doc_term.papers) <= corpus_ids:
        problems.append("document-term matrix references unknown paper ids")
    if set(snapshot.trend_series) != set(retained):
        problems.append("trend series do not cover the retained keywords")
    counts = snapshot.frequency.counts()
    for kw in retained:
        if counts.get(kw, 0) < 1:
            problems.append(f"retained keyword {kw!r} missing from frequency table")
            break
    if problems:
        raise SnapshotValidationError("; ".join(problems))


def strategic_records(snapshot: AnalysisSnapshot) -> dict:
    median_x = float(statistics.median([m.centrality for m in snapshot.metrics]))
    median_y = float(statistics.median([m.density for m in snapshot.metrics]))
    return {
        "median_centrality": median_x,
        "median_density": median_y,
        "points": [
            {
                "cluster": p.cluster_id,
                "x": p.x,
                "y": p.y,
                "quadrant": p.quadrant,
                "label": _net.QUADRANT_LABELS[p.quadrant],
                "margin": [p.margin[0], p.margin[1]],
            }
            for p in snapshot.strategic
        ],
    }


def export_cluster_table(snapshot: AnalysisSnapshot) -> str:
    """Cluster summary CSV; member keywords sorted by frequency (descending,
    ties lexicographic) with the top two marked by a trailing ``*``."""
    counts = snapshot.frequency.counts()
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(
        ["cluster", "n", "median_freq", "cw_freq", "centrality", "density", "keywords"]
    )
    clusters = snapshot.assignment.clusters()
    for m in snapshot.metrics:
        members = sorted(
            clusters[m.cluster_id], key=lambda kw: (-counts.get(kw, 0), kw)
        )
        rendered = [
            f"{kw}*" if idx < 2 else kw for idx, kw in enumerate(members)
        ]
        writer.writerow(
            [
                m.cluster_id,
                m.n,
                f"{m.median_freq:g}",
                f"{m.cw_freq:.6f}",
                f"{m.centrality:.6f}",
                f"{m.density:.6f}",
                "; ".join(rendered),
            ]
        )
    return buffer.getvalue()


def export_graph(snapshot: AnalysisSnapshot, min_weight: float = 0.0) -> str:
    """Node-link JSON for rendering; all nodes kept, edges filtered by
    weight >= min_weight."""
    if min_weight < 0:
        raise ValueError(f"min_weight must be non-negative, got {min_weight}")
    labels = snapshot.assignment.labels
    counts = snapshot.frequency.counts()
    data = {
        "nodes": [
            {
                "id": node.keyword,
                "label": node.keyword,
                "occurrences": counts.get(node.keyword, node.occurrences),
                "cluster": labels[node.keyword],
            }
            for node in snapshot.network.nodes
        ],
        "edges": [
            {"source": e.source, "target": e.target, "weight": e.weight}
            for e in snapshot.network.edges
            if e.weight >= min_weight
        ],
    }
    return _dump_json(data)


def export_strategic(snapshot: AnalysisSnapshot) -> str:
    """Strategic-diagram JSON including the median crosshair values."""
    return _dump_json(strategic_records(snapshot))


def export_trends(snapshot: AnalysisSnapshot) -> str:
    return _trends.trend_table_csv(snapshot.trend_table)


def write_exports(
    snapshot: AnalysisSnapshot,
    directory: str | Path,
    graph_threshold: float = 0.0,
) -> tuple[Path, ...]:
    """Write the four standard exports; returns the paths written."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    outputs = {
        "cluster_table.csv": export_cluster_table(snapshot),
        "graph.json": export_graph(snapshot, graph_threshold),
        "strategic.json": export_strategic(snapshot),
        "trends.csv": export_trends(snapshot),
    }
    paths = []
    for name, payload in outputs.items():
        path = directory / name
        path.write_text(payload, encoding="utf-8")
        paths.append(path)
    return tuple(paths)
