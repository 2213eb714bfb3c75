"""Read-only HTTP/JSON query service over a saved analysis snapshot.

The service exposes keyword search, keyword detail (co-occurrences, papers,
trends), cluster browsing, the strategic diagram, and corpus metadata under
``/api/v1/``.  All responses are pure functions of the loaded snapshot; a
reload swaps the snapshot and its derived query index atomically, so
concurrent readers always see one consistent pair.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import FileResponse, JSONResponse

from . import trends as _trends
from .netmetrics import QUADRANT_LABELS
from .report import AnalysisSnapshot, load_snapshot, strategic_records, validate_snapshot

API_PREFIX = "/api/v1"
DEFAULT_LIMIT = 50
MAX_LIMIT = 500


@dataclass(frozen=True)
class Neighbor:
    keyword: str
    count: int
    correlation: float | None
    cluster: int | None


class QueryIndex:
    """Immutable lookup structures derived from one snapshot.

    Search and detail cover every keyword in the corpus, not only the
    retained (thresholded) set; cluster ids and correlations exist for
    retained keywords only and are null elsewhere.
    """

    def __init__(self, snapshot: AnalysisSnapshot):
        self.snapshot = snapshot
        corpus = snapshot.corpus
        self.counts: dict[str, int] = snapshot.frequency.counts()
        self.clusters_of: dict[str, int] = dict(snapshot.assignment.labels)
        self.papers_of: dict[str, list[str]] = {}
        paper_order = sorted(corpus.papers, key=lambda p: (-p.year, p.id))
        self.papers = {p.id: p for p in corpus.papers}
        self.paper_ids = [p.id for p in paper_order]
        cooc_counts: dict[str, dict[str, int]] = {}
        for paper in paper_order:
            kws = sorted(set(paper.keywords))
            for kw in kws:
                self.papers_of.setdefault(kw, []).append(paper.id)
            for i, a in enumerate(kws):
                for b in kws[i + 1:]:
                    cooc_counts.setdefault(a, {})[b] = cooc_counts.get(a, {}).get(b, 0) + 1
                    cooc_counts.setdefault(b, {})[a] = cooc_counts.get(b, {}).get(a, 0) + 1
        corr = snapshot.corr
        corr_index = {kw: i for i, kw in enumerate(corr.keywords)}
        self.neighbors: dict[str, tuple[Neighbor, ...]] = {}
        for kw in self.counts:
            found = []
            for other, count in cooc_counts.get(kw, {}).items():
                correlation = None
                if kw in corr_index and other in corr_index:
                    correlation = float(corr.values[corr_index[kw], corr_index[other]])
                found.append(
                    Neighbor(
                        keyword=other,
                        count=count,
                        correlation=correlation,
                        cluster=self.clusters_of.get(other),
                    )
                )
            found.sort(
                key=lambda nb: (
                    -nb.count,
                    -(nb.correlation if nb.correlation is not None else float("-inf")),
                    nb.keyword,
                )
            )
            self.neighbors[kw] = tuple(found)
        lo, hi = snapshot.trend_years
        year_list = list(range(lo, hi + 1))
        self.trend_series: dict[str, tuple[tuple[int, int], ...]] = {}
        self.trend_fits: dict[str, _trends.TrendFit] = {}
        for kw in self.counts:
            stored = snapshot.trend_series.get(kw)
            series = stored if stored is not None else _trends.yearly_counts(
                corpus, kw, year_list
            )
            self.trend_series[kw] = series
            fit = snapshot.trend_fits.get(kw)
            if fit is None and len(series) >= 3:
                fit = _trends.linear_trend(kw, [(y, float(c)) for y, c in series])
            if fit is not None:
                self.trend_fits[kw] = fit
        self.all_keywords: tuple[str, ...] = tuple(
            sorted(self.counts, key=lambda k: (-self.counts[k], k))
        )

    def search(self, query: str) -> list[str]:
        """Case-insensitive substring search, ranked prefix-first, then by
        occurrence count descending, then lexicographically."""
        q = query.casefold().strip()
        if not q:
            return list(self.all_keywords)
        hits = [kw for kw in self.all_keywords if q in kw.casefold()]
        hits.sort(
            key=lambda kw: (0 if kw.casefold().startswith(q) else 1, -self.counts[kw], kw)
        )
        return hits


class SnapshotStore:
    """Holds the active (snapshot, index) pair; reload builds a fresh pair
    off to the side and swaps it in with a single attribute assignment."""

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self._reload_lock = threading.Lock()
        self._state: tuple[AnalysisSnapshot, QueryIndex] | None = None

    @classmethod
    def from_snapshot(cls, snapshot: AnalysisSnapshot) -> "SnapshotStore":
        store = cls.__new__(cls)
        store.directory = Path(".")
        store._reload_lock = threading.Lock()
        validate_snapshot(snapshot)
        store._state = (snapshot, QueryIndex(snapshot))
        return store

    def load(self) -> None:
        with self._reload_lock:
            snapshot = load_snapshot(self.directory)
            self._state = (snapshot, QueryIndex(snapshot))

    @property
    def state(self) -> tuple[AnalysisSnapshot, QueryIndex]:
        state = self._state
        if state is None:
            raise RuntimeError("snapshot store not loaded")
        return state

    reload = load


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(
        status_code=status, content={"error": {"code": code, "message": message}}
    )


def _not_found(kind: str, name: str) -> HTTPException:
    return HTTPException(status_code=404, detail=f"{kind} {name!r} not found")


def _paginate(items: Sequence, offset: int, limit: int) -> list:
    return list(items[offset : offset + limit])


def _keyword_summary(index: QueryIndex, kw: str) -> dict:
    return {
        "keyword": kw,
        "occurrences": index.counts[kw],
        "cluster": index.clusters_of.get(kw),
    }


def _paper_records(index: QueryIndex, paper_id: str) -> dict:
    p = index.papers[paper_id]
    return {
        "id": p.id,
        "title": p.title,
        "venue": p.venue,
        "year": p.year,
        "keywords": list(p.keywords),
    }


def _fit_records(fit: _trends.TrendFit | None) -> dict | None:
    if fit is None:
        return None
    return {
        "slope": fit.slope,
        "stderr": fit.stderr,
        "p_value": fit.p_value,
        "total": fit.total_count,
        "years": list(fit.years),
        "significant": fit.significant,
    }


def _neighbor_records(nb: Neighbor) -> dict:
    return {
        "keyword": nb.keyword,
        "count": nb.count,
        "correlation": nb.correlation,
        "cluster": nb.cluster,
    }


def _trend_records(index: QueryIndex, kw: str) -> dict:
    lo, hi = index.snapshot.trend_years
    return {
        "keyword": kw,
        "years": [lo, hi],
        "series": [[year, count] for year, count in index.trend_series[kw]],
        "fit": _fit_records(index.trend_fits.get(kw)),
    }


def _cluster_records(
    snapshot: AnalysisSnapshot, index: QueryIndex, cluster_id: int, with_members: bool
) -> dict:
    metrics = next(m for m in snapshot.metrics if m.cluster_id == cluster_id)
    point = next(p for p in snapshot.strategic if p.cluster_id == cluster_id)
    members = sorted(
        snapshot.assignment.members(cluster_id),
        key=lambda kw: (-index.counts.get(kw, 0), kw),
    )
    data = {
        "id": cluster_id,
        "n": metrics.n,
        "median_freq": metrics.median_freq,
        "cw_freq": metrics.cw_freq,
        "centrality": metrics.centrality,
        "density": metrics.density,
        "quadrant": point.quadrant,
        "quadrant_label": QUADRANT_LABELS[point.quadrant],
        "top_keywords": members[:2],
    }
    if with_members:
        data["members"] = [
            {"keyword": kw, "occurrences": index.counts.get(kw, 0)} for kw in members
        ]
    return data


def create_app(
    snapshot: str | Path | AnalysisSnapshot | SnapshotStore,
    static_dir: str | Path | None = None,
) -> FastAPI:
    """Build the API application.

    ``snapshot`` may be a snapshot directory, an in-memory snapshot, or a
    prepared SnapshotStore.  Loading and validation happen here, before the
    server starts taking requests, so a broken snapshot fails fast.
    """
    if isinstance(snapshot, SnapshotStore):
        store = snapshot
        if store._state is None:
            store.load()
    elif isinstance(snapshot, AnalysisSnapshot):
        store = SnapshotStore.from_snapshot(snapshot)
    else:
        store = SnapshotStore(snapshot)
        store.load()

    app = FastAPI(title="cowords", docs_url=None, redoc_url=None, openapi_url=None)
    app.state.store = store

    @app.exception_handler(HTTPException)
    async def http_error(request: Request, exc: HTTPException):
        code = "not_found" if exc.status_code == 404 else "error"
        return _error(exc.status_code, code, str(exc.detail))

    @app.exception_handler(RequestValidationError)
    async def validation_error(request: Request, exc: RequestValidationError):
        first = exc.errors()[0] if exc.errors() else {}
        where = ".".join(str(part) for part in first.get("loc", ()))
        message = first.get("msg", "invalid request")
        return _error(422, "invalid_request", f"{where}: {message}" if where else message)

    @app.get(f"{API_PREFIX}/keywords")
    def list_keywords(
        q: str = "",
        limit: int = Query(DEFAULT_LIMIT, ge=1, le=MAX_LIMIT),
        offset: int = Query(0, ge=0),
    ):
        _, index = store.state
        hits = index.search(q)
        return {
            "total": len(hits),
            "offset": offset,
            "limit": limit,
            "items": [_keyword_summary(index, kw) for kw in _paginate(hits, offset, limit)],
        }

    @app.get(f"{API_PREFIX}/papers")
    def list_papers(
        keyword: str | None = None,
        limit: int = Query(DEFAULT_LIMIT, ge=1, le=MAX_LIMIT),
        offset: int = Query(0, ge=0),
    ):
        _, index = store.state
        if keyword is None:
            ids = index.paper_ids
        else:
            if keyword not in index.counts:
                raise _not_found("keyword", keyword)
            ids = index.papers_of.get(keyword, [])
        return {
            "total": len(ids),
            "offset": offset,
            "limit": limit,
            "items": [_paper_records(index, pid) for pid in _paginate(ids, offset, limit)],
        }

    @app.get(f"{API_PREFIX}/clusters")
    def list_clusters():
        snapshot, index = store.state
        return {
            "k": snapshot.assignment.k,
            "items": [
                _cluster_records(snapshot, index, m.cluster_id, with_members=False)
                for m in snapshot.metrics
            ],
        }

    @app.get(f"{API_PREFIX}/clusters/{{cluster_id}}")
    def get_cluster(cluster_id: int):
        snapshot, index = store.state
        if not (1 <= cluster_id <= snapshot.assignment.k):
            raise _not_found("cluster", str(cluster_id))
        return _cluster_records(snapshot, index, cluster_id, with_members=True)

    @app.get(f"{API_PREFIX}/strategic")
    def get_strategic():
        snapshot, _ = store.state
        return strategic_records(snapshot)

    @app.get(f"{API_PREFIX}/meta")
    def get_meta():
        snapshot, index = store.state
        return {
            "digest": snapshot.digest.to_records(),
            "config": snapshot.config.to_records(),
            "keyword_kind": snapshot.corpus.keyword_kind,
            "provenance": snapshot.corpus.provenance,
            "retained_keywords": len(snapshot.doc_term.keywords),
            "clusters": snapshot.assignment.k,
            "years": list(snapshot.trend_years),
            "venues": list(snapshot.corpus.venues()),
            "powerlaw": (
                {
                    "alpha": snapshot.powerlaw.alpha,
                    "r_squared": snapshot.powerlaw.r_squared,
                    "n_points": snapshot.powerlaw.n_points,
                    "degenerate": snapshot.powerlaw.degenerate,
                }
                if snapshot.powerlaw
                else None
            ),
        }

    # Keyword routes use path converters because canonical keywords may
    # contain "/".  Subresource routes are registered first so their literal
    # suffixes win over the greedy detail route.
    @app.get(f"{API_PREFIX}/keywords/{{keyword:path}}/cooccurring")
    def get_cooccurring(
        keyword: str,
        limit: int = Query(DEFAULT_LIMIT, ge=1, le=MAX_LIMIT),
        offset: int = Query(0, ge=0),
    ):
        _, index = store.state
        if keyword not in index.counts:
            raise _not_found("keyword", keyword)
        neighbors = index.neighbors.get(keyword, ())
        return {
            "keyword": keyword,
            "total": len(neighbors),
            "offset": offset,
            "limit": limit,
            "items": [
                _neighbor_records(nb) for nb in _paginate(neighbors, offset, limit)
            ],
        }

    @app.get(f"{API_PREFIX}/keywords/{{keyword:path}}/trend")
    def get_trend(keyword: str):
        _, index = store.state
        if keyword not in index.counts:
            raise _not_found("keyword", keyword)
        return _trend_records(index, keyword)

    @app.get(f"{API_PREFIX}/keywords/{{keyword:path}}")
    def keyword_detail(keyword: str):
        snapshot, index = store.state
        if keyword not in index.counts:
            raise _not_found("keyword", keyword)
        cluster_id = index.clusters_of.get(keyword)
        return {
            **_keyword_summary(index, keyword),
            "cluster_label": (
                QUADRANT_LABELS[
                    next(
                        p.quadrant
                        for p in snapshot.strategic
                        if p.cluster_id == cluster_id
                    )
                ]
                if cluster_id is not None
                else None
            ),
            "papers": [
                _paper_records(index, pid) for pid in index.papers_of.get(keyword, [])
            ],
            "cooccurring": [
                _neighbor_records(nb) for nb in index.neighbors.get(keyword, ())
            ],
            "trend": _trend_records(index, keyword),
        }

    if static_dir is not None:
        static_dir = Path(static_dir)
        index_html = static_dir / "index.html"

        @app.get("/assets/{asset_path:path}")
        def get_asset(asset_path: str):
            target = (static_dir / "assets" / asset_path).resolve()
            if not str(target).startswith(str((static_dir / "assets").resolve())):
                raise _not_found("asset", asset_path)
            if not target.is_file():
                raise _not_found("asset", asset_path)
            return FileResponse(target)

        @app.get("/{view_path:path}")
        def spa(view_path: str):
            # Single-page app: every non-API route serves the shell, which
            # restores the view from the URL.
            if view_path.startswith("api/") or not index_html.is_file():
                raise _not_found("page", view_path)
            return FileResponse(index_html)

    return app
