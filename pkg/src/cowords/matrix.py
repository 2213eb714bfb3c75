"""Binary document-keyword matrices, co-occurrence counts, and Pearson correlations.

Keywords are rows (variables), papers are columns (observations); a cell is 1
iff the keyword appears on the paper.  Matrices are dense: at the intended
scale (hundreds of keywords, a few thousand papers) dense numpy arrays are
simpler and fast enough.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

from .corpus import Corpus, frequency_table


class DegenerateMatrixError(ValueError):
    """Filtering left fewer than two keywords, so no pairwise statistics exist."""


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class DocTermMatrix:
    """Binary incidence of keywords (rows) on papers (columns)."""

    keywords: tuple[str, ...]
    papers: tuple[str, ...]
    cells: np.ndarray  # shape (len(keywords), len(papers)), dtype int8

    def __post_init__(self) -> None:
        object.__setattr__(self, "cells", _readonly(np.asarray(self.cells, dtype=np.int8)))
        if self.cells.shape != (len(self.keywords), len(self.papers)):
            raise ValueError(
                f"cells shape {self.cells.shape} does not match "
                f"{len(self.keywords)} keywords x {len(self.papers)} papers"
            )

    def row(self, keyword: str) -> np.ndarray:
        return self.cells[self.keywords.index(keyword)]

    def occurrence_counts(self) -> dict[str, int]:
        sums = self.cells.sum(axis=1)
        return {kw: int(s) for kw, s in zip(self.keywords, sums)}

    def to_records(self) -> dict:
        return {
            "keywords": list(self.keywords),
            "papers": list(self.papers),
            "cells": self.cells.astype(int).tolist(),
        }

    @classmethod
    def from_records(cls, data: dict) -> "DocTermMatrix":
        return cls(
            keywords=tuple(data["keywords"]),
            papers=tuple(data["papers"]),
            cells=np.asarray(data["cells"], dtype=np.int8),
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps(self.to_records(), ensure_ascii=False, sort_keys=True, indent=2) + "\n",
            encoding="utf-8",
        )

    @classmethod
    def load(cls, path: str | Path) -> "DocTermMatrix":
        return cls.from_records(json.loads(Path(path).read_text(encoding="utf-8")))


@dataclass(frozen=True, eq=False)
class CooccurrenceMatrix:
    """Symmetric pair counts; the diagonal holds per-keyword occurrence counts."""

    keywords: tuple[str, ...]
    values: np.ndarray  # shape (n, n), dtype int64

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _readonly(np.asarray(self.values, dtype=np.int64)))

    def pair(self, a: str, b: str) -> int:
        i, j = self.keywords.index(a), self.keywords.index(b)
        return int(self.values[i, j])


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    """Pearson coefficients between keyword rows; symmetric, unit diagonal.

    ``constant_keywords`` lists rows that were constant across papers; their
    correlations are defined as 0 (Pearson is undefined there).
    """

    keywords: tuple[str, ...]
    values: np.ndarray  # shape (n, n), dtype float64
    constant_keywords: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _readonly(np.asarray(self.values, dtype=np.float64)))

    def pair(self, a: str, b: str) -> float:
        i, j = self.keywords.index(a), self.keywords.index(b)
        return float(self.values[i, j])

    def row(self, keyword: str) -> np.ndarray:
        return self.values[self.keywords.index(keyword)]


def build_doc_term_matrix(
    corpus: Corpus,
    min_occurrence: int = 0,
    excluded: Iterable[str] = (),
) -> DocTermMatrix:
    """Build the binary matrix after applying exclusions and the count threshold.

    Keywords in ``excluded`` are removed first, then keywords occurring on
    fewer than ``min_occurrence`` papers.  Papers left without any retained
    keyword are dropped from the columns.  Keywords are ordered
    lexicographically and papers by id, so the result is deterministic.

    Raises:
        DegenerateMatrixError: If fewer than two keywords survive filtering.
    """
    excluded_set = set(excluded)
    counts = frequency_table(corpus).counts()
    retained = sorted(
        kw
        for kw, count in counts.items()
        if kw not in excluded_set and count >= min_occurrence
    )
    if len(retained) < 2:
        raise DegenerateMatrixError(
            f"only {len(retained)} keyword(s) retained "
            f"(min_occurrence={min_occurrence}, {len(excluded_set)} excluded)"
        )
    retained_set = set(retained)
    kept_papers = sorted(
        (p for p in corpus.papers if retained_set & set(p.keywords)),
        key=lambda p: p.id,
    )
    kw_index = {kw: i for i, kw in enumerate(retained)}
    cells = np.zeros((len(retained), len(kept_papers)), dtype=np.int8)
    for col, paper in enumerate(kept_papers):
        for kw in set(paper.keywords) & retained_set:
            cells[kw_index[kw], col] = 1
    return DocTermMatrix(
        keywords=tuple(retained),
        papers=tuple(p.id for p in kept_papers),
        cells=cells,
    )


def cooccurrence(m: DocTermMatrix) -> CooccurrenceMatrix:
    """Count, for every keyword pair, the papers carrying both keywords."""
    x = m.cells.astype(np.int64)
    return CooccurrenceMatrix(keywords=m.keywords, values=x @ x.T)


def correlation(m: DocTermMatrix) -> CorrelationMatrix:
    """Pearson product-moment coefficients between the binary keyword rows.

    Rows constant across all papers have undefined Pearson coefficients; they
    are flagged, a warning is emitted, and their correlations are set to 0 so
    the pipeline stays total.  The diagonal is exactly 1 and the matrix is
    exactly symmetric.
    """
    x = m.cells.astype(np.float64)
    centered = x - x.mean(axis=1, keepdims=True)
    norms = np.sqrt((centered**2).sum(axis=1))
    constant_mask = norms == 0.0
    constant = tuple(kw for kw, flag in zip(m.keywords, constant_mask) if flag)
    if constant:
        warnings.warn(
            "constant keyword rows have undefined correlations, set to 0: "
            + ", ".join(constant),
            stacklevel=2,
        )
    denom = np.outer(norms, norms)
    with np.errstate(divide="ignore", invalid="ignore"):
        values = (centered @ centered.T) / denom
    values[denom == 0.0] = 0.0
    values = (values + values.T) / 2.0
    np.clip(values, -1.0, 1.0, out=values)
    np.fill_diagonal(values, 1.0)
    return CorrelationMatrix(keywords=m.keywords, values=values, constant_keywords=constant)
