"""Keyword-tagged paper records: parsing, validation, filtering, and frequency tables.

A corpus is an immutable collection of papers, each carrying a venue tag, a
publication year, and an ordered list of keyword strings.  Two input formats
are supported: a delimited table (CSV with a ``keywords`` cell using ``;`` as
the in-cell separator) and structured records (one JSON object per line).
"""

from __future__ import annotations

import csv
import io
import json
from collections import Counter
from dataclasses import dataclass, replace
from pathlib import Path
from typing import IO, Iterable, Mapping

YEAR_MIN = 1980
YEAR_MAX = 2100

KEYWORD_KINDS = ("author", "expert", "taxonomy")

CSV_FIELDS = ("id", "title", "venue", "year", "keywords")
KEYWORD_SEPARATOR = ";"

FORMAT_DELIMITED = "delimited-table"
FORMAT_RECORDS = "structured-records"


class CorpusFormatError(ValueError):
    """A corpus source violated the input grammar (message names the line)."""


@dataclass(frozen=True)
class Paper:
    """One paper record.  ``keywords`` may be empty; such papers are retained
    in the corpus but excluded from matrix construction downstream."""

    id: str
    title: str
    venue: str
    year: int
    keywords: tuple[str, ...]

    @property
    def has_keywords(self) -> bool:
        return len(self.keywords) > 0


@dataclass(frozen=True)
class Corpus:
    papers: tuple[Paper, ...]
    provenance: str = ""
    keyword_kind: str = "author"

    def __post_init__(self) -> None:
        if self.keyword_kind not in KEYWORD_KINDS:
            raise ValueError(
                f"keyword_kind must be one of {KEYWORD_KINDS}, got {self.keyword_kind!r}"
            )
        seen: dict[str, int] = {}
        for idx, paper in enumerate(self.papers):
            if paper.id in seen:
                raise ValueError(
                    f"duplicate paper id {paper.id!r} (papers {seen[paper.id]} and {idx})"
                )
            seen[paper.id] = idx
            if not (YEAR_MIN <= paper.year <= YEAR_MAX):
                raise ValueError(
                    f"paper {paper.id!r}: year {paper.year} outside [{YEAR_MIN}, {YEAR_MAX}]"
                )

    def __len__(self) -> int:
        return len(self.papers)

    def __iter__(self):
        return iter(self.papers)

    def paper(self, paper_id: str) -> Paper:
        for p in self.papers:
            if p.id == paper_id:
                return p
        raise KeyError(paper_id)

    def venues(self) -> tuple[str, ...]:
        return tuple(sorted({p.venue for p in self.papers}))

    def years(self) -> tuple[int, ...]:
        return tuple(sorted({p.year for p in self.papers}))

    def venue_year_counts(self) -> dict[tuple[str, int], int]:
        """Number of papers for every (venue, year) pair present in the corpus."""
        counts: Counter[tuple[str, int]] = Counter()
        for p in self.papers:
            counts[(p.venue, p.year)] += 1
        return dict(counts)

    def papers_without_keywords(self) -> tuple[Paper, ...]:
        return tuple(p for p in self.papers if not p.has_keywords)

    def vocabulary(self) -> tuple[str, ...]:
        return tuple(sorted({k for p in self.papers for k in p.keywords}))


@dataclass(frozen=True)
class FrequencyEntry:
    keyword: str
    count: int
    rank: int


@dataclass(frozen=True)
class FrequencyTable:
    """Keyword occurrence counts, ranked by descending count.

    Counts are per-paper presence (a keyword listed twice on one paper counts
    once).  Rank ties are ordered lexicographically by keyword.
    """

    entries: tuple[FrequencyEntry, ...]

    def counts(self) -> dict[str, int]:
        return {e.keyword: e.count for e in self.entries}

    def count(self, keyword: str) -> int:
        for e in self.entries:
            if e.keyword == keyword:
                return e.count
        return 0

    @property
    def total(self) -> int:
        return sum(e.count for e in self.entries)

    def top(self, n: int) -> tuple[FrequencyEntry, ...]:
        return self.entries[:n]


def _clean_keywords(raw: Iterable[str]) -> tuple[str, ...]:
    """Trim whitespace and drop empty entries, preserving order."""
    return tuple(k.strip() for k in raw if k.strip())


def _coerce_year(value: object, where: str) -> int:
    try:
        if isinstance(value, bool):
            raise ValueError
        year = int(str(value).strip())
    except (TypeError, ValueError):
        raise CorpusFormatError(f"{where}: year {value!r} is not an integer") from None
    if not (YEAR_MIN <= year <= YEAR_MAX):
        raise CorpusFormatError(f"{where}: year {year} outside [{YEAR_MIN}, {YEAR_MAX}]")
    return year


def _parse_delimited(text: IO[str], provenance: str, keyword_kind: str) -> Corpus:
    reader = csv.reader(text)
    try:
        header = next(reader)
    except StopIteration:
        raise CorpusFormatError("line 1: missing header row") from None
    if [h.strip().lower() for h in header] != list(CSV_FIELDS):
        raise CorpusFormatError(
            f"line 1: header must be {','.join(CSV_FIELDS)}, got {','.join(header)}"
        )
    papers: list[Paper] = []
    seen: dict[str, int] = {}
    for row in reader:
        line = reader.line_num
        if not row:
            continue
        if len(row) != len(CSV_FIELDS):
            raise CorpusFormatError(
                f"line {line}: expected {len(CSV_FIELDS)} fields, got {len(row)}"
            )
        pid, title, venue, year_raw, kw_cell = (field.strip() for field in row)
        if not pid:
            raise CorpusFormatError(f"line {line}: empty paper id")
        if pid in seen:
            raise CorpusFormatError(
                f"line {line}: duplicate paper id {pid!r} (first seen at line {seen[pid]})"
            )
        seen[pid] = line
        year = _coerce_year(year_raw, f"line {line}")
        keywords = _clean_keywords(kw_cell.split(KEYWORD_SEPARATOR))
        papers.append(Paper(pid, title, venue, year, keywords))
    return Corpus(tuple(papers), provenance=provenance, keyword_kind=keyword_kind)


def _parse_records(text: IO[str], provenance: str, keyword_kind: str) -> Corpus:
    papers: list[Paper] = []
    seen: dict[str, int] = {}
    for line_num, line in enumerate(text, start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusFormatError(f"line {line_num}: invalid JSON ({exc.msg})") from None
        if not isinstance(record, dict):
            raise CorpusFormatError(f"line {line_num}: expected a JSON object")
        missing = [f for f in CSV_FIELDS if f not in record]
        if missing:
            raise CorpusFormatError(f"line {line_num}: missing fields {', '.join(missing)}")
        pid = str(record["id"]).strip()
        if not pid:
            raise CorpusFormatError(f"line {line_num}: empty paper id")
        if pid in seen:
            raise CorpusFormatError(
                f"line {line_num}: duplicate paper id {pid!r} "
                f"(first seen at line {seen[pid]})"
            )
        seen[pid] = line_num
        kws = record["keywords"]
        if not isinstance(kws, list) or not all(isinstance(k, str) for k in kws):
            raise CorpusFormatError(f"line {line_num}: keywords must be an array of strings")
        papers.append(
            Paper(
                pid,
                str(record["title"]),
                str(record["venue"]).strip(),
                _coerce_year(record["year"], f"line {line_num}"),
                _clean_keywords(kws),
            )
        )
    return Corpus(tuple(papers), provenance=provenance, keyword_kind=keyword_kind)


def parse_corpus(
    source: IO[bytes] | bytes | str | Path,
    format: str = FORMAT_DELIMITED,
    *,
    provenance: str = "",
    keyword_kind: str = "author",
) -> Corpus:
    """Parse a corpus from a byte stream, raw bytes, or a file path.

    Args:
        source: Binary stream, bytes, or path to a UTF-8 encoded file.
        format: ``"delimited-table"`` (CSV) or ``"structured-records"`` (JSON lines).
        provenance: Free-text source description stored on the corpus.
        keyword_kind: One of ``author``, ``expert``, ``taxonomy``.

    Raises:
        CorpusFormatError: On malformed rows or duplicate ids; the message
            names the offending line(s).
    """
    if isinstance(source, (str, Path)):
        data = Path(source).read_bytes()
    elif isinstance(source, bytes):
        data = source
    else:
        data = source.read()
    text = io.StringIO(data.decode("utf-8"))
    if format == FORMAT_DELIMITED:
        return _parse_delimited(text, provenance, keyword_kind)
    if format == FORMAT_RECORDS:
        return _parse_records(text, provenance, keyword_kind)
    raise ValueError(f"unknown corpus format {format!r}")


def serialize_corpus(corpus: Corpus, format: str = FORMAT_DELIMITED) -> bytes:
    """Serialize a corpus back to one of the two input formats (UTF-8)."""
    if format == FORMAT_DELIMITED:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(CSV_FIELDS)
        for p in corpus.papers:
            writer.writerow(
                [p.id, p.title, p.venue, p.year, KEYWORD_SEPARATOR.join(p.keywords)]
            )
        return out.getvalue().encode("utf-8")
    if format == FORMAT_RECORDS:
        lines = []
        for p in corpus.papers:
            lines.append(
                json.dumps(
                    {
                        "id": p.id,
                        "title": p.title,
                        "venue": p.venue,
                        "year": p.year,
                        "keywords": list(p.keywords),
                    },
                    ensure_ascii=False,
                )
            )
        return ("\n".join(lines) + "\n" if lines else "").encode("utf-8")
    raise ValueError(f"unknown corpus format {format!r}")


def filter_corpus(
    corpus: Corpus,
    venues: Iterable[str] | None = None,
    years: tuple[int, int] | None = None,
) -> Corpus:
    """Subset a corpus by venue set and inclusive year range.

    ``venues=None`` keeps all venues (an explicit empty set keeps none);
    ``years=None`` keeps all years.
    """
    venue_set = None if venues is None else set(venues)
    kept = []
    for p in corpus.papers:
        if venue_set is not None and p.venue not in venue_set:
            continue
        if years is not None and not (years[0] <= p.year <= years[1]):
            continue
        kept.append(p)
    return replace(corpus, papers=tuple(kept))


def frequency_table(corpus: Corpus) -> FrequencyTable:
    """Rank keywords by the number of papers they appear on.

    Keywords are counted once per paper regardless of multiplicity; ranks are
    1-based by descending count with lexicographic tie-breaking.
    """
    counts: Counter[str] = Counter()
    for p in corpus.papers:
        counts.update(set(p.keywords))
    ordered = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    entries = tuple(
        FrequencyEntry(keyword=kw, count=count, rank=rank)
        for rank, (kw, count) in enumerate(ordered, start=1)
    )
    return FrequencyTable(entries)
