"""Keyword canonicalization, alias merging, and higher-level topic coding.

Cleaning is data-driven: mechanical string normalization is configured via
:class:`NormalizationRules`, semantic merges (plural/singular, spelling,
acronyms) live in an :class:`AliasMap` file, and topic-level recoding in one
:class:`CodeMap` per coder.  No stemming or automatic merging is performed;
every merge must be an explicit map entry so the cleanup stays replayable.
"""

from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Mapping

from .corpus import Corpus, Paper

TERMINAL_PUNCTUATION = ".,;:!?"

MODE_STRICT = "strict"
MODE_LENIENT = "lenient"


class EmptyKeywordError(ValueError):
    """A keyword was empty (or normalized to empty) where one is required."""


class AliasCycleError(ValueError):
    """An alias map contains a resolution cycle; the message lists it."""


class UnmappedKeywordError(KeyError):
    """Strict code-map application hit a keyword absent from the map."""


@dataclass(frozen=True)
class NormalizationRules:
    """Mechanical, idempotent string cleanup switches.

    Outer whitespace is always trimmed; ``collapse_whitespace`` additionally
    squeezes internal runs to single spaces.  ``strip_terminal_punctuation``
    removes trailing ``.,;:!?`` characters.
    """

    fold_case: bool = True
    collapse_whitespace: bool = True
    strip_terminal_punctuation: bool = True


DEFAULT_RULES = NormalizationRules()


def canonicalize(raw: str, rules: NormalizationRules = DEFAULT_RULES) -> str:
    """Apply the mechanical normalization rules to one keyword.

    Deterministic and idempotent; performs no semantic merging (merges belong
    in an :class:`AliasMap`).  Raises :class:`EmptyKeywordError` if the input
    is all whitespace or normalizes to the empty string.
    """
    s = raw.strip()
    if not s:
        raise EmptyKeywordError(f"keyword {raw!r} is empty after trimming")
    if rules.fold_case:
        s = s.casefold()
    if rules.collapse_whitespace:
        s = " ".join(s.split())
    if rules.strip_terminal_punctuation:
        s = s.rstrip(TERMINAL_PUNCTUATION).rstrip()
    if not s:
        raise EmptyKeywordError(f"keyword {raw!r} normalized to the empty string")
    return s


def normalize_corpus(
    corpus: Corpus, rules: NormalizationRules = DEFAULT_RULES
) -> tuple[Corpus, Counter[str]]:
    """Canonicalize every keyword in a corpus.

    Keywords that normalize to the empty string are dropped; the returned
    counter records how often each raw spelling had to be dropped.  Per-paper
    duplicates created by normalization are collapsed to one occurrence.
    """
    dropped: Counter[str] = Counter()
    papers = []
    for p in corpus.papers:
        canon: list[str] = []
        for kw in p.keywords:
            try:
                c = canonicalize(kw, rules)
            except EmptyKeywordError:
                dropped[kw] += 1
                continue
            if c not in canon:
                canon.append(c)
        papers.append(replace(p, keywords=tuple(canon)))
    return replace(corpus, papers=tuple(papers)), dropped


@dataclass(frozen=True)
class AliasMap:
    """Raw-or-canonical spelling to canonical keyword map.

    Entries are path-compressed at construction, so resolution is a single
    lookup and chains like ``a -> b -> c`` behave as ``a -> c``.  Cycles are
    rejected with an :class:`AliasCycleError` naming the cycle.
    """

    entries: Mapping[str, str]

    @classmethod
    def from_entries(cls, raw_entries: Mapping[str, str]) -> "AliasMap":
        compressed: dict[str, str] = {}
        for key in raw_entries:
            target = key
            path = [key]
            on_path = {key}
            while target in raw_entries and raw_entries[target] != target:
                target = raw_entries[target]
                if target in on_path:
                    cycle = path[path.index(target):] + [target]
                    raise AliasCycleError(
                        "alias map contains a cycle: " + " -> ".join(cycle)
                    )
                path.append(target)
                on_path.add(target)
            compressed[key] = target
        return cls(entries=compressed)

    @classmethod
    def load(cls, path: str | Path) -> "AliasMap":
        """Load a CSV alias file with header ``raw,canonical``."""
        text = Path(path).read_text(encoding="utf-8")
        reader = csv.reader(io.StringIO(text))
        header = next(reader, None)
        if header is None or [h.strip().lower() for h in header] != ["raw", "canonical"]:
            raise ValueError(f"{path}: alias file must have header raw,canonical")
        entries: dict[str, str] = {}
        for row in reader:
            if not row:
                continue
            if len(row) != 2:
                raise ValueError(f"{path}: line {reader.line_num}: expected 2 fields")
            raw, canonical = row[0].strip(), row[1].strip()
            if not raw or not canonical:
                raise ValueError(f"{path}: line {reader.line_num}: empty field")
            entries[raw] = canonical
        return cls.from_entries(entries)

    def resolve(self, keyword: str) -> str:
        return self.entries.get(keyword, keyword)

    def __len__(self) -> int:
        return len(self.entries)


def apply_alias_map(corpus: Corpus, aliases: AliasMap) -> Corpus:
    """Replace every keyword by its alias fixed point.

    Duplicates produced within one paper by merging are collapsed to a single
    occurrence (first position wins).  Paper count is unchanged.
    """
    papers = []
    for p in corpus.papers:
        merged: list[str] = []
        for kw in p.keywords:
            target = aliases.resolve(kw)
            if target not in merged:
                merged.append(target)
        papers.append(replace(p, keywords=tuple(merged)))
    return replace(corpus, papers=tuple(papers))


@dataclass(frozen=True)
class CodeMap:
    """One coder's mapping from canonical keywords to higher-level topic codes."""

    entries: Mapping[str, frozenset[str]]
    coder_id: str

    def __post_init__(self) -> None:
        for kw, codes in self.entries.items():
            if not codes or any(not c for c in codes):
                raise ValueError(
                    f"code map {self.coder_id!r}: keyword {kw!r} needs >=1 non-empty code"
                )

    def codes(self, keyword: str) -> frozenset[str]:
        return self.entries.get(keyword, frozenset())

    def __contains__(self, keyword: str) -> bool:
        return keyword in self.entries

    def keywords(self) -> tuple[str, ...]:
        return tuple(sorted(self.entries))


def load_code_maps(path: str | Path) -> dict[str, CodeMap]:
    """Load CSV rows ``keyword,code1|code2|...,coder_id`` into one CodeMap per coder.

    The file must start with a ``keyword,codes,coder_id`` header.
    """
    text = Path(path).read_text(encoding="utf-8")
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or [h.strip().lower() for h in header] != ["keyword", "codes", "coder_id"]:
        raise ValueError(f"{path}: code file must have header keyword,codes,coder_id")
    per_coder: dict[str, dict[str, frozenset[str]]] = {}
    for row in reader:
        if not row:
            continue
        if len(row) != 3:
            raise ValueError(f"{path}: line {reader.line_num}: expected 3 fields")
        keyword, codes_cell, coder = (field.strip() for field in row)
        codes = frozenset(c.strip() for c in codes_cell.split("|") if c.strip())
        if not keyword or not codes or not coder:
            raise ValueError(f"{path}: line {reader.line_num}: empty field")
        entries = per_coder.setdefault(coder, {})
        if keyword in entries:
            codes = entries[keyword] | codes
        entries[keyword] = codes
    return {coder: CodeMap(entries=entries, coder_id=coder) for coder, entries in per_coder.items()}


def apply_code_map(
    corpus: Corpus, codes: CodeMap, mode: str = MODE_STRICT
) -> tuple[Corpus, Counter[str]]:
    """Recode every paper's keywords into the union of their topic codes.

    In strict mode an unmapped keyword raises :class:`UnmappedKeywordError`;
    in lenient mode it is dropped and counted in the returned counter.  Codes
    are emitted sorted and deduplicated per paper; the resulting corpus has
    ``keyword_kind="expert"``.
    """
    if mode not in (MODE_STRICT, MODE_LENIENT):
        raise ValueError(f"mode must be {MODE_STRICT!r} or {MODE_LENIENT!r}, got {mode!r}")
    dropped: Counter[str] = Counter()
    papers = []
    for p in corpus.papers:
        union: set[str] = set()
        for kw in p.keywords:
            mapped = codes.codes(kw)
            if not mapped:
                if mode == MODE_STRICT:
                    raise UnmappedKeywordError(
                        f"keyword {kw!r} on paper {p.id!r} is not in code map "
                        f"{codes.coder_id!r}"
                    )
                dropped[kw] += 1
                continue
            union.update(mapped)
        papers.append(replace(p, keywords=tuple(sorted(union))))
    recoded = Corpus(
        papers=tuple(papers), provenance=corpus.provenance, keyword_kind="expert"
    )
    return recoded, dropped
