"""Command-line driver: ingest, normalize, analyze, trends, export, serve.

Every subcommand exits 0 on success and 1 on failure, printing a
stage-tagged diagnostic to stderr.  All file output is UTF-8.
"""

from __future__ import annotations

import argparse
import signal
import sys
from pathlib import Path

from . import __version__
from .corpus import (
    FORMAT_DELIMITED,
    FORMAT_RECORDS,
    Corpus,
    CorpusFormatError,
    parse_corpus,
    serialize_corpus,
)
from .normalize import (
    DEFAULT_RULES,
    MODE_LENIENT,
    MODE_STRICT,
    AliasMap,
    apply_alias_map,
    apply_code_map,
    load_code_maps,
    normalize_corpus,
)
from .report import (
    PipelineConfig,
    PipelineError,
    SnapshotValidationError,
    load_snapshot,
    run_pipeline,
    save_snapshot,
    write_exports,
)
from .trends import rank_trends, trend_table_csv


class CommandError(Exception):
    """CLI failure with the stage that produced it."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage


def _infer_format(path: str, override: str | None) -> str:
    if override:
        return override
    if path.endswith((".jsonl", ".json", ".ndjson")):
        return FORMAT_RECORDS
    return FORMAT_DELIMITED


def _read_corpus(args, stage: str) -> Corpus:
    path = Path(args.input)
    if not path.exists():
        raise CommandError(stage, f"no such file: {path}")
    try:
        return parse_corpus(
            path,
            _infer_format(str(path), args.format),
            provenance=getattr(args, "provenance", "") or str(path),
            keyword_kind=getattr(args, "kind", "author"),
        )
    except (CorpusFormatError, ValueError) as exc:
        raise CommandError(stage, str(exc)) from exc


def _parse_years(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split(":")
        return int(lo), int(hi)
    except ValueError:
        raise CommandError("analyze", f"--years expects FIRST:LAST, got {text!r}") from None


def _write_output(path: str | None, payload: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(payload)
    else:
        Path(path).write_text(payload, encoding="utf-8")


def _cmd_ingest(args) -> int:
    corpus = _read_corpus(args, "ingest")
    out_format = args.out_format or FORMAT_RECORDS
    data = serialize_corpus(corpus, out_format)
    if args.output and args.output != "-":
        Path(args.output).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
    no_kw = len(corpus.papers_without_keywords())
    print(
        f"ingested {len(corpus.papers)} papers "
        f"({no_kw} without keywords, {len(corpus.vocabulary())} unique keywords)",
        file=sys.stderr,
    )
    return 0


def _cmd_normalize(args) -> int:
    corpus = _read_corpus(args, "normalize")
    try:
        corpus, dropped = normalize_corpus(corpus, DEFAULT_RULES)
        if dropped:
            print(
                f"dropped {sum(dropped.values())} empty keyword(s) during cleanup",
                file=sys.stderr,
            )
        if args.aliases:
            corpus = apply_alias_map(corpus, AliasMap.load(args.aliases))
        if args.code_maps:
            coders = load_code_maps(args.code_maps)
            if args.coder:
                if args.coder not in coders:
                    raise CommandError(
                        "normalize",
                        f"coder {args.coder!r} not in {sorted(coders)}",
                    )
                code_map = coders[args.coder]
            elif len(coders) == 1:
                code_map = next(iter(coders.values()))
            else:
                raise CommandError(
                    "normalize",
                    f"--coder required, file has coders {sorted(coders)}",
                )
            corpus, unmapped = apply_code_map(corpus, code_map, mode=args.mode)
            if unmapped:
                print(
                    f"dropped {sum(unmapped.values())} occurrence(s) of "
                    f"{len(unmapped)} unmapped keyword(s)",
                    file=sys.stderr,
                )
    except CommandError:
        raise
    except Exception as exc:
        raise CommandError("normalize", str(exc)) from exc
    data = serialize_corpus(corpus, FORMAT_RECORDS)
    if args.output and args.output != "-":
        Path(args.output).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
    return 0


def _config_from_args(args) -> PipelineConfig:
    try:
        return PipelineConfig(
            clusters=args.clusters,
            min_occurrence=args.min_occurrence,
            excluded=tuple(args.exclude or ()),
            linkage=args.linkage,
            metric=args.metric,
            years=_parse_years(args.years) if args.years else None,
            venues=tuple(args.venues) if args.venues else None,
            trend_top=args.trend_top,
        )
    except ValueError as exc:
        raise CommandError("analyze", str(exc)) from exc


def _cmd_analyze(args) -> int:
    corpus = _read_corpus(args, "analyze")
    config = _config_from_args(args)
    try:
        snapshot = run_pipeline(corpus, config)
    except PipelineError as exc:
        raise CommandError(exc.stage, str(exc.cause)) from exc
    save_snapshot(snapshot, args.output)
    print(
        f"analyzed {snapshot.digest.n_papers_with_keywords} papers with keywords: "
        f"{len(snapshot.doc_term.keywords)} retained keywords, "
        f"{snapshot.assignment.k} clusters -> {args.output}",
        file=sys.stderr,
    )
    return 0


def _cmd_trends(args) -> int:
    corpus = _read_corpus(args, "trends")
    try:
        years = _parse_years(args.years) if args.years else None
        if years is None:
            observed = corpus.years()
            if not observed:
                raise CommandError("trends", "corpus has no papers")
            years = (min(observed), max(observed))
        fits = rank_trends(
            corpus,
            args.top,
            range(years[0], years[1] + 1),
            normalize=args.normalize,
        )
    except CommandError:
        raise
    except ValueError as exc:
        raise CommandError("trends", str(exc)) from exc
    _write_output(args.output, trend_table_csv(fits))
    return 0


def _cmd_export(args) -> int:
    try:
        snapshot = load_snapshot(args.snapshot)
    except (SnapshotValidationError, OSError, ValueError) as exc:
        raise CommandError("export", str(exc)) from exc
    paths = write_exports(snapshot, args.output, graph_threshold=args.graph_threshold)
    for path in paths:
        print(f"wrote {path}", file=sys.stderr)
    return 0


def _cmd_serve(args) -> int:
    try:
        import uvicorn

        from .service import SnapshotStore, create_app
    except ImportError as exc:
        raise CommandError("serve", f"server dependencies unavailable: {exc}") from exc
    store = SnapshotStore(args.snapshot)
    try:
        store.load()
    except (SnapshotValidationError, OSError, ValueError) as exc:
        raise CommandError("serve", str(exc)) from exc
    app = create_app(store, static_dir=args.ui)

    def _reload(signum, frame):
        try:
            store.reload()
            print("snapshot reloaded", file=sys.stderr)
        except Exception as exc:  # keep serving the old snapshot
            print(f"snapshot reload failed: {exc}", file=sys.stderr)

    if hasattr(signal, "SIGHUP"):
        signal.signal(signal.SIGHUP, _reload)
    uvicorn.run(app, host=args.bind, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cowords",
        description="Co-word analysis of publication keyword corpora.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_corpus_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("input", help="corpus file (CSV or JSON lines)")
        p.add_argument(
            "--format",
            choices=[FORMAT_DELIMITED, FORMAT_RECORDS],
            help="input format (default: inferred from the file extension)",
        )
        p.add_argument(
            "--kind",
            choices=["author", "expert", "taxonomy"],
            default="author",
            help="which keyword vocabulary the corpus carries",
        )

    p = sub.add_parser("ingest", help="validate a corpus file and re-emit it")
    add_corpus_args(p)
    p.add_argument("--provenance", default="", help="free-text source description")
    p.add_argument(
        "--out-format",
        choices=[FORMAT_DELIMITED, FORMAT_RECORDS],
        help="output format (default: structured-records)",
    )
    p.add_argument("-o", "--output", help="output file (default: stdout)")
    p.set_defaults(handler=_cmd_ingest)

    p = sub.add_parser("normalize", help="canonicalize keywords, apply alias/code maps")
    add_corpus_args(p)
    p.add_argument("--aliases", help="alias map CSV (raw,canonical)")
    p.add_argument("--code-maps", help="expert code map CSV (keyword,codes,coder_id)")
    p.add_argument("--coder", help="coder id to apply from the code map file")
    p.add_argument(
        "--mode",
        choices=[MODE_STRICT, MODE_LENIENT],
        default=MODE_LENIENT,
        help="strict: unmapped keywords are errors; lenient: dropped with a note",
    )
    p.add_argument("-o", "--output", help="output file (default: stdout)")
    p.set_defaults(handler=_cmd_normalize)

    p = sub.add_parser("analyze", help="run the full pipeline into a snapshot directory")
    add_corpus_args(p)
    p.add_argument("--clusters", type=int, required=True, help="number of clusters k")
    p.add_argument(
        "--min-occurrence",
        type=int,
        default=0,
        help="retain keywords occurring at least this often",
    )
    p.add_argument(
        "--exclude",
        action="append",
        metavar="KEYWORD",
        help="keyword to exclude before analysis (repeatable)",
    )
    p.add_argument("--linkage", choices=["ward", "average"], default="ward")
    p.add_argument(
        "--metric",
        choices=["sqeuclidean", "braycurtis"],
        default="sqeuclidean",
    )
    p.add_argument("--years", help="inclusive year range FIRST:LAST")
    p.add_argument(
        "--venues", action="append", metavar="VENUE", help="venue filter (repeatable)"
    )
    p.add_argument(
        "--trend-top", type=int, default=15, help="keywords in the trend table"
    )
    p.add_argument("-o", "--output", required=True, help="snapshot directory")
    p.set_defaults(handler=_cmd_analyze)

    p = sub.add_parser("trends", help="trend table for the most frequent keywords")
    add_corpus_args(p)
    p.add_argument("--top", type=int, default=15, help="number of keywords")
    p.add_argument("--years", help="inclusive year range FIRST:LAST")
    p.add_argument(
        "--normalize",
        action="store_true",
        help="fit per-year proportions instead of raw counts",
    )
    p.add_argument("-o", "--output", help="output CSV (default: stdout)")
    p.set_defaults(handler=_cmd_trends)

    p = sub.add_parser("export", help="write cluster/graph/strategic/trend exports")
    p.add_argument("--snapshot", required=True, help="snapshot directory")
    p.add_argument(
        "--graph-threshold",
        type=float,
        default=0.0,
        help="minimum edge weight kept in the graph export",
    )
    p.add_argument("-o", "--output", required=True, help="export directory")
    p.set_defaults(handler=_cmd_export)

    p = sub.add_parser("serve", help="serve the HTTP API over a snapshot")
    p.add_argument("--snapshot", required=True, help="snapshot directory")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--bind", default="127.0.0.1")
    p.add_argument("--ui", help="directory with built web UI files to serve at /")
    p.set_defaults(handler=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except CommandError as exc:
        print(f"cowords: {exc}", file=sys.stderr)
        return 1
    except PipelineError as exc:
        print(f"cowords: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"cowords: [{args.command}] {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
