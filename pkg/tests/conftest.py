import pytest

from cowords import (
    AliasMap,
    PipelineConfig,
    apply_alias_map,
    normalize_corpus,
    parse_corpus,
    run_pipeline,
)
from cowords.corpus import FORMAT_DELIMITED
from cowords.normalize import DEFAULT_RULES
from pathlib import Path

DATA_DIR = Path(__file__).parent / "data"
GOLDEN_DIR = Path(__file__).parent / "golden"

FIXTURE_CONFIG = dict(
    clusters=5,
    min_occurrence=2,
    excluded=("visualization",),
    linkage="ward",
    metric="squared-euclidean",
    trend_top=10,
)


@pytest.fixture(scope="session")
def raw_corpus():
    return parse_corpus(
        DATA_DIR / "corpus_fixture.csv",
        FORMAT_DELIMITED,
        provenance="bundled fixture",
        keyword_kind="author",
    )


@pytest.fixture(scope="session")
def fixture_corpus(raw_corpus):
    """The fixture corpus after canonicalization and alias resolution."""
    cleaned, _ = normalize_corpus(raw_corpus, DEFAULT_RULES)
    return apply_alias_map(cleaned, AliasMap.load(DATA_DIR / "aliases_fixture.csv"))


@pytest.fixture(scope="session")
def fixture_config():
    return PipelineConfig(**FIXTURE_CONFIG)


@pytest.fixture(scope="session")
def fixture_snapshot(fixture_corpus, fixture_config):
    return run_pipeline(fixture_corpus, fixture_config)
