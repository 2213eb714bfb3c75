import pytest
from hypothesis import given, strategies as st

from cowords.corpus import Corpus, Paper
from cowords.normalize import (
    DEFAULT_RULES,
    MODE_LENIENT,
    MODE_STRICT,
    AliasCycleError,
    AliasMap,
    CodeMap,
    EmptyKeywordError,
    NormalizationRules,
    UnmappedKeywordError,
    apply_alias_map,
    apply_code_map,
    canonicalize,
    load_code_maps,
    normalize_corpus,
)
from conftest import DATA_DIR


def one_paper(keywords, pid="p1"):
    return Corpus(
        (Paper(pid, "T", "V", 2004, tuple(keywords)),),
        provenance="inline",
        keyword_kind="author",
    )


class TestCanonicalize:
    @pytest.mark.parametrize(
        "raw,expected",
        [
            ("Flow Visualization", "flow visualization"),
            ("  spaced   out  ", "spaced out"),
            ("isosurfaces.", "isosurfaces"),
            ("graphs?!", "graphs"),
            ("UPPER", "upper"),
            ("tabs\tand\nnewlines", "tabs and newlines"),
            ("focus+context", "focus+context"),
            ("already clean", "already clean"),
            ("trailing dots...", "trailing dots"),
            ("Straße", "strasse"),
        ],
    )
    def test_examples(self, raw, expected):
        assert canonicalize(raw, DEFAULT_RULES) == expected

    def test_empty_raises(self):
        with pytest.raises(EmptyKeywordError):
            canonicalize("   ", DEFAULT_RULES)

    def test_only_punctuation_raises(self):
        with pytest.raises(EmptyKeywordError):
            canonicalize("...", DEFAULT_RULES)

    def test_rules_can_be_disabled(self):
        rules = NormalizationRules(
            fold_case=False, collapse_whitespace=False, strip_terminal_punctuation=False
        )
        assert canonicalize(" Mixed  Case. ", rules) == "Mixed  Case."

    @given(st.text(min_size=1, max_size=40))
    def test_idempotent(self, raw):
        try:
            once = canonicalize(raw, DEFAULT_RULES)
        except EmptyKeywordError:
            return
        assert canonicalize(once, DEFAULT_RULES) == once

    def test_internal_punctuation_kept(self):
        assert canonicalize("client/server", DEFAULT_RULES) == "client/server"


class TestNormalizeCorpus:
    def test_dedupes_within_paper(self):
        corpus = one_paper(("Interaction", "interaction", "user studies"))
        out, dropped = normalize_corpus(corpus, DEFAULT_RULES)
        assert out.papers[0].keywords == ("interaction", "user studies")
        assert not dropped

    def test_counts_dropped_empties(self):
        corpus = one_paper(("good", "...", "???"))
        out, dropped = normalize_corpus(corpus, DEFAULT_RULES)
        assert out.papers[0].keywords == ("good",)
        assert sum(dropped.values()) == 2

    def test_fixture_vocabulary_is_canonical(self, fixture_corpus):
        for p in fixture_corpus.papers:
            for kw in p.keywords:
                assert canonicalize(kw, DEFAULT_RULES) == kw

    def test_first_occurrence_order_kept(self):
        corpus = one_paper(("Zebra", "apple", "ZEBRA"))
        out, _ = normalize_corpus(corpus, DEFAULT_RULES)
        assert out.papers[0].keywords == ("zebra", "apple")


class TestAliasMap:
    def test_load_fixture(self):
        aliases = AliasMap.load(DATA_DIR / "aliases_fixture.csv")
        assert aliases.resolve("graph drawing") == "graph visualization"
        assert aliases.resolve("unmapped term") == "unmapped term"

    def test_chain_is_compressed(self):
        aliases = AliasMap.load(DATA_DIR / "aliases_fixture.csv")
        # surface extraction -> iso-surfaces -> isosurfaces, one hop after load
        assert aliases.resolve("surface extraction") == "isosurfaces"
        assert aliases.entries["surface extraction"] == "isosurfaces"

    def test_cycle_detected(self):
        with pytest.raises(AliasCycleError, match="cycle"):
            AliasMap.from_entries({"a": "b", "b": "a"})

    def test_self_mapping_allowed(self):
        aliases = AliasMap.from_entries({"a": "a"})
        assert aliases.resolve("a") == "a"

    def test_bad_header(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("from,to\nx,y\n", encoding="utf-8")
        with pytest.raises(ValueError, match="header"):
            AliasMap.load(path)

    def test_apply_to_fixture(self, raw_corpus):
        cleaned, _ = normalize_corpus(raw_corpus, DEFAULT_RULES)
        mapped = apply_alias_map(cleaned, AliasMap.load(DATA_DIR / "aliases_fixture.csv"))
        assert "graph visualization" in mapped.paper("f27").keywords
        assert "graph drawing" not in mapped.paper("f27").keywords
        assert "graphics hardware" in mapped.paper("f38").keywords

    def test_alias_collision_dedupes(self):
        corpus = one_paper(("graph drawing", "graph visualization"))
        aliases = AliasMap.from_entries({"graph drawing": "graph visualization"})
        out = apply_alias_map(corpus, aliases)
        assert out.papers[0].keywords == ("graph visualization",)


@pytest.fixture(scope="module")
def coders():
    return load_code_maps(DATA_DIR / "codes_fixture.csv")


class TestCodeMaps:
    def test_load(self, coders):
        assert sorted(coders) == ["c1", "c2", "c3"]
        assert coders["c1"].coder_id == "c1"
        assert coders["c1"].codes("clustering") == frozenset({"GRAPH", "VA"})
        assert coders["c2"].codes("uncertainty") == frozenset()

    def test_duplicate_rows_merge(self, tmp_path):
        path = tmp_path / "codes.csv"
        path.write_text(
            "keyword,codes,coder_id\nx,A,c1\nx,B,c1\n", encoding="utf-8"
        )
        coders = load_code_maps(path)
        assert coders["c1"].codes("x") == frozenset({"A", "B"})

    def test_empty_codes_rejected(self):
        with pytest.raises(ValueError):
            CodeMap(entries={"x": frozenset()}, coder_id="c9")

    def test_strict_mode_names_offender(self, fixture_corpus, coders):
        # c2 never coded "uncertainty", which appears on paper f21
        with pytest.raises(UnmappedKeywordError) as err:
            apply_code_map(fixture_corpus, coders["c2"], mode=MODE_STRICT)
        assert "uncertainty" in str(err.value)
        assert "f21" in str(err.value)

    def test_lenient_mode_drops_and_counts(self, fixture_corpus, coders):
        out, unmapped = apply_code_map(fixture_corpus, coders["c2"], mode=MODE_LENIENT)
        assert unmapped == {"uncertainty": 1}
        assert "uncertainty" not in {k for p in out.papers for k in p.keywords}

    def test_full_coverage_coder_is_clean(self, fixture_corpus, coders):
        out, unmapped = apply_code_map(fixture_corpus, coders["c1"], mode=MODE_STRICT)
        assert not unmapped
        assert out.keyword_kind == "expert"

    def test_codes_emitted_sorted_and_deduped(self, coders):
        corpus = one_paper(("flow visualization", "vector fields", "clustering"))
        out, _ = apply_code_map(corpus, coders["c1"], mode=MODE_STRICT)
        # flow visualization and vector fields both map to FLOW: union, sorted
        assert out.papers[0].keywords == ("FLOW", "GRAPH", "VA")

    def test_strict_equals_lenient_when_covered(self, fixture_corpus, coders):
        strict, _ = apply_code_map(fixture_corpus, coders["c1"], mode=MODE_STRICT)
        lenient, _ = apply_code_map(fixture_corpus, coders["c1"], mode=MODE_LENIENT)
        assert strict.papers == lenient.papers
