"""Co-word analysis of publication keyword corpora.

The package turns keyword lists attached to papers into a co-occurrence
network, clusters it hierarchically, positions the clusters in a strategic
diagram, fits keyword usage trends, and serves the results over a read-only
HTTP API.
"""

from .cluster import (
    AVERAGE,
    BRAY_CURTIS,
    SQUARED_EUCLIDEAN,
    WARD,
    ClusterAssignment,
    CoClusterIndicator,
    ConsensusMatrix,
    Dendrogram,
    Merge,
    agglomerate,
    code_map_indicator,
    consensus_dendrogram,
    consensus_matrix,
    cut_to_k,
    cluster_vectors,
    pairwise_distances,
    validate_linkage_metric,
)
from .corpus import (
    Corpus,
    CorpusFormatError,
    FrequencyEntry,
    FrequencyTable,
    Paper,
    filter_corpus,
    frequency_table,
    parse_corpus,
    serialize_corpus,
)
from .matrix import (
    CooccurrenceMatrix,
    CorrelationMatrix,
    DegenerateMatrixError,
    DocTermMatrix,
    build_doc_term_matrix,
    cooccurrence,
    correlation,
)
from .netmetrics import (
    QUADRANT_LABELS,
    ClusterMetrics,
    KeywordNetwork,
    NetworkEdge,
    NetworkNode,
    StrategicPoint,
    build_network,
    cluster_metrics,
    filter_network,
    strategic_diagram,
)
from .normalize import (
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
from .report import (
    AnalysisSnapshot,
    CorpusDigest,
    PipelineConfig,
    PipelineError,
    SnapshotValidationError,
    corpus_digest,
    export_cluster_table,
    export_graph,
    export_strategic,
    export_trends,
    load_snapshot,
    run_pipeline,
    save_snapshot,
    top_keywords,
    validate_snapshot,
    write_exports,
)
from .trends import (
    PowerLawFit,
    TrendFit,
    linear_trend,
    powerlaw_fit,
    rank_trends,
    trend_table_csv,
    yearly_counts,
)

__version__ = "0.1.0"

__all__ = [
    "AVERAGE",
    "BRAY_CURTIS",
    "SQUARED_EUCLIDEAN",
    "WARD",
    "AliasCycleError",
    "AliasMap",
    "AnalysisSnapshot",
    "ClusterAssignment",
    "ClusterMetrics",
    "CoClusterIndicator",
    "CodeMap",
    "ConsensusMatrix",
    "CooccurrenceMatrix",
    "CorpusDigest",
    "Corpus",
    "CorpusFormatError",
    "CorrelationMatrix",
    "DegenerateMatrixError",
    "Dendrogram",
    "DocTermMatrix",
    "EmptyKeywordError",
    "FrequencyEntry",
    "FrequencyTable",
    "KeywordNetwork",
    "Merge",
    "NetworkEdge",
    "NetworkNode",
    "NormalizationRules",
    "Paper",
    "PipelineConfig",
    "PipelineError",
    "PowerLawFit",
    "QUADRANT_LABELS",
    "SnapshotValidationError",
    "StrategicPoint",
    "TrendFit",
    "UnmappedKeywordError",
    "agglomerate",
    "apply_alias_map",
    "apply_code_map",
    "build_doc_term_matrix",
    "build_network",
    "canonicalize",
    "cluster_metrics",
    "cluster_vectors",
    "code_map_indicator",
    "consensus_dendrogram",
    "consensus_matrix",
    "cooccurrence",
    "corpus_digest",
    "correlation",
    "cut_to_k",
    "export_cluster_table",
    "export_graph",
    "export_strategic",
    "export_trends",
    "filter_corpus",
    "filter_network",
    "frequency_table",
    "linear_trend",
    "load_code_maps",
    "load_snapshot",
    "normalize_corpus",
    "pairwise_distances",
    "parse_corpus",
    "powerlaw_fit",
    "rank_trends",
    "run_pipeline",
    "save_snapshot",
    "serialize_corpus",
    "strategic_diagram",
    "top_keywords",
    "trend_table_csv",
    "validate_linkage_metric",
    "validate_snapshot",
    "write_exports",
    "yearly_counts",
]
