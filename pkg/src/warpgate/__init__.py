"""Semantic join discovery over tabular corpora.

Columns are embedded from samples of their values, indexed with
random-projection LSH, and queried by cosine similarity; candidates
returned by the index are re-ranked exactly. All sampling, hashing, and
projection steps are seeded and reproduce bit-identically, so index
files and search results are stable across runs and platforms.
"""

from .catalog import (
    Catalog,
    ColumnRef,
    ColumnValues,
    IngestReport,
    TableMeta,
    table_id_for,
)
from .embedder import (
    EmbedderConfig,
    HashingEmbedder,
    cosine,
    embed_column,
    embed_value,
    embedder_from_dict,
    joinability,
    register_embedder,
)
from .engine import (
    DiscoveryEngine,
    IndexManifest,
    JoinCandidate,
    JoinPreview,
    QueryTiming,
    SearchParams,
    join_preview,
)
from .errors import (
    BuildInProgress,
    ConfigMismatch,
    CorruptFile,
    DimensionMismatch,
    EmptyIndex,
    EmptyTable,
    IndexNotBuilt,
    InvalidSpec,
    MalformedRow,
    UnknownColumn,
    UnknownTable,
    VersionMismatch,
    WarpgateError,
)
from .evaluation import (
    AblationReport,
    GroundTruthSet,
    MetricsReport,
    TimingReport,
    evaluate_engine,
    load_ground_truth,
    measure_timing,
    precision_recall_at_k,
    sampling_ablation,
)
from .kernels import BACKEND
from .lsh import (
    LshConfig,
    LshIndex,
    SimHashSignature,
    collision_probability,
    estimate_similarity,
    load_index,
    save_index,
    signature,
)
from .oracle import brute_force_topk
from .sampling import SampleSpec, draw
from .testbed import NoiseProfile, TestbedSpec, generate_testbed

__version__ = "0.1.0"

__all__ = [
    "AblationReport",
    "BACKEND",
    "BuildInProgress",
    "Catalog",
    "ColumnRef",
    "ColumnValues",
    "ConfigMismatch",
    "CorruptFile",
    "DimensionMismatch",
    "DiscoveryEngine",
    "EmbedderConfig",
    "EmptyIndex",
    "EmptyTable",
    "GroundTruthSet",
    "HashingEmbedder",
    "IndexManifest",
    "IndexNotBuilt",
    "IngestReport",
    "InvalidSpec",
    "JoinCandidate",
    "JoinPreview",
    "LshConfig",
    "LshIndex",
    "MalformedRow",
    "MetricsReport",
    "NoiseProfile",
    "QueryTiming",
    "SampleSpec",
    "SearchParams",
    "SimHashSignature",
    "TableMeta",
    "TestbedSpec",
    "TimingReport",
    "UnknownColumn",
    "UnknownTable",
    "VersionMismatch",
    "WarpgateError",
    "brute_force_topk",
    "collision_probability",
    "cosine",
    "draw",
    "embed_column",
    "embed_value",
    "embedder_from_dict",
    "estimate_similarity",
    "evaluate_engine",
    "generate_testbed",
    "joinability",
    "join_preview",
    "load_ground_truth",
    "load_index",
    "measure_timing",
    "precision_recall_at_k",
    "register_embedder",
    "sampling_ablation",
    "save_index",
    "signature",
    "table_id_for",
    "__version__",
]
