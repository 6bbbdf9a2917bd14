"""Discovery engine: the indexing and search pipelines.

Indexing walks the catalog (sample -> embed -> insert) and records a
manifest; search embeds the query column from a fresh sample, pulls LSH
candidates, re-ranks them by exact cosine, filters, and returns up to k
candidates. Query vectors are always recomputed, never read back from the
index, so ad-hoc value lists travel the same path as catalog columns.

Result ordering is total: score descending, then database, table name,
column name ascending. Searches are read-only and safe to run
concurrently; builds produce a fresh engine the caller swaps in.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Sequence

import numpy as np

from .catalog import Catalog, ColumnRef, _clean
from .embedder import (
    Embedder,
    EmbedderConfig,
    HashingEmbedder,
    cosine,
    embedder_from_dict,
)
from .errors import ConfigMismatch, EmptyIndex, IndexNotBuilt, InvalidSpec
from .lsh import LshConfig, LshIndex, load_index, save_index
from .sampling import SampleSpec


@dataclass(frozen=True)
class SearchParams:
    k: int = 10
    min_score: float | None = None  # None: use the index similarity threshold
    exclude_query_table: bool = True

    def __post_init__(self):
        if self.k < 1:
            raise InvalidSpec(f"k must be >= 1, got {self.k}")


@dataclass(frozen=True)
class JoinCandidate:
    column: ColumnRef
    table_name: str
    database: str
    score: float

    def to_dict(self) -> dict:
        return {
            "database": self.database,
            "table": self.table_name,
            "column": self.column.column_name,
            "score": round(self.score, 4),
        }


@dataclass
class QueryTiming:
    sample_s: float = 0.0
    embed_s: float = 0.0
    lookup_s: float = 0.0
    rank_s: float = 0.0

    @property
    def end_to_end_s(self) -> float:
        return self.sample_s + self.embed_s + self.lookup_s + self.rank_s


@dataclass
class JoinPreview:
    columns: list[str]
    rows: list[list[str | None]]
    warnings: list[str]
    total_rows: int

    def to_dict(self) -> dict:
        return {
            "columns": self.columns,
            "rows": self.rows,
            "warnings": self.warnings,
            "total_rows": self.total_rows,
        }


@dataclass
class IndexManifest:
    corpus_root: str
    tables_indexed: int
    columns_indexed: int
    columns_skipped: list[dict] = field(default_factory=list)
    sample_spec: dict = field(default_factory=dict)
    embedder_config: dict = field(default_factory=dict)
    lsh_config: dict = field(default_factory=dict)
    build_seconds: float = 0.0
    created_at: str = ""

    def to_dict(self) -> dict:
        return {
            "corpus_root": self.corpus_root,
            "tables_indexed": self.tables_indexed,
            "columns_indexed": self.columns_indexed,
            "columns_skipped": self.columns_skipped,
            "sample_spec": self.sample_spec,
            "embedder_config": self.embedder_config,
            "lsh_config": self.lsh_config,
            "build_seconds": self.build_seconds,
            "created_at": self.created_at,
        }

    def summary(self) -> dict:
        return {
            "corpus_root": self.corpus_root,
            "tables_indexed": self.tables_indexed,
            "columns_indexed": self.columns_indexed,
            "columns_skipped": len(self.columns_skipped),
            "created_at": self.created_at,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "IndexManifest":
        return cls(
            corpus_root=d.get("corpus_root", ""),
            tables_indexed=int(d.get("tables_indexed", 0)),
            columns_indexed=int(d.get("columns_indexed", 0)),
            columns_skipped=list(d.get("columns_skipped", [])),
            sample_spec=dict(d.get("sample_spec", {})),
            embedder_config=dict(d.get("embedder_config", {})),
            lsh_config=dict(d.get("lsh_config", {})),
            build_seconds=float(d.get("build_seconds", 0.0)),
            created_at=d.get("created_at", ""),
        )


class DiscoveryEngine:
    def __init__(
        self,
        catalog: Catalog,
        embedder: Embedder,
        index: LshIndex,
        sample_spec: SampleSpec,
        manifest: IndexManifest | None = None,
    ):
        self.catalog = catalog
        self.embedder = embedder
        self.index = index
        self.sample_spec = sample_spec
        self.manifest = manifest
        self.column_stats: dict[ColumnRef, dict] = {}

    # -- indexing pipeline -------------------------------------------------

    @classmethod
    def build(
        cls,
        catalog: Catalog,
        sample_spec: SampleSpec | None = None,
        embedder: Embedder | EmbedderConfig | None = None,
        lsh_config: LshConfig | None = None,
        corpus_root: str = "",
    ) -> "DiscoveryEngine":
        if len(catalog) == 0:
            raise EmptyIndex("catalog is empty, nothing to index")
        sample_spec = sample_spec or SampleSpec()
        if embedder is None:
            embedder = HashingEmbedder()
        elif isinstance(embedder, EmbedderConfig):
            embedder = HashingEmbedder(embedder)
        if lsh_config is None:
            lsh_config = LshConfig(dimension=embedder.dimension)
        elif lsh_config.dimension != embedder.dimension:
            raise ConfigMismatch(
                f"lsh dimension {lsh_config.dimension} != "
                f"embedder dimension {embedder.dimension}"
            )

        started = time.perf_counter()
        index = LshIndex(lsh_config, embedder.config_dict())
        engine = cls(catalog, embedder, index, sample_spec)
        skipped: list[dict] = []
        for ref in catalog.all_columns():
            cv = catalog.sample_column(ref, sample_spec)
            vec = embedder.embed_values(cv.values)
            engine.column_stats[ref] = {
                "distinct_count": cv.distinct_count,
                "null_count": cv.null_count,
            }
            if not np.any(vec):
                skipped.append(
                    {
                        "table_id": ref.table_id,
                        "table": catalog.table(ref.table_id).name,
                        "column": ref.column_name,
                        "reason": "empty",
                    }
                )
                continue
            index.insert(ref, vec)
        if len(index) == 0:
            raise EmptyIndex("no column produced a non-zero embedding")

        engine.manifest = IndexManifest(
            corpus_root=corpus_root,
            tables_indexed=len(catalog),
            columns_indexed=len(index),
            columns_skipped=skipped,
            sample_spec=sample_spec.to_dict(),
            embedder_config=embedder.config_dict(),
            lsh_config=lsh_config.to_dict(),
            build_seconds=time.perf_counter() - started,
            created_at=datetime.now(timezone.utc).isoformat(),
        )
        return engine

    # -- search pipeline -----------------------------------------------------

    def search_topk(
        self, query: ColumnRef | Sequence[str], params: SearchParams | None = None
    ) -> list[JoinCandidate]:
        results, _ = self.search_topk_timed(query, params)
        return results

    def search_topk_timed(
        self, query: ColumnRef | Sequence[str], params: SearchParams | None = None
    ) -> tuple[list[JoinCandidate], QueryTiming]:
        if self.index is None:
            raise IndexNotBuilt("no index loaded")
        params = params or SearchParams()
        min_score = (
            params.min_score
            if params.min_score is not None
            else self.index.config.similarity_threshold
        )
        timing = QueryTiming()

        t0 = time.perf_counter()
        if isinstance(query, ColumnRef):
            query_ref: ColumnRef | None = self.catalog.column_ref(
                query.table_id, query.column_name
            )
            values = self.catalog.sample_column(query_ref, self.sample_spec).values
        else:
            query_ref = None
            values = [v for v in (_clean(x) for x in query) if v is not None]
        timing.sample_s = time.perf_counter() - t0

        t0 = time.perf_counter()
        qvec = self.embedder.embed_values(values)
        timing.embed_s = time.perf_counter() - t0

        t0 = time.perf_counter()
        candidates = self.index.query_candidates(qvec)
        scored = [(ref, cosine(qvec, self.index.vectors[ref])) for ref in candidates]
        timing.lookup_s = time.perf_counter() - t0

        t0 = time.perf_counter()
        results = []
        for ref, score in scored:
            if score < min_score:
                continue
            if query_ref is not None:
                if ref == query_ref:
                    continue
                if params.exclude_query_table and ref.table_id == query_ref.table_id:
                    continue
            meta = self.catalog.table(ref.table_id)
            results.append(
                JoinCandidate(
                    column=ref,
                    table_name=meta.name,
                    database=meta.database,
                    score=score,
                )
            )
        results.sort(
            key=lambda c: (-c.score, c.database, c.table_name, c.column.column_name)
        )
        results = results[: params.k]
        timing.rank_s = time.perf_counter() - t0
        return results, timing

    # -- catalog-facing helpers ----------------------------------------------

    def list_candidate_columns(self, table_id: str) -> list[dict]:
        meta = self.catalog.table(table_id)
        entries = []
        for idx, name in enumerate(meta.column_names):
            ref = ColumnRef(table_id, name, idx)
            stats = self.column_stats.get(ref, {})
            entries.append(
                {
                    "name": name,
                    "index": idx,
                    "distinct_count": stats.get("distinct_count"),
                    "null_count": stats.get("null_count"),
                    "indexed": self.index is not None and ref in self.index.vectors,
                }
            )
        return entries

    def join_preview(
        self,
        query_table_id: str,
        query_column: str,
        candidate_table_id: str,
        candidate_column: str,
        selected_columns: Sequence[str],
        limit: int = 50,
    ) -> JoinPreview:
        return join_preview(
            self.catalog,
            query_table_id,
            query_column,
            candidate_table_id,
            candidate_column,
            selected_columns,
            limit,
        )

    # -- persistence -----------------------------------------------------------

    def save(self, path) -> None:
        extras = {
            "catalog": self.catalog.manifest_dict()["tables"],
            "sample": self.sample_spec.to_dict(),
            "corpus_root": self.manifest.corpus_root if self.manifest else "",
            "column_stats": [
                {
                    "table_id": ref.table_id,
                    "column_name": ref.column_name,
                    "column_index": ref.column_index,
                    **stats,
                }
                for ref, stats in sorted(
                    self.column_stats.items(),
                    key=lambda kv: (kv[0].table_id, kv[0].column_index),
                )
            ],
        }
        save_index(self.index, path, extras=extras)

    @classmethod
    def load(cls, path, catalog: Catalog | None = None) -> "DiscoveryEngine":
        index = load_index(path)
        extras = index.extras
        if catalog is None:
            catalog = Catalog.from_table_metas(extras.get("catalog", []))
        sample_spec = SampleSpec.from_dict(extras.get("sample", {}))
        embedder = embedder_from_dict(index.embedder_config)
        if embedder.dimension != index.config.dimension:
            raise ConfigMismatch(
                f"embedder dimension {embedder.dimension} != "
                f"index dimension {index.config.dimension}"
            )
        engine = cls(catalog, embedder, index, sample_spec)
        for entry in extras.get("column_stats", []):
            ref = ColumnRef(
                entry["table_id"], entry["column_name"], int(entry["column_index"])
            )
            engine.column_stats[ref] = {
                "distinct_count": entry.get("distinct_count"),
                "null_count": entry.get("null_count"),
            }
        return engine


def join_preview(
    catalog: Catalog,
    query_table_id: str,
    query_column: str,
    candidate_table_id: str,
    candidate_column: str,
    selected_columns: Sequence[str],
    limit: int = 50,
) -> JoinPreview:
    """Cardinality-preserving left join on string equality of the join columns.

    Duplicate keys on the candidate side resolve to the first matching row
    in candidate-table order, and each such key is reported in a warning;
    unmatched rows carry nulls. Output is truncated to ``limit`` rows for
    display while ``total_rows`` stays at the query table's row count.
    """
    q_meta = catalog.table(query_table_id)
    c_meta = catalog.table(candidate_table_id)
    q_ref = catalog.column_ref(query_table_id, query_column)
    c_ref = catalog.column_ref(candidate_table_id, candidate_column)
    selected_refs = [catalog.column_ref(candidate_table_id, s) for s in selected_columns]
    if limit < 1:
        raise InvalidSpec(f"limit must be >= 1, got {limit}")

    q_keys = catalog.column_cells(q_ref)
    c_keys = catalog.column_cells(c_ref)
    selected_cells = [catalog.column_cells(r) for r in selected_refs]

    first_match: dict[str, int] = {}
    dup_keys: set[str] = set()
    for i, key in enumerate(c_keys):
        if key is None:
            continue
        if key in first_match:
            dup_keys.add(key)
        else:
            first_match[key] = i

    q_rows = catalog.rows(query_table_id, limit)
    out_rows: list[list[str | None]] = []
    used_dups: set[str] = set()
    for i, row in enumerate(q_rows):
        key = q_keys[i]
        match = first_match.get(key) if key is not None else None
        if key is not None and key in dup_keys and match is not None:
            used_dups.add(key)
        if match is None:
            out_rows.append(row + [None] * len(selected_refs))
        else:
            out_rows.append(row + [cells[match] for cells in selected_cells])

    warnings = [
        f"candidate join column {c_meta.name}.{c_ref.column_name} has duplicate "
        f"key {key!r}; first matching row used"
        for key in sorted(used_dups)
    ]
    columns = list(q_meta.column_names) + [
        f"{c_meta.name}.{r.column_name}" for r in selected_refs
    ]
    return JoinPreview(
        columns=columns,
        rows=out_rows,
        warnings=warnings,
        total_rows=q_meta.row_count,
    )
