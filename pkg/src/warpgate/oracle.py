"""Exhaustive reference search, used to validate the LSH path.

Scans every catalog column, scores it against the query with an
independently written cosine (math.fsum accumulation, no numpy dot), and
sorts with its own key. Shares only the data types with the engine so a
ranking bug cannot hide in both code paths at once.
"""

from __future__ import annotations

import math
from typing import Sequence

from .catalog import Catalog, ColumnRef, _clean
from .embedder import Embedder
from .engine import JoinCandidate
from .sampling import SampleSpec


def _fsum_cosine(x, y) -> float:
    dot = math.fsum(float(a) * float(b) for a, b in zip(x, y))
    nx = math.sqrt(math.fsum(float(a) * float(a) for a in x))
    ny = math.sqrt(math.fsum(float(b) * float(b) for b in y))
    if nx == 0.0 or ny == 0.0:
        return 0.0
    return max(-1.0, min(1.0, dot / (nx * ny)))


def brute_force_topk(
    query: ColumnRef | Sequence[str],
    catalog: Catalog,
    embedder: Embedder,
    sample_spec: SampleSpec | None = None,
    k: int = 10,
    min_score: float = 0.7,
    exclude_query_table: bool = True,
) -> list[JoinCandidate]:
    sample_spec = sample_spec or SampleSpec()
    if isinstance(query, ColumnRef):
        query_ref: ColumnRef | None = catalog.column_ref(
            query.table_id, query.column_name
        )
        values = catalog.sample_column(query_ref, sample_spec).values
    else:
        query_ref = None
        values = [v for v in (_clean(x) for x in query) if v is not None]
    qvec = embedder.embed_values(values)

    scored = []
    for ref in catalog.all_columns():
        if query_ref is not None:
            if ref == query_ref:
                continue
            if exclude_query_table and ref.table_id == query_ref.table_id:
                continue
        cv = catalog.sample_column(ref, sample_spec)
        vec = embedder.embed_values(cv.values)
        score = _fsum_cosine(qvec, vec)
        if score < min_score:
            continue
        meta = catalog.table(ref.table_id)
        scored.append((score, meta.database, meta.name, ref.column_name, ref))

    scored.sort(key=lambda row: (-row[0], row[1], row[2], row[3]))
    return [
        JoinCandidate(column=ref, table_name=name, database=db, score=score)
        for score, db, name, col, ref in scored[:k]
    ]
