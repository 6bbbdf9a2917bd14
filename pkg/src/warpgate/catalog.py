"""Corpus ingestion and the column catalog.

Tables are loaded from CSV (RFC 4180, UTF-8, header row mandatory) or
JSONL (one flat object per line) files. All cell values are handled as
strings end to end; the closed null-marker set below is mapped to None at
ingest and never reaches the embedding layer. Construction is
single-writer; once registered, the catalog is safe for concurrent reads.
"""

from __future__ import annotations

import csv
import hashlib
import json
import logging
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .errors import EmptyTable, MalformedRow, UnknownColumn, UnknownTable
from .sampling import SampleSpec, draw

logger = logging.getLogger(__name__)

# Case-sensitive, closed set: matched exactly, nothing else is a null.
NULL_MARKERS = frozenset({"", "NULL", "null", "NaN", "N/A"})

SUPPORTED_SUFFIXES = (".csv", ".jsonl")


def table_id_for(database: str, name: str) -> str:
    """Stable opaque id; a pure function of (database, name)."""
    digest = hashlib.sha256(f"{database}\x1f{name}".encode("utf-8")).hexdigest()
    return digest[:16]


@dataclass(frozen=True)
class ColumnRef:
    table_id: str
    column_name: str
    column_index: int


@dataclass
class TableMeta:
    table_id: str
    name: str
    database: str
    source_path: str
    column_names: list[str]
    row_count: int
    row_count_exact: bool = True

    def to_dict(self) -> dict:
        return {
            "table_id": self.table_id,
            "name": self.name,
            "database": self.database,
            "source_path": self.source_path,
            "column_names": list(self.column_names),
            "row_count": self.row_count,
            "row_count_exact": self.row_count_exact,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TableMeta":
        return cls(
            table_id=d["table_id"],
            name=d["name"],
            database=d["database"],
            source_path=d["source_path"],
            column_names=list(d["column_names"]),
            row_count=int(d["row_count"]),
            row_count_exact=bool(d.get("row_count_exact", True)),
        )


@dataclass
class ColumnValues:
    column: ColumnRef
    values: list[str]
    null_count: int
    distinct_count: int


@dataclass
class IngestReport:
    loaded: list[TableMeta] = field(default_factory=list)
    rejected: list[tuple[str, str]] = field(default_factory=list)

    @property
    def table_count(self) -> int:
        return len(self.loaded)

    def to_dict(self) -> dict:
        return {
            "tables": self.table_count,
            "rejected": [{"path": p, "reason": r} for p, r in self.rejected],
        }


def _dedupe_headers(names: list[str]) -> list[str]:
    seen: dict[str, int] = {}
    out = []
    for name in names:
        if name not in seen:
            seen[name] = 1
            out.append(name)
            continue
        seen[name] += 1
        candidate = f"{name}_{seen[name]}"
        while candidate in seen:
            seen[name] += 1
            candidate = f"{name}_{seen[name]}"
        seen[candidate] = 1
        out.append(candidate)
    return out


def _clean(cell) -> str | None:
    if cell is None:
        return None
    text = cell if isinstance(cell, str) else str(cell)
    return None if text in NULL_MARKERS else text


class Catalog:
    """In-memory table registry; cell data loads lazily per table."""

    def __init__(self):
        self.tables: dict[str, TableMeta] = {}
        self._cells: dict[str, list[list[str | None]]] = {}

    def __len__(self) -> int:
        return len(self.tables)

    # -- ingestion -------------------------------------------------------

    def load_table(self, path, database: str, format: str | None = None) -> TableMeta:
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(str(path))
        fmt = format or path.suffix.lstrip(".").lower()
        if fmt == "csv":
            headers, columns = _read_csv(path)
        elif fmt == "jsonl":
            headers, columns = _read_jsonl(path)
        else:
            raise MalformedRow(path, 0, f"unsupported format {fmt!r}")
        row_count = len(columns[0]) if columns else 0
        if row_count == 0:
            raise EmptyTable(f"{path}: zero data rows")
        meta = TableMeta(
            table_id=table_id_for(database, path.stem),
            name=path.stem,
            database=database,
            source_path=str(path),
            column_names=headers,
            row_count=row_count,
        )
        if meta.table_id in self.tables:
            logger.warning(
                "table %r in database %r replaced by %s",
                meta.name, database, path,
            )
        self.tables[meta.table_id] = meta
        self._cells[meta.table_id] = columns
        return meta

    def register_corpus(self, root, database_naming: str = "flat") -> IngestReport:
        root = Path(root)
        if not root.is_dir():
            raise FileNotFoundError(str(root))
        report = IngestReport()
        paths = sorted(
            (p for p in root.rglob("*") if p.suffix.lower() in SUPPORTED_SUFFIXES),
            key=lambda p: p.relative_to(root).as_posix(),
        )
        for path in paths:
            rel = path.relative_to(root)
            if database_naming == "per_subdirectory" and len(rel.parts) > 1:
                database = rel.parts[0]
            else:
                database = root.name
            try:
                report.loaded.append(self.load_table(path, database))
            except (MalformedRow, EmptyTable, OSError, UnicodeDecodeError) as exc:
                report.rejected.append((str(path), str(exc)))
        return report

    # -- lookups -----------------------------------------------------------

    def table(self, table_id: str) -> TableMeta:
        meta = self.tables.get(table_id)
        if meta is None:
            raise UnknownTable(table_id)
        return meta

    def table_by_name(self, name: str, database: str | None = None) -> TableMeta:
        matches = [
            m for m in self.tables.values()
            if m.name == name and (database is None or m.database == database)
        ]
        if not matches:
            raise UnknownTable(name if database is None else f"{database}.{name}")
        if len(matches) > 1:
            raise UnknownTable(
                f"table name {name!r} is ambiguous across databases "
                f"{sorted(m.database for m in matches)}; qualify it"
            )
        return matches[0]

    def column_ref(self, table_id: str, column: str | int) -> ColumnRef:
        meta = self.table(table_id)
        if isinstance(column, int):
            if not 0 <= column < len(meta.column_names):
                raise UnknownColumn(f"{meta.name}[{column}]")
            return ColumnRef(table_id, meta.column_names[column], column)
        try:
            idx = meta.column_names.index(column)
        except ValueError:
            raise UnknownColumn(f"{meta.name}.{column}") from None
        return ColumnRef(table_id, column, idx)

    def all_columns(self) -> list[ColumnRef]:
        """Every column, ordered by (database, table name, column index)."""
        refs = []
        for meta in sorted(self.tables.values(), key=lambda m: (m.database, m.name)):
            for idx, name in enumerate(meta.column_names):
                refs.append(ColumnRef(meta.table_id, name, idx))
        return refs

    # -- data access -------------------------------------------------------

    def _ensure_cells(self, table_id: str) -> list[list[str | None]]:
        if table_id not in self._cells:
            meta = self.table(table_id)
            # Catalog restored from an index file: re-read from source.
            self.load_table(meta.source_path, meta.database)
        return self._cells[table_id]

    def column_cells(self, ref: ColumnRef) -> list[str | None]:
        meta = self.table(ref.table_id)
        cells = self._ensure_cells(ref.table_id)
        if not 0 <= ref.column_index < len(cells):
            raise UnknownColumn(f"{meta.name}[{ref.column_index}]")
        if meta.column_names[ref.column_index] != ref.column_name:
            raise UnknownColumn(f"{meta.name}.{ref.column_name}")
        return cells[ref.column_index]

    def sample_column(self, ref: ColumnRef, spec: SampleSpec) -> ColumnValues:
        cells = self.column_cells(ref)
        non_null = [v for v in cells if v is not None]
        values = draw(non_null, spec)
        return ColumnValues(
            column=ref,
            values=values,
            null_count=len(cells) - len(non_null),
            distinct_count=len(set(values)),
        )

    def rows(self, table_id: str, limit: int | None = None) -> list[list[str | None]]:
        cells = self._ensure_cells(table_id)
        meta = self.table(table_id)
        n = meta.row_count if limit is None else min(limit, meta.row_count)
        return [[col[i] for col in cells] for i in range(n)]

    # -- manifest -----------------------------------------------------------

    def manifest_dict(self) -> dict:
        tables = [
            self.tables[tid].to_dict()
            for tid in sorted(self.tables, key=lambda t: (
                self.tables[t].database, self.tables[t].name))
        ]
        return {
            "tables": tables,
            "table_count": len(tables),
            "column_count": sum(len(t["column_names"]) for t in tables),
        }

    def save_manifest(self, path) -> None:
        doc = self.manifest_dict()
        doc["ingested_at"] = datetime.now(timezone.utc).isoformat()
        with open(path, "w", encoding="utf-8") as f:
            json.dump(doc, f, indent=2)

    @classmethod
    def from_table_metas(cls, metas: list[dict]) -> "Catalog":
        cat = cls()
        for d in metas:
            meta = TableMeta.from_dict(d)
            cat.tables[meta.table_id] = meta
        return cat


def _read_csv(path: Path) -> tuple[list[str], list[list[str | None]]]:
    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyTable(f"{path}: no header row") from None
        headers = _dedupe_headers(header)
        columns: list[list[str | None]] = [[] for _ in headers]
        for row_number, row in enumerate(reader, start=2):
            if len(row) != len(headers):
                raise MalformedRow(
                    path, row_number,
                    f"expected {len(headers)} fields, got {len(row)}",
                )
            for col, cell in zip(columns, row):
                col.append(_clean(cell))
    return headers, columns


def _read_jsonl(path: Path) -> tuple[list[str], list[list[str | None]]]:
    rows: list[dict] = []
    headers: list[str] = []
    seen: set[str] = set()
    with open(path, "r", encoding="utf-8") as f:
        for line_number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRow(path, line_number, f"invalid JSON: {exc}") from None
            if not isinstance(obj, dict):
                raise MalformedRow(path, line_number, "row is not a JSON object")
            for key, value in obj.items():
                if isinstance(value, (dict, list)):
                    raise MalformedRow(
                        path, line_number, f"key {key!r} holds a nested value"
                    )
                if key not in seen:
                    seen.add(key)
                    headers.append(key)
            rows.append(obj)
    columns: list[list[str | None]] = [[] for _ in headers]
    for obj in rows:
        for col, key in zip(columns, headers):
            col.append(_clean(obj.get(key)))
    return headers, columns
