"""SimHash (random projection) LSH index over column embeddings.

Banding layout: ``num_tables`` hash tables, each keyed by a
``bits_per_table``-bit signature. The hyperplanes are drawn from the
documented seeded normal stream (warpgate.hashing.gaussians, Box-Muller
over splitmix64) and laid out row-major by (table, bit), so a
(config, hyperplane_seed) pair regenerates them bit-identically. Bit i of
a table key is 1 iff dot(plane, v) >= 0 (exact zero ties map to 1, so the
zero vector lands in the all-ones bucket); within a key, bit 0 is the most
significant.

Default banding parameters were frozen after checking the collision bounds
numerically (see ``collision_probability`` and the parameter tests):
16 tables x 10 bits gives a pair at cosine 0.7 a >= 0.45 chance of
colliding in at least one table and a pair at cosine 0.9 a >= 0.97 chance.

Persistence is a versioned JSON container with a SHA-256 checksum over the
canonically serialized payload (sorted keys, compact separators, ASCII);
vectors are stored exactly as base64-encoded little-endian float64.
"""

from __future__ import annotations

import base64
import hashlib
import json
import logging
import math
from dataclasses import dataclass

import numpy as np

from .catalog import ColumnRef
from .errors import (
    ConfigMismatch,
    CorruptFile,
    DimensionMismatch,
    InvalidSpec,
    VersionMismatch,
)
from .hashing import gaussians

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1


@dataclass(frozen=True)
class LshConfig:
    num_tables: int = 16
    bits_per_table: int = 10
    dimension: int = 128
    hyperplane_seed: int = 7
    similarity_threshold: float = 0.7

    def __post_init__(self):
        if self.num_tables < 1 or self.bits_per_table < 1:
            raise InvalidSpec("num_tables and bits_per_table must be positive")
        if self.bits_per_table > 64:
            raise InvalidSpec("bits_per_table must be <= 64")
        if self.dimension < 1:
            raise InvalidSpec("dimension must be positive")
        if not 0.0 < self.similarity_threshold < 1.0:
            raise InvalidSpec("similarity_threshold must be in (0, 1)")

    def to_dict(self) -> dict:
        return {
            "num_tables": self.num_tables,
            "bits_per_table": self.bits_per_table,
            "dimension": self.dimension,
            "hyperplane_seed": self.hyperplane_seed,
            "similarity_threshold": self.similarity_threshold,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LshConfig":
        return cls(
            num_tables=int(d.get("num_tables", 16)),
            bits_per_table=int(d.get("bits_per_table", 10)),
            dimension=int(d.get("dimension", 128)),
            hyperplane_seed=int(d.get("hyperplane_seed", 7)),
            similarity_threshold=float(d.get("similarity_threshold", 0.7)),
        )


def collision_probability(cos_sim: float, num_tables: int, bits_per_table: int) -> float:
    """P(a pair at the given cosine collides in at least one table)."""
    theta = math.acos(max(-1.0, min(1.0, cos_sim)))
    p = 1.0 - theta / math.pi
    return 1.0 - (1.0 - p**bits_per_table) ** num_tables


class HyperplaneSet:
    """num_tables x bits_per_table seeded random hyperplanes."""

    def __init__(self, config: LshConfig):
        self.config = config
        total = config.num_tables * config.bits_per_table
        flat = gaussians(config.hyperplane_seed, total * config.dimension)
        self.matrix = flat.reshape(total, config.dimension)

    @property
    def planes(self) -> np.ndarray:
        """View shaped (num_tables, bits_per_table, dimension)."""
        cfg = self.config
        return self.matrix.reshape(cfg.num_tables, cfg.bits_per_table, cfg.dimension)

    def signature_bits(self, v: np.ndarray) -> np.ndarray:
        """All num_tables * bits_per_table sign bits for ``v``, as uint8."""
        if v.shape != (self.config.dimension,):
            raise DimensionMismatch(
                f"vector has shape {v.shape}, planes expect ({self.config.dimension},)"
            )
        return (self.matrix @ v >= 0.0).astype(np.uint8)


@dataclass(frozen=True)
class SimHashSignature:
    per_table_keys: tuple[int, ...]
    bits_per_table: int


def signature(v: np.ndarray, planes: HyperplaneSet) -> SimHashSignature:
    """Per-table b-bit keys of sign bits; bit 0 is the most significant."""
    cfg = planes.config
    bits = planes.signature_bits(v).reshape(cfg.num_tables, cfg.bits_per_table)
    weights = np.left_shift(
        np.uint64(1), np.arange(cfg.bits_per_table - 1, -1, -1, dtype=np.uint64)
    )
    keys = (bits.astype(np.uint64) * weights).sum(axis=1, dtype=np.uint64)
    return SimHashSignature(
        per_table_keys=tuple(int(k) for k in keys),
        bits_per_table=cfg.bits_per_table,
    )


def estimate_similarity(sa: SimHashSignature, sb: SimHashSignature) -> float:
    """Cosine estimate cos(pi * (1 - f)) from the agreeing-bit fraction f."""
    if (
        sa.bits_per_table != sb.bits_per_table
        or len(sa.per_table_keys) != len(sb.per_table_keys)
    ):
        raise ConfigMismatch("signatures come from different LSH configs")
    total = sa.bits_per_table * len(sa.per_table_keys)
    disagree = sum(
        (ka ^ kb).bit_count()
        for ka, kb in zip(sa.per_table_keys, sb.per_table_keys)
    )
    f = 1.0 - disagree / total
    return math.cos(math.pi * (1.0 - f))


class LshIndex:
    """Multi-table SimHash index with stored vectors for exact re-ranking."""

    def __init__(self, config: LshConfig, embedder_config: dict):
        self.config = config
        self.embedder_config = dict(embedder_config)
        self.planes = HyperplaneSet(config)
        self.tables: list[dict[int, list[ColumnRef]]] = [
            {} for _ in range(config.num_tables)
        ]
        self.vectors: dict[ColumnRef, np.ndarray] = {}

    def __len__(self) -> int:
        return len(self.vectors)

    def signature_of(self, v: np.ndarray) -> SimHashSignature:
        return signature(v, self.planes)

    def insert(self, ref: ColumnRef, v: np.ndarray) -> None:
        v = np.asarray(v, dtype=np.float64)
        if v.shape != (self.config.dimension,):
            raise DimensionMismatch(
                f"vector has shape {v.shape}, index expects ({self.config.dimension},)"
            )
        if ref in self.vectors:
            logger.warning("re-inserting %s replaces its previous entry", ref)
            self.remove(ref)
        keys = self.signature_of(v).per_table_keys
        for table, key in zip(self.tables, keys):
            table.setdefault(key, []).append(ref)
        self.vectors[ref] = v

    def remove(self, ref: ColumnRef) -> None:
        v = self.vectors.pop(ref, None)
        if v is None:
            return
        keys = self.signature_of(v).per_table_keys
        for table, key in zip(self.tables, keys):
            bucket = table.get(key)
            if bucket is not None:
                bucket.remove(ref)
                if not bucket:
                    del table[key]

    def query_candidates(self, v: np.ndarray) -> set[ColumnRef]:
        if v.shape != (self.config.dimension,):
            raise DimensionMismatch(
                f"vector has shape {v.shape}, index expects ({self.config.dimension},)"
            )
        keys = self.signature_of(v).per_table_keys
        found: set[ColumnRef] = set()
        for table, key in zip(self.tables, keys):
            found.update(table.get(key, ()))
        return found

    # -- persistence ----------------------------------------------------

    def to_payload(self, extras: dict | None = None) -> dict:
        columns = []
        ordinals: dict[ColumnRef, int] = {}
        for i, (ref, vec) in enumerate(self.vectors.items()):
            ordinals[ref] = i
            columns.append(
                {
                    "table_id": ref.table_id,
                    "column_name": ref.column_name,
                    "column_index": ref.column_index,
                    "vector": base64.b64encode(
                        vec.astype("<f8").tobytes()
                    ).decode("ascii"),
                }
            )
        buckets = [
            [[int(key), [ordinals[r] for r in refs]] for key, refs in sorted(t.items())]
            for t in self.tables
        ]
        return {
            "lsh": self.config.to_dict(),
            "embedder": self.embedder_config,
            "columns": columns,
            "buckets": buckets,
            "extras": extras or {},
        }

    @classmethod
    def from_payload(cls, payload: dict) -> "LshIndex":
        try:
            config = LshConfig.from_dict(payload["lsh"])
            index = cls(config, payload["embedder"])
            refs = []
            for col in payload["columns"]:
                ref = ColumnRef(
                    table_id=col["table_id"],
                    column_name=col["column_name"],
                    column_index=int(col["column_index"]),
                )
                vec = np.frombuffer(
                    base64.b64decode(col["vector"]), dtype="<f8"
                ).astype(np.float64)
                if vec.shape != (config.dimension,):
                    raise CorruptFile(
                        f"stored vector for {ref} has {vec.shape[0]} components, "
                        f"config says {config.dimension}"
                    )
                refs.append(ref)
                index.vectors[ref] = vec
            for table, stored in zip(index.tables, payload["buckets"]):
                for key, ords in stored:
                    table[int(key)] = [refs[i] for i in ords]
            return index
        except (KeyError, TypeError, ValueError) as exc:
            raise CorruptFile(f"index payload is malformed: {exc}") from exc

    def save(self, path, extras: dict | None = None) -> None:
        save_index(self, path, extras=extras)

    @property
    def extras(self) -> dict:
        return getattr(self, "_extras", {})


def _canonical(payload: dict) -> bytes:
    return json.dumps(
        payload, sort_keys=True, separators=(",", ":"), ensure_ascii=True
    ).encode("ascii")


def save_index(index: LshIndex, path, extras: dict | None = None) -> None:
    payload = index.to_payload(extras=extras)
    blob = _canonical(payload)
    doc = {
        "format_version": FORMAT_VERSION,
        "checksum": hashlib.sha256(blob).hexdigest(),
        "payload": payload,
    }
    with open(path, "w", encoding="ascii") as f:
        json.dump(doc, f, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def load_index(path, expected_dimension: int | None = None) -> LshIndex:
    try:
        with open(path, "r", encoding="utf-8") as f:
            doc = json.load(f)
    except json.JSONDecodeError as exc:
        raise CorruptFile(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "format_version" not in doc:
        raise CorruptFile(f"{path}: missing format_version header")
    if doc["format_version"] != FORMAT_VERSION:
        raise VersionMismatch(
            f"{path}: format_version {doc['format_version']}, "
            f"this build reads {FORMAT_VERSION}"
        )
    payload = doc.get("payload")
    if payload is None or "checksum" not in doc:
        raise CorruptFile(f"{path}: missing payload or checksum")
    if hashlib.sha256(_canonical(payload)).hexdigest() != doc["checksum"]:
        raise CorruptFile(f"{path}: checksum mismatch")
    index = LshIndex.from_payload(payload)
    if (
        expected_dimension is not None
        and index.config.dimension != expected_dimension
    ):
        raise ConfigMismatch(
            f"{path}: index dimension {index.config.dimension} != "
            f"expected {expected_dimension}"
        )
    index._extras = payload.get("extras", {})
    return index
