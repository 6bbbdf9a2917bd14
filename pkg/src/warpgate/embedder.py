"""Column embeddings and the cosine join-ability measure.

A column is embedded by hashing character n-grams of its distinct values
into ``dimension`` signed buckets (FNV-1a with seed folding, bucket/sign
split documented in warpgate.hashing), L2-normalizing per value, averaging
over the deduplicated values, and L2-normalizing the mean. Deduplication
happens after case folding, which makes the result invariant to value
multiplicity and ordering; columns with no hashable content map to the
zero vector.

The engine only depends on the small ``Embedder`` surface below, so
alternative embedders can be registered and slot in without engine changes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Protocol, Sequence

import numpy as np

from . import kernels
from .errors import DimensionMismatch, InvalidSpec
from .hashing import fold_seed


@dataclass(frozen=True)
class EmbedderConfig:
    dimension: int = 128
    ngram_min: int = 2
    ngram_max: int = 3
    hash_seed: int = 42
    lowercase: bool = True

    def __post_init__(self):
        if self.dimension < 8:
            raise InvalidSpec(f"dimension must be >= 8, got {self.dimension}")
        if not 1 <= self.ngram_min <= self.ngram_max:
            raise InvalidSpec(
                f"need 1 <= ngram_min <= ngram_max, got "
                f"({self.ngram_min}, {self.ngram_max})"
            )

    def to_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "ngram_min": self.ngram_min,
            "ngram_max": self.ngram_max,
            "hash_seed": self.hash_seed,
            "lowercase": self.lowercase,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EmbedderConfig":
        return cls(
            dimension=int(d.get("dimension", 128)),
            ngram_min=int(d.get("ngram_min", 2)),
            ngram_max=int(d.get("ngram_max", 3)),
            hash_seed=int(d.get("hash_seed", 42)),
            lowercase=bool(d.get("lowercase", True)),
        )


class Embedder(Protocol):
    """What the discovery engine requires of an embedding implementation."""

    kind: str

    @property
    def dimension(self) -> int: ...

    def embed_values(self, values: Sequence[str]) -> np.ndarray: ...

    def config_dict(self) -> dict: ...


class HashingEmbedder:
    """The default feature-hashing embedder (see module docstring)."""

    kind = "hashing"

    def __init__(self, config: EmbedderConfig | None = None):
        self.config = config or EmbedderConfig()
        self._folded_seed = fold_seed(self.config.hash_seed)

    @property
    def dimension(self) -> int:
        return self.config.dimension

    def embed_value(self, value: str) -> np.ndarray:
        cfg = self.config
        if cfg.lowercase:
            value = value.lower()
        out = np.zeros(cfg.dimension, dtype=np.float64)
        kernels.embed_sum(
            [value], cfg.dimension, self._folded_seed,
            cfg.ngram_min, cfg.ngram_max, out,
        )
        return _normalize(out)

    def embed_values(self, values: Sequence[str]) -> np.ndarray:
        cfg = self.config
        if cfg.lowercase:
            distinct = sorted({v.lower() for v in values})
        else:
            distinct = sorted(set(values))
        out = np.zeros(cfg.dimension, dtype=np.float64)
        if not distinct:
            return out
        kernels.embed_sum(
            distinct, cfg.dimension, self._folded_seed,
            cfg.ngram_min, cfg.ngram_max, out,
        )
        out /= len(distinct)
        return _normalize(out)

    def config_dict(self) -> dict:
        return {"kind": self.kind, **self.config.to_dict()}


def _normalize(v: np.ndarray) -> np.ndarray:
    norm = float(np.sqrt(np.dot(v, v)))
    if norm == 0.0:
        return v
    v /= norm
    return v


_REGISTRY: dict[str, Callable[[dict], Embedder]] = {}


def register_embedder(kind: str, factory: Callable[[dict], Embedder]) -> None:
    _REGISTRY[kind] = factory


def embedder_from_dict(d: dict) -> Embedder:
    kind = d.get("kind", "hashing")
    if kind not in _REGISTRY:
        raise InvalidSpec(f"unknown embedder kind {kind!r}")
    return _REGISTRY[kind](d)


register_embedder("hashing", lambda d: HashingEmbedder(EmbedderConfig.from_dict(d)))


def embed_value(value: str, config: EmbedderConfig) -> np.ndarray:
    return HashingEmbedder(config).embed_value(value)


def embed_column(values, config: EmbedderConfig) -> np.ndarray:
    """Embed a column sample; accepts a ColumnValues or a plain sequence."""
    seq = getattr(values, "values", values)
    return HashingEmbedder(config).embed_values(seq)


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    """Cosine similarity in [-1, 1]; zero vectors score 0 by convention."""
    if u.shape != v.shape:
        raise DimensionMismatch(f"vector shapes differ: {u.shape} vs {v.shape}")
    nu = float(np.sqrt(np.dot(u, u)))
    nv = float(np.sqrt(np.dot(v, v)))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(min(1.0, max(-1.0, float(np.dot(u, v)) / (nu * nv))))


def joinability(a, b, config: EmbedderConfig) -> float:
    """Join-ability of two column samples: cosine of their embeddings."""
    return cosine(embed_column(a, config), embed_column(b, config))
