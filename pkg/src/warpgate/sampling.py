"""Deterministic column sampling.

Reservoir sampling is Algorithm R driven by the documented splitmix64
stream: for the element at 0-based position i >= size in the input
sequence, draw j_i = out(seed, i) mod (i + 1) and overwrite slot j_i when
j_i < size. Elements before position ``size`` fill the reservoir in order.
Equal (strategy, size, seed, input sequence) therefore yields byte-identical
samples on every platform.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidSpec
from .hashing import splitmix64_stream

STRATEGIES = ("full", "head", "reservoir")


@dataclass(frozen=True)
class SampleSpec:
    strategy: str = "reservoir"
    size: int = 1000
    seed: int = 42

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise InvalidSpec(f"unknown sampling strategy {self.strategy!r}")
        if self.strategy != "full" and self.size < 1:
            raise InvalidSpec(f"sample size must be >= 1, got {self.size}")

    def to_dict(self) -> dict:
        return {"strategy": self.strategy, "size": self.size, "seed": self.seed}

    @classmethod
    def from_dict(cls, d: dict) -> "SampleSpec":
        return cls(
            strategy=d.get("strategy", "reservoir"),
            size=int(d.get("size", 1000)),
            seed=int(d.get("seed", 42)),
        )


def draw(values: Sequence[str], spec: SampleSpec) -> list[str]:
    """Sample ``values`` (already null-filtered) according to ``spec``."""
    if spec.strategy == "full":
        return list(values)
    if spec.strategy == "head":
        return list(values[: spec.size])
    return _reservoir(values, spec.size, spec.seed)


def _reservoir(values: Sequence[str], size: int, seed: int) -> list[str]:
    n = len(values)
    if n <= size:
        return list(values)
    sample = list(values[:size])
    # Vectorized Algorithm R: draws are random-access in the splitmix64
    # stream, so only accepted replacements need a Python-level loop.
    outs = splitmix64_stream(seed, n - size, offset=size)
    positions = np.arange(size + 1, n + 1, dtype=np.uint64)
    j = outs % positions
    hits = np.nonzero(j < size)[0]
    for h in hits:
        sample[int(j[h])] = values[size + int(h)]
    return sample
