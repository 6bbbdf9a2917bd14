"""Deterministic 64-bit primitives shared across the package.

Every reproducibility claim in warpgate (byte-identical samples, vectors,
hyperplanes, and index files) bottoms out in the three procedures below.
They are specified byte-exactly so that an independent implementation can
reproduce them; the test suite holds frozen known-answer values.

splitmix64, counter form
    out(seed, i) = mix64((seed + (i + 1) * GOLDEN) mod 2**64)

    mix64(z):   z ^= z >> 30;  z *= 0xBF58476D1CE4E5B9
                z ^= z >> 27;  z *= 0x94D049BB133111EB
                z ^= z >> 31                      (all mod 2**64)
    GOLDEN = 0x9E3779B97F4A7C15

    The counter form is equivalent to the classic stateful generator
    (state += GOLDEN; return mix64(state)) seeded with ``seed`` and makes
    the stream random-access, so it vectorizes.

uniform doubles
    unit(x)     = (x >> 11) * 2**-53   in [0, 1)
    unit_pos(x) = ((x >> 11) + 1) * 2**-53   in (0, 1]   (safe for log)

gaussians, Box-Muller over the splitmix64 stream
    pair t consumes outputs (2t, 2t+1):
        r = sqrt(-2 * ln(unit_pos(out_{2t})))
        a = 2 * pi * unit(out_{2t+1})
        g_{2t} = r * cos(a);  g_{2t+1} = r * sin(a)

FNV-1a 64-bit with seed folding
    h = OFFSET_BASIS (0xCBF29CE484222325)
    absorb the 8 little-endian bytes of the seed, then the data bytes;
    per byte: h ^= byte; h *= 0x100000001B3   (mod 2**64)

    Bucket/sign split used by the embedder:
        bucket = (h >> 1) mod dimension
        sign   = +1 if h & 1 else -1
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3

_U64_GOLDEN = np.uint64(GOLDEN)
_U64_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_U64_MIX2 = np.uint64(0x94D049BB133111EB)


def mix64(z: int) -> int:
    """splitmix64 finalizer on a plain Python int."""
    z &= MASK64
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & MASK64
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & MASK64
    z ^= z >> 31
    return z


def splitmix64(seed: int, i: int) -> int:
    """The i-th output of the splitmix64 stream for ``seed``."""
    return mix64((seed + (i + 1) * GOLDEN) & MASK64)


def splitmix64_stream(seed: int, count: int, offset: int = 0) -> np.ndarray:
    """Outputs offset .. offset+count-1 of the stream, as uint64."""
    if count <= 0:
        return np.empty(0, dtype=np.uint64)
    idx = np.arange(offset + 1, offset + count + 1, dtype=np.uint64)
    z = np.uint64(seed & MASK64) + idx * _U64_GOLDEN
    z ^= z >> np.uint64(30)
    z *= _U64_MIX1
    z ^= z >> np.uint64(27)
    z *= _U64_MIX2
    z ^= z >> np.uint64(31)
    return z


def unit_doubles(outs: np.ndarray) -> np.ndarray:
    """Map uint64 outputs to doubles in [0, 1)."""
    return (outs >> np.uint64(11)).astype(np.float64) * 2.0**-53


def gaussians(seed: int, count: int) -> np.ndarray:
    """``count`` standard normals via Box-Muller, as documented above."""
    if count <= 0:
        return np.empty(0, dtype=np.float64)
    pairs = (count + 1) // 2
    outs = splitmix64_stream(seed, 2 * pairs)
    u1 = ((outs[0::2] >> np.uint64(11)).astype(np.float64) + 1.0) * 2.0**-53
    u2 = unit_doubles(outs[1::2])
    r = np.sqrt(-2.0 * np.log(u1))
    a = 2.0 * np.pi * u2
    g = np.empty(2 * pairs, dtype=np.float64)
    g[0::2] = r * np.cos(a)
    g[1::2] = r * np.sin(a)
    return g[:count]


def fold_seed(seed: int) -> int:
    """FNV-1a state after absorbing the seed's 8 little-endian bytes."""
    h = FNV_OFFSET
    for byte in (seed & MASK64).to_bytes(8, "little"):
        h ^= byte
        h = (h * FNV_PRIME) & MASK64
    return h


def fnv1a64(data: bytes, state: int = FNV_OFFSET) -> int:
    """Absorb ``data`` into an FNV-1a 64-bit state."""
    h = state
    for byte in data:
        h ^= byte
        h = (h * FNV_PRIME) & MASK64
    return h
