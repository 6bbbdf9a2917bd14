"""Pure-Python n-gram hashing kernel.

Bit-for-bit equivalent to the compiled kernel in _hashkernel.pyx; the
selection between the two happens in warpgate.kernels. Counts are small
integers, so every float64 intermediate here is exact and the backends
cannot drift apart.
"""

from __future__ import annotations

import math

import numpy as np

from .hashing import FNV_PRIME, MASK64


def embed_sum(values, dim, folded_seed, ngram_min, ngram_max, out):
    """Add the L2-normalized n-gram count vector of every value to ``out``.

    ``values`` must already be deduplicated, ordered, and case-folded by
    the caller. Values that produce no n-grams contribute nothing.
    """
    scratch = np.zeros(dim, dtype=np.float64)
    for value in values:
        data = value.encode("utf-8")
        starts = _char_starts(data)
        nchars = len(starts) - 1
        if nchars < ngram_min:
            continue
        scratch[:] = 0.0
        for size in range(ngram_min, ngram_max + 1):
            for s in range(nchars - size + 1):
                h = folded_seed
                for byte in data[starts[s] : starts[s + size]]:
                    h ^= byte
                    h = (h * FNV_PRIME) & MASK64
                bucket = (h >> 1) % dim
                scratch[bucket] += 1.0 if h & 1 else -1.0
        sumsq = float(np.dot(scratch, scratch))
        if sumsq == 0.0:
            continue
        out += scratch / math.sqrt(sumsq)


def _char_starts(data: bytes) -> list[int]:
    # UTF-8 continuation bytes have the bit pattern 10xxxxxx.
    starts = [i for i, b in enumerate(data) if (b & 0xC0) != 0x80]
    starts.append(len(data))
    return starts
