# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled n-gram hashing kernel; bit-for-bit twin of _hash_fallback.

Counts are small integers, norms come from exact integer sums, and the
per-component float ops match the fallback's elementwise numpy ops, so both
backends produce identical bytes.
"""

from libc.math cimport sqrt

import numpy as np

cdef unsigned long long FNV_PRIME = 0x100000001B3ULL


def embed_sum(values, Py_ssize_t dim, unsigned long long folded_seed,
              int ngram_min, int ngram_max, double[::1] out):
    """Add the L2-normalized n-gram count vector of every value to ``out``.

    ``values`` must already be deduplicated, ordered, and case-folded by
    the caller. Values that produce no n-grams contribute nothing.
    """
    cdef double[::1] scratch = np.zeros(dim, dtype=np.float64)
    cdef Py_ssize_t[::1] starts = np.empty(256, dtype=np.intp)
    cdef Py_ssize_t nbytes, nchars, i, s, e, size, bucket
    cdef unsigned long long h
    cdef char* raw
    cdef double sumsq, norm
    cdef bytes data

    for value in values:
        data = value.encode("utf-8")
        nbytes = len(data)
        if nbytes + 1 > starts.shape[0]:
            starts = np.empty(nbytes + 1, dtype=np.intp)
        raw = data
        # UTF-8 continuation bytes have the bit pattern 10xxxxxx.
        nchars = 0
        for i in range(nbytes):
            if (<unsigned char> raw[i] & 0xC0) != 0x80:
                starts[nchars] = i
                nchars += 1
        starts[nchars] = nbytes
        if nchars < ngram_min:
            continue
        for i in range(dim):
            scratch[i] = 0.0
        for size in range(ngram_min, ngram_max + 1):
            for s in range(nchars - size + 1):
                h = folded_seed
                for e in range(starts[s], starts[s + size]):
                    h ^= <unsigned char> raw[e]
                    h = h * FNV_PRIME
                bucket = <Py_ssize_t> ((h >> 1) % <unsigned long long> dim)
                scratch[bucket] += 1.0 if (h & 1) else -1.0
        sumsq = 0.0
        for i in range(dim):
            sumsq += scratch[i] * scratch[i]
        if sumsq == 0.0:
            continue
        norm = sqrt(sumsq)
        for i in range(dim):
            out[i] += scratch[i] / norm
