#!/usr/bin/env python3
"""Independent reference implementations used to freeze test constants.

Everything here is written from the algorithm definitions alone: no
imports from the package, no numpy, stateful generator forms instead of
the package's vectorized counter forms. Run it and paste the printed
literals into the tests; if the package ever drifts from these numbers,
the tests catch it.
"""

import json
import math

MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


class SplitMix64:
    """Classic stateful form: state += GOLDEN, then mix."""

    def __init__(self, seed):
        self.state = seed & MASK

    def next(self):
        self.state = (self.state + GOLDEN) & MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return z ^ (z >> 31)


def fnv1a64(data: bytes, state=0xCBF29CE484222325) -> int:
    for byte in data:
        state = ((state ^ byte) * 0x100000001B3) & MASK
    return state


def fold_seed(seed: int) -> int:
    return fnv1a64(seed.to_bytes(8, "little"))


def embed_value(value: str, dim: int, seed: int, nmin=2, nmax=3):
    """Dict-of-buckets n-gram embedding, normalized; no hashing shortcuts."""
    folded = fold_seed(seed)
    chars = list(value)
    acc = [0] * dim
    for n in range(nmin, nmax + 1):
        for i in range(len(chars) - n + 1):
            gram = "".join(chars[i : i + n]).encode("utf-8")
            h = fnv1a64(gram, folded)
            bucket = (h >> 1) % dim
            sign = 1 if h & 1 else -1
            acc[bucket] += sign
    norm = math.sqrt(sum(a * a for a in acc))
    if norm == 0:
        return [0.0] * dim
    return [a / norm for a in acc]


def embed_column(values, dim, seed, nmin=2, nmax=3, lowercase=True):
    folded = fold_seed(seed)
    kept = sorted({v.lower() if lowercase else v for v in values})
    acc = [0.0] * dim
    contributed = 0
    for v in kept:
        chars = list(v)
        cell = [0] * dim
        any_gram = False
        for n in range(nmin, nmax + 1):
            for i in range(len(chars) - n + 1):
                gram = "".join(chars[i : i + n]).encode("utf-8")
                h = fnv1a64(gram, folded)
                cell[(h >> 1) % dim] += 1 if h & 1 else -1
                any_gram = True
        if not any_gram:
            continue
        norm = math.sqrt(sum(c * c for c in cell))
        if norm == 0:
            continue
        contributed += 1
        for i in range(dim):
            acc[i] += cell[i] / norm
    if contributed == 0:
        return [0.0] * dim
    acc = [a / len(kept) for a in acc]
    norm = math.sqrt(sum(a * a for a in acc))
    if norm == 0:
        return [0.0] * dim
    return [a / norm for a in acc]


def cosine(u, v):
    dot = math.fsum(a * b for a, b in zip(u, v))
    nu = math.sqrt(math.fsum(a * a for a in u))
    nv = math.sqrt(math.fsum(b * b for b in v))
    return dot / (nu * nv) if nu and nv else 0.0


def main():
    print("# splitmix64 stateful stream, seed=42, first 5")
    gen = SplitMix64(42)
    print(json.dumps([gen.next() for _ in range(5)]))

    print("# splitmix64 stateful stream, seed=0, first 3")
    gen = SplitMix64(0)
    print(json.dumps([gen.next() for _ in range(3)]))

    print("# fnv1a64 anchors")
    print(json.dumps({
        "empty": fnv1a64(b""),
        "a": fnv1a64(b"a"),
        "abc": fnv1a64(b"abc"),
        "fold_seed_42": fold_seed(42),
    }))

    print("# embed_value('abc'), dim=8, seed=42")
    print(json.dumps(embed_value("abc", 8, 42)))

    print("# embed_value('hello world'), dim=8, seed=42, first 4")
    print(json.dumps(embed_value("hello world", 8, 42)[:4]))

    print("# embed_column(['beta','ALPHA','alpha','gamma'], dim=16, seed=42)")
    print(json.dumps(embed_column(["beta", "ALPHA", "alpha", "gamma"], 16, 42)))

    print("# joinability of two disjoint hex-ish columns, dim=128, seed=42")
    col_a = [f"user-{i:04x}" for i in range(50)]
    col_b = [f"user-{i:04x}" for i in range(50, 100)]
    va = embed_column(col_a, 128, 42)
    vb = embed_column(col_b, 128, 42)
    print(json.dumps({"cos": cosine(va, vb)}))

    print("# identical-after-casefold columns joinability (expect 1.0)")
    vc = embed_column(["Alpha", "BETA"], 64, 42)
    vd = embed_column(["alpha", "beta", "ALPHA"], 64, 42)
    print(json.dumps({"cos": cosine(vc, vd)}))

    print("# reservoir sample, values 0..19 as strings, size=5, seed=42")
    size, n, seed = 5, 20, 42
    sample = [str(i) for i in range(size)]
    # counter form must agree with the package: out(seed, i) for i >= size
    def out(seed, i):
        z = (seed + ((i + 1) * GOLDEN)) & MASK
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return z ^ (z >> 31)
    for i in range(size, n):
        j = out(seed, i) % (i + 1)
        if j < size:
            sample[j] = str(i)
    print(json.dumps(sample))

    print("# counter form vs stateful form, seed=42, first 5 (must be equal)")
    gen = SplitMix64(42)
    stateful = [gen.next() for _ in range(5)]
    counter = [out(42, i) for i in range(5)]
    print(json.dumps({"equal": stateful == counter}))


if __name__ == "__main__":
    main()
