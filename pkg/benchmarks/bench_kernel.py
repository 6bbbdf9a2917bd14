"""Compare the compiled hashing kernel against the pure-Python fallback.

Times embed_sum on synthetic column samples sized like real index builds
and checks that both backends produce byte-identical vectors.

    python3 benchmarks/bench_kernel.py
    python3 benchmarks/bench_kernel.py --values 5000 --dim 256 --repeats 7
"""

import argparse
import random
import string
import sys
import time

import numpy as np

from warpgate import _hash_fallback
from warpgate.hashing import fold_seed

try:
    from warpgate import _hashkernel
except ImportError:
    _hashkernel = None


def make_values(count, mean_len, rng):
    alphabet = string.ascii_lowercase + string.digits + "-_@."
    seen = set()
    while len(seen) < count:
        n = max(2, int(rng.gauss(mean_len, mean_len / 4)))
        seen.add("".join(rng.choice(alphabet) for _ in range(n)))
    return sorted(seen)


def run(impl, values, dim, folded, repeats):
    out = np.zeros(dim, dtype=np.float64)
    timings = []
    for _ in range(repeats):
        out[:] = 0.0
        started = time.perf_counter()
        impl.embed_sum(values, dim, folded, 2, 3, out)
        timings.append(time.perf_counter() - started)
    return min(timings), out.copy()


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--values", type=int, default=2000,
                        help="distinct values per column sample")
    parser.add_argument("--value-len", type=int, default=16,
                        help="mean value length in characters")
    parser.add_argument("--dim", type=int, default=128)
    parser.add_argument("--repeats", type=int, default=5,
                        help="timed repeats, best-of is reported")
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args(argv)

    rng = random.Random(args.seed)
    values = make_values(args.values, args.value_len, rng)
    folded = fold_seed(args.seed)

    fallback_s, fallback_vec = run(_hash_fallback, values, args.dim,
                                   folded, args.repeats)
    rate = args.values / fallback_s
    print(f"fallback  {fallback_s * 1e3:10.2f} ms   {rate:12.0f} values/s")

    if _hashkernel is None:
        print("compiled  extension not built, skipping "
              "(install with Cython available)")
        return 0

    compiled_s, compiled_vec = run(_hashkernel, values, args.dim,
                                   folded, args.repeats)
    rate = args.values / compiled_s
    speedup = fallback_s / compiled_s
    print(f"compiled  {compiled_s * 1e3:10.2f} ms   {rate:12.0f} values/s"
          f"   {speedup:.1f}x faster")

    if not np.array_equal(fallback_vec, compiled_vec):
        print("MISMATCH: backends disagree", file=sys.stderr)
        return 1
    print(f"outputs bit-identical across backends "
          f"({args.values} values, dim {args.dim})")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
