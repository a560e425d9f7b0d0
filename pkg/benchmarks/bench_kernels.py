"""Compare the compiled kernels with the numpy/pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Each kernel runs on identical inputs under both backends; outputs are
checked for agreement before timings are printed.
"""

import argparse
import random
import string
import timeit

import numpy as np

from inertia_eval import _pykernels
from inertia_eval.align import _cell_sources

try:
    from inertia_eval import _ckernels
except ImportError:
    _ckernels = None


def alignment_inputs(sentences=2000, seed=0):
    rng = np.random.default_rng(seed)
    src_len = rng.integers(5, 30, size=sentences).astype(np.int64)
    tgt_len = rng.integers(5, 30, size=sentences).astype(np.int64)
    src_ids = rng.integers(1, 5000, size=int(src_len.sum()))
    cell_src, _ = _cell_sources(src_ids, src_len, tgt_len)
    cell_param = rng.integers(0, 50_000, size=len(cell_src)).astype(np.int64)
    t = rng.uniform(1e-4, 1.0, size=50_000)
    return src_len, tgt_len, cell_param, t


def cases():
    src_len, tgt_len, cell_param, t = alignment_inputs()
    cell_prob = t[cell_param]
    links = np.empty(int(tgt_len.sum()), dtype=np.int64)
    rng = random.Random(1)
    words = ["".join(rng.choice(string.ascii_lowercase) for _ in range(rng.randint(3, 14))) for _ in range(2000)]
    blob = bytes(rng.getrandbits(8) for _ in range(1 << 20))
    draws = np.empty(1 << 20, dtype=np.uint64)
    picks = np.empty(1 << 20, dtype=np.int64)

    def estep(k):
        counts = np.zeros_like(t)
        return k.em_estep(src_len, tgt_len, cell_param, t, counts, 4.0, 0.08)[0]

    def viterbi(k):
        k.viterbi(src_len, tgt_len, cell_prob, 4.0, 0.08, links)
        return links.copy()

    def lev(k):
        return [k.levenshtein(a, b) for a, b in zip(words, words[1:])]

    def fnv(k):
        return k.fnv1a64(blob)

    def prng(k):
        k.splitmix64_fill(12345, draws)
        return draws.copy()

    def below(k):
        k.splitmix64_below_fill(12345, 1000, picks)
        return picks.copy()

    return {
        "em_estep (2k sentences)": estep,
        "viterbi (2k sentences)": viterbi,
        "levenshtein (2k words)": lev,
        "fnv1a64 (1 MiB)": fnv,
        "splitmix64 (1M draws)": prng,
        "splitmix64 below (1M)": below,
    }


def same(a, b):
    if isinstance(a, float):
        return abs(a - b) <= 1e-9 * max(1.0, abs(a))
    if isinstance(a, np.ndarray):
        return np.array_equal(a, b)
    return a == b


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    backends = [("python", _pykernels)]
    if _ckernels is not None:
        backends.append(("cython", _ckernels))
    else:
        print("compiled kernels not built; timing the fallback only")

    print(f"{'kernel':<26}" + "".join(f"{name:>12}" for name, _ in backends) + ("    speedup" if len(backends) == 2 else ""))
    for label, fn in cases().items():
        results = [fn(k) for _, k in backends]
        if len(results) == 2 and not same(results[0], results[1]):
            raise SystemExit(f"{label}: backends disagree")
        times = [min(timeit.repeat(lambda k=k: fn(k), number=1, repeat=args.repeat)) for _, k in backends]
        line = f"{label:<26}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times)
        if len(times) == 2:
            line += f"{times[0] / times[1]:>10.1f}x"
        print(line)


if __name__ == "__main__":
    main()
