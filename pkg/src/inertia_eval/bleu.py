"""Corpus BLEU matching sacreBLEU's ``nrefs:1|case:mixed|eff:no|tok:13a|smooth:exp``.

Segment-level BLEU is deliberately not offered.
"""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .corpus import Corpus, as_corpus
from .errors import DataError
from .rng import Prng
from .text import get_tokenizer

SMOOTHING_METHODS = ("none", "exponential")


@dataclass(frozen=True)
class BleuConfig:
    max_order: int = 4
    smoothing: str = "exponential"
    effective_order: bool = False
    tokenizer: str = "13a"

    def __post_init__(self):
        if self.max_order < 1:
            raise ValueError("max_order must be >= 1")
        if self.smoothing not in SMOOTHING_METHODS:
            raise ValueError(f"smoothing must be one of {SMOOTHING_METHODS}")
        get_tokenizer(self.tokenizer)

    @property
    def signature(self) -> str:
        smooth = "exp" if self.smoothing == "exponential" else "none"
        eff = "yes" if self.effective_order else "no"
        return f"nrefs:1|case:mixed|eff:{eff}|tok:{self.tokenizer}|smooth:{smooth}"


@dataclass(frozen=True)
class BleuScore:
    score: float
    precisions: tuple[float, ...]
    brevity_penalty: float
    hyp_len: int
    ref_len: int
    correct: tuple[int, ...]
    total: tuple[int, ...]

    def __float__(self) -> float:
        return self.score


def _ngrams(tokens: list[str], n: int) -> Counter:
    return Counter(zip(*(tokens[k:] for k in range(n))))


def segment_stats(hyp: str, ref: str, config: BleuConfig) -> list[int]:
    """Sufficient statistics ``[hyp_len, ref_len, correct_1..N, total_1..N]`` for one pair."""
    tokenize = get_tokenizer(config.tokenizer)
    hyp_tokens = tokenize(hyp.rstrip())
    ref_tokens = tokenize(ref.rstrip())
    correct = []
    total = []
    for n in range(1, config.max_order + 1):
        hyp_counts = _ngrams(hyp_tokens, n)
        ref_counts = _ngrams(ref_tokens, n)
        correct.append(sum(min(c, ref_counts[g]) for g, c in hyp_counts.items()))
        total.append(max(len(hyp_tokens) - n + 1, 0))
    return [len(hyp_tokens), len(ref_tokens), *correct, *total]


def _check_pair(hypotheses: Corpus, references: Corpus) -> None:
    if len(hypotheses) != len(references):
        raise DataError(
            f"corpus size mismatch: {len(hypotheses)} hypotheses vs {len(references)} references"
        )
    if not len(hypotheses):
        raise DataError("empty corpus")


def corpus_stats(
    hypotheses: Corpus | Sequence[str],
    references: Corpus | Sequence[str],
    config: BleuConfig = BleuConfig(),
    threads: int = 1,
) -> np.ndarray:
    """Per-segment sufficient statistics as an ``(N, 2 + 2 * max_order)`` integer array.

    Counting is split into contiguous chunks when ``threads > 1``; rows are
    reassembled in order, so the result does not depend on the thread count.
    """
    hypotheses, references = as_corpus(hypotheses), as_corpus(references)
    _check_pair(hypotheses, references)
    pairs = list(zip(hypotheses, references))

    def count(chunk):
        return [segment_stats(h, r, config) for h, r in chunk]

    if threads <= 1 or len(pairs) < 2 * threads:
        rows = count(pairs)
    else:
        size = math.ceil(len(pairs) / threads)
        chunks = [pairs[k:k + size] for k in range(0, len(pairs), size)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = [row for part in pool.map(count, chunks) for row in part]
    return np.array(rows, dtype=np.int64).reshape(len(pairs), 2 + 2 * config.max_order)


def bleu_from_stats(stats: Sequence[int], config: BleuConfig = BleuConfig()) -> BleuScore:
    """Corpus BLEU from summed sufficient statistics (mteval exponential smoothing)."""
    order = config.max_order
    hyp_len, ref_len = int(stats[0]), int(stats[1])
    correct = [int(c) for c in stats[2:2 + order]]
    total = [int(t) for t in stats[2 + order:2 + 2 * order]]

    if hyp_len < ref_len:
        bp = math.exp(1.0 - ref_len / hyp_len) if hyp_len > 0 else 0.0
    else:
        bp = 1.0

    precisions = [0.0] * order
    smooth = 1.0
    used = order
    for n in range(order):
        if total[n] == 0:
            break
        if config.effective_order:
            used = n + 1
        if correct[n] == 0:
            if config.smoothing == "exponential":
                smooth *= 2.0
                precisions[n] = 100.0 / (smooth * total[n])
        else:
            precisions[n] = 100.0 * correct[n] / total[n]

    if any(p == 0.0 for p in precisions[:used]):
        score = 0.0
    else:
        # log(p / 100) <= 0 keeps the result in [0, 100], and exactly 100 for a perfect match
        score = 100.0 * bp * math.exp(sum(math.log(p / 100.0) for p in precisions[:used]) / used)
    return BleuScore(score, tuple(precisions), bp, hyp_len, ref_len, tuple(correct), tuple(total))


def corpus_bleu(
    hypotheses: Corpus | Sequence[str],
    references: Corpus | Sequence[str],
    config: BleuConfig = BleuConfig(),
    threads: int = 1,
) -> BleuScore:
    stats = corpus_stats(hypotheses, references, config, threads)
    return bleu_from_stats(stats.sum(axis=0), config)


def harmonic_mean(a: float, b: float) -> float:
    """``2ab / (a + b)``, with ``H(0, 0) = 0``."""
    if a < 0 or b < 0:
        raise ValueError(f"harmonic mean needs non-negative inputs, got {a}, {b}")
    if a + b == 0:
        return 0.0
    return 2.0 * a * b / (a + b)


def bootstrap_ci(
    hypotheses: Corpus | Sequence[str],
    references: Corpus | Sequence[str],
    config: BleuConfig = BleuConfig(),
    resamples: int = 1000,
    seed: int = 0,
    threads: int = 1,
    confidence: float = 0.95,
) -> tuple[float, float]:
    """Percentile interval of corpus BLEU under segment resampling with replacement.

    Segment indices are drawn from splitmix64 seeded with ``seed``.
    Percentiles use numpy's default (linear) interpolation.
    """
    if resamples < 100:
        raise ValueError("resamples must be >= 100")
    stats = corpus_stats(hypotheses, references, config, threads)
    size = stats.shape[0]
    rng = Prng(seed)
    scores = np.empty(resamples)
    batch = max(1, min(resamples, 2_000_000 // max(size, 1)))
    done = 0
    while done < resamples:
        count = min(batch, resamples - done)
        idx = rng.below_array(size, count * size).reshape(count, size)
        sums = stats[idx].sum(axis=1)
        for k in range(count):
            scores[done + k] = bleu_from_stats(sums[k], config).score
        done += count
    tail = (1.0 - confidence) / 2.0 * 100.0
    low, high = np.percentile(scores, [tail, 100.0 - tail])
    return float(low), float(high)
