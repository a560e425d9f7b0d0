"""Smoothness (consistency, robustness) and stability between translation outputs."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bleu import BleuConfig, corpus_bleu, harmonic_mean
from .corpus import Corpus, SegmentScores, as_corpus
from .errors import DataError

CorpusLike = Corpus | Sequence[str]


@dataclass(frozen=True)
class SmoothnessResult:
    consistency: float
    robustness: float


@dataclass(frozen=True)
class StabilityResult:
    stability: float
    exact_match_rate: float


def _same_size(*corpora) -> None:
    sizes = [len(c) for c in corpora]
    if len(set(sizes)) != 1:
        raise DataError(f"corpus size mismatch: {sizes}")
    if not sizes[0]:
        raise DataError("empty corpus")


def symmetric_bleu(a: CorpusLike, b: CorpusLike, config: BleuConfig = BleuConfig(), threads: int = 1) -> float:
    """Harmonic mean of BLEU(a, b) and BLEU(b, a)."""
    a, b = as_corpus(a), as_corpus(b)
    _same_size(a, b)
    return harmonic_mean(
        corpus_bleu(a, b, config, threads).score, corpus_bleu(b, a, config, threads).score
    )


def consistency(y_noisy: CorpusLike, y_clean: CorpusLike, config: BleuConfig = BleuConfig(), threads: int = 1) -> float:
    """Reference-free agreement between translations of noisy and clean input."""
    return symmetric_bleu(y_noisy, y_clean, config, threads)


def consistency_multi(
    y_noisy: CorpusLike,
    clean_variants: Sequence[CorpusLike],
    config: BleuConfig = BleuConfig(),
    threads: int = 1,
) -> float:
    """Mean consistency against several clean variants (e.g. alternative corrections)."""
    if not clean_variants:
        raise ValueError("at least one clean variant is required")
    y_noisy = as_corpus(y_noisy)
    variants = [as_corpus(v) for v in clean_variants]
    _same_size(y_noisy, *variants)
    values = [consistency(y_noisy, v, config, threads) for v in variants]
    return sum(values) / len(values)


def _single_column(scores: SegmentScores | Sequence[float]) -> np.ndarray:
    if not isinstance(scores, SegmentScores):
        scores = SegmentScores(np.asarray(scores, dtype=np.float64))
    if scores.columns != 1:
        raise DataError(f"{scores.origin}: expected a single score column, got {scores.columns}")
    return scores.values[:, 0]


def robustness(noisy_scores: SegmentScores | Sequence[float], clean_scores: SegmentScores | Sequence[float]) -> float:
    """Mean segment score on noisy input minus mean on clean input."""
    noisy = _single_column(noisy_scores)
    clean = _single_column(clean_scores)
    if noisy.shape != clean.shape:
        raise DataError(f"score size mismatch: {noisy.shape[0]} vs {clean.shape[0]}")
    if not noisy.shape[0]:
        raise DataError("empty score file")
    return float(noisy.mean() - clean.mean())


def robustness_bleu(
    y_noisy: CorpusLike,
    y_clean: CorpusLike,
    refs: CorpusLike,
    config: BleuConfig = BleuConfig(),
    threads: int = 1,
) -> float:
    """BLEU(noisy, refs) - BLEU(clean, refs)."""
    y_noisy, y_clean, refs = as_corpus(y_noisy), as_corpus(y_clean), as_corpus(refs)
    _same_size(y_noisy, y_clean, refs)
    return corpus_bleu(y_noisy, refs, config, threads).score - corpus_bleu(y_clean, refs, config, threads).score


def smoothness(
    y_noisy: CorpusLike, y_clean: CorpusLike, refs: CorpusLike, config: BleuConfig = BleuConfig(), threads: int = 1
) -> SmoothnessResult:
    return SmoothnessResult(
        consistency(y_noisy, y_clean, config, threads),
        robustness_bleu(y_noisy, y_clean, refs, config, threads),
    )


def exact_match_rate(y1: CorpusLike, y2: CorpusLike) -> float:
    """Fraction of lines that are identical once trailing whitespace is trimmed."""
    y1, y2 = as_corpus(y1), as_corpus(y2)
    _same_size(y1, y2)
    same = sum(a.rstrip() == b.rstrip() for a, b in zip(y1, y2))
    return same / len(y1)


def stability(y1: CorpusLike, y2: CorpusLike, config: BleuConfig = BleuConfig(), threads: int = 1) -> StabilityResult:
    """Output similarity between two model versions run on the same input."""
    return StabilityResult(symmetric_bleu(y1, y2, config, threads), exact_match_rate(y1, y2))


def symmetrize(forward: float, backward: float) -> float:
    """Average a metric computed for an update and for its reverse."""
    return (forward + backward) / 2.0
