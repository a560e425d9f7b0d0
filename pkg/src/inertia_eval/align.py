"""Diagonal-prior IBM Model 2 alignment (fast_align reparametrization) and corpus complexity.

The aligner models p(target | source) only.  Complexity is the average,
over source word types that receive at least one link, of the entropy
(natural log) of the target words aligned to that type.

Alignment dumps use Pharaoh format: one line per sentence pair, space
separated ``source-target`` pairs of 0-based indices, NULL links omitted.
"""

from __future__ import annotations

import logging
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import _kernels
from .corpus import Corpus, as_corpus
from .errors import DataError
from .rng import Prng

logger = logging.getLogger(__name__)

UNSEEN_FLOOR = 1e-12
TENSION_BOUNDS = (0.01, 50.0)
TENSION_SEARCH_STEPS = 8


@dataclass(frozen=True)
class AlignConfig:
    iterations: int = 5
    p0: float = 0.08
    diagonal_tension: float = 4.0
    dirichlet_alpha: float = 0.0
    sample_size: int | None = None
    seed: int = 0
    optimize_tension: bool = False
    lowercase: bool = False

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if not 0.0 < self.p0 < 1.0:
            raise ValueError("p0 must be in (0, 1)")
        if self.diagonal_tension <= 0:
            raise ValueError("diagonal_tension must be positive")
        if self.dirichlet_alpha < 0:
            raise ValueError("dirichlet_alpha must be >= 0")
        if self.sample_size is not None and self.sample_size < 1:
            raise ValueError("sample_size must be positive")


def prior_row(i: int, m: int, n: int, tension: float, p0: float) -> np.ndarray:
    """Alignment prior over source positions ``0..n`` (0 is NULL) for target position ``i`` of ``m``."""
    if m < 1 or n < 1 or not 1 <= i <= m:
        raise ValueError(f"position out of range: i={i}, m={m}, n={n}")
    j = np.arange(1, n + 1, dtype=np.float64)
    weights = np.exp(-tension * np.abs(i / m - j / n))
    row = np.empty(n + 1)
    row[0] = p0
    row[1:] = (1.0 - p0) * weights / weights.sum()
    return row


def diagonal_prior(i: int, j: int, m: int, n: int, tension: float = 4.0, p0: float = 0.08) -> float:
    """p(a_i = j | m, n): probability that target position ``i`` links to source position ``j``.

    Positions are 1-based; ``j = 0`` is the NULL word.
    """
    if not 0 <= j <= n:
        raise ValueError(f"source position {j} out of range 0..{n}")
    return float(prior_row(i, m, n, tension, p0)[j])


@dataclass(frozen=True)
class AlignedPair:
    source_tokens: tuple[str, ...]
    target_tokens: tuple[str, ...]
    links: tuple[int | None, ...]

    def __post_init__(self):
        if len(self.links) != len(self.target_tokens):
            raise ValueError("one link per target token is required")
        for link in self.links:
            if link is not None and not 0 <= link < len(self.source_tokens):
                raise ValueError(f"link {link} outside source sentence")

    def pharaoh(self) -> str:
        return " ".join(f"{j}-{i}" for i, j in enumerate(self.links) if j is not None)


@dataclass
class AlignmentModel:
    """Lexical table t(target | source) over co-occurring pairs plus the prior parameters.

    Source id 0 is NULL; vocabulary lists are indexed by id (``source_vocab[0]`` is None).
    """

    source_vocab: list
    target_vocab: list
    pair_keys: np.ndarray
    prob: np.ndarray
    diagonal_tension: float
    p0: float
    lowercase: bool = False
    log_likelihoods: list[float] = field(default_factory=list)
    tensions: list[float] = field(default_factory=list)

    def __post_init__(self):
        self._source_index = {w: k for k, w in enumerate(self.source_vocab) if k}
        self._target_index = {w: k for k, w in enumerate(self.target_vocab)}

    @property
    def width(self) -> int:
        return len(self.target_vocab)

    def t(self, target: str, source: str | None) -> float:
        """t(target | source); ``source=None`` is the NULL word.  Unseen pairs give 0."""
        probs = self.lookup(np.array([self._source_id(source)]), np.array([self._target_id(target)]), floor=0.0)
        return float(probs[0])

    @property
    def table(self) -> dict:
        out: dict = defaultdict(dict)
        for key, p in zip(self.pair_keys.tolist(), self.prob.tolist()):
            src, tgt = divmod(key, self.width)
            out[self.source_vocab[src]][self.target_vocab[tgt]] = p
        return dict(out)

    def _source_id(self, word: str | None) -> int:
        if word is None:
            return 0
        return self._source_index.get(word, -1)

    def _target_id(self, word: str) -> int:
        return self._target_index.get(word, -1)

    def encode(self, tokens: Sequence[str], side: str) -> np.ndarray:
        if self.lowercase:
            tokens = [t.lower() for t in tokens]
        index = self._source_index if side == "source" else self._target_index
        return np.array([index.get(t, -1) for t in tokens], dtype=np.int64)

    def lookup(self, src_ids: np.ndarray, tgt_ids: np.ndarray, floor: float = UNSEEN_FLOOR) -> np.ndarray:
        known = (src_ids >= 0) & (tgt_ids >= 0)
        keys = np.where(known, src_ids * self.width + tgt_ids, -1)
        pos = np.searchsorted(self.pair_keys, keys)
        pos = np.minimum(pos, max(len(self.pair_keys) - 1, 0))
        hit = known & (self.pair_keys[pos] == keys) if len(self.pair_keys) else np.zeros_like(known)
        return np.where(hit, self.prob[pos] if len(self.prob) else 0.0, floor)


def _tokens(line: str, lowercase: bool) -> list[str]:
    return (line.lower() if lowercase else line).split()


def _cell_sources(src_ids, src_len, tgt_len):
    """Source id for every (target token, source position incl. NULL) cell, kernel layout."""
    src_len = np.asarray(src_len, dtype=np.int64)
    tgt_len = np.asarray(tgt_len, dtype=np.int64)
    src_start = np.concatenate(([0], np.cumsum(src_len)[:-1]))
    row_sent = np.repeat(np.arange(len(src_len)), tgt_len)
    width = src_len[row_sent] + 1
    row_start = np.concatenate(([0], np.cumsum(width)[:-1]))
    cell_row = np.repeat(np.arange(len(row_sent)), width)
    j = np.arange(len(cell_row)) - row_start[cell_row]
    sent = row_sent[cell_row]
    src_pos = np.where(j > 0, src_start[sent] + j - 1, 0)
    ids = np.where(j > 0, np.asarray(src_ids, dtype=np.int64)[src_pos] if len(src_ids) else 0, 0)
    return ids, cell_row


def _expected_feature(length_pairs: Counter, tension: float) -> float:
    """Mean over target tokens of the prior-expected diagonal feature (non-NULL part)."""
    total = 0.0
    tokens = 0
    for (m, n), count in sorted(length_pairs.items()):
        i = np.arange(1, m + 1, dtype=np.float64)[:, None]
        j = np.arange(1, n + 1, dtype=np.float64)[None, :]
        h = -np.abs(i / m - j / n)
        w = np.exp(tension * h)
        total += count * float(((w * h).sum(axis=1) / w.sum(axis=1)).sum())
        tokens += count * m
    return total / tokens


def _tune_tension(length_pairs: Counter, empirical: float, start: float) -> float:
    """Golden-section search for the tension whose expected feature matches ``empirical``."""
    lo, hi = TENSION_BOUNDS
    ratio = (math.sqrt(5.0) - 1.0) / 2.0

    def loss(x):
        return (_expected_feature(length_pairs, x) - empirical) ** 2

    a, b = hi - ratio * (hi - lo), lo + ratio * (hi - lo)
    fa, fb = loss(a), loss(b)
    for _ in range(TENSION_SEARCH_STEPS):
        if fa < fb:
            hi, b, fb = b, a, fa
            a = hi - ratio * (hi - lo)
            fa = loss(a)
        else:
            lo, a, fa = a, b, fb
            b = lo + ratio * (hi - lo)
            fb = loss(b)
    best = (lo + hi) / 2.0
    return best if loss(best) <= loss(start) else start


def train(
    source: Corpus | Sequence[str],
    target: Corpus | Sequence[str],
    config: AlignConfig = AlignConfig(),
) -> AlignmentModel:
    """Fit t(target | source) by EM with a fixed (or optionally tuned) diagonal prior."""
    source, target = as_corpus(source), as_corpus(target)
    if len(source) != len(target):
        raise DataError(f"line count mismatch: {len(source)} source vs {len(target)} target lines")

    source_index: dict[str, int] = {}
    target_index: dict[str, int] = {}
    src_ids: list[int] = []
    tgt_ids: list[int] = []
    src_len: list[int] = []
    tgt_len: list[int] = []
    skipped = 0
    for src_line, tgt_line in zip(source, target):
        src_tokens = _tokens(src_line, config.lowercase)
        tgt_tokens = _tokens(tgt_line, config.lowercase)
        if not src_tokens or not tgt_tokens:
            skipped += 1
            continue
        src_ids.extend(source_index.setdefault(w, len(source_index) + 1) for w in src_tokens)
        tgt_ids.extend(target_index.setdefault(w, len(target_index)) for w in tgt_tokens)
        src_len.append(len(src_tokens))
        tgt_len.append(len(tgt_tokens))
    if skipped:
        logger.warning("skipped %d sentence pairs with an empty side", skipped)
    if not src_len:
        raise DataError("no usable sentence pairs: every pair has an empty side")

    width = len(target_index)
    src_len_arr = np.array(src_len, dtype=np.int64)
    tgt_len_arr = np.array(tgt_len, dtype=np.int64)
    cell_src, cell_row = _cell_sources(np.array(src_ids, dtype=np.int64), src_len_arr, tgt_len_arr)
    cell_tgt = np.array(tgt_ids, dtype=np.int64)[cell_row]
    pair_keys, cell_param = np.unique(cell_src * width + cell_tgt, return_inverse=True)
    cell_param = np.ascontiguousarray(cell_param.reshape(-1), dtype=np.int64)
    param_src = pair_keys // width

    row_size = np.bincount(param_src)
    prob = 1.0 / row_size[param_src]
    tension = config.diagonal_tension
    length_pairs = Counter(zip(tgt_len, src_len)) if config.optimize_tension else Counter()
    log_likelihoods = []
    tensions = []

    for _ in range(config.iterations):
        counts = np.zeros_like(prob)
        loglik, mass, feature_sum = _kernels.em_estep(
            src_len_arr, tgt_len_arr, cell_param, prob, counts, tension, config.p0
        )
        log_likelihoods.append(float(loglik))
        tensions.append(tension)
        if config.optimize_tension and mass > 0:
            tension = _tune_tension(length_pairs, feature_sum / mass, tension)
        counts += config.dirichlet_alpha
        totals = np.bincount(param_src, weights=counts, minlength=len(row_size))
        safe = totals[param_src] > 0
        prob = np.where(safe, counts / np.where(safe, totals[param_src], 1.0), prob)

    return AlignmentModel(
        source_vocab=[None, *source_index],
        target_vocab=list(target_index),
        pair_keys=pair_keys,
        prob=prob,
        diagonal_tension=tension,
        p0=config.p0,
        lowercase=config.lowercase,
        log_likelihoods=log_likelihoods,
        tensions=tensions,
    )


def align_corpus(
    model: AlignmentModel,
    source: Corpus | Sequence[str],
    target: Corpus | Sequence[str],
) -> list[AlignedPair]:
    """Viterbi links for every pair; pairs with an empty side get no links."""
    source, target = as_corpus(source), as_corpus(target)
    if len(source) != len(target):
        raise DataError(f"line count mismatch: {len(source)} source vs {len(target)} target lines")
    src_tok = [tuple(line.split()) for line in source]
    tgt_tok = [tuple(line.split()) for line in target]
    usable = [k for k, (s, t) in enumerate(zip(src_tok, tgt_tok)) if s and t]

    links_flat = np.zeros(0, dtype=np.int64)
    if usable:
        src_ids = np.concatenate([model.encode(src_tok[k], "source") for k in usable])
        tgt_ids = np.concatenate([model.encode(tgt_tok[k], "target") for k in usable])
        src_len = np.array([len(src_tok[k]) for k in usable], dtype=np.int64)
        tgt_len = np.array([len(tgt_tok[k]) for k in usable], dtype=np.int64)
        cell_src, cell_row = _cell_sources(np.where(src_ids < 0, -1, src_ids), src_len, tgt_len)
        # NULL cells carry id 0, unseen source words -1
        cell_tgt = tgt_ids[cell_row]
        cell_prob = np.ascontiguousarray(model.lookup(cell_src, cell_tgt))
        links_flat = np.empty(int(tgt_len.sum()), dtype=np.int64)
        _kernels.viterbi(src_len, tgt_len, cell_prob, model.diagonal_tension, model.p0, links_flat)

    pairs = []
    cursor = 0
    usable_set = set(usable)
    for k, (s, t) in enumerate(zip(src_tok, tgt_tok)):
        if k in usable_set:
            chunk = links_flat[cursor:cursor + len(t)].tolist()
            cursor += len(t)
            links = tuple(None if j < 0 else j for j in chunk)
        else:
            links = (None,) * len(t)
        pairs.append(AlignedPair(s, t, links))
    return pairs


def viterbi_align(model: AlignmentModel, source_tokens: Sequence[str], target_tokens: Sequence[str]) -> AlignedPair:
    """Most probable link for each target token (ties: smallest source index; NULL must win strictly)."""
    if not source_tokens or not target_tokens:
        raise ValueError("both sentences must be non-empty")
    for token in (*source_tokens, *target_tokens):
        if not token or any(ch.isspace() for ch in token):
            raise ValueError(f"invalid token {token!r}")
    return align_corpus(model, [" ".join(source_tokens)], [" ".join(target_tokens)])[0]


def alignment_entropy(pairs: Sequence[AlignedPair], lowercase: bool = False) -> float:
    """Mean per-source-type entropy (nats) of aligned target words; NULL links are ignored."""
    counts: dict[str, Counter] = defaultdict(Counter)
    for pair in pairs:
        for i, j in enumerate(pair.links):
            if j is None:
                continue
            x, y = pair.source_tokens[j], pair.target_tokens[i]
            if lowercase:
                x, y = x.lower(), y.lower()
            counts[x][y] += 1
    if not counts:
        raise DataError("no non-NULL links: complexity is undefined")
    total = 0.0
    for x in sorted(counts):
        row = counts[x]
        size = sum(row.values())
        entropy = 0.0
        for y in sorted(row):
            p = row[y] / size
            entropy -= p * math.log(p)
        total += entropy
    return total / len(counts) + 0.0


@dataclass(frozen=True)
class ComplexityResult:
    value: float
    model: AlignmentModel
    sample: tuple[int, ...]
    alignments: tuple[AlignedPair, ...]


def analyze_complexity(
    source: Corpus | Sequence[str],
    target: Corpus | Sequence[str],
    config: AlignConfig = AlignConfig(),
) -> ComplexityResult:
    """Train on the whole bitext, align a sample of it, and measure alignment entropy."""
    source, target = as_corpus(source), as_corpus(target)
    model = train(source, target, config)
    if config.sample_size is None or config.sample_size >= len(source):
        sample = tuple(range(len(source)))
    else:
        sample = tuple(Prng(config.seed).sample_indices(len(source), config.sample_size))
    pairs = align_corpus(model, [source[k] for k in sample], [target[k] for k in sample])
    return ComplexityResult(alignment_entropy(pairs, config.lowercase), model, sample, tuple(pairs))


def complexity(
    source: Corpus | Sequence[str],
    target: Corpus | Sequence[str],
    config: AlignConfig = AlignConfig(),
) -> float:
    return analyze_complexity(source, target, config).value


def write_pharaoh(pairs: Sequence[AlignedPair], path: str | Path) -> None:
    Path(path).write_text("".join(p.pharaoh() + "\n" for p in pairs), encoding="utf-8")


def read_pharaoh(path: str | Path) -> list[list[tuple[int, int]]]:
    """Parse a Pharaoh file into ``(source_index, target_index)`` lists, one per line."""
    out = []
    for number, line in enumerate(Path(path).read_text(encoding="utf-8").split("\n")[:-1], 1):
        links = []
        for item in line.split():
            try:
                src, tgt = item.split("-")
                links.append((int(src), int(tgt)))
            except ValueError:
                raise DataError(f"{path}: malformed link {item!r} on line {number}") from None
        out.append(links)
    return out
