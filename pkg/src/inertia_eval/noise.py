"""Synthetic misspellings: single-character deletion, insertion or substitution.

Each line gets its own splitmix64 substream seeded with
``splitmix64_mix(seed ^ line_index)``.  Output is therefore the same
whether lines are processed sequentially or in parallel chunks.

Draw order inside a line, per word: one uniform real for selection; for a
selected word, the strategy index, then the position, then (insert and
substitute only) the alphabet index, plus one more alphabet index when a
substitution hits the original character.
"""

from __future__ import annotations

import math
import string
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from .corpus import Corpus, as_corpus
from .rng import MASK64, Prng, splitmix64_mix

STRATEGIES = ("delete", "insert", "substitute")
_ALIASES = {"del": "delete", "ins": "insert", "sub": "substitute"}


def parse_strategies(text: str) -> tuple[str, ...]:
    """Parse ``"del,ins,sub"``-style lists (full names accepted too)."""
    names = []
    for item in text.split(","):
        item = item.strip()
        name = _ALIASES.get(item, item)
        if name not in STRATEGIES:
            raise ValueError(f"unknown noise strategy {item!r}")
        names.append(name)
    return tuple(names)


@dataclass(frozen=True)
class NoiseConfig:
    p: float = 0.1
    strategies: tuple[str, ...] = STRATEGIES
    alphabet: str = string.ascii_lowercase
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must be in [0, 1]")
        if not self.strategies:
            raise ValueError("at least one strategy is required")
        unknown = set(self.strategies) - set(STRATEGIES)
        if unknown:
            raise ValueError(f"unknown strategies: {sorted(unknown)}")
        # canonical order and no duplicates, so draws do not depend on spelling
        object.__setattr__(
            self, "strategies", tuple(s for s in STRATEGIES if s in self.strategies)
        )
        if not self.alphabet:
            raise ValueError("alphabet must not be empty")
        object.__setattr__(self, "alphabet", "".join(dict.fromkeys(self.alphabet)))


def observed_alphabet(corpus: Corpus | Sequence[str]) -> str:
    """Sorted set of non-whitespace characters appearing in ``corpus``."""
    return "".join(sorted({ch for line in as_corpus(corpus) for ch in line if not ch.isspace()}))


def apply_edit(word: str, rng: Prng, config: NoiseConfig) -> tuple[str, str]:
    """Apply one random edit to ``word``; returns ``(strategy, new_word)``."""
    if not word:
        raise ValueError("cannot misspell an empty word")
    eligible = [s for s in config.strategies if not (s == "delete" and len(word) == 1)]
    if not eligible:
        raise ValueError("no eligible strategy")
    strategy = eligible[rng.below(len(eligible))]
    alphabet = config.alphabet
    if strategy == "delete":
        pos = rng.below(len(word))
        return strategy, word[:pos] + word[pos + 1:]
    if strategy == "insert":
        pos = rng.below(len(word) + 1)
        return strategy, word[:pos] + alphabet[rng.below(len(alphabet))] + word[pos:]
    pos = rng.below(len(word))
    char = alphabet[rng.below(len(alphabet))]
    if char == word[pos]:
        # one redraw only; a second collision leaves the word unchanged
        char = alphabet[rng.below(len(alphabet))]
    return strategy, word[:pos] + char + word[pos + 1:]


def misspell_word(word: str, rng: Prng, config: NoiseConfig) -> str:
    return apply_edit(word, rng, config)[1]


def line_rng(seed: int, line_index: int) -> Prng:
    return Prng(splitmix64_mix((seed ^ line_index) & MASK64))


def line_edits(line: str, line_index: int, config: NoiseConfig) -> list[tuple[str, str | None, str]]:
    """``(original, strategy or None, output)`` for every whitespace word of the line."""
    rng = line_rng(config.seed, line_index)
    edits = []
    for word in line.split():
        if rng.random() < config.p:
            strategy, new = apply_edit(word, rng, config)
            edits.append((word, strategy, new))
        else:
            edits.append((word, None, word))
    return edits


def misspell_line(line: str, line_index: int, config: NoiseConfig) -> str:
    return " ".join(new for _, _, new in line_edits(line, line_index, config))


def misspell_corpus(
    corpus: Corpus | Sequence[str], config: NoiseConfig, threads: int = 1
) -> Corpus:
    """Misspell each whitespace word independently with probability ``config.p``.

    Words are re-joined with single spaces, so runs of whitespace collapse.
    """
    corpus = as_corpus(corpus)
    lines = list(corpus)

    def run(start_stop):
        start, stop = start_stop
        return [misspell_line(lines[k], k, config) for k in range(start, stop)]

    if threads <= 1 or len(lines) < 2 * threads:
        out = run((0, len(lines)))
    else:
        size = math.ceil(len(lines) / threads)
        spans = [(k, min(k + size, len(lines))) for k in range(0, len(lines), size)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            out = [line for part in pool.map(run, spans) for line in part]
    return Corpus(tuple(out), f"noise({corpus.origin})")
