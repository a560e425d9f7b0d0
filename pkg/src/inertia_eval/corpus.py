"""Corpus and score-file I/O, plus pseudo-label data mixing."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DataError
from .rng import Prng


@dataclass(frozen=True)
class Corpus:
    """An ordered, immutable sequence of text segments."""

    lines: tuple[str, ...]
    origin: str = "inline"

    def __post_init__(self):
        object.__setattr__(self, "lines", tuple(self.lines))
        for number, line in enumerate(self.lines, 1):
            if "\n" in line:
                raise DataError(f"{self.origin}: line {number} contains a newline")

    @classmethod
    def from_lines(cls, lines: Iterable[str], origin: str = "inline") -> "Corpus":
        return cls(tuple(lines), origin)

    def __len__(self) -> int:
        return len(self.lines)

    def __iter__(self):
        return iter(self.lines)

    def __getitem__(self, index):
        return self.lines[index]


@dataclass(frozen=True)
class SegmentScores:
    """Per-segment scores: one row per segment, one column per annotator/metric."""

    values: np.ndarray
    origin: str = "inline"
    columns: int = field(init=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim == 1:
            values = values.reshape(-1, 1)
        if values.ndim != 2:
            raise DataError(f"{self.origin}: scores must be a 2-D table")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "columns", values.shape[1])

    def __len__(self) -> int:
        return self.values.shape[0]


def as_corpus(data: Corpus | Sequence[str]) -> Corpus:
    return data if isinstance(data, Corpus) else Corpus.from_lines(data)


def _decode_lines(raw: bytes, origin: str) -> list[str]:
    raw = raw.replace(b"\r\n", b"\n")
    chunks = raw.split(b"\n")
    if chunks and chunks[-1] == b"":
        chunks.pop()
    lines = []
    for number, chunk in enumerate(chunks, 1):
        try:
            lines.append(chunk.decode("utf-8"))
        except UnicodeDecodeError as exc:
            raise DataError(f"{origin}: invalid UTF-8 on line {number}: {exc.reason}") from None
    return lines


def read_bytes(path: str | Path) -> bytes:
    path = Path(path)
    if not path.is_file():
        raise DataError(f"file not found: {path}")
    return path.read_bytes()


def load_corpus(path: str | Path) -> Corpus:
    """Read a UTF-8 file with one segment per line; CRLF is normalized to LF."""
    return Corpus(tuple(_decode_lines(read_bytes(path), str(path))), str(path))


def save_corpus(corpus: Corpus | Sequence[str], path: str | Path) -> None:
    text = "".join(line + "\n" for line in as_corpus(corpus))
    Path(path).write_text(text, encoding="utf-8", newline="\n")


def load_parallel(source_path: str | Path, target_path: str | Path) -> tuple[Corpus, Corpus]:
    source = load_corpus(source_path)
    target = load_corpus(target_path)
    if len(source) != len(target):
        raise DataError(
            f"line count mismatch: {source_path} has {len(source)} lines, "
            f"{target_path} has {len(target)} lines"
        )
    return source, target


def parse_scores(text: str, columns: int | None = None, origin: str = "inline") -> SegmentScores:
    """Parse a TSV table of reals.

    :param columns: expected column count, or ``None`` to accept whatever the
        first row has (all rows must still agree).
    """
    rows = []
    width = columns
    body = text.replace("\r\n", "\n").rstrip("\n")
    for number, line in enumerate(body.split("\n") if body else [], 1):
        if not line.strip():
            raise DataError(f"{origin}: empty row on line {number}")
        cells = line.strip().split("\t")
        try:
            row = [float(cell) for cell in cells]
        except ValueError:
            raise DataError(f"{origin}: non-numeric cell on line {number}: {line!r}") from None
        if not all(math.isfinite(v) for v in row):
            raise DataError(f"{origin}: non-finite value on line {number}")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise DataError(
                f"{origin}: ragged row on line {number}: expected {width} columns, got {len(row)}"
            )
        rows.append(row)
    values = np.array(rows, dtype=np.float64).reshape(len(rows), width or 1)
    return SegmentScores(values, origin)


def load_scores(path: str | Path, columns: int | None = None) -> SegmentScores:
    raw = read_bytes(path)
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError:
        raise DataError(f"{path}: score file is not valid UTF-8") from None
    return parse_scores(text, columns, str(path))


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def mix_plt(
    original_src: Corpus | Sequence[str],
    original_tgt: Corpus | Sequence[str],
    pl_src: Corpus | Sequence[str],
    pl_tgt: Corpus | Sequence[str],
    ratio: float = 1.0,
    seed: int = 0,
) -> tuple[Corpus, Corpus]:
    """Append ``round(ratio * |original|)`` pseudo-labelled pairs to the original bitext.

    The pseudo-labelled block keeps its file order.  When more pairs are
    requested than exist, whole copies are taken first and the remainder is
    sampled without replacement.
    """
    original_src, original_tgt = as_corpus(original_src), as_corpus(original_tgt)
    pl_src, pl_tgt = as_corpus(pl_src), as_corpus(pl_tgt)
    if len(original_src) != len(original_tgt):
        raise DataError(
            f"original bitext is not parallel: {len(original_src)} vs {len(original_tgt)} lines"
        )
    if len(pl_src) != len(pl_tgt):
        raise DataError(
            f"pseudo-labelled bitext is not parallel: {len(pl_src)} vs {len(pl_tgt)} lines"
        )
    if ratio < 0 or not math.isfinite(ratio):
        raise ValueError("ratio must be a non-negative finite number")

    wanted = _round_half_up(ratio * len(original_src))
    if wanted and not len(pl_src):
        raise DataError("pseudo-labelled bitext is empty")
    indices: list[int] = []
    if wanted:
        copies, remainder = divmod(wanted, len(pl_src))
        indices = list(range(len(pl_src))) * copies
        indices += Prng(seed).sample_indices(len(pl_src), remainder)

    src = original_src.lines + tuple(pl_src[i] for i in indices)
    tgt = original_tgt.lines + tuple(pl_tgt[i] for i in indices)
    return Corpus(src, "mix"), Corpus(tgt, "mix")
