"""Negative flip rate (NFR) and negative flip impact (NFI) between two model versions."""

from __future__ import annotations

import logging
from typing import Sequence

import numpy as np

from .corpus import SegmentScores
from .errors import DataError

logger = logging.getLogger(__name__)

SCORE_MIN, SCORE_MAX, SCORE_STEP = 1.0, 6.0, 0.2


def scalar_annotations(values: SegmentScores | Sequence[Sequence[float]] | np.ndarray) -> np.ndarray:
    """Validate a segments x annotators table of 1-6 quality scores.

    Out-of-range scores are an error; scores off the 0.2 grid only warn,
    since real annotation exports are not always clean.
    """
    origin = values.origin if isinstance(values, SegmentScores) else "inline"
    table = values.values if isinstance(values, SegmentScores) else np.asarray(values, dtype=np.float64)
    if table.ndim == 1:
        table = table.reshape(-1, 1)
    if table.ndim != 2 or table.shape[1] < 1:
        raise DataError(f"{origin}: expected a segments x annotators table")
    if np.any((table < SCORE_MIN) | (table > SCORE_MAX)):
        raise DataError(f"{origin}: scalar scores must lie in [{SCORE_MIN:g}, {SCORE_MAX:g}]")
    steps = (table - SCORE_MIN) / SCORE_STEP
    off_grid = np.abs(steps - np.round(steps)) > 1e-6
    if off_grid.any():
        logger.warning("%s: %d scores are not on the 0.2 grid", origin, int(off_grid.sum()))
    return table


def categorical_labels(values: SegmentScores | Sequence[float] | np.ndarray) -> np.ndarray:
    """Validate a single column of 0/1 correctness labels; returns a boolean vector."""
    origin = values.origin if isinstance(values, SegmentScores) else "inline"
    table = values.values if isinstance(values, SegmentScores) else np.asarray(values, dtype=np.float64)
    if table.ndim == 2:
        if table.shape[1] != 1:
            raise DataError(f"{origin}: categorical labels need exactly one column")
        table = table[:, 0]
    if not np.all((table == 0) | (table == 1)):
        raise DataError(f"{origin}: categorical labels must be 0 or 1")
    return table.astype(bool)


def _paired(old: np.ndarray, new: np.ndarray) -> None:
    if old.shape != new.shape:
        raise DataError(f"annotation shape mismatch: {old.shape} vs {new.shape}")
    if not old.shape[0]:
        raise DataError("no segments")


def negative_flips_scalar(old, new) -> np.ndarray:
    """Mask of segments where every annotator scores the new output strictly lower."""
    old, new = scalar_annotations(old), scalar_annotations(new)
    _paired(old, new)
    return np.all(new < old, axis=1)


def nfr_scalar(old, new) -> float:
    flips = negative_flips_scalar(old, new)
    return float(flips.sum()) / flips.shape[0]


def negative_flips_categorical(old, new) -> np.ndarray:
    old, new = categorical_labels(old), categorical_labels(new)
    _paired(old, new)
    return old & ~new


def nfr_categorical(old, new) -> float:
    flips = negative_flips_categorical(old, new)
    return float(flips.sum()) / flips.shape[0]


def nfi_categorical(old, new) -> float:
    """Negative flips as a share of all errors made by the new model."""
    flips = negative_flips_categorical(old, new)
    errors = int((~categorical_labels(new)).sum())
    if errors == 0:
        raise DataError("NFI undefined: new model is perfect")
    return float(flips.sum()) / errors
