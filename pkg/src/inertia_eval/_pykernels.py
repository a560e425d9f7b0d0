"""Reference implementations of the compiled kernels (numpy / pure Python).

Used when ``_ckernels`` is not built, or when ``INERTIA_EVAL_PURE_PYTHON``
is set.  Signatures and results match the Cython module.
"""

from __future__ import annotations

import numpy as np

GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
MASK64 = (1 << 64) - 1


def _mix_array(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX2)
    return z ^ (z >> np.uint64(31))


def _states(state: int, count: int) -> np.ndarray:
    # splitmix64 is counter based: the k-th state is state + k * gamma
    steps = np.arange(1, count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return np.uint64(state) + steps * np.uint64(GOLDEN_GAMMA)


def splitmix64_fill(state: int, out: np.ndarray) -> int:
    count = out.shape[0]
    with np.errstate(over="ignore"):
        out[:] = _mix_array(_states(state, count))
    return (state + count * GOLDEN_GAMMA) & MASK64


def splitmix64_below_fill(state: int, k: int, out: np.ndarray) -> int:
    if not 0 < k < (1 << 32):
        raise ValueError("bound must be in [1, 2**32)")
    count = out.shape[0]
    kk = np.uint64(k)
    with np.errstate(over="ignore"):
        x = _mix_array(_states(state, count))
        hi = x >> np.uint64(32)
        lo = x & np.uint64(0xFFFFFFFF)
        out[:] = ((hi * kk + ((lo * kk) >> np.uint64(32))) >> np.uint64(32)).astype(np.int64)
    return (state + count * GOLDEN_GAMMA) & MASK64


def levenshtein(a: str, b: str) -> int:
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    row = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        diag, row[0] = row[0], i
        for j, cb in enumerate(b, 1):
            up = row[j]
            row[j] = min(diag + (ca != cb), up + 1, row[j - 1] + 1)
            diag = up
    return row[-1]


def fnv1a64(data: bytes) -> int:
    h = FNV_OFFSET
    for byte in bytes(data):
        h = ((h ^ byte) * FNV_PRIME) & MASK64
    return h


def _cell_geometry(src_len: np.ndarray, tgt_len: np.ndarray):
    """Per-cell (i, j, m, n) arrays plus row starts for the layout used by the kernels."""
    n = np.asarray(src_len, dtype=np.int64)
    m = np.asarray(tgt_len, dtype=np.int64)
    rows_n = np.repeat(n, m)  # one row per target token
    rows_m = np.repeat(m, m)
    starts = np.concatenate(([0], np.cumsum(m)[:-1])) if len(m) else np.zeros(0, np.int64)
    rows_i = np.arange(rows_n.shape[0]) - np.repeat(starts, m) + 1
    width = rows_n + 1
    row_start = np.concatenate(([0], np.cumsum(width)[:-1])) if len(width) else np.zeros(0, np.int64)
    cell_row = np.repeat(np.arange(rows_n.shape[0]), width)
    cell_j = np.arange(cell_row.shape[0]) - row_start[cell_row]
    return cell_row, cell_j, rows_i, rows_m, rows_n, row_start


def _weighted_cells(src_len, tgt_len, lam, p0, lexical):
    cell_row, j, rows_i, rows_m, rows_n, row_start = _cell_geometry(src_len, tgt_len)
    i = rows_i[cell_row].astype(np.float64)
    m = rows_m[cell_row].astype(np.float64)
    n = rows_n[cell_row].astype(np.float64)
    real = j > 0
    h = np.zeros(j.shape[0])
    h[real] = -np.abs(i[real] / m[real] - j[real] / n[real])
    w = np.where(real, np.exp(lam * h), 0.0)
    z = np.add.reduceat(w, row_start) if len(row_start) else np.zeros(0)
    prior = np.where(real, (1.0 - p0) * w / z[cell_row], p0)
    return prior * lexical, cell_row, j, h, row_start, rows_n + 1


def em_estep(src_len, tgt_len, cell_param, t, counts, lam: float, p0: float):
    scores, cell_row, j, h, row_start, _ = _weighted_cells(
        src_len, tgt_len, lam, p0, np.asarray(t)[np.asarray(cell_param)]
    )
    if not len(row_start):
        return 0.0, 0.0, 0.0
    total = np.add.reduceat(scores, row_start)
    post = scores / total[cell_row]
    counts += np.bincount(cell_param, weights=post, minlength=counts.shape[0])
    real = j > 0
    return float(np.log(total).sum()), float(post[real].sum()), float((post * h)[real].sum())


def viterbi(src_len, tgt_len, cell_prob, lam: float, p0: float, links) -> None:
    scores, _, _, _, row_start, widths = _weighted_cells(
        src_len, tgt_len, lam, p0, np.asarray(cell_prob)
    )
    for row, (start, width) in enumerate(zip(row_start, widths)):
        block = scores[start:start + width]
        best_j = int(np.argmax(block[1:]))  # first maximum wins ties
        links[row] = -1 if block[0] > block[1 + best_j] else best_j
