# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops.

Every function here has a twin with the same signature in ``_pykernels``;
the two are checked against each other in the test-suite.
"""

from libc.math cimport exp, log, fabs
from libc.stdint cimport int64_t, uint64_t
from libc.stdlib cimport malloc, free

cdef uint64_t GOLDEN_GAMMA = 0x9E3779B97F4A7C15ULL
cdef uint64_t MIX1 = 0xBF58476D1CE4E5B9ULL
cdef uint64_t MIX2 = 0x94D049BB133111EBULL
cdef uint64_t FNV_OFFSET = 0xCBF29CE484222325ULL
cdef uint64_t FNV_PRIME = 0x100000001B3ULL
cdef uint64_t LOW32 = 0xFFFFFFFFULL


cdef inline uint64_t _mix(uint64_t z) noexcept nogil:
    z = (z ^ (z >> 30)) * MIX1
    z = (z ^ (z >> 27)) * MIX2
    return z ^ (z >> 31)


cdef inline uint64_t _bounded(uint64_t x, uint64_t k) noexcept nogil:
    # floor(x * k / 2**64) without 128-bit arithmetic; requires k < 2**32
    cdef uint64_t hi = x >> 32
    cdef uint64_t lo = x & LOW32
    return (hi * k + ((lo * k) >> 32)) >> 32


def splitmix64_fill(uint64_t state, uint64_t[::1] out):
    """Fill ``out`` with consecutive splitmix64 outputs; return the new state."""
    cdef Py_ssize_t i
    with nogil:
        for i in range(out.shape[0]):
            state = state + GOLDEN_GAMMA
            out[i] = _mix(state)
    return state


def splitmix64_below_fill(uint64_t state, uint64_t k, int64_t[::1] out):
    """Fill ``out`` with uniform integers in ``[0, k)``; return the new state."""
    cdef Py_ssize_t i
    if k == 0 or k >= (1ULL << 32):
        raise ValueError("bound must be in [1, 2**32)")
    with nogil:
        for i in range(out.shape[0]):
            state = state + GOLDEN_GAMMA
            out[i] = <int64_t>_bounded(_mix(state), k)
    return state


def levenshtein(str a, str b):
    """Unit-cost edit distance over code points."""
    cdef Py_ssize_t n = len(a), m = len(b), i, j
    cdef Py_ssize_t *row
    cdef Py_ssize_t diag, up, best
    cdef Py_UCS4 ca
    if n < m:
        a, b = b, a
        n, m = m, n
    if m == 0:
        return n
    row = <Py_ssize_t *> malloc((m + 1) * sizeof(Py_ssize_t))
    if row == NULL:
        raise MemoryError()
    try:
        for j in range(m + 1):
            row[j] = j
        for i in range(1, n + 1):
            ca = a[i - 1]
            diag = row[0]
            row[0] = i
            for j in range(1, m + 1):
                up = row[j]
                best = diag + (0 if ca == <Py_UCS4> b[j - 1] else 1)
                if up + 1 < best:
                    best = up + 1
                if row[j - 1] + 1 < best:
                    best = row[j - 1] + 1
                row[j] = best
                diag = up
        return row[m]
    finally:
        free(row)


def fnv1a64(const unsigned char[:] data):
    cdef uint64_t h = FNV_OFFSET
    cdef Py_ssize_t i
    with nogil:
        for i in range(data.shape[0]):
            h = (h ^ data[i]) * FNV_PRIME
    return h


cdef inline double _prior_weight(Py_ssize_t i, Py_ssize_t j, Py_ssize_t m,
                                 Py_ssize_t n, double lam) noexcept nogil:
    # i, j are 1-based target/source positions
    return exp(-lam * fabs(<double> i / m - <double> j / n))


def em_estep(const int64_t[::1] src_len, const int64_t[::1] tgt_len,
             const int64_t[::1] cell_param, const double[::1] t,
             double[::1] counts, double lam, double p0):
    """Accumulate expected link counts into ``counts``.

    Cells are laid out sentence by sentence, target position major, with
    the NULL cell first in each row of ``n + 1``.  Returns the corpus
    log-likelihood under the current parameters, the posterior mass on
    non-NULL links and the posterior-weighted sum of the diagonal feature.
    """
    cdef Py_ssize_t s, i, j, m, n, cell = 0, max_n = 0
    cdef double z, total, post, loglik = 0.0, mass = 0.0, hsum = 0.0
    cdef double *buf
    for s in range(src_len.shape[0]):
        if src_len[s] > max_n:
            max_n = src_len[s]
    buf = <double *> malloc((max_n + 1) * sizeof(double))
    if buf == NULL:
        raise MemoryError()
    try:
        with nogil:
            for s in range(src_len.shape[0]):
                n = src_len[s]
                m = tgt_len[s]
                for i in range(1, m + 1):
                    z = 0.0
                    for j in range(1, n + 1):
                        buf[j] = _prior_weight(i, j, m, n, lam)
                        z = z + buf[j]
                    buf[0] = p0 * t[cell_param[cell]]
                    total = buf[0]
                    for j in range(1, n + 1):
                        buf[j] = (1.0 - p0) * buf[j] / z * t[cell_param[cell + j]]
                        total = total + buf[j]
                    loglik = loglik + log(total)
                    for j in range(n + 1):
                        post = buf[j] / total
                        counts[cell_param[cell + j]] += post
                        if j > 0:
                            mass = mass + post
                            hsum = hsum - post * fabs(<double> i / m - <double> j / n)
                    cell = cell + n + 1
    finally:
        free(buf)
    return loglik, mass, hsum


def viterbi(const int64_t[::1] src_len, const int64_t[::1] tgt_len,
            const double[::1] cell_prob, double lam, double p0, int64_t[::1] links):
    """Best source position per target token (-1 for NULL).

    Ties go to the smallest source index; NULL must win strictly.
    """
    cdef Py_ssize_t s, i, j, m, n, cell = 0, tok = 0, best_j
    cdef double z, score, best, null_score
    cdef double *buf
    cdef Py_ssize_t max_n = 0
    for s in range(src_len.shape[0]):
        if src_len[s] > max_n:
            max_n = src_len[s]
    buf = <double *> malloc((max_n + 1) * sizeof(double))
    if buf == NULL:
        raise MemoryError()
    try:
        with nogil:
            for s in range(src_len.shape[0]):
                n = src_len[s]
                m = tgt_len[s]
                for i in range(1, m + 1):
                    z = 0.0
                    for j in range(1, n + 1):
                        buf[j] = _prior_weight(i, j, m, n, lam)
                        z = z + buf[j]
                    null_score = p0 * cell_prob[cell]
                    best = -1.0
                    best_j = -1
                    for j in range(1, n + 1):
                        score = (1.0 - p0) * buf[j] / z * cell_prob[cell + j]
                        if score > best:
                            best = score
                            best_j = j - 1
                    if null_score > best:
                        best_j = -1
                    links[tok] = best_j
                    tok = tok + 1
                    cell = cell + n + 1
    finally:
        free(buf)
