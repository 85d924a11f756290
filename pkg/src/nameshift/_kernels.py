"""Numeric inner loops shared by extraction, class building and disambiguation.

Every kernel exists twice: a numba ``@njit`` version and a pure-numpy
version with identical results. The numba path is used when numba imports
and ``NAMESHIFT_DISABLE_NUMBA`` is unset (or ``0``); otherwise numpy.
"""
import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is an optional extra
    numba = None

HAS_NUMBA = numba is not None
USE_NUMBA = HAS_NUMBA and os.environ.get("NAMESHIFT_DISABLE_NUMBA", "0").lower() in ("", "0", "false", "no")


# -- window pairs -----------------------------------------------------------

def window_pairs_numpy(lo, hi, window):
    """Index pairs ``(i, j)``, ``i < j``, of spans whose gap is at most ``window``.

    ``lo``/``hi`` are inclusive token spans sorted by ``lo``. The gap between
    two spans is the distance between their nearest boundaries, 0 when they
    overlap.
    """
    lo = np.asarray(lo, dtype=np.int64)
    hi = np.asarray(hi, dtype=np.int64)
    n = lo.shape[0]
    if n < 2:
        return np.empty((0, 2), dtype=np.int64)
    # with lo sorted, span j > i is within reach iff lo[j] <= hi[i] + window
    stop = np.searchsorted(lo, hi + window, side="right")
    first = np.arange(1, n + 1)
    counts = np.maximum(stop - first, 0)
    total = int(counts.sum())
    if total == 0:
        return np.empty((0, 2), dtype=np.int64)
    left = np.repeat(np.arange(n, dtype=np.int64), counts)
    offsets = np.arange(total, dtype=np.int64) - np.repeat(np.cumsum(counts) - counts, counts)
    right = left + 1 + offsets
    return np.stack([left, right], axis=1)


def _window_pairs_loop(lo, hi, window):
    n = lo.shape[0]
    total = 0
    for i in range(n):
        reach = hi[i] + window
        j = i + 1
        while j < n and lo[j] <= reach:
            total += 1
            j += 1
    out = np.empty((total, 2), dtype=np.int64)
    k = 0
    for i in range(n):
        reach = hi[i] + window
        j = i + 1
        while j < n and lo[j] <= reach:
            out[k, 0] = i
            out[k, 1] = j
            k += 1
            j += 1
    return out


# -- subset matrix ----------------------------------------------------------

def subset_matrix_numpy(bits):
    """``out[a, b]`` is True iff the bit set of row ``b`` is contained in row ``a``.

    ``bits`` is a ``(n, words)`` uint64 array of packed bit sets.
    """
    bits = np.asarray(bits, dtype=np.uint64)
    if bits.shape[0] == 0:
        return np.zeros((0, 0), dtype=np.bool_)
    missing = bits[None, :, :] & ~bits[:, None, :]
    return ~missing.any(axis=2)


def _subset_matrix_loop(bits):
    n, w = bits.shape
    out = np.empty((n, n), dtype=np.bool_)
    for a in range(n):
        for b in range(n):
            ok = True
            for k in range(w):
                if bits[b, k] & ~bits[a, k]:
                    ok = False
                    break
            out[a, b] = ok
    return out


# -- cosine -----------------------------------------------------------------

def cosine_scores_numpy(query, rows):
    """Cosine of ``query`` against every row; zero-norm rows (or query) score 0."""
    query = np.asarray(query, dtype=np.float64)
    rows = np.asarray(rows, dtype=np.float64)
    if rows.ndim != 2 or rows.shape[0] == 0:
        return np.zeros(0, dtype=np.float64)
    qn = np.sqrt(query @ query)
    rn = np.sqrt(np.einsum("ij,ij->i", rows, rows))
    denom = qn * rn
    dots = rows @ query
    out = np.zeros(rows.shape[0], dtype=np.float64)
    nz = denom > 0
    out[nz] = dots[nz] / denom[nz]
    return out


def _cosine_loop(query, rows):
    n, m = rows.shape
    out = np.zeros(n, dtype=np.float64)
    qn = 0.0
    for k in range(m):
        qn += query[k] * query[k]
    qn = np.sqrt(qn)
    for i in range(n):
        dot = 0.0
        rn = 0.0
        for k in range(m):
            dot += query[k] * rows[i, k]
            rn += rows[i, k] * rows[i, k]
        rn = np.sqrt(rn)
        if qn > 0.0 and rn > 0.0:
            out[i] = dot / (qn * rn)
    return out


if HAS_NUMBA:
    _window_pairs_jit = numba.njit(cache=True)(_window_pairs_loop)
    _subset_matrix_jit = numba.njit(cache=True)(_subset_matrix_loop)
    _cosine_jit = numba.njit(cache=True)(_cosine_loop)

    def window_pairs_numba(lo, hi, window):
        lo = np.ascontiguousarray(lo, dtype=np.int64)
        hi = np.ascontiguousarray(hi, dtype=np.int64)
        return _window_pairs_jit(lo, hi, np.int64(window))

    def subset_matrix_numba(bits):
        bits = np.ascontiguousarray(bits, dtype=np.uint64)
        if bits.shape[0] == 0:
            return np.zeros((0, 0), dtype=np.bool_)
        return _subset_matrix_jit(bits)

    def cosine_scores_numba(query, rows):
        rows = np.asarray(rows, dtype=np.float64)
        if rows.ndim != 2 or rows.shape[0] == 0:
            return np.zeros(0, dtype=np.float64)
        return _cosine_jit(np.ascontiguousarray(query, dtype=np.float64), np.ascontiguousarray(rows))
else:  # pragma: no cover
    window_pairs_numba = window_pairs_numpy
    subset_matrix_numba = subset_matrix_numpy
    cosine_scores_numba = cosine_scores_numpy


def window_pairs(lo, hi, window):
    if USE_NUMBA:
        return window_pairs_numba(lo, hi, window)
    return window_pairs_numpy(lo, hi, window)


def subset_matrix(bits):
    if USE_NUMBA:
        return subset_matrix_numba(bits)
    return subset_matrix_numpy(bits)


def cosine_scores(query, rows):
    if USE_NUMBA:
        return cosine_scores_numba(query, rows)
    return cosine_scores_numpy(query, rows)


def pack_sets(sets, vocab_size):
    """Pack an iterable of integer sets into a ``(n, words)`` uint64 bit array."""
    sets = list(sets)
    words = max(1, (vocab_size + 63) // 64)
    out = np.zeros((len(sets), words), dtype=np.uint64)
    for row, members in enumerate(sets):
        for idx in members:
            out[row, idx >> 6] |= np.uint64(1) << np.uint64(idx & 63)
    return out
