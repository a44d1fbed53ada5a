"""Bit-packed GF(2) hot loops: numba-jitted kernels with a pure-numpy fallback.

All kernels operate on row-major ``uint64`` word arrays (64 coordinates per
word, bit ``j`` of word ``w`` is coordinate ``64*w + j``).  The backend is
chosen once at import time from the ``COXKIT_BACKEND`` environment variable:
``numba`` (default when numba imports cleanly) or ``numpy``.  Both backends
implement the same contracts and are exercised against each other by the
benchmark in ``benchmarks/``.
"""

from __future__ import annotations

import itertools
import os

import numpy as np

_WEIGHT_SENTINEL = 1 << 60


# ---------------------------------------------------------------------------
# numpy fallback implementations
# ---------------------------------------------------------------------------


def _np_rank_destructive(mat, ncols):
    """Row-echelon reduce ``mat`` in place (forward only) and return its rank."""
    nrows = mat.shape[0]
    rank = 0
    for col in range(ncols):
        if rank == nrows:
            break
        w, b = divmod(col, 64)
        bit = np.uint64(1 << b)
        nz = np.nonzero((mat[rank:, w] & bit) != 0)[0]
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            mat[[rank, piv]] = mat[[piv, rank]]
        below = np.nonzero((mat[rank + 1 :, w] & bit) != 0)[0]
        if below.size:
            mat[rank + 1 + below] ^= mat[rank]
        rank += 1
    return rank


def _np_rref_destructive(mat, ncols):
    """Reduced row echelon form in place; returns (rank, pivot columns)."""
    nrows = mat.shape[0]
    pivots = []
    rank = 0
    for col in range(ncols):
        if rank == nrows:
            break
        w, b = divmod(col, 64)
        bit = np.uint64(1 << b)
        nz = np.nonzero((mat[rank:, w] & bit) != 0)[0]
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            mat[[rank, piv]] = mat[[piv, rank]]
        hit = (mat[:, w] & bit) != 0
        hit[rank] = False
        mat[hit] ^= mat[rank]
        pivots.append(col)
        rank += 1
    return rank, np.array(pivots, dtype=np.int64)


def _np_min_weight_full(rows):
    """Minimum Hamming weight over all nonzero GF(2) combinations of ``rows``.

    Returns ``(weight, message_mask)`` where bit ``j`` of the mask selects
    ``rows[j]``.  Requires ``rows.shape[0] <= 62``.
    """
    k, nw = rows.shape
    k1 = min(k, 16)
    low = np.zeros((1, nw), dtype=np.uint64)
    for j in range(k1):
        low = np.concatenate([low, low ^ rows[j]])
    best = _WEIGHT_SENTINEL
    best_mask = 0
    for h in range(1 << (k - k1)):
        acc = np.zeros(nw, dtype=np.uint64)
        for j in range(k - k1):
            if (h >> j) & 1:
                acc ^= rows[k1 + j]
        wts = np.bitwise_count(low ^ acc).sum(axis=1).astype(np.int64)
        if h == 0:
            wts[0] = _WEIGHT_SENTINEL
        i = int(wts.argmin())
        if wts[i] < best:
            best = int(wts[i])
            best_mask = i | (h << k1)
    return best, best_mask


def _np_min_weight_exact_w(rows, wt, best_in, target, budget):
    """Scan all XORs of exactly ``wt`` rows for a weight below ``best_in``.

    Returns ``(best, witness, leaves, completed)``.  ``witness`` lists the
    row indices achieving ``best`` (first entry -1 when no improvement).
    Stops early once ``best <= target`` or ``budget`` leaf evaluations are
    spent (``completed`` is False only on budget exhaustion).
    """
    k, nw = rows.shape
    best = best_in
    witness = np.full(wt, -1, dtype=np.int64)
    leaves = 0
    if wt > k:
        return best, witness, leaves, True
    if wt == 1:
        wts = np.bitwise_count(rows).sum(axis=1).astype(np.int64)
        i = int(wts.argmin())
        leaves = k
        if wts[i] < best:
            best = int(wts[i])
            witness[0] = i
        return best, witness, leaves, True
    for combo in itertools.combinations(range(k - 1), wt - 1):
        last = combo[-1]
        if last + 1 >= k:
            continue
        pre = np.zeros(nw, dtype=np.uint64)
        for j in combo:
            pre ^= rows[j]
        tail = rows[last + 1 :]
        wts = np.bitwise_count(pre ^ tail).sum(axis=1).astype(np.int64)
        leaves += tail.shape[0]
        i = int(wts.argmin())
        if wts[i] < best:
            best = int(wts[i])
            witness[: wt - 1] = combo
            witness[wt - 1] = last + 1 + i
        if best <= target:
            return best, witness, leaves, True
        if leaves >= budget:
            return best, witness, leaves, False
    return best, witness, leaves, True


_NUMPY_IMPL = {
    "rank_destructive": _np_rank_destructive,
    "rref_destructive": _np_rref_destructive,
    "min_weight_full": _np_min_weight_full,
    "min_weight_exact_w": _np_min_weight_exact_w,
}


# ---------------------------------------------------------------------------
# numba kernels
# ---------------------------------------------------------------------------


def _build_numba_impl():
    from numba import njit

    u64 = np.uint64
    M1 = u64(0x5555555555555555)
    M2 = u64(0x3333333333333333)
    M4 = u64(0x0F0F0F0F0F0F0F0F)
    H01 = u64(0x0101010101010101)
    ONE = u64(1)
    S1, S2, S4, S56 = u64(1), u64(2), u64(4), u64(56)

    @njit(cache=True, nogil=True, inline="always")
    def _pop(x):
        x = x - ((x >> S1) & M1)
        x = (x & M2) + ((x >> S2) & M2)
        x = (x + (x >> S4)) & M4
        return np.int64((x * H01) >> S56)

    @njit(cache=True, nogil=True)
    def rank_destructive(mat, ncols):
        nrows, nwords = mat.shape
        rank = 0
        for col in range(ncols):
            if rank == nrows:
                break
            w = col >> 6
            bit = ONE << u64(col & 63)
            piv = -1
            for r in range(rank, nrows):
                if mat[r, w] & bit:
                    piv = r
                    break
            if piv < 0:
                continue
            if piv != rank:
                for j in range(w, nwords):
                    t = mat[rank, j]
                    mat[rank, j] = mat[piv, j]
                    mat[piv, j] = t
            for r in range(rank + 1, nrows):
                if mat[r, w] & bit:
                    for j in range(w, nwords):
                        mat[r, j] ^= mat[rank, j]
            rank += 1
        return rank

    @njit(cache=True, nogil=True)
    def rref_destructive(mat, ncols):
        nrows, nwords = mat.shape
        cap = nrows if nrows < ncols else ncols
        pivots = np.empty(cap, dtype=np.int64)
        rank = 0
        for col in range(ncols):
            if rank == nrows:
                break
            w = col >> 6
            bit = ONE << u64(col & 63)
            piv = -1
            for r in range(rank, nrows):
                if mat[r, w] & bit:
                    piv = r
                    break
            if piv < 0:
                continue
            if piv != rank:
                for j in range(nwords):
                    t = mat[rank, j]
                    mat[rank, j] = mat[piv, j]
                    mat[piv, j] = t
            for r in range(nrows):
                if r != rank and (mat[r, w] & bit):
                    for j in range(nwords):
                        mat[r, j] ^= mat[rank, j]
            pivots[rank] = col
            rank += 1
        return rank, pivots[:rank].copy()

    @njit(cache=True, nogil=True)
    def min_weight_full(rows):
        k, nw = rows.shape
        cur = np.zeros(nw, dtype=np.uint64)
        best = np.int64(_WEIGHT_SENTINEL)
        best_mask = u64(0)
        total = ONE << u64(k)
        i = ONE
        while i < total:
            ii = i
            j = 0
            while (ii & ONE) == u64(0):
                ii >>= S1
                j += 1
            w = np.int64(0)
            for t in range(nw):
                cur[t] ^= rows[j, t]
                w += _pop(cur[t])
            if w < best:
                best = w
                best_mask = i ^ (i >> S1)
            i += ONE
        return best, best_mask

    @njit(cache=True, nogil=True)
    def min_weight_exact_w(rows, wt, best_in, target, budget):
        k, nw = rows.shape
        best = best_in
        witness = np.full(wt, -1, dtype=np.int64)
        leaves = np.int64(0)
        if wt > k:
            return best, witness, leaves, True
        if wt == 1:
            for j in range(k):
                w = np.int64(0)
                for t in range(nw):
                    w += _pop(rows[j, t])
                if w < best:
                    best = w
                    witness[0] = j
            return best, witness, k, True
        idx = np.empty(wt, dtype=np.int64)
        pre = np.zeros((wt, nw), dtype=np.uint64)
        d = 0
        idx[0] = -1
        while d >= 0:
            idx[d] += 1
            if idx[d] > k - (wt - d):
                d -= 1
                continue
            if d > 0:
                for t in range(nw):
                    pre[d, t] = pre[d - 1, t] ^ rows[idx[d], t]
            else:
                for t in range(nw):
                    pre[0, t] = rows[idx[0], t]
            if d == wt - 2:
                # specialize the last level: sweep the remaining rows
                for j in range(idx[d] + 1, k):
                    w = np.int64(0)
                    for t in range(nw):
                        w += _pop(pre[d, t] ^ rows[j, t])
                    if w < best:
                        best = w
                        for q in range(wt - 1):
                            witness[q] = idx[q]
                        witness[wt - 1] = j
                leaves += k - idx[d] - 1
                if best <= target:
                    return best, witness, leaves, True
                if leaves >= budget:
                    return best, witness, leaves, False
            else:
                d += 1
                idx[d] = idx[d - 1]
        return best, witness, leaves, True

    return {
        "rank_destructive": rank_destructive,
        "rref_destructive": rref_destructive,
        "min_weight_full": min_weight_full,
        "min_weight_exact_w": min_weight_exact_w,
    }


def _select_backend():
    requested = os.environ.get("COXKIT_BACKEND", "").strip().lower()
    if requested not in ("", "numba", "numpy"):
        raise ValueError(f"COXKIT_BACKEND must be 'numba' or 'numpy', got {requested!r}")
    if requested == "numpy":
        return "numpy", _NUMPY_IMPL
    try:
        impl = _build_numba_impl()
        return "numba", impl
    except ImportError:
        if requested == "numba":
            raise
        return "numpy", _NUMPY_IMPL


BACKEND, _IMPL = _select_backend()

rank_destructive = _IMPL["rank_destructive"]
rref_destructive = _IMPL["rref_destructive"]
min_weight_full = _IMPL["min_weight_full"]
min_weight_exact_w = _IMPL["min_weight_exact_w"]

NUMPY_IMPL = _NUMPY_IMPL


def numba_impl():
    """Build (and cache-compile) the numba kernel set, for benchmarking."""
    return _build_numba_impl()
