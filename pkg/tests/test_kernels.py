"""Backend parity: the numba kernels and the pure-numpy fallback must agree.

Both implementations are exercised directly regardless of which backend the
package selected at import time (COXKIT_BACKEND chooses the default).
"""

import random

import numpy as np
import pytest

from coxcodes import _kernels


def _impls():
    impls = [("numpy", _kernels.NUMPY_IMPL)]
    try:
        impls.append(("numba", _kernels.numba_impl()))
    except Exception:  # numba genuinely unavailable
        pass
    return impls


IMPLS = _impls()


def _pack(rows01):
    ncols = len(rows01[0])
    nwords = (ncols + 63) // 64
    out = np.zeros((len(rows01), nwords), dtype=np.uint64)
    for i, row in enumerate(rows01):
        for j, bit in enumerate(row):
            if bit:
                out[i, j >> 6] |= np.uint64(1 << (j & 63))
    return out


def _random_rows(rng, nrows, ncols):
    return [[rng.randint(0, 1) for _ in range(ncols)] for _ in range(nrows)]


def dense_rank(rows01):
    rows = [list(r) for r in rows01]
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                rows[i] = [a ^ b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


@pytest.mark.parametrize("name,impl", IMPLS)
def test_rank_and_rref_agree_with_oracle(name, impl):
    rng = random.Random(101)
    for nrows, ncols in [(6, 10), (17, 64), (25, 70), (12, 129)]:
        rows01 = _random_rows(rng, nrows, ncols)
        expected = dense_rank(rows01)
        assert int(impl["rank_destructive"](_pack(rows01), ncols)) == expected
        rank, pivots = impl["rref_destructive"](_pack(rows01), ncols)
        assert int(rank) == expected
        assert len(pivots) == expected


def test_backends_identical_rref():
    if len(IMPLS) < 2:
        pytest.skip("numba unavailable")
    rng = random.Random(7)
    for _ in range(5):
        rows01 = _random_rows(rng, 20, 90)
        a = _pack(rows01)
        b = a.copy()
        ra, pa = IMPLS[0][1]["rref_destructive"](a, 90)
        rb, pb = IMPLS[1][1]["rref_destructive"](b, 90)
        assert int(ra) == int(rb)
        assert list(map(int, pa)) == list(map(int, pb))
        assert np.array_equal(a[: int(ra)], b[: int(rb)])


def brute_min_weight(rows01):
    k = len(rows01)
    n = len(rows01[0])
    best = n + 1
    for mask in range(1, 1 << k):
        acc = [0] * n
        for j in range(k):
            if (mask >> j) & 1:
                acc = [a ^ b for a, b in zip(acc, rows01[j])]
        best = min(best, sum(acc))
    return best


@pytest.mark.parametrize("name,impl", IMPLS)
def test_min_weight_full(name, impl):
    rng = random.Random(31)
    for nrows, ncols in [(4, 12), (8, 40), (10, 100)]:
        # make rows independent by planting an identity block
        rows01 = _random_rows(rng, nrows, ncols)
        for i in range(nrows):
            for j in range(nrows):
                rows01[i][j] = 1 if i == j else 0
        expected = brute_min_weight(rows01)
        got, mask = impl["min_weight_full"](_pack(rows01))
        assert int(got) == expected
        # the returned message mask reproduces the weight
        acc = np.zeros(_pack(rows01).shape[1], dtype=np.uint64)
        packed = _pack(rows01)
        for j in range(nrows):
            if (int(mask) >> j) & 1:
                acc ^= packed[j]
        assert int(np.bitwise_count(acc).sum()) == expected


@pytest.mark.parametrize("name,impl", IMPLS)
def test_min_weight_exact_w_finds_planted_word(name, impl):
    rng = random.Random(57)
    nrows, ncols = 12, 80
    rows01 = _random_rows(rng, nrows, ncols)
    for i in range(nrows):
        for j in range(nrows):
            rows01[i][j] = 1 if i == j else 0
    packed = _pack(rows01)
    # weight of each single row: search at w=1 must find the lightest row
    weights = [sum(r) for r in rows01]
    got, wit, leaves, completed = impl["min_weight_exact_w"](
        packed, 1, 10**6, 0, 10**9
    )
    assert bool(completed)
    assert int(got) == min(weights)
    assert int(leaves) == nrows


@pytest.mark.parametrize("name,impl", IMPLS)
def test_min_weight_exact_w_budget(name, impl):
    rng = random.Random(58)
    rows01 = _random_rows(rng, 14, 60)
    for i in range(14):
        for j in range(14):
            rows01[i][j] = 1 if i == j else 0
    got, wit, leaves, completed = impl["min_weight_exact_w"](
        _pack(rows01), 3, 10**6, 0, 5
    )
    assert not bool(completed)
    assert int(leaves) <= 5 + 14  # budget check granularity


def test_selected_backend_is_reported():
    assert _kernels.BACKEND in ("numba", "numpy")
