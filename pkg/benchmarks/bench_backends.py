"""Compare the numba kernels against the pure-numpy fallback.

Runs the three hot kernels (rank, RREF, minimum-weight search) on matrices
shaped like real workloads (packed rows of Coxeter-code generator matrices)
and prints a speedup table.  Correctness is asserted along the way: both
backends must return identical results on every input.

Usage:  python benchmarks/bench_backends.py [--seed N] [--repeat R]
"""

import argparse
import time

import numpy as np

from coxcodes import _kernels


def random_packed(rng, nrows, ncols):
    nwords = (ncols + 63) // 64
    mat = rng.integers(0, 2**64, size=(nrows, nwords), dtype=np.uint64)
    tail = ncols & 63
    if tail:
        mat[:, -1] &= np.uint64((1 << tail) - 1)
    return mat


def timeit(fn, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=2024)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    numpy_impl = _kernels.NUMPY_IMPL
    numba_impl = _kernels.numba_impl()
    rng = np.random.default_rng(args.seed)

    print(f"selected backend at import: {_kernels.BACKEND}")
    print(f"{'kernel':<28} {'shape':<16} {'numpy':>10} {'numba':>10} {'speedup':>8}")

    cases = []

    for nrows, ncols in [(200, 720), (600, 5040), (1500, 5040)]:
        base = random_packed(rng, nrows, ncols)
        cases.append((f"rank ({nrows}x{ncols})", f"{nrows}x{ncols}",
                      lambda b=base, n=ncols: numpy_impl["rank_destructive"](b.copy(), n),
                      lambda b=base, n=ncols: numba_impl["rank_destructive"](b.copy(), n),
                      lambda a, b: int(a) == int(b)))
        cases.append((f"rref ({nrows}x{ncols})", f"{nrows}x{ncols}",
                      lambda b=base, n=ncols: numpy_impl["rref_destructive"](b.copy(), n)[0],
                      lambda b=base, n=ncols: numba_impl["rref_destructive"](b.copy(), n)[0],
                      lambda a, b: int(a) == int(b)))

    for k, ncols in [(18, 720), (20, 1296)]:
        rows = random_packed(rng, k, ncols)
        cases.append((f"min_weight_full (k={k})", f"{k}x{ncols}",
                      lambda r=rows: numpy_impl["min_weight_full"](r)[0],
                      lambda r=rows: numba_impl["min_weight_full"](r)[0],
                      lambda a, b: int(a) == int(b)))

    for k, ncols, w in [(27, 120, 3), (64, 216, 2)]:
        rows = random_packed(rng, k, ncols)
        cases.append((f"min_weight_exact_w (w={w})", f"{k}x{ncols}",
                      lambda r=rows, w=w: numpy_impl["min_weight_exact_w"](
                          r, w, 10**6, 0, 10**12)[0],
                      lambda r=rows, w=w: numba_impl["min_weight_exact_w"](
                          r, w, 10**6, 0, 10**12)[0],
                      lambda a, b: int(a) == int(b)))

    for name, shape, np_fn, nb_fn, same in cases:
        nb_fn()  # warm the JIT outside the timed region
        t_np, r_np = timeit(np_fn, args.repeat)
        t_nb, r_nb = timeit(nb_fn, args.repeat)
        assert same(r_np, r_nb), f"backend mismatch in {name}: {r_np} vs {r_nb}"
        print(f"{name:<28} {shape:<16} {t_np:>9.4f}s {t_nb:>9.4f}s "
              f"{t_np / t_nb:>7.1f}x")


if __name__ == "__main__":
    main()
