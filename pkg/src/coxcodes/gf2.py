"""Packed GF(2) vectors and matrices over coordinates indexed by group elements.

Vectors are stored as little-endian ``uint64`` words: coordinate ``i`` lives in
bit ``i % 64`` of word ``i // 64``.  Trailing padding bits are always zero.
Matrices are row-major 2-D word arrays.  All mutating linear algebra works on
private copies; instances are immutable from the caller's point of view.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .errors import LengthMismatchError


def _nwords(n: int) -> int:
    return (n + 63) // 64


def _pad_mask(n: int) -> np.uint64:
    rem = n % 64
    if rem == 0:
        return np.uint64(0xFFFFFFFFFFFFFFFF)
    return np.uint64((1 << rem) - 1)


class BitVector:
    """An immutable GF(2) vector of fixed length."""

    __slots__ = ("n", "words")

    def __init__(self, n: int, words: np.ndarray):
        self.n = n
        self.words = words

    # -- constructors ------------------------------------------------------

    @classmethod
    def zeros(cls, n: int) -> "BitVector":
        return cls(n, np.zeros(_nwords(n), dtype=np.uint64))

    @classmethod
    def ones(cls, n: int) -> "BitVector":
        words = np.full(_nwords(n), 0xFFFFFFFFFFFFFFFF, dtype=np.uint64)
        if len(words):
            words[-1] &= _pad_mask(n)
        return cls(n, words)

    @classmethod
    def from_indices(cls, n: int, indices) -> "BitVector":
        words = np.zeros(_nwords(n), dtype=np.uint64)
        for i in indices:
            if not 0 <= i < n:
                raise IndexError(f"coordinate {i} out of range for length {n}")
            words[i >> 6] |= np.uint64(1 << (i & 63))
        return cls(n, words)

    @classmethod
    def from01(cls, s: str) -> "BitVector":
        return cls.from_indices(len(s), [i for i, c in enumerate(s) if c == "1"])

    # -- queries -----------------------------------------------------------

    def get(self, i: int) -> int:
        return int((self.words[i >> 6] >> np.uint64(i & 63)) & np.uint64(1))

    def weight(self) -> int:
        return int(np.bitwise_count(self.words).sum())

    def support(self) -> list[int]:
        out = []
        for w, word in enumerate(self.words):
            word = int(word)
            while word:
                low = word & -word
                out.append(64 * w + low.bit_length() - 1)
                word ^= low
        return out

    def to01(self) -> str:
        bits = np.unpackbits(self.words.view(np.uint8), bitorder="little")
        return "".join("1" if b else "0" for b in bits[: self.n])

    def is_zero(self) -> bool:
        return not self.words.any()

    # -- algebra -----------------------------------------------------------

    def _check(self, other: "BitVector"):
        if self.n != other.n:
            raise LengthMismatchError(f"length mismatch: {self.n} vs {other.n}")

    def __xor__(self, other: "BitVector") -> "BitVector":
        self._check(other)
        return BitVector(self.n, self.words ^ other.words)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitVector)
            and self.n == other.n
            and bool(np.array_equal(self.words, other.words))
        )

    def __hash__(self):
        return hash((self.n, self.words.tobytes()))

    def dot(self, other: "BitVector") -> int:
        self._check(other)
        return int(np.bitwise_count(self.words & other.words).sum()) & 1

    def __repr__(self):
        shown = self.to01() if self.n <= 64 else self.to01()[:61] + "..."
        return f"BitVector({self.n}, {shown})"


def schur(u: BitVector, v: BitVector) -> BitVector:
    """Coordinate-wise product (bitwise AND)."""
    u._check(v)
    return BitVector(u.n, u.words & v.words)


class BitMatrix:
    """A stack of equal-length BitVectors with a cached rank and rref."""

    __slots__ = ("n", "data", "_rank", "_rref", "_pivots")

    def __init__(self, n: int, data: np.ndarray):
        self.n = n
        self.data = data
        self._rank = None
        self._rref = None
        self._pivots = None

    @classmethod
    def from_vectors(cls, vectors, n: int | None = None) -> "BitMatrix":
        vectors = list(vectors)
        if n is None:
            if not vectors:
                raise ValueError("cannot infer length from an empty row list")
            n = vectors[0].n
        for v in vectors:
            if v.n != n:
                raise LengthMismatchError("rows have differing lengths")
        data = np.zeros((len(vectors), _nwords(n)), dtype=np.uint64)
        for i, v in enumerate(vectors):
            data[i] = v.words
        return cls(n, data)

    @classmethod
    def zeros(cls, nrows: int, n: int) -> "BitMatrix":
        return cls(n, np.zeros((nrows, _nwords(n)), dtype=np.uint64))

    @property
    def nrows(self) -> int:
        return self.data.shape[0]

    def row(self, i: int) -> BitVector:
        return BitVector(self.n, self.data[i].copy())

    def rows(self):
        return [self.row(i) for i in range(self.nrows)]

    def rank(self) -> int:
        if self._rank is None:
            work = self.data.copy()
            self._rank = int(_kernels.rank_destructive(work, self.n))
        return self._rank

    def _ensure_rref(self):
        if self._rref is None:
            work = self.data.copy()
            rank, pivots = _kernels.rref_destructive(work, self.n)
            rank = int(rank)
            self._rref = work[:rank].copy()
            self._pivots = [int(p) for p in pivots]
            self._rank = rank

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitMatrix)
            and self.n == other.n
            and bool(np.array_equal(self.data, other.data))
        )

    def __hash__(self):
        return hash((self.n, self.data.tobytes()))

    def __repr__(self):
        return f"BitMatrix({self.nrows}x{self.n})"


def rank_and_rref(mat: BitMatrix) -> tuple[int, BitMatrix, list[int]]:
    """Rank, reduced row echelon form (nonzero rows only), and pivot columns."""
    mat._ensure_rref()
    rref = BitMatrix(mat.n, mat._rref.copy())
    rref._rank = mat._rank
    return mat._rank, rref, list(mat._pivots)


def nullspace_basis(mat: BitMatrix) -> BitMatrix:
    """A basis of the right nullspace {x : Mx = 0}, one vector per row."""
    mat._ensure_rref()
    rref, pivots = mat._rref, mat._pivots
    n = mat.n
    pivot_set = set(pivots)
    free = [c for c in range(n) if c not in pivot_set]
    out = np.zeros((len(free), _nwords(n)), dtype=np.uint64)
    for k, f in enumerate(free):
        out[k, f >> 6] |= np.uint64(1 << (f & 63))
        fw, fb = f >> 6, np.uint64(f & 63)
        for i, p in enumerate(pivots):
            if (rref[i, fw] >> fb) & np.uint64(1):
                out[k, p >> 6] ^= np.uint64(1 << (p & 63))
    return BitMatrix(n, out)


def reduce_vector(mat: BitMatrix, v: BitVector) -> BitVector:
    """Reduce v modulo the row space of mat (result zero iff v is in it)."""
    if v.n != mat.n:
        raise LengthMismatchError(f"length mismatch: {v.n} vs {mat.n}")
    mat._ensure_rref()
    words = v.words.copy()
    rref, pivots = mat._rref, mat._pivots
    for i, p in enumerate(pivots):
        if (words[p >> 6] >> np.uint64(p & 63)) & np.uint64(1):
            words ^= rref[i]
    return BitVector(v.n, words)


def in_rowspace(mat: BitMatrix, v: BitVector) -> bool:
    """True iff v lies in the GF(2) span of the rows of mat."""
    return not reduce_vector(mat, v).words.any()


def rowspace_equal(a: BitMatrix, b: BitMatrix) -> bool:
    """True iff two matrices span the same row space."""
    if a.n != b.n:
        raise LengthMismatchError(f"length mismatch: {a.n} vs {b.n}")
    a._ensure_rref()
    b._ensure_rref()
    return a._rank == b._rank and np.array_equal(a._rref, b._rref)


def rowspace_contains(a: BitMatrix, b: BitMatrix) -> bool:
    """True iff every row of b lies in the row space of a."""
    return all(in_rowspace(a, b.row(i)) for i in range(b.nrows))


def left_translate(table, w: int, v: BitVector) -> BitVector:
    """Translate v by the group element w: result(u) = v(w^{-1} u).

    ``table`` is a ``coxgroup.GroupTable``; the result permutes coordinates by
    the left-multiplication action of ``w``.
    """
    if v.n != table.size:
        raise LengthMismatchError(f"vector length {v.n} != group size {table.size}")
    perm = table.left_action(w)
    out = BitVector.zeros(v.n)
    for u in range(v.n):
        if v.get(u):
            t = perm[u]
            out.words[t >> 6] |= np.uint64(1 << (t & 63))
    return out


# -- generator-matrix text format ------------------------------------------


def write_genmat(mat: BitMatrix) -> str:
    """Serialize as 'n k' header plus one 0/1 row per line (bit-exact)."""
    lines = [f"{mat.n} {mat.nrows}"]
    for i in range(mat.nrows):
        lines.append(mat.row(i).to01())
    return "\n".join(lines) + "\n"


def read_genmat(text: str) -> BitMatrix:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty generator matrix file")
    n, k = (int(t) for t in lines[0].split())
    if len(lines) != k + 1:
        raise ValueError(f"expected {k} rows, found {len(lines) - 1}")
    rows = []
    for ln in lines[1:]:
        if len(ln) != n or set(ln) - {"0", "1"}:
            raise ValueError("malformed generator matrix row")
        rows.append(BitVector.from01(ln))
    return BitMatrix.from_vectors(rows, n=n)
