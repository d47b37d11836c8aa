"""Bit-packed linear algebra over GF(2).

Vectors and matrices are stored as little-endian 64-bit words, so row
operations (the workhorse of Gaussian elimination and syndrome maps) are
word-parallel XORs.  All values are immutable after construction and can be
shared freely between threads or worker processes.

The sparse per-row index lists remain the interchange representation
(`BinaryMatrix.from_row_supports`, `row_support`); packing is an internal
detail.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit


def _n_words(n_bits: int) -> int:
    return (n_bits + 63) >> 6


def pack_bits(bits: np.ndarray) -> np.ndarray:
    """Pack a 0/1 array (last axis = bit index) into little-endian uint64 words."""
    bits = np.ascontiguousarray(bits, dtype=np.uint8)
    n = bits.shape[-1]
    nw = _n_words(n)
    if n == 0:
        return np.zeros(bits.shape[:-1] + (0,), dtype=np.uint64)
    by = np.packbits(bits, axis=-1, bitorder="little")
    pad = nw * 8 - by.shape[-1]
    if pad:
        by = np.concatenate([by, np.zeros(bits.shape[:-1] + (pad,), np.uint8)], axis=-1)
    return np.ascontiguousarray(by).view("<u8")


def unpack_bits(words: np.ndarray, n_bits: int) -> np.ndarray:
    """Inverse of :func:`pack_bits`; returns a uint8 0/1 array."""
    if n_bits == 0:
        return np.zeros(words.shape[:-1] + (0,), dtype=np.uint8)
    by = np.ascontiguousarray(words).view(np.uint8)
    return np.unpackbits(by, axis=-1, bitorder="little")[..., :n_bits]


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


class BinaryVector:
    """Immutable vector over GF(2).

    The canonical content is the sorted support (indices of 1-bits); storage
    is packed words.  Equality and hashing follow (length, support).
    """

    __slots__ = ("length", "_w", "_hash")

    def __init__(self, length: int, words: np.ndarray):
        if length < 0:
            raise ValueError("vector length must be nonnegative")
        words = np.ascontiguousarray(words, dtype=np.uint64)
        if words.shape != (_n_words(length),):
            raise ValueError("word buffer does not match vector length")
        if length % 64 and words.size:
            # padding bits must stay clear so equality/weight are canonical
            if words[-1] >> np.uint64(length % 64):
                raise ValueError("set bits beyond vector length")
        self.length = length
        self._w = _frozen(words)
        self._hash = None

    @classmethod
    def zeros(cls, length: int) -> "BinaryVector":
        return cls(length, np.zeros(_n_words(length), dtype=np.uint64))

    @classmethod
    def from_support(cls, length: int, support) -> "BinaryVector":
        idx = np.asarray(sorted(set(int(i) for i in support)), dtype=np.int64)
        if idx.size and (idx[0] < 0 or idx[-1] >= length):
            raise ValueError("support index out of range")
        bits = np.zeros(length, dtype=np.uint8)
        bits[idx] = 1
        return cls(length, pack_bits(bits))

    @classmethod
    def from_bits(cls, bits) -> "BinaryVector":
        bits = np.asarray(bits, dtype=np.uint8) & 1
        if bits.ndim != 1:
            raise ValueError("expected a 1-d bit array")
        return cls(bits.shape[0], pack_bits(bits))

    @property
    def words(self) -> np.ndarray:
        return self._w

    @property
    def support(self) -> np.ndarray:
        return np.nonzero(self.to_bits())[0]

    @property
    def weight(self) -> int:
        return int(np.bitwise_count(self._w).sum())

    @property
    def is_zero(self) -> bool:
        return not self._w.any()

    def to_bits(self) -> np.ndarray:
        return unpack_bits(self._w, self.length)

    def bit(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError("bit index out of range")
        return int((self._w[i >> 6] >> np.uint64(i & 63)) & np.uint64(1))

    def slice(self, start: int, stop: int) -> "BinaryVector":
        if not 0 <= start <= stop <= self.length:
            raise ValueError("bad slice bounds")
        return BinaryVector.from_bits(self.to_bits()[start:stop])

    def __xor__(self, other: "BinaryVector") -> "BinaryVector":
        if self.length != other.length:
            raise ValueError(f"length mismatch: {self.length} vs {other.length}")
        return BinaryVector(self.length, self._w ^ other._w)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BinaryVector)
            and self.length == other.length
            and bool(np.array_equal(self._w, other._w))
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.length, self._w.tobytes()))
        return self._hash

    def __len__(self) -> int:
        return self.length

    def __repr__(self) -> str:
        sup = self.support
        shown = ",".join(map(str, sup[:12])) + (",..." if sup.size > 12 else "")
        return f"BinaryVector(length={self.length}, support=[{shown}])"


class BinaryMatrix:
    """Immutable matrix over GF(2), packed row-wise into uint64 words."""

    __slots__ = ("rows", "cols", "_w", "_hash")

    def __init__(self, rows: int, cols: int, words: np.ndarray):
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        words = np.ascontiguousarray(words, dtype=np.uint64)
        if words.shape != (rows, _n_words(cols)):
            raise ValueError("word buffer does not match matrix shape")
        if cols % 64 and rows and words.shape[1]:
            if np.any(words[:, -1] >> np.uint64(cols % 64)):
                raise ValueError("set bits beyond column count")
        self.rows = rows
        self.cols = cols
        self._w = _frozen(words)
        self._hash = None

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BinaryMatrix":
        return cls(rows, cols, np.zeros((rows, _n_words(cols)), dtype=np.uint64))

    @classmethod
    def identity(cls, n: int) -> "BinaryMatrix":
        return cls.from_row_supports(n, n, [[i] for i in range(n)])

    @classmethod
    def from_bits(cls, bits) -> "BinaryMatrix":
        bits = np.asarray(bits, dtype=np.uint8) & 1
        if bits.ndim != 2:
            raise ValueError("expected a 2-d bit array")
        return cls(bits.shape[0], bits.shape[1], pack_bits(bits))

    @classmethod
    def from_row_supports(cls, rows: int, cols: int, row_supports) -> "BinaryMatrix":
        words = np.zeros((rows, _n_words(cols)), dtype=np.uint64)
        for i, sup in enumerate(row_supports):
            for c in sup:
                c = int(c)
                if not 0 <= c < cols:
                    raise ValueError(f"column index {c} out of range in row {i}")
                words[i, c >> 6] |= np.uint64(1) << np.uint64(c & 63)
        return cls(rows, cols, words)

    @property
    def words(self) -> np.ndarray:
        return self._w

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def nnz(self) -> int:
        return int(np.bitwise_count(self._w).sum())

    def to_bits(self) -> np.ndarray:
        return unpack_bits(self._w, self.cols)

    def row(self, i: int) -> BinaryVector:
        return BinaryVector(self.cols, self._w[i].copy())

    def row_support(self, i: int) -> np.ndarray:
        return np.nonzero(unpack_bits(self._w[i], self.cols))[0]

    def row_supports(self) -> list[np.ndarray]:
        bits = self.to_bits()
        return [np.nonzero(bits[i])[0] for i in range(self.rows)]

    def row_weights(self) -> np.ndarray:
        return np.bitwise_count(self._w).sum(axis=1).astype(np.int64)

    def col_weights(self) -> np.ndarray:
        return self.to_bits().sum(axis=0).astype(np.int64)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BinaryMatrix)
            and self.shape == other.shape
            and bool(np.array_equal(self._w, other._w))
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self._w.tobytes()))
        return self._hash

    def __repr__(self) -> str:
        return f"BinaryMatrix({self.rows}x{self.cols}, nnz={self.nnz})"


# ---------------------------------------------------------------------------
# elimination kernel
# ---------------------------------------------------------------------------


@njit(cache=True, inline="always")
def _popcount64(x):  # pragma: no cover - jitted
    # SWAR popcount; numba has no np.bitwise_count
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return (x * np.uint64(0x0101010101010101)) >> np.uint64(56)


@njit(cache=True)
def _eliminate(R, order, n_pivot_limit):  # pragma: no cover - jitted
    """In-place RREF of packed rows ``R`` visiting columns in ``order``.

    Row operations span the full word width, so callers may append augmented
    words (transform / right-hand side) beyond the pivot-eligible columns.
    Returns the pivot columns in visiting order.
    """
    m = R.shape[0]
    nw = R.shape[1]
    pivots = np.empty(min(m, order.size), dtype=np.int64)
    rank = 0
    for oi in range(order.size):
        if rank == m or rank == n_pivot_limit:
            break
        c = order[oi]
        w = c >> 6
        b = np.uint64(c & 63)
        one = np.uint64(1)
        pr = -1
        for r in range(rank, m):
            if (R[r, w] >> b) & one:
                pr = r
                break
        if pr < 0:
            continue
        if pr != rank:
            for k in range(nw):
                tmp = R[rank, k]
                R[rank, k] = R[pr, k]
                R[pr, k] = tmp
        for r in range(m):
            if r != rank and ((R[r, w] >> b) & one):
                for k in range(nw):
                    R[r, k] ^= R[rank, k]
        pivots[rank] = c
        rank += 1
    return pivots[:rank]


@dataclass(frozen=True)
class RowReduction:
    """Result of :func:`row_reduce`: ``reduced = transform @ matrix``."""

    reduced: BinaryMatrix
    pivots: tuple[int, ...]
    transform: BinaryMatrix

    @property
    def rank(self) -> int:
        return len(self.pivots)


def _check_column_order(order, cols: int) -> np.ndarray:
    if order is None:
        return np.arange(cols, dtype=np.int64)
    order = np.asarray(order, dtype=np.int64)
    if order.shape != (cols,) or not np.array_equal(np.sort(order), np.arange(cols)):
        raise ValueError("column_order must be a permutation of range(cols)")
    return order


def row_reduce(M: BinaryMatrix, column_order=None) -> RowReduction:
    """Reduced row-echelon form under a caller-chosen column visiting order.

    Pivot tie-break: the lowest-index remaining row is always taken, so the
    result is a deterministic function of (M, column_order).
    """
    order = _check_column_order(column_order, M.cols)
    nw = _n_words(M.cols)
    mw = _n_words(M.rows)
    R = np.zeros((M.rows, nw + mw), dtype=np.uint64)
    R[:, :nw] = M.words
    for i in range(M.rows):
        R[i, nw + (i >> 6)] |= np.uint64(1) << np.uint64(i & 63)
    pivots = _eliminate(R, order, M.rows)
    reduced = BinaryMatrix(M.rows, M.cols, R[:, :nw].copy())
    transform = BinaryMatrix(M.rows, M.rows, R[:, nw:].copy())
    return RowReduction(reduced, tuple(int(p) for p in pivots), transform)


def rank(M: BinaryMatrix) -> int:
    R = M.words.copy()
    pivots = _eliminate(R, np.arange(M.cols, dtype=np.int64), M.rows)
    return int(pivots.size)


def kernel_basis(M: BinaryMatrix) -> list[BinaryVector]:
    """Basis of the right kernel {v : M v = 0}, one vector per free column."""
    R = M.words.copy()
    pivots = _eliminate(R, np.arange(M.cols, dtype=np.int64), M.rows)
    pivot_set = set(int(p) for p in pivots)
    free_cols = [c for c in range(M.cols) if c not in pivot_set]
    bits = unpack_bits(R, M.cols)
    basis = []
    for f in free_cols:
        v = np.zeros(M.cols, dtype=np.uint8)
        v[f] = 1
        for i, p in enumerate(pivots):
            v[p] = bits[i, f]
        basis.append(BinaryVector.from_bits(v))
    return basis


def solve(M: BinaryMatrix, b: BinaryVector):
    """One solution of M x = b supported on pivot columns, or None if none exists."""
    if b.length != M.rows:
        raise ValueError(f"rhs length {b.length} != row count {M.rows}")
    nw = _n_words(M.cols)
    R = np.zeros((M.rows, nw + 1), dtype=np.uint64)
    R[:, :nw] = M.words
    bb = b.to_bits()
    R[:, nw] = bb.astype(np.uint64)
    pivots = _eliminate(R, np.arange(M.cols, dtype=np.int64), M.rows)
    rk = pivots.size
    if np.any(R[rk:, nw] & np.uint64(1)):
        return None
    x = np.zeros(M.cols, dtype=np.uint8)
    for i in range(rk):
        x[pivots[i]] = R[i, nw] & np.uint64(1)
    return BinaryVector.from_bits(x)


# ---------------------------------------------------------------------------
# products and assembly
# ---------------------------------------------------------------------------


def mat_vec(M: BinaryMatrix, v: BinaryVector) -> BinaryVector:
    """M v over GF(2); bit i is the parity of the overlap of row i with v."""
    if v.length != M.cols:
        raise ValueError(f"vector length {v.length} != column count {M.cols}")
    par = (np.bitwise_count(M.words & v.words[None, :]).sum(axis=1) & 1).astype(np.uint8)
    return BinaryVector(M.rows, pack_bits(par))


def transpose(M: BinaryMatrix) -> BinaryMatrix:
    return BinaryMatrix.from_bits(M.to_bits().T)


def mat_mul(A: BinaryMatrix, B: BinaryMatrix) -> BinaryMatrix:
    """A B over GF(2)."""
    if A.cols != B.rows:
        raise ValueError(f"inner dimensions differ: {A.cols} vs {B.rows}")
    Bt = transpose(B)
    out = np.zeros((A.rows, B.cols), dtype=np.uint8)
    # blockwise so the (step, B.cols, nw) intermediate stays under ~32 MB
    step = max(1, (1 << 22) // max(1, B.cols * max(1, _n_words(A.cols))))
    for lo in range(0, A.rows, step):
        hi = min(A.rows, lo + step)
        ov = np.bitwise_count(A.words[lo:hi, None, :] & Bt.words[None, :, :]).sum(axis=2)
        out[lo:hi] = (ov & 1).astype(np.uint8)
    return BinaryMatrix.from_bits(out)


def kron(A: BinaryMatrix, B: BinaryMatrix) -> BinaryMatrix:
    """Kronecker product; entry ((i*Br+k),(j*Bc+l)) = A(i,j) * B(k,l)."""
    a_sup = A.row_supports()
    b_sup = B.row_supports()
    rows = []
    bc = B.cols
    for i in range(A.rows):
        ja = a_sup[i]
        for k in range(B.rows):
            jb = b_sup[k]
            rows.append([int(j) * bc + int(l) for j in ja for l in jb])
    return BinaryMatrix.from_row_supports(A.rows * B.rows, A.cols * B.cols, rows)


def hstack(blocks) -> BinaryMatrix:
    blocks = list(blocks)
    if not blocks:
        raise ValueError("need at least one block")
    rows = blocks[0].rows
    if any(b.rows != rows for b in blocks):
        raise ValueError("row counts differ")
    bits = np.concatenate([b.to_bits() for b in blocks], axis=1)
    return BinaryMatrix.from_bits(bits)


def vstack(blocks) -> BinaryMatrix:
    blocks = list(blocks)
    if not blocks:
        raise ValueError("need at least one block")
    cols = blocks[0].cols
    if any(b.cols != cols for b in blocks):
        raise ValueError("column counts differ")
    words = np.concatenate([b.words for b in blocks], axis=0)
    return BinaryMatrix(sum(b.rows for b in blocks), cols, words)


def concat_vectors(vectors) -> BinaryVector:
    vectors = list(vectors)
    bits = np.concatenate([v.to_bits() for v in vectors]) if vectors else np.zeros(0, np.uint8)
    return BinaryVector.from_bits(bits)


# ---------------------------------------------------------------------------
# alist interchange format
# ---------------------------------------------------------------------------


def write_alist(path, M: BinaryMatrix) -> None:
    """Write ``M`` in alist text format (unpadded index lists, 1-based)."""
    bits = M.to_bits()
    col_sup = [np.nonzero(bits[:, j])[0] for j in range(M.cols)]
    row_sup = M.row_supports()
    col_deg = [len(s) for s in col_sup]
    row_deg = [len(s) for s in row_sup]
    lines = [
        f"{M.cols} {M.rows}",
        f"{max(col_deg, default=0)} {max(row_deg, default=0)}",
        " ".join(map(str, col_deg)),
        " ".join(map(str, row_deg)),
    ]
    # degree-0 lines carry a lone 0 so the file stays line-parseable
    for s in col_sup:
        lines.append(" ".join(str(int(i) + 1) for i in s) or "0")
    for s in row_sup:
        lines.append(" ".join(str(int(j) + 1) for j in s) or "0")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_alist(path) -> BinaryMatrix:
    """Read an alist file; tolerates zero-padded index lists.

    Lists are line-delimited (one line per column, then one per row), which
    disambiguates the padded and unpadded variants of the format.
    """
    with open(path) as fh:
        lines = [ln.split() for ln in fh if ln.strip()]
    if len(lines) < 4:
        raise ValueError(f"truncated alist file: {path}")
    try:
        n, m = (int(t) for t in lines[0][:2])
        col_deg = [int(t) for t in lines[2]]
    except ValueError:
        raise ValueError(f"bad alist header in {path}")
    if n < 0 or m < 0 or len(col_deg) != n or len(lines) < 4 + n + m:
        raise ValueError(f"bad alist header in {path}")
    words = np.zeros((m, _n_words(n)), dtype=np.uint64)
    for j in range(n):
        entries = [int(t) for t in lines[4 + j] if int(t) != 0]
        if len(entries) != col_deg[j]:
            raise ValueError(f"column {j} degree mismatch in {path}")
        for i in entries:
            if not 1 <= i <= m:
                raise ValueError(f"row index {i} out of range in {path}")
            words[i - 1, j >> 6] |= np.uint64(1) << np.uint64(j & 63)
    return BinaryMatrix(m, n, words)
