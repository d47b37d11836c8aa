"""CSS code model: hypergraph products, random regular base codes, logical
operators, and the stock fixtures.

The failure test used throughout the lifetime experiments is
`is_logical_failure`: a syndrome-free residual is a failure iff it pairs
nontrivially with some Z-logical representative.
"""

from __future__ import annotations

import functools
import os
from dataclasses import dataclass, field

import numpy as np

from . import gf2
from ._fixture_data import BASE_MATRICES
from .gf2 import BinaryMatrix, BinaryVector

FIXTURE_NAMES = tuple(sorted(BASE_MATRICES, key=lambda s: int(s.split("_")[1])))


@dataclass(frozen=True)
class BaseCode:
    """A classical parity-check matrix with declared regular weights."""

    matrix: BinaryMatrix
    column_weight: int
    row_weight: int

    def __post_init__(self):
        cw = self.matrix.col_weights()
        rw = self.matrix.row_weights()
        if cw.size and not (np.all(cw == self.column_weight) and np.all(rw == self.row_weight)):
            raise ValueError("matrix is not (column_weight, row_weight)-regular")


@dataclass(frozen=True)
class CssCode:
    """A CSS code over n qubits with Z-logical representatives attached.

    ``logical_z`` holds k rows, each in kernel(H_X) and jointly independent
    of rowspace(H_Z); they witness logical failures of X-type residuals.
    """

    n: int
    k: int
    h_x: BinaryMatrix
    h_z: BinaryMatrix
    logical_z: BinaryMatrix
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if not (self.h_x.cols == self.h_z.cols == self.logical_z.cols == self.n):
            raise ValueError("parity checks and logicals must share the qubit count")
        if self.logical_z.rows != self.k:
            raise ValueError(f"expected {self.k} logical rows, got {self.logical_z.rows}")
        if not validate_css(self.h_x, self.h_z):
            raise ValueError("H_X and H_Z do not commute (H_X H_Z^T != 0)")
        if gf2.mat_mul(self.h_x, gf2.transpose(self.logical_z)).nnz:
            raise ValueError("logical_z rows must lie in kernel(H_X)")

    @classmethod
    def from_checks(cls, h_x: BinaryMatrix, h_z: BinaryMatrix, name: str = "") -> "CssCode":
        """Derive k and the Z-logical basis from the two check matrices."""
        if h_x.cols != h_z.cols:
            raise ValueError(f"column counts differ: {h_x.cols} vs {h_z.cols}")
        if not validate_css(h_x, h_z):
            bad = _first_anticommuting_pair(h_x, h_z)
            raise ValueError(f"CSS violation: H_X row {bad[0]} overlaps H_Z row {bad[1]} oddly")
        logical = logical_z_basis(h_x, h_z)
        return cls(h_x.cols, logical.rows, h_x, h_z, logical, name=name)


def _first_anticommuting_pair(h_x: BinaryMatrix, h_z: BinaryMatrix) -> tuple[int, int]:
    prod = gf2.mat_mul(h_x, gf2.transpose(h_z))
    for i in range(prod.rows):
        sup = prod.row_support(i)
        if sup.size:
            return i, int(sup[0])
    raise AssertionError("no violation present")


def validate_css(h_x: BinaryMatrix, h_z: BinaryMatrix) -> bool:
    """True iff H_X · H_Z^T = 0 over GF(2)."""
    if h_x.cols != h_z.cols:
        raise ValueError(f"column counts differ: {h_x.cols} vs {h_z.cols}")
    return gf2.mat_mul(h_x, gf2.transpose(h_z)).nnz == 0


def hgp(a: BinaryMatrix, name: str = "") -> CssCode:
    """Hypergraph product of a classical check matrix with itself.

    H_X = [A otimes I_n | I_m otimes A^T], H_Z = [I_n otimes A | A^T otimes I_m]
    on n_A^2 + m_A^2 qubits.
    """
    if a.nnz == 0:
        raise ValueError("base matrix must be nonzero")
    m_a, n_a = a.shape
    at = gf2.transpose(a)
    h_x = gf2.hstack([gf2.kron(a, BinaryMatrix.identity(n_a)),
                      gf2.kron(BinaryMatrix.identity(m_a), at)])
    h_z = gf2.hstack([gf2.kron(BinaryMatrix.identity(n_a), a),
                      gf2.kron(at, BinaryMatrix.identity(m_a))])
    return CssCode.from_checks(h_x, h_z, name=name)


def logical_z_basis(h_x: BinaryMatrix, h_z: BinaryMatrix) -> BinaryMatrix:
    """k vectors completing rowspace(H_Z) to kernel(H_X).

    Works by greedy rank profiling: stack H_Z rows above a kernel basis of
    H_X and read off which kernel rows are outside the span of everything
    above them (the pivot columns of the transposed stack). The returned
    rows are original kernel vectors, not row-reduced combinations.
    """
    ker = gf2.kernel_basis(h_x)
    if not ker:
        return BinaryMatrix.zeros(0, h_x.cols)
    ker_words = np.stack([v.words for v in ker])
    stacked = BinaryMatrix(
        h_z.rows + len(ker), h_x.cols, np.concatenate([h_z.words, ker_words])
    )
    pivots = gf2.row_reduce(gf2.transpose(stacked)).pivots
    chosen = [p - h_z.rows for p in pivots if p >= h_z.rows]
    return BinaryMatrix(len(chosen), h_x.cols, ker_words[chosen].copy())


def is_logical_failure(code: CssCode, v: BinaryVector) -> bool:
    """True iff the syndrome-free vector v acts nontrivially on the logicals."""
    if not gf2.mat_vec(code.h_z, v).is_zero:
        raise ValueError("vector has nonzero Z-syndrome; not a residual candidate")
    return not gf2.mat_vec(code.logical_z, v).is_zero


# ---------------------------------------------------------------------------
# random regular base codes
# ---------------------------------------------------------------------------


def generate_regular_ldpc(
    m: int,
    n: int,
    col_weight: int,
    row_weight: int,
    seed: int,
    reject_four_cycles: bool = False,
    max_retries: int = 1000,
) -> BaseCode:
    """Random (col_weight, row_weight)-regular m x n parity-check matrix.

    When m is divisible by col_weight, stacks col_weight independent random
    column permutations of the canonical block whose row i covers columns
    [i*row_weight, (i+1)*row_weight). Otherwise falls back to configuration-
    model socket matching, retrying on repeated edges.
    """
    if col_weight <= 0 or row_weight <= 0:
        raise ValueError("weights must be positive")
    if n * col_weight != m * row_weight:
        raise ValueError(f"infeasible degrees: n*col_weight={n * col_weight} != m*row_weight={m * row_weight}")
    rng = np.random.default_rng(seed)
    for attempt in range(max_retries):
        bits = _regular_bits(m, n, col_weight, row_weight, rng, max_retries)
        if not reject_four_cycles or not _has_four_cycle(bits):
            return BaseCode(BinaryMatrix.from_bits(bits), col_weight, row_weight)
    raise RuntimeError(f"no 4-cycle-free matrix found in {max_retries} attempts")


def _regular_bits(m, n, r, s, rng, max_retries):
    if m % r == 0:
        block = np.zeros((m // r, n), dtype=np.uint8)
        for i in range(m // r):
            block[i, i * s:(i + 1) * s] = 1
        return np.concatenate([block[:, rng.permutation(n)] for _ in range(r)])
    col_sockets = np.repeat(np.arange(n), r)
    row_sockets = np.repeat(np.arange(m), s)
    for _ in range(max_retries):
        pairs = np.stack([row_sockets, rng.permutation(col_sockets)], axis=1)
        if np.unique(pairs, axis=0).shape[0] == pairs.shape[0]:
            bits = np.zeros((m, n), dtype=np.uint8)
            bits[pairs[:, 0], pairs[:, 1]] = 1
            return bits
    raise RuntimeError(f"configuration matching kept producing repeated edges after {max_retries} tries")


def _has_four_cycle(bits) -> bool:
    overlap = (bits.astype(np.int64) @ bits.T.astype(np.int64))
    np.fill_diagonal(overlap, 0)
    return bool((overlap >= 2).any())


# ---------------------------------------------------------------------------
# distance probing
# ---------------------------------------------------------------------------


def distance_upper_bound(code: CssCode, trials: int, seed: int) -> int:
    """Randomized information-set search for low-weight logical operators.

    Returns the minimum weight seen over both X- and Z-type searches; an
    upper bound on the code distance that tightens with more trials.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    if code.k == 0:
        raise ValueError("code has no logical qubits")
    rng = np.random.default_rng(seed)
    logical_x = logical_z_basis(code.h_z, code.h_x)
    best = code.n + 1
    # X-type candidates live in ker(H_Z) and pair against Z-logicals; dually for Z-type
    for kernel_of, pair_basis in ((code.h_z, code.logical_z), (code.h_x, logical_x)):
        ker = gf2.kernel_basis(kernel_of)
        if not ker:
            continue
        G = BinaryMatrix(len(ker), code.n, np.stack([v.words for v in ker]))
        for t in range(trials):
            order = np.arange(code.n) if t == 0 else rng.permutation(code.n)
            reduced = gf2.row_reduce(G, column_order=order).reduced
            wts = reduced.row_weights()
            for i in np.argsort(wts, kind="stable"):
                w = int(wts[i])
                if w == 0:
                    continue
                if w >= best:
                    break
                if not gf2.mat_vec(pair_basis, reduced.row(i)).is_zero:
                    best = w
                    break
    return best


# ---------------------------------------------------------------------------
# fixtures and persistence
# ---------------------------------------------------------------------------


def fixture_base(name: str) -> BaseCode:
    if name not in BASE_MATRICES:
        raise KeyError(f"unknown fixture {name!r}; have {', '.join(FIXTURE_NAMES)}")
    rows = BASE_MATRICES[name]
    bits = np.array([[int(ch) for ch in row] for row in rows], dtype=np.uint8)
    return BaseCode(BinaryMatrix.from_bits(bits), 3, 4)


@functools.lru_cache(maxsize=None)
def _fixture_code(name: str) -> CssCode:
    return hgp(fixture_base(name).matrix, name=name)


def store_code(code: CssCode, path) -> None:
    """Write H_X and H_Z as <path>.hx.alist and <path>.hz.alist."""
    path = os.fspath(path)
    gf2.write_alist(path + ".hx.alist", code.h_x)
    gf2.write_alist(path + ".hz.alist", code.h_z)


def load_code(source, name: str = "") -> CssCode:
    """Load a code from the fixture registry, a store_code prefix, or an
    explicit (h_x path, h_z path) pair."""
    if isinstance(source, (tuple, list)):
        hx_path, hz_path = source
    elif os.fspath(source) in BASE_MATRICES:
        return _fixture_code(os.fspath(source))
    else:
        prefix = os.fspath(source)
        hx_path, hz_path = prefix + ".hx.alist", prefix + ".hz.alist"
    h_x = gf2.read_alist(hx_path)
    h_z = gf2.read_alist(hz_path)
    return CssCode.from_checks(h_x, h_z, name=name or "loaded")
