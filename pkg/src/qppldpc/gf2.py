"""Sparse GF(2) matrices, rank, and quasi-cyclic (circulant block) structure."""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from .errors import RejectedInputError, StructuralViolationError


class SparseBitMatrix:
    """Binary matrix stored as CSR with strictly increasing column indices per row."""

    def __init__(self, n_rows: int, n_cols: int, indptr, indices, check: bool = True):
        self.n_rows = int(n_rows)
        self.n_cols = int(n_cols)
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int64)
        if check:
            self._validate()

    def _validate(self):
        if self.indptr.shape != (self.n_rows + 1,) or self.indptr[0] != 0:
            raise ValueError("malformed indptr")
        if self.indptr[-1] != self.indices.size or np.any(np.diff(self.indptr) < 0):
            raise ValueError("malformed indptr")
        if self.indices.size:
            if self.indices.min() < 0 or self.indices.max() >= self.n_cols:
                raise ValueError("column index out of range")
            steps = np.diff(self.indices)
            row_starts = self.indptr[1:-1]
            inner = np.ones(steps.size, dtype=bool)
            inner[row_starts[(row_starts > 0) & (row_starts < self.indices.size)] - 1] = False
            if np.any(steps[inner] <= 0):
                raise ValueError("column indices must be strictly increasing within a row")

    @classmethod
    def from_coords(cls, n_rows: int, n_cols: int, rows, cols) -> "SparseBitMatrix":
        """Build from coordinate lists; duplicate coordinates are rejected."""
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        order = np.lexsort((cols, rows))
        rows, cols = rows[order], cols[order]
        if rows.size > 1:
            dup = (rows[1:] == rows[:-1]) & (cols[1:] == cols[:-1])
            if dup.any():
                i = int(np.argmax(dup))
                raise RejectedInputError(f"duplicate entry at ({rows[i]}, {cols[i]})")
        indptr = np.zeros(n_rows + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=n_rows), out=indptr[1:])
        return cls(n_rows, n_cols, indptr, cols)

    @classmethod
    def from_dense(cls, dense) -> "SparseBitMatrix":
        d = np.asarray(dense) % 2
        rows, cols = np.nonzero(d)
        return cls.from_coords(d.shape[0], d.shape[1], rows, cols)

    @classmethod
    def identity(cls, size: int) -> "SparseBitMatrix":
        return cls.from_coords(size, size, np.arange(size), np.arange(size))

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int) -> "SparseBitMatrix":
        return cls(n_rows, n_cols, np.zeros(n_rows + 1, dtype=np.int64), [])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_rows, self.n_cols)

    @property
    def nnz(self) -> int:
        return int(self.indices.size)

    def coords(self) -> tuple[np.ndarray, np.ndarray]:
        rows = np.repeat(np.arange(self.n_rows), np.diff(self.indptr))
        return rows, self.indices.copy()

    def row(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def row_weights(self) -> np.ndarray:
        return np.diff(self.indptr)

    def col_weights(self) -> np.ndarray:
        return np.bincount(self.indices, minlength=self.n_cols)

    def transpose(self) -> "SparseBitMatrix":
        rows, cols = self.coords()
        return SparseBitMatrix.from_coords(self.n_cols, self.n_rows, cols, rows)

    @property
    def T(self) -> "SparseBitMatrix":
        return self.transpose()

    def to_dense(self) -> np.ndarray:
        d = np.zeros(self.shape, dtype=np.uint8)
        rows, cols = self.coords()
        d[rows, cols] = 1
        return d

    def permute(self, row_perm, col_perm) -> "SparseBitMatrix":
        """Matrix ``M`` with ``M[a, b] = self[row_perm[a], col_perm[b]]``."""
        row_perm = np.asarray(row_perm, dtype=np.int64)
        col_perm = np.asarray(col_perm, dtype=np.int64)
        row_inv = np.empty_like(row_perm)
        row_inv[row_perm] = np.arange(row_perm.size)
        col_inv = np.empty_like(col_perm)
        col_inv[col_perm] = np.arange(col_perm.size)
        rows, cols = self.coords()
        return SparseBitMatrix.from_coords(self.n_rows, self.n_cols, row_inv[rows], col_inv[cols])

    def syndrome(self, word) -> np.ndarray:
        """``H @ word`` over GF(2)."""
        w = np.asarray(word, dtype=np.uint8)
        if w.shape != (self.n_cols,):
            raise ValueError(f"word length {w.shape} != {self.n_cols}")
        contrib = w[self.indices].astype(np.int64)
        sums = np.add.reduceat(contrib, self.indptr[:-1]) if contrib.size else np.zeros(0, np.int64)
        out = np.zeros(self.n_rows, dtype=np.uint8)
        nonempty = np.diff(self.indptr) > 0
        out[nonempty] = (sums[nonempty] % 2).astype(np.uint8)
        return out

    def pack(self) -> np.ndarray:
        """Rows packed into little-endian uint64 words, shape ``(rows, ceil(cols/64))``."""
        words = (self.n_cols + 63) // 64
        packed = np.zeros((self.n_rows, words), dtype=np.uint64)
        rows, cols = self.coords()
        np.bitwise_or.at(packed, (rows, cols // 64),
                         np.left_shift(np.uint64(1), (cols % 64).astype(np.uint64)))
        return packed

    def __eq__(self, other):
        if not isinstance(other, SparseBitMatrix):
            return NotImplemented
        return (self.shape == other.shape
                and np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices))

    def __repr__(self):
        return f"SparseBitMatrix({self.n_rows}x{self.n_cols}, nnz={self.nnz})"


def to_parity_check(graph) -> SparseBitMatrix:
    """Biadjacency matrix (checks x variables) of a parallel-edge-free graph."""
    if graph.has_parallel_edges:
        v, c = graph.parallel_edges[0]
        raise RejectedInputError(
            f"graph has {len(graph.parallel_edges)} parallel edge(s), e.g. variable {v} -- check {c}"
        )
    edges = graph.edges()
    return SparseBitMatrix.from_coords(graph.r, graph.n, edges[:, 1], edges[:, 0])


@numba.njit(cache=True, nogil=True)
def _rank_packed(m, n_cols):
    rows, words = m.shape
    rank = 0
    for col in range(n_cols):
        w = col // 64
        bit = np.uint64(1) << np.uint64(col % 64)
        pivot = -1
        for i in range(rank, rows):
            if m[i, w] & bit:
                pivot = i
                break
        if pivot < 0:
            continue
        if pivot != rank:
            for k in range(w, words):
                tmp = m[pivot, k]
                m[pivot, k] = m[rank, k]
                m[rank, k] = tmp
        for i in range(rank + 1, rows):
            if m[i, w] & bit:
                for k in range(w, words):
                    m[i, k] ^= m[rank, k]
        rank += 1
        if rank == rows:
            break
    return rank


def rank_gf2(H) -> int:
    """Rank over GF(2) by Gaussian elimination on bit-packed rows.

    Accepts a :class:`SparseBitMatrix` or a dense 0/1 array.
    """
    if not isinstance(H, SparseBitMatrix):
        H = SparseBitMatrix.from_dense(H)
    if H.n_rows == 0 or H.n_cols == 0:
        return 0
    return int(_rank_packed(H.pack(), H.n_cols))


def _find_check_shift(H: SparseBitMatrix, beta: int, gamma: int) -> int | None:
    """Smallest ``s`` (multiple of gamma) with ``H[c+s, v+beta] = H[c, v]`` everywhere."""
    r, n = H.shape
    rows, cols = H.coords()
    keys = np.sort(rows * n + cols)
    shifted_cols = (cols + beta) % n
    for s in range(gamma, r + 1, gamma):
        moved = np.sort(((rows + s) % r) * n + shifted_cols)
        if np.array_equal(moved, keys):
            return s % r
    return None


@dataclass
class QcPermutation:
    row_perm: np.ndarray
    col_perm: np.ndarray
    check_shift: int

    def inverse(self) -> tuple[np.ndarray, np.ndarray]:
        ri = np.empty_like(self.row_perm)
        ri[self.row_perm] = np.arange(self.row_perm.size)
        ci = np.empty_like(self.col_perm)
        ci[self.col_perm] = np.arange(self.col_perm.size)
        return ri, ci


def qc_rearrange(H: SparseBitMatrix, beta: int, gamma: int,
                 check_shift: int | None = None) -> tuple[SparseBitMatrix, QcPermutation]:
    """Group columns by residue mod ``beta`` and rows by residue mod ``gamma``.

    Column class ``j`` is ``j, j+beta, j+2*beta, ...``. Row class ``i`` lists
    ``i, i+s, i+2s, ... (mod r)`` where ``s`` is the check shift paired with a
    ``beta`` column shift by the automorphism of ``H``; this makes each block
    a right-shift circulant. ``s`` is detected from ``H`` when not given and
    falls back to ``gamma`` (plain residue order) if ``H`` has no such shift.
    """
    r, n = H.shape
    if beta < 1 or n % beta:
        raise ValueError(f"beta={beta} does not divide n={n}")
    if gamma < 1 or r % gamma:
        raise ValueError(f"gamma={gamma} does not divide r={r}")
    if check_shift is None:
        check_shift = _find_check_shift(H, beta, gamma)
        if check_shift is None:
            check_shift = gamma
    block_r = r // gamma
    steps = (np.arange(block_r, dtype=np.int64) * check_shift) % r
    row_perm = np.concatenate([(i + steps) % r for i in range(gamma)])
    if np.unique(row_perm).size != r or np.any(row_perm % gamma != np.repeat(np.arange(gamma), block_r)):
        raise ValueError(f"check shift {check_shift} does not generate the residue classes mod {gamma}")
    col_perm = np.concatenate([np.arange(j, n, beta) for j in range(beta)])
    perms = QcPermutation(row_perm, col_perm, int(check_shift))
    return H.permute(row_perm, col_perm), perms


@dataclass
class CirculantDecomposition:
    """Grid of square circulant blocks, each stored by the support of its first row.

    ``block_row``, ``block_col`` and ``offset`` are parallel arrays listing
    every 1 in the first row of every block.
    """

    size: int
    grid_shape: tuple[int, int]
    block_row: np.ndarray
    block_col: np.ndarray
    offset: np.ndarray

    def first_row(self, i: int, j: int) -> np.ndarray:
        mask = (self.block_row == i) & (self.block_col == j)
        return np.sort(self.offset[mask])

    def first_rows(self) -> list[list[list[int]]]:
        out = [[[] for _ in range(self.grid_shape[1])] for _ in range(self.grid_shape[0])]
        order = np.lexsort((self.offset, self.block_col, self.block_row))
        for i, j, o in zip(self.block_row[order].tolist(), self.block_col[order].tolist(),
                           self.offset[order].tolist()):
            out[i][j].append(o)
        return out


def decompose_circulant(H: SparseBitMatrix, block_rows: int, block_cols: int) -> CirculantDecomposition:
    """Split ``H`` into ``block_rows x block_cols`` blocks and check each is circulant.

    Convention: row ``a`` of a block is row 0 cyclically shifted right by ``a``.
    """
    r, n = H.shape
    if block_rows < 1 or block_cols < 1 or r % block_rows or n % block_cols:
        raise ValueError(f"block size {block_rows}x{block_cols} does not tile {r}x{n}")
    if block_rows != block_cols:
        raise StructuralViolationError(
            f"circulant blocks must be square, got {block_rows}x{block_cols}")
    s = block_rows
    grid = (r // s, n // s)
    rows, cols = H.coords()
    bi, a = np.divmod(rows, s)
    bj, b = np.divmod(cols, s)
    off = (b - a) % s
    key = (bi * grid[1] + bj) * s + off
    uniq, counts = np.unique(key, return_counts=True)
    bad = counts != s
    if bad.any():
        k = int(uniq[np.argmax(bad)])
        blk = k // s
        raise StructuralViolationError(
            f"block ({blk // grid[1]}, {blk % grid[1]}) is not circulant")
    blk, o = np.divmod(uniq, s)
    return CirculantDecomposition(s, grid, blk // grid[1], blk % grid[1], o)


def weight_matrix(dec: CirculantDecomposition) -> np.ndarray:
    """Row weight of every circulant block, as a ``grid_shape`` integer array."""
    A = np.zeros(dec.grid_shape, dtype=np.int64)
    np.add.at(A, (dec.block_row, dec.block_col), 1)
    return A
