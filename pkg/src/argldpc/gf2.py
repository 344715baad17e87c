"""Parity-check matrices over GF(2): rank, systematic generator, encoding.

Sparse matrices keep sorted 0-based column lists per row.  Elimination
runs on a dense copy packed into ``uint64`` words, one row per array row.
Bit vectors are plain ``uint8`` numpy arrays of zeros and ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from .graph import BipartiteGraph


@dataclass(frozen=True)
class SparseMatrixGF2:
    n_rows: int
    n_cols: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.rows) != self.n_rows:
            raise ValueError(f"expected {self.n_rows} rows, got {len(self.rows)}")
        for r, cols in enumerate(self.rows):
            if any(b <= a for a, b in zip(cols, cols[1:])):
                raise ValueError(f"row {r}: column indices must be strictly increasing")
            if cols and (cols[0] < 0 or cols[-1] >= self.n_cols):
                raise ValueError(f"row {r}: column index out of range")

    @property
    def shape(self) -> tuple[int, int]:
        return self.n_rows, self.n_cols

    @property
    def weight(self) -> int:
        return sum(len(r) for r in self.rows)

    @classmethod
    def from_rows(cls, n_rows: int, n_cols: int, rows) -> "SparseMatrixGF2":
        return cls(n_rows, n_cols, tuple(tuple(sorted(int(c) for c in r)) for r in rows))

    @classmethod
    def from_dense(cls, dense) -> "SparseMatrixGF2":
        a = np.asarray(dense, dtype=np.uint8) & 1
        if a.ndim != 2:
            raise ValueError("dense matrix must be 2-D")
        return cls(a.shape[0], a.shape[1], tuple(tuple(np.flatnonzero(row).tolist()) for row in a))

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.shape, dtype=np.uint8)
        for r, cols in enumerate(self.rows):
            out[r, list(cols)] = 1
        return out

    def columns(self) -> list[list[int]]:
        """Sorted 0-based row indices for every column."""
        cols: list[list[int]] = [[] for _ in range(self.n_cols)]
        for r, row in enumerate(self.rows):
            for c in row:
                cols[c].append(r)
        return cols

    def row_weights(self) -> list[int]:
        return [len(r) for r in self.rows]

    def column_weights(self) -> list[int]:
        return [len(c) for c in self.columns()]

    @cached_property
    def csr(self) -> sp.csr_matrix:
        rows, cols = self.edge_arrays()
        return sp.csr_matrix((np.ones(rows.size, dtype=np.int64), (rows, cols)), shape=self.shape)

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """``(row, col)`` index arrays of all ones, in row-major order."""
        rows = np.repeat(np.arange(self.n_rows), self.row_weights())
        cols = np.fromiter((c for r in self.rows for c in r), dtype=np.int64, count=self.weight)
        return rows.astype(np.int64), cols


def parity_matrix(g: BipartiteGraph) -> SparseMatrixGF2:
    """``H[i, j] = 1`` exactly when left vertex ``j`` is adjacent to right vertex ``i``."""
    return SparseMatrixGF2.from_rows(
        g.n_right, g.n_left, [g.right_neighbors(i) for i in range(g.n_right)])


_BIT = np.uint64(1) << np.arange(64, dtype=np.uint64)


def _pack(dense: np.ndarray) -> np.ndarray:
    m, n = dense.shape
    words = (n + 63) // 64
    padded = np.zeros((m, words * 64), dtype=np.uint64)
    padded[:, :n] = dense
    return np.bitwise_or.reduce(padded.reshape(m, words, 64) * _BIT, axis=2)


def _unpack(packed: np.ndarray, n: int) -> np.ndarray:
    bits = (packed[:, :, None] >> np.arange(64, dtype=np.uint64)) & np.uint64(1)
    return bits.reshape(packed.shape[0], -1)[:, :n].astype(np.uint8)


def _rref(dense: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over GF(2) on packed rows; returns packed rows and pivots."""
    a = _pack(dense)
    m, n = dense.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        w, b = divmod(c, 64)
        col = (a[:, w] >> np.uint64(b)) & np.uint64(1)
        hits = np.flatnonzero(col[r:])
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
            col[[r, p]] = col[[p, r]]
        col[r] = 0
        targets = np.flatnonzero(col)
        if targets.size:
            a[targets] ^= a[r]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank_gf2(h: SparseMatrixGF2 | np.ndarray) -> int:
    dense = h.to_dense() if isinstance(h, SparseMatrixGF2) else np.asarray(h, dtype=np.uint8) & 1
    if dense.size == 0:
        return 0
    return len(_rref(dense)[1])


@dataclass(frozen=True)
class GeneratorMatrix:
    """Systematic encoder: information bits sit at ``info_positions``.

    A codeword ``c`` satisfies ``c[info_positions] = msg`` and
    ``c[parity_positions] = msg @ parity_part (mod 2)``.
    """

    n: int
    info_positions: np.ndarray
    parity_positions: np.ndarray
    parity_part: np.ndarray  # (k, n - k) uint8

    @property
    def k(self) -> int:
        return int(self.info_positions.size)

    @property
    def permutation(self) -> np.ndarray:
        """Column order putting the systematic part first."""
        return np.concatenate([self.info_positions, self.parity_positions])

    def rows(self) -> np.ndarray:
        """Dense ``k x n`` generator in the original column order."""
        return encode(self, np.eye(self.k, dtype=np.uint8))


def systematic_generator(h: SparseMatrixGF2) -> GeneratorMatrix:
    n = h.n_cols
    if h.n_rows == 0 or h.weight == 0:
        return GeneratorMatrix(n, np.arange(n), np.zeros(0, dtype=np.int64),
                               np.zeros((n, 0), dtype=np.uint8))
    packed, pivots = _rref(h.to_dense())
    reduced = _unpack(packed, n)
    pivot_cols = np.asarray(pivots, dtype=np.int64)
    free_cols = np.setdiff1d(np.arange(n), pivot_cols)
    # pivot bit t equals the parity of the free bits in row t of the reduced form
    return GeneratorMatrix(n, free_cols, pivot_cols, reduced[:, free_cols].T.copy())


def encode(gen: GeneratorMatrix, msg) -> np.ndarray:
    """Encode one message (shape ``(k,)``) or a batch (shape ``(B, k)``)."""
    msg = np.asarray(msg, dtype=np.uint8)
    if msg.shape[-1] != gen.k:
        raise ValueError(f"message length {msg.shape[-1]} != k = {gen.k}")
    out = np.zeros(msg.shape[:-1] + (gen.n,), dtype=np.uint8)
    out[..., gen.info_positions] = msg
    if gen.parity_positions.size:
        out[..., gen.parity_positions] = (msg.astype(np.int64) @ gen.parity_part) & 1
    return out


def syndrome(h: SparseMatrixGF2, word) -> np.ndarray:
    """``H @ word`` over GF(2), for one word or a batch along the last axis."""
    word = np.asarray(word, dtype=np.uint8)
    if word.shape[-1] != h.n_cols:
        raise ValueError(f"word length {word.shape[-1]} != n = {h.n_cols}")
    flat = word.reshape(-1, h.n_cols).astype(np.int64)
    out = (h.csr @ flat.T).T & 1
    return out.astype(np.uint8).reshape(word.shape[:-1] + (h.n_rows,))
