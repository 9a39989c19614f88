"""Dense bit-packed linear algebra over GF(2).

Rows are packed 64 columns per uint64 word so elimination runs as
vectorized xors.  Good to roughly 15k x 15k on one core, which covers
every linear system the homotopy solver and the homology routines
produce on the built-in corpus.
"""

from __future__ import annotations

import numpy as np


class GF2Matrix:
    __slots__ = ("rows", "cols", "words", "data")

    def __init__(self, rows: int, cols: int):
        self.rows = rows
        self.cols = cols
        self.words = max(1, (cols + 63) >> 6)
        self.data = np.zeros((rows, self.words), dtype=np.uint64)

    @classmethod
    def from_entries(cls, rows, cols, entries):
        m = cls(rows, cols)
        for r, c in entries:
            m.data[r, c >> 6] ^= np.uint64(1 << (c & 63))
        return m

    def copy(self):
        m = GF2Matrix(self.rows, self.cols)
        m.data = self.data.copy()
        return m

    def get(self, r, c) -> int:
        return int(self.data[r, c >> 6] >> np.uint64(c & 63)) & 1

    def set(self, r, c, val=1):
        bit = np.uint64(1 << (c & 63))
        if val:
            self.data[r, c >> 6] |= bit
        else:
            self.data[r, c >> 6] &= ~bit

    def matvec(self, x: np.ndarray) -> np.ndarray:
        xw = _pack(x, self.cols)
        acc = np.bitwise_and(self.data, xw[None, :])
        return np.unpackbits(acc.view(np.uint8), axis=1, bitorder="little").sum(axis=1).astype(np.int64) & 1

    def eliminate(self, limit_cols=None):
        """In-place forward elimination; returns the pivot list [(row, col)].

        Only columns below limit_cols are eligible as pivots, so an
        augmented system can eliminate on the coefficient block alone.
        """
        ncols = self.cols if limit_cols is None else limit_cols
        pivots = []
        row = 0
        data = self.data
        for col in range(ncols):
            if row >= self.rows:
                break
            w, bit = col >> 6, np.uint64(col & 63)
            colbits = (data[row:, w] >> bit) & np.uint64(1)
            hits = np.nonzero(colbits)[0]
            if hits.size == 0:
                continue
            piv = row + int(hits[0])
            if piv != row:
                data[[row, piv]] = data[[piv, row]]
            below = row + hits[1:]
            if below.size:
                data[below] ^= data[row]
            pivots.append((row, col))
            row += 1
        return pivots

    def rank(self) -> int:
        return len(self.copy().eliminate())

    def transpose(self) -> "GF2Matrix":
        bits = np.unpackbits(self.data.view(np.uint8), axis=1,
                             bitorder="little")[:, : self.cols]
        out = GF2Matrix(self.cols, self.rows)
        tb = bits.T
        pad = out.words * 64 - self.rows
        if pad:
            tb = np.concatenate(
                [tb, np.zeros((self.cols, pad), dtype=np.uint8)], axis=1)
        out.data = np.packbits(tb, axis=1, bitorder="little").view(np.uint64)
        return out


def from_vectors(vectors, cols: int) -> GF2Matrix:
    """Stack 0/1 vectors as the rows of a matrix."""
    m = GF2Matrix(len(vectors), cols)
    for i, v in enumerate(vectors):
        m.data[i] = _pack(np.asarray(v, dtype=np.uint8), cols)
    return m


def vstack(blocks) -> GF2Matrix:
    blocks = [b for b in blocks if b.rows]
    if not blocks:
        return GF2Matrix(0, 0)
    cols = blocks[0].cols
    if any(b.cols != cols for b in blocks):
        raise ValueError("column mismatch in vstack")
    m = GF2Matrix(sum(b.rows for b in blocks), cols)
    at = 0
    for b in blocks:
        m.data[at: at + b.rows] = b.data
        at += b.rows
    return m


def _pack(bits: np.ndarray, cols: int) -> np.ndarray:
    words = max(1, (cols + 63) >> 6)
    padded = np.zeros(words * 64, dtype=np.uint8)
    padded[: len(bits)] = bits & 1
    return np.packbits(padded, bitorder="little").view(np.uint64)


def _parity(a: np.ndarray, b: np.ndarray) -> int:
    return int(np.unpackbits(np.bitwise_and(a, b).view(np.uint8)).sum()) & 1


def solve(A: GF2Matrix, b: np.ndarray):
    """One solution of A x = b, or None if the system is inconsistent.

    Free variables are set to zero.  A is not modified.
    """
    aug = GF2Matrix(A.rows, A.cols + 1)
    aug.data[:, : A.words] = A.data
    if A.cols & 63:  # rhs may share the last coefficient word
        aug.data[:, A.words - 1] &= np.uint64((1 << (A.cols & 63)) - 1)
    for r in range(A.rows):
        if b[r] & 1:
            aug.set(r, A.cols)
    pivots = aug.eliminate(limit_cols=A.cols)
    nrows_used = pivots[-1][0] + 1 if pivots else 0
    for r in range(nrows_used, A.rows):
        if aug.get(r, A.cols):
            return None
    x = np.zeros(A.cols, dtype=np.int64)
    xw = np.zeros(aug.words, dtype=np.uint64)
    for row, col in reversed(pivots):
        val = aug.get(row, A.cols) ^ _parity(aug.data[row], xw)
        # the pivot bit itself never appears in xw yet, so no correction
        if val:
            x[col] = 1
            xw[col >> 6] ^= np.uint64(1 << (col & 63))
    return x


def nullspace(A: GF2Matrix):
    """A basis of ker A as a list of 0/1 vectors."""
    work = A.copy()
    pivots = work.eliminate()
    pivot_cols = {c for _, c in pivots}
    basis = []
    for free in range(A.cols):
        if free in pivot_cols:
            continue
        v = np.zeros(A.cols, dtype=np.int64)
        vw = np.zeros(work.words, dtype=np.uint64)
        v[free] = 1
        vw[free >> 6] ^= np.uint64(1 << (free & 63))
        # echelon rows start at their pivot, so reverse back-substitution
        # sees every later coordinate already settled
        for row, col in reversed(pivots):
            if _parity(work.data[row], vw):
                v[col] = 1
                vw[col >> 6] ^= np.uint64(1 << (col & 63))
        basis.append(v)
    return basis
