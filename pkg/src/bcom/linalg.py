"""Linear algebra over the prime field F_p.

Sparse vectors are dicts ``{row: coefficient}`` with coefficients in
``1..p-1``. The sparse path is an incremental column echelon form keyed by
each vector's largest row index. The dense path is numpy Gaussian
elimination and doubles as an independent check of the sparse one.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import ValidationError

SparseVec = dict[int, int]

# dense elimination costs rows*cols per pivot; above this many entries the
# sparse path is faster on boundary matrices
DENSE_ENTRY_LIMIT = 250_000


def check_prime(p: int) -> None:
    if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
        raise ValidationError(f"{p} is not a prime")


def axpy(y: SparseVec, a: int, x: SparseVec, p: int) -> None:
    """``y += a*x`` in place, dropping zeros."""
    for k, v in x.items():
        w = (y.get(k, 0) + a * v) % p
        if w:
            y[k] = w
        else:
            y.pop(k, None)


class Eliminator:
    """Incremental echelon basis of a subspace of F_p^N.

    Each stored vector carries a ``combo``: the linear combination of input
    tags it equals. ``reduce`` returns the residual of a vector against the
    stored basis together with the correspondingly updated combo, so a zero
    residual certifies ``vec - sum(...) == 0``.
    """

    def __init__(self, p: int):
        self.p = p
        self.pivots: dict[int, tuple[SparseVec, SparseVec]] = {}

    def __len__(self) -> int:
        return len(self.pivots)

    def reduce(self, vec: SparseVec, combo: SparseVec | None = None) -> tuple[SparseVec, SparseVec]:
        p = self.p
        v = dict(vec)
        c = dict(combo) if combo else {}
        pivots = self.pivots
        while v:
            lead = max(v)
            hit = pivots.get(lead)
            if hit is None:
                break
            pv, pc = hit
            a = p - v[lead]
            axpy(v, a, pv, p)
            if pc:
                axpy(c, a, pc, p)
        return v, c

    def add(self, vec: SparseVec, combo: SparseVec | None = None) -> tuple[bool, SparseVec]:
        """Insert ``vec``; returns (independent?, residual combo)."""
        v, c = self.reduce(vec, combo)
        if not v:
            return False, c
        lead = max(v)
        inv = pow(v[lead], -1, self.p)
        if inv != 1:
            v = {k: x * inv % self.p for k, x in v.items()}
            c = {k: x * inv % self.p for k, x in c.items()}
        self.pivots[lead] = (v, c)
        return True, c

    def copy(self) -> "Eliminator":
        out = Eliminator(self.p)
        out.pivots = dict(self.pivots)
        return out


def sparse_rank(columns: Iterable[SparseVec], p: int) -> int:
    # sparsest columns first keeps fill-in low
    E = Eliminator(p)
    for col in sorted(columns, key=len):
        E.add(col)
    return len(E)


def kernel(columns: Sequence[SparseVec], p: int) -> list[SparseVec]:
    """Basis of the null space, as combinations of column indices."""
    E = Eliminator(p)
    out = []
    for j, col in enumerate(columns):
        independent, combo = E.add(col, {j: 1})
        if not independent:
            out.append(combo)
    return out


def to_dense(columns: Sequence[SparseVec], nrows: int) -> np.ndarray:
    M = np.zeros((nrows, len(columns)), dtype=np.int64)
    for j, col in enumerate(columns):
        for i, v in col.items():
            M[i, j] = v
    return M


def dense_rank(M: np.ndarray, p: int) -> int:
    """Rank of an integer matrix reduced mod ``p`` by row reduction."""
    A = np.array(M, dtype=np.int64) % p
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        A[r] = A[r] * pow(int(A[r, c]), -1, p) % p
        below = np.nonzero(A[r + 1:, c])[0] + r + 1
        if below.size:
            A[below] = (A[below] - np.outer(A[below, c], A[r])) % p
        r += 1
    return r


def rank(columns: Sequence[SparseVec], nrows: int, p: int, method: str = "auto") -> int:
    if method == "auto":
        method = "dense" if nrows * len(columns) <= DENSE_ENTRY_LIMIT else "sparse"
    if method == "dense":
        if not columns or not nrows:
            return 0
        return dense_rank(to_dense(columns, nrows), p)
    if method == "sparse":
        return sparse_rank(columns, p)
    raise ValidationError(f"unknown rank method {method!r}")


def matmul(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    return (np.asarray(A, dtype=np.int64) @ np.asarray(B, dtype=np.int64)) % p
