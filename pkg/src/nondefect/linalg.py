"""Exact dense linear algebra over GF(p).

The elimination kernel is compiled (``nondefect._kernel``) when the extension
is available and falls back to a vectorised numpy version otherwise.  Set
``ND_FORCE_FALLBACK=1`` before import to pin the fallback.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .fieldcore import DEFAULT_PRIME, CapExceeded, matrix_cap
from . import _fallback

if os.environ.get("ND_FORCE_FALLBACK"):
    _rank_inplace = _fallback.rank_inplace
    BACKEND = "numpy"
else:
    try:
        from ._kernel import rank_inplace as _rank_inplace

        BACKEND = "cython"
    except ImportError:
        _rank_inplace = _fallback.rank_inplace
        BACKEND = "numpy"

RATIONAL_ORACLE_MAX = 64


@dataclass(frozen=True, eq=False)
class DenseMatrix:
    """Row-major matrix with entries reduced mod ``p``."""

    entries: np.ndarray
    p: int = DEFAULT_PRIME

    def __post_init__(self) -> None:
        a = np.asarray(self.entries)
        if a.ndim != 2:
            raise ValueError(f"expected a 2-d array, got shape {a.shape}")
        a = np.ascontiguousarray(np.mod(a.astype(np.int64, copy=False), self.p))
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int = DEFAULT_PRIME) -> "DenseMatrix":
        return cls(np.zeros((rows, cols), dtype=np.int64), p)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None, p: int = DEFAULT_PRIME):
        if len(rows) == 0:
            if cols is None:
                raise ValueError("column count required for an empty matrix")
            return cls.zeros(0, cols, p)
        return cls(np.array([[int(x) % p for x in row] for row in rows], dtype=np.int64), p)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def T(self) -> "DenseMatrix":
        return DenseMatrix(self.entries.T, self.p)

    def __repr__(self) -> str:
        return f"DenseMatrix({self.rows}x{self.cols}, p={self.p})"


def rank_array(a: np.ndarray, p: int) -> int:
    """Rank of an int64 array whose entries lie in [0, p); the array is copied."""
    m, n = a.shape
    if m == 0 or n == 0:
        return 0
    cap = matrix_cap()
    if n > cap or m > cap:
        raise CapExceeded(f"{m}x{n} matrix exceeds the matrix cap of {cap}")
    work = np.array(a, dtype=np.int64, order="C", copy=True)
    return int(_rank_inplace(work, p))


def rank(M: DenseMatrix) -> int:
    return rank_array(M.entries, M.p)


def stack(A: DenseMatrix, B: DenseMatrix) -> DenseMatrix:
    if A.cols != B.cols:
        raise ValueError(f"column mismatch: {A.cols} vs {B.cols}")
    if A.p != B.p:
        raise ValueError(f"modulus mismatch: {A.p} vs {B.p}")
    if B.rows == 0:
        return A
    if A.rows == 0:
        return B
    return DenseMatrix(np.vstack([A.entries, B.entries]), A.p)


def intersection_dim(A: DenseMatrix, B: DenseMatrix) -> int:
    """Dimension of the intersection of the row spaces of ``A`` and ``B``."""
    return rank(A) + rank(B) - rank(stack(A, B))


def rational_rank_oracle(M: Sequence[Sequence[int]], max_dim: int = RATIONAL_ORACLE_MAX) -> int:
    """Rank over Q of an integer matrix by fraction-free (Bareiss) elimination."""
    rows = [[int(x) for x in row] for row in M]
    m = len(rows)
    n = len(rows[0]) if m else 0
    if m > max_dim or n > max_dim:
        raise CapExceeded(f"rational oracle limited to {max_dim}x{max_dim}, got {m}x{n}")
    if any(len(row) != n for row in rows):
        raise ValueError("ragged matrix")
    r = 0
    prev = 1
    for c in range(n):
        piv = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pr = rows[r]
        for i in range(r + 1, m):
            ri = rows[i]
            for j in range(c + 1, n):
                ri[j] = (pr[c] * ri[j] - ri[c] * pr[j]) // prev
            ri[c] = 0
        prev = pr[c]
        r += 1
        if r == m:
            break
    return r
