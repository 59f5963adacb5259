"""Pure numpy Gaussian elimination over GF(p); used when the compiled kernel is unavailable."""

from __future__ import annotations

import numpy as np


def rank_inplace(a: np.ndarray, p: int) -> int:
    """Row-reduce ``a`` (int64, entries in [0, p), p < 2**31) in place and return its rank."""
    m, n = a.shape
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv], c:] = a[[piv, r], c:]
        inv = pow(int(a[r, c]), -1, p)
        below = r + 1 + np.flatnonzero(a[r + 1 :, c])
        if below.size:
            f = (p - (a[below, c] * inv) % p) % p
            a[below, c] = 0
            if c + 1 < n:
                a[below, c + 1 :] = (a[below, c + 1 :] + f[:, None] * a[r, c + 1 :]) % p
        r += 1
    return r
