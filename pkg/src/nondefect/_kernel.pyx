# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled Gaussian elimination over GF(p), p < 2**31.

The caller's int64 matrix (entries already reduced into [0, p)) is copied
into a uint32 work buffer, which halves memory traffic in the row updates.
Row updates perform the same exact modular operations as the numpy
fallback, so both backends return identical ranks.
"""

from libc.stdint cimport int64_t, uint32_t, uint64_t

import numpy as np
cimport numpy as cnp

cnp.import_array()

cdef uint64_t MERSENNE31 = 2147483647


cdef inline uint64_t _red_m31(uint64_t x) noexcept nogil:
    x = (x & MERSENNE31) + (x >> 31)
    x = (x & MERSENNE31) + (x >> 31)
    if x >= MERSENNE31:
        x -= MERSENNE31
    return x


cdef inline uint64_t _red_generic(uint64_t x, uint64_t p, double invp) noexcept nogil:
    # quotient estimate is off by at most a few units for x < 2**63
    cdef int64_t r = <int64_t>x - <int64_t>(<uint64_t>(<double>x * invp)) * <int64_t>p
    while r < 0:
        r += <int64_t>p
    while r >= <int64_t>p:
        r -= <int64_t>p
    return <uint64_t>r


cdef uint64_t _inv(uint64_t a, uint64_t p) noexcept nogil:
    cdef int64_t t = 0, newt = 1, q, tmp
    cdef int64_t r = <int64_t>p, newr = <int64_t>a
    while newr != 0:
        q = r // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += <int64_t>p
    return <uint64_t>t


cdef Py_ssize_t _eliminate(uint32_t[:, ::1] A, uint64_t up) noexcept nogil:
    cdef Py_ssize_t m = A.shape[0], n = A.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, piv
    cdef uint64_t inv, f, x
    cdef double invp = 1.0 / <double>up
    cdef bint mersenne = up == MERSENNE31
    cdef uint32_t tmp
    cdef uint32_t* prow
    cdef uint32_t* irow
    for c in range(n):
        if r == m:
            break
        piv = -1
        for i in range(r, m):
            if A[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(c, n):
                tmp = A[r, j]
                A[r, j] = A[piv, j]
                A[piv, j] = tmp
        prow = &A[r, 0]
        inv = _inv(<uint64_t>prow[c], up)
        for i in range(r + 1, m):
            irow = &A[i, 0]
            if irow[c] == 0:
                continue
            # factor = -(A[i,c] / A[r,c]), lies in [1, p-1]
            if mersenne:
                f = up - _red_m31(<uint64_t>irow[c] * inv)
            else:
                f = up - _red_generic(<uint64_t>irow[c] * inv, up, invp)
            irow[c] = 0
            if mersenne:
                for j in range(c + 1, n):
                    x = <uint64_t>irow[j] + f * <uint64_t>prow[j]
                    irow[j] = <uint32_t>_red_m31(x)
            else:
                for j in range(c + 1, n):
                    x = <uint64_t>irow[j] + f * <uint64_t>prow[j]
                    irow[j] = <uint32_t>_red_generic(x, up, invp)
        r += 1
    return r


def rank_inplace(cnp.ndarray a not None, int64_t p):
    """Return the rank over GF(p) of ``a`` (int64, entries in [0, p)).

    Named for interface parity with the fallback; the input is not modified.
    """
    cdef uint32_t[:, ::1] work = np.ascontiguousarray(a, dtype=np.uint32)
    cdef Py_ssize_t r
    with nogil:
        r = _eliminate(work, <uint64_t>p)
    return r
