# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Gauss-Jordan elimination and matrix products over GF(p).

Entries are int64 in [0, p) with p < 2**31, so a single product fits in
63 bits and every update is reduced immediately.
"""
import numpy as np
cimport numpy as cnp

ctypedef long long i64


cdef i64 _inv(i64 a, i64 p) nogil:
    cdef i64 r = 1, e = p - 2
    a %= p
    while e > 0:
        if e & 1:
            r = (r * a) % p
        a = (a * a) % p
        e >>= 1
    return r


def rref_inplace(i64[:, ::1] A, i64 p, Py_ssize_t pivot_cols=-1):
    """Reduce ``A`` to reduced row echelon form in place; return pivot columns."""
    cdef Py_ssize_t m = A.shape[0], n = A.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, sel
    cdef i64 inv, f, g
    if pivot_cols < 0 or pivot_cols > n:
        pivot_cols = n
    pivots = []
    with nogil:
        for c in range(pivot_cols):
            if r >= m:
                break
            sel = -1
            for i in range(r, m):
                if A[i, c] != 0:
                    sel = i
                    break
            if sel < 0:
                continue
            if sel != r:
                for j in range(c, n):
                    f = A[r, j]
                    A[r, j] = A[sel, j]
                    A[sel, j] = f
            inv = _inv(A[r, c], p)
            if inv != 1:
                for j in range(c, n):
                    A[r, j] = (A[r, j] * inv) % p
            for i in range(m):
                if i == r:
                    continue
                f = A[i, c]
                if f == 0:
                    continue
                g = p - f
                for j in range(c, n):
                    if A[r, j] != 0:
                        A[i, j] = (A[i, j] + g * A[r, j]) % p
            with gil:
                pivots.append(c)
            r += 1
    return pivots


def matmul(i64[:, ::1] A, i64[:, ::1] B, i64 p):
    """Return ``A @ B mod p``."""
    cdef Py_ssize_t m = A.shape[0], k = A.shape[1], n = B.shape[1]
    cdef Py_ssize_t i, j, t
    cdef i64 a
    if B.shape[0] != k:
        raise ValueError("shape mismatch")
    out = np.zeros((m, n), dtype=np.int64)
    cdef i64[:, ::1] C = out
    with nogil:
        for i in range(m):
            for t in range(k):
                a = A[i, t]
                if a == 0:
                    continue
                for j in range(n):
                    C[i, j] = (C[i, j] + a * B[t, j]) % p
    return out
