"""Numpy fallback for the compiled GF(p) kernel (same API as ``_gfp``)."""
from __future__ import annotations

import numpy as np

_I64_MAX = 2**63 - 1


def rref_inplace(A: np.ndarray, p: int, pivot_cols: int = -1) -> list[int]:
    m, n = A.shape
    if pivot_cols < 0 or pivot_cols > n:
        pivot_cols = n
    pivots: list[int] = []
    r = 0
    for c in range(pivot_cols):
        if r >= m:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        sel = r + int(nz[0])
        if sel != r:
            A[[r, sel], c:] = A[[sel, r], c:]
        inv = pow(int(A[r, c]), -1, p)
        if inv != 1:
            A[r, c:] = (A[r, c:] * inv) % p
        col = A[:, c].copy()
        col[r] = 0
        rows = np.flatnonzero(col)
        if rows.size:
            A[np.ix_(rows, np.arange(c, n))] = (
                A[rows, c:] + np.outer(p - col[rows], A[r, c:])
            ) % p
        pivots.append(c)
        r += 1
    return pivots


def matmul(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    if A.shape[1] != B.shape[0]:
        raise ValueError("shape mismatch")
    k = A.shape[1]
    # largest inner-dimension chunk whose partial dot products fit in int64
    chunk = max(1, _I64_MAX // max(1, (p - 1) ** 2))
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for s in range(0, k, chunk):
        out = (out + (A[:, s : s + chunk] @ B[s : s + chunk]) % p) % p
    return out
