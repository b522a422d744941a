"""Dense exact linear algebra over GF(p).

The elimination kernel is the compiled ``forcing._gfp`` extension when it
is importable, otherwise the numpy implementation in ``forcing._gfp_py``.
Set ``FORCING_PURE_PYTHON=1`` to force the fallback.
"""
from __future__ import annotations

import os

import numpy as np

from . import _gfp_py

if os.environ.get("FORCING_PURE_PYTHON"):
    _kernel = _gfp_py
    BACKEND = "python"
else:
    try:
        from . import _gfp as _kernel  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on the build
        _kernel = _gfp_py
        BACKEND = "python"


def use_backend(name: str) -> None:
    """Switch the elimination kernel (``"cython"`` or ``"python"``)."""
    global _kernel, BACKEND
    if name == "python":
        _kernel = _gfp_py
    elif name == "cython":
        from . import _gfp  # type: ignore[attr-defined]

        _kernel = _gfp
    else:
        raise ValueError(f"unknown backend {name!r}")
    BACKEND = name


def as_matrix(A, p: int) -> np.ndarray:
    """Contiguous int64 copy of ``A`` with entries reduced into [0, p)."""
    M = np.array(A, dtype=np.int64, copy=True)
    if M.ndim != 2:
        M = M.reshape(M.shape[0] if M.ndim else 0, -1)
    M %= p
    return np.ascontiguousarray(M)


def rref(A, p: int, pivot_cols: int | None = None) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``A`` mod p and its pivot columns."""
    M = as_matrix(A, p)
    if M.size == 0:
        return M, []
    pivots = _kernel.rref_inplace(M, p, -1 if pivot_cols is None else pivot_cols)
    return M, list(pivots)


def rank(A, p: int) -> int:
    A = np.asarray(A)
    if A.size == 0:
        return 0
    return len(rref(A, p)[1])


def nullspace(A, p: int) -> np.ndarray:
    """Basis of the right kernel of ``A``, one vector per row.

    Each basis vector has a 1 in one free column and zeros in the other
    free columns (the standard RREF basis), ordered by free column.
    """
    A = np.asarray(A)
    n = A.shape[1]
    if A.shape[0] == 0 or A.size == 0:
        return np.eye(n, dtype=np.int64)
    R, pivots = rref(A, p)
    free = [j for j in range(n) if j not in set(pivots)]
    K = np.zeros((len(free), n), dtype=np.int64)
    for t, j in enumerate(free):
        K[t, j] = 1
        for r, c in enumerate(pivots):
            K[t, c] = (-R[r, j]) % p
    return K


def solve(A, b, p: int) -> np.ndarray | None:
    """One solution of ``A x = b`` mod p, or None.

    Free variables are set to zero, so the answer is deterministic.
    """
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1)
    m, n = A.shape
    if m == 0:
        return np.zeros(n, dtype=np.int64)
    aug = np.concatenate([A.reshape(m, n), b.reshape(m, 1)], axis=1)
    R, pivots = rref(aug, p, pivot_cols=n)
    r = len(pivots)
    if r < m and np.any(R[r:, n] % p):
        return None
    x = np.zeros(n, dtype=np.int64)
    for row, c in enumerate(pivots):
        x[c] = R[row, n]
    return x


def matmul(A, B, p: int) -> np.ndarray:
    A = as_matrix(A, p)
    B = as_matrix(B, p)
    if A.shape[1] == 0:
        return np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    return _kernel.matmul(A, B, p)


def matpow(A, e: int, p: int) -> np.ndarray:
    A = as_matrix(A, p)
    result = np.eye(A.shape[0], dtype=np.int64)
    while e > 0:
        if e & 1:
            result = matmul(result, A, p)
        A = matmul(A, A, p)
        e >>= 1
    return result
