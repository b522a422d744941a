"""Standard graded rings F_p[x_1..x_r]/(F) with per-degree monomial bases.

Standard monomials are the monomials not divisible by the graded-lex
leading monomial of F; {F} is a Groebner basis, so every class has a
unique representative in their span. When F contains x_1^d (the usual
plane-curve situation) reduction is division by a monic polynomial in
x_1 and runs on precomputed remainders of x_1^a; otherwise a memoized
monomial-by-monomial division is used. Both give the same normal form.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from math import comb
from typing import Sequence

import numpy as np

from . import linalg
from .poly import DEFAULT_VARIABLES, Poly, PrimeField, grlex_key, monomials_of_degree

_I64_MAX = 2**63 - 1


def _binom(n: int, k: int) -> int:
    return comb(n, k) if n >= k >= 0 else 0


def conv_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    if len(a) == 0 or len(b) == 0:
        return np.zeros(0, dtype=np.int64)
    if min(len(a), len(b)) * (p - 1) ** 2 < _I64_MAX:
        return np.convolve(a, b) % p
    out = np.convolve(a.astype(object), b.astype(object))
    return np.array([int(v) % p for v in out], dtype=np.int64)


class DegreeCapError(RuntimeError):
    """A graded piece exceeds the configured dimension cap."""


@dataclass(frozen=True)
class GradedMap:
    """F_p-linear map between graded pieces, as a dense matrix in monomial bases."""

    matrix: np.ndarray
    source_degree: int
    target_degree: int
    p: int

    @property
    def shape(self):
        return self.matrix.shape

    def rank(self) -> int:
        return linalg.rank(self.matrix, self.p)

    def __matmul__(self, other: "GradedMap") -> "GradedMap":
        if other.target_degree != self.source_degree:
            raise ValueError("degrees do not compose")
        return GradedMap(linalg.matmul(self.matrix, other.matrix, self.p),
                         other.source_degree, self.target_degree, self.p)

    def __eq__(self, other):
        if not isinstance(other, GradedMap):
            return NotImplemented
        return (self.source_degree, self.target_degree, self.p) == (
            other.source_degree, other.target_degree, other.p
        ) and np.array_equal(self.matrix % self.p, other.matrix % other.p)

    __hash__ = None


class GradedRing:
    """``F_p[vars] / (relation)`` with all variables of degree one."""

    def __init__(self, p: int, nvars: int = 3, relation: Poly | None = None,
                 variables: Sequence[str] | None = None, *, fast_reduction: bool = True):
        self.field = PrimeField(p)
        self.p = p
        self.nvars = nvars
        if variables is None:
            variables = DEFAULT_VARIABLES[:nvars] if nvars <= 3 else tuple(f"x{i + 1}" for i in range(nvars))
        if len(variables) != nvars:
            raise ValueError("need one name per variable")
        self.variables = tuple(variables)
        if relation is not None:
            if relation.p != p or relation.nvars != nvars:
                raise ValueError("relation lives in a different polynomial ring")
            if relation.is_zero():
                relation = None
            elif not relation.is_homogeneous():
                raise ValueError("relation must be homogeneous")
            elif relation.degree == 0:
                raise ValueError("relation must not be a unit")
        self.relation = relation
        self.d = relation.degree if relation is not None else None
        self._lock = threading.Lock()
        self._basis: dict[int, tuple] = {}
        self._index: dict[int, dict] = {}
        self._nf_memo: dict[tuple, dict] = {}
        self._xpow: list = []
        self._setup_reduction(fast_reduction)

    @classmethod
    def parse(cls, p: int, relation: str | None = None,
              variables: Sequence[str] = DEFAULT_VARIABLES) -> "GradedRing":
        variables = tuple(variables)
        F = Poly.parse(relation, p, variables) if relation else None
        return cls(p, len(variables), F, variables)

    def __repr__(self):
        rel = self.relation.to_str(self.variables) if self.relation is not None else "0"
        return f"GradedRing(F_{self.p}[{','.join(self.variables)}]/({rel}))"

    # -- helpers ---------------------------------------------------------
    def poly(self, text: str) -> Poly:
        return Poly.parse(text, self.p, self.variables)

    def fmt(self, f: Poly) -> str:
        return f.to_str(self.variables)

    def one(self) -> Poly:
        return Poly.constant(self.p, self.nvars)

    def var(self, i: int) -> Poly:
        return Poly.variable(self.p, self.nvars, i)

    @property
    def is_plane_curve(self) -> bool:
        return self.nvars == 3 and self.relation is not None

    @property
    def default_degH(self) -> int | None:
        """deg O_Y(1) on Proj R when it is determined by the presentation."""
        if self.is_plane_curve:
            return self.d
        if self.nvars == 2 and self.relation is None:
            return 1
        return None

    # -- bases -----------------------------------------------------------
    def dim(self, n: int) -> int:
        """dim_{F_p} R_n from the Hilbert function of a hypersurface ring."""
        if n < 0:
            return 0
        r = self.nvars
        full = _binom(n + r - 1, r - 1)
        if self.relation is None:
            return full
        return full - _binom(n - self.d + r - 1, r - 1)

    def basis(self, n: int) -> tuple:
        """Standard monomials of degree n in decreasing graded-lex order."""
        b = self._basis.get(n)
        if b is not None:
            return b
        if n < 0:
            b = ()
        elif self.relation is None:
            b = tuple(monomials_of_degree(self.nvars, n))
        else:
            lm = self._lm
            b = tuple(e for e in monomials_of_degree(self.nvars, n)
                      if not all(a >= l for a, l in zip(e, lm)))
        with self._lock:
            self._basis.setdefault(n, b)
            self._index.setdefault(n, {e: i for i, e in enumerate(b)})
        return self._basis[n]

    def index(self, n: int) -> dict:
        if n not in self._index:
            self.basis(n)
        return self._index[n]

    def check_cap(self, n: int, cap: int | None) -> None:
        if cap is not None and self.dim(n) > cap:
            raise DegreeCapError(f"graded piece R_{n} has dimension {self.dim(n)} > cap {cap}")

    # -- reduction -------------------------------------------------------
    def _setup_reduction(self, allow_fast: bool = True):
        F = self.relation
        if F is None:
            self._fast = False
            return
        lm, lc = F.leading_term()
        self._lm = lm
        self._lc_inv = self.field.inverse(lc)
        d = self.d
        self._fast = allow_fast and self.nvars == 3 and lm == (d, 0, 0)
        if self._fast:
            # F / lc = x^d + sum_j x^j g_j(y, z); g_j stored by y-exponent
            p = self.p
            g = [np.zeros(d - j + 1, dtype=np.int64) for j in range(d)]
            for (a, b, c), coef in F.items():
                if a < d:
                    g[a][b] = (g[a][b] + coef * self._lc_inv) % p
            self._x_d = [(-gj) % p for gj in g]
            self._xpow = [None] * d + [self._x_d]

    def _xpow_rows(self, a: int) -> list:
        """Rows r_j (j < d) with x^a = sum_j x^j r_j(y, z) in R."""
        xp = self._xpow
        if a < len(xp):
            return xp[a]
        with self._lock:
            d, p = self.d, self.p
            while len(xp) <= a:
                prev = xp[-1]
                top = prev[d - 1]
                nxt = []
                for j in range(d):
                    deg = len(xp) - j
                    row = np.zeros(deg + 1, dtype=np.int64)
                    if j >= 1:
                        row[: len(prev[j - 1])] += prev[j - 1]
                    row = (row + conv_mod(top, self._x_d[j], p)) % p
                    nxt.append(row)
                xp.append(nxt)
        return xp[a]

    def _nf_monomial(self, e: tuple) -> dict:
        """Normal form of a monomial by memoized division (general path)."""
        memo = self._nf_memo
        if e in memo:
            return memo[e]
        lm = self._lm
        p = self.p
        tail = [(t, (-c * self._lc_inv) % p) for t, c in self.relation.items() if t != lm]
        stack = [e]
        while stack:
            m = stack[-1]
            if m in memo:
                stack.pop()
                continue
            if not all(a >= l for a, l in zip(m, lm)):
                memo[m] = {m: 1}
                stack.pop()
                continue
            u = tuple(a - l for a, l in zip(m, lm))
            kids = [tuple(a + b for a, b in zip(u, t)) for t, _ in tail]
            missing = [k for k in kids if k not in memo]
            if missing:
                stack.extend(missing)
                continue
            acc: dict = {}
            for k, (_, c) in zip(kids, tail):
                for s, v in memo[k].items():
                    acc[s] = (acc.get(s, 0) + c * v) % p
            memo[m] = {s: v for s, v in acc.items() if v}
            stack.pop()
        return memo[e]

    def _coords_of_terms(self, terms, n: int) -> np.ndarray:
        """Coordinate vector in the basis of R_n of the class of sum c*x^e."""
        p = self.p
        if self.relation is None or not self._fast:
            idx = self.index(n)
            v = np.zeros(len(idx), dtype=np.int64)
            for e, c in terms:
                if self.relation is None:
                    v[idx[e]] = (v[idx[e]] + c) % p
                else:
                    for s, w in self._nf_monomial(e).items():
                        v[idx[s]] = (v[idx[s]] + c * w) % p
            return v
        d = self.d
        top = min(n, d - 1)
        rows = [np.zeros(n - j + 1, dtype=np.int64) for j in range(top + 1)]
        for (a, b, _c), coef in terms:
            if a < d:
                rows[a][b] = (rows[a][b] + coef) % p
            else:
                for j, r in enumerate(self._xpow_rows(a)):
                    seg = rows[j][b : b + len(r)]
                    rows[j][b : b + len(r)] = (seg + coef * r) % p
        return np.concatenate([rows[a][::-1] for a in range(top, -1, -1)]) if rows else np.zeros(0, dtype=np.int64)

    def coords(self, f: Poly, n: int | None = None) -> np.ndarray:
        """Coordinates of the class of homogeneous f in the standard basis of R_n."""
        if f.p != self.p or f.nvars != self.nvars:
            raise ValueError("polynomial lives in a different ring")
        if not f.is_homogeneous():
            raise ValueError("reduce needs a homogeneous polynomial")
        if f.is_zero():
            if n is None:
                raise ValueError("degree of the zero polynomial must be given")
            return np.zeros(self.dim(n), dtype=np.int64)
        if n is not None and f.degree != n:
            raise ValueError(f"polynomial has degree {f.degree}, expected {n}")
        return self._coords_of_terms(f.items(), f.degree)

    def from_coords(self, v, n: int) -> Poly:
        b = self.basis(n)
        return Poly(self.p, self.nvars, {e: int(c) for e, c in zip(b, v) if int(c) % self.p})

    def reduce(self, f: Poly) -> Poly:
        """Normal form of homogeneous f modulo the relation."""
        if f.is_zero():
            return f
        if self.relation is None:
            if not f.is_homogeneous():
                raise ValueError("reduce needs a homogeneous polynomial")
            return f
        return self.from_coords(self.coords(f), f.degree)

    def is_zero(self, f: Poly) -> bool:
        return f.is_zero() or not np.any(self.coords(f))

    def multiply(self, f: Poly, g: Poly) -> Poly:
        return self.reduce(f * g)

    def mult_matrix(self, f: Poly, source_degree: int) -> GradedMap:
        """Matrix of multiplication by f from R_source to R_{source + deg f}.

        Column j is the reduced product of f with the j-th standard monomial.
        """
        if not f.is_homogeneous():
            raise ValueError("multiplier must be homogeneous")
        if f.is_zero():
            raise ValueError("multiplier must be nonzero (its degree is needed)")
        s = source_degree
        t = s + f.degree
        src = self.basis(s)
        M = np.zeros((self.dim(t), len(src)), dtype=np.int64)
        fterms = list(f.items())
        for j, m in enumerate(src):
            prod = [(tuple(a + b for a, b in zip(e, m)), c) for e, c in fterms]
            M[:, j] = self._coords_of_terms(prod, t)
        return GradedMap(M, s, t, self.p)

    def block_matrix(self, gens: Sequence[Poly], n: int) -> tuple[np.ndarray, list[int]]:
        """Matrix of (a_1..a_k) -> sum a_i g_i from the sum of R_{n - deg g_i} to R_n.

        Returns the matrix and the column count of each block.
        """
        blocks = []
        sizes = []
        for g in gens:
            s = n - g.degree
            if s < 0:
                sizes.append(0)
                continue
            blocks.append(self.mult_matrix(g, s).matrix)
            sizes.append(blocks[-1].shape[1])
        if not blocks:
            return np.zeros((self.dim(n), 0), dtype=np.int64), sizes
        return np.concatenate(blocks, axis=1), sizes

    def split_blocks(self, v, gens: Sequence[Poly], n: int, sizes: Sequence[int]) -> list[Poly]:
        """Cut a solution vector of ``block_matrix`` into cofactor polynomials."""
        out = []
        pos = 0
        for g, size in zip(gens, sizes):
            seg = v[pos : pos + size]
            pos += size
            out.append(self.from_coords(seg, n - g.degree) if size else Poly.zero(self.p, self.nvars))
        return out
