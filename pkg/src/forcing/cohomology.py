"""Cohomology of line bundles on smooth plane curves and of forcing sheaves.

H^1(Y, O_Y(n)) is the kernel of multiplication by F from H^2(P^2, O(n - d))
to H^2(P^2, O(n)). H^2(P^2, O(k)) has the basis x^-a y^-b z^-c with
a, b, c >= 1 and a + b + c = -k, and a monomial acts on it by adding
exponents and discarding every result with a nonnegative exponent.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from math import comb

import numpy as np

from . import linalg
from .membership import ForcingData, is_primary, is_smooth_curve, solve_membership
from .poly import Poly
from .ring import GradedMap, GradedRing


@functools.lru_cache(maxsize=64)
def _smooth(p: int, relation: Poly) -> bool:
    return is_smooth_curve(GradedRing(p, 3, relation))


def require_smooth_plane_curve(ring: GradedRing) -> None:
    if not ring.is_plane_curve:
        raise ValueError("cohomology needs a plane curve ring F_p[x,y,z]/(F)")
    if not _smooth(ring.p, ring.relation):
        raise ValueError("Proj R is not a smooth curve")


def genus(d: int) -> int:
    return (d - 1) * (d - 2) // 2


def negative_monomials(k: int) -> list[tuple]:
    """Exponents (a, b, c) of the basis x^-a y^-b z^-c of H^2(P^2, O(-k))."""
    return [(a, b, k - a - b) for a in range(k - 2, 0, -1) for b in range(k - a - 1, 0, -1)]


def _ambient_mult(f: Poly, src_k: int, shift: int) -> np.ndarray:
    """Matrix of f (degree ``shift``) from H^2(O(-src_k)) to H^2(O(-src_k + shift))."""
    src = negative_monomials(src_k)
    tgt = negative_monomials(src_k - shift)
    index = {e: i for i, e in enumerate(tgt)}
    M = np.zeros((len(tgt), len(src)), dtype=np.int64)
    if not tgt or not src:
        return M
    terms = list(f.items())
    for j, (a, b, c) in enumerate(src):
        for (u, v, w), coef in terms:
            if u < a and v < b and w < c:
                i = index[(a - u, b - v, c - w)]
                M[i, j] = (M[i, j] + coef) % f.p
    return M


@dataclass(frozen=True)
class H1Basis:
    """Basis of H^1(O_Y(n)) as rows of ``kernel`` over ``monomials``.

    ``free`` lists the ambient positions where the rows form an identity,
    which read off coordinates of any class.
    """

    twist: int
    monomials: tuple
    kernel: np.ndarray
    free: tuple

    @property
    def dim(self) -> int:
        return self.kernel.shape[0]

    def coordinates(self, ambient_vector) -> np.ndarray:
        v = np.asarray(ambient_vector, dtype=np.int64)
        return v[list(self.free)] if self.free else np.zeros(0, dtype=np.int64)


@dataclass(frozen=True)
class CohClass:
    """A class in H^1(O_Y(twist)) written in the basis of ``h1_basis``."""

    twist: int
    coefficients: tuple

    def is_zero(self) -> bool:
        return not any(self.coefficients)


@functools.lru_cache(maxsize=512)
def _h1_basis_cached(p: int, relation: Poly, n: int) -> H1Basis:
    d = relation.degree
    mons = negative_monomials(d - n)
    if not mons:
        return H1Basis(n, (), np.zeros((0, 0), dtype=np.int64), ())
    A = _ambient_mult(relation, d - n, d)
    if A.shape[0] == 0:
        K = np.eye(len(mons), dtype=np.int64)
        free = tuple(range(len(mons)))
    else:
        K = linalg.nullspace(A, p)
        _, pivots = linalg.rref(A, p)
        free = tuple(j for j in range(len(mons)) if j not in set(pivots))
    K.setflags(write=False)
    return H1Basis(n, tuple(mons), K, free)


def h1_basis(ring: GradedRing, n: int) -> H1Basis:
    require_smooth_plane_curve(ring)
    return _h1_basis_cached(ring.p, ring.relation, n)


def h_line(ring: GradedRing, n: int) -> tuple[int, int]:
    """(h^0, h^1) of O_Y(n): h^0 = dim R_n and h^1 = dim R_(d-3-n) by duality."""
    require_smooth_plane_curve(ring)
    return ring.dim(n), ring.dim(ring.d - 3 - n)


def mult_map_h1(ring: GradedRing, f: Poly, n: int, degree: int | None = None) -> GradedMap:
    """Multiplication by f from H^1(O_Y(n)) to H^1(O_Y(n + deg f)).

    ``degree`` is required when f is zero.
    """
    e = f.degree if degree is None else degree
    if e is None:
        raise ValueError("degree of a zero multiplier must be given")
    if not f.is_zero() and (not f.is_homogeneous() or f.degree != e):
        raise ValueError("multiplier must be homogeneous of the stated degree")
    src = h1_basis(ring, n)
    tgt = h1_basis(ring, n + e)
    M = np.zeros((tgt.dim, src.dim), dtype=np.int64)
    if src.dim and tgt.dim and not f.is_zero():
        A = _ambient_mult(f, ring.d - n, e)
        image = linalg.matmul(A, src.kernel.T, ring.p)
        M = image[list(tgt.free), :] % ring.p
    return GradedMap(M, n, n + e, ring.p)


def cech_class_vanishes(ring: GradedRing, f1: Poly, f2: Poly, h: Poly, extra_twist: int = 0) -> bool:
    """Whether h / (f_1 f_2) is zero, i.e. h lies in (f_1, f_2) in degree deg h."""
    if not is_primary(ring, [f1, f2]):
        raise ValueError("(f_1, f_2) is not primary")
    return solve_membership(ring, [f1, f2], h) is not None


@dataclass(frozen=True)
class SheafSectionReport:
    """h^0 of the cokernel S of O_Y(-m) -> sum O_Y(-e_i) given by the f_i, twisted by j."""

    twist: int
    h0: int
    cokernel_part: int
    kernel_part: int
    sheaf: str

    def as_dict(self) -> dict:
        return {"sheaf": self.sheaf, "twist": self.twist, "h0": self.h0,
                "breakdown": {"cokernel_part": self.cokernel_part, "kernel_part": self.kernel_part}}


def sections_of_cokernel(ring: GradedRing, gens: list, degrees: list, m: int, j: int,
                         label: str = "") -> SheafSectionReport:
    """h^0 of coker(O_Y(j - m) -> sum_i O_Y(j - m + deg g_i)) from the long exact sequence."""
    require_smooth_plane_curve(ring)
    s = j - m
    h0_sum = sum(ring.dim(s + dg) for dg in degrees)
    h0_src = ring.dim(s)
    if h0_src:
        nz = [g for g in gens if not g.is_zero()]
        ranks = linalg.rank(np.concatenate([ring.mult_matrix(g, s).matrix for g in nz], axis=0), ring.p) if nz else 0
        assert ranks == h0_src, "sections of O_Y(j - m) do not inject"
    blocks = [mult_map_h1(ring, g, s, dg).matrix for g, dg in zip(gens, degrees)]
    src_dim = h1_basis(ring, s).dim
    if src_dim:
        stacked = np.concatenate(blocks, axis=0)
        ker = src_dim - (linalg.rank(stacked, ring.p) if stacked.shape[0] else 0)
    else:
        ker = 0
    first = h0_sum - h0_src
    return SheafSectionReport(j, first + ker, first, ker, label)


@dataclass(frozen=True)
class ForcingSections:
    forcing: SheafSectionReport
    relation_only: SheafSectionReport


def h0_forcing_sheaf(data: ForcingData, j: int) -> ForcingSections:
    """Sections of the linear-form sheaves for (f_1..f_n; f_0) and (f_1..f_n) at twist j."""
    ring = data.ring
    if not is_primary(ring, list(data.generators)):
        raise ValueError("generators are not primary")
    m = data.twist
    gens = [data.candidate] + list(data.generators)
    degs = [data.d0] + data.degrees
    forcing = sections_of_cokernel(ring, gens, degs, m, j, "forcing")
    rel = sections_of_cokernel(ring, list(data.generators), data.degrees, m, j, "relation")
    return ForcingSections(forcing, rel)


def leadno(data: ForcingData) -> int:
    return sum(data.degrees) - (data.n - 1) * data.d0


@dataclass(frozen=True)
class NormalizingNumber:
    nu_low: int
    nu_high: int
    degH: int
    scanned: tuple  # (j, h0) pairs of the forcing sheaf twisted down by j

    @property
    def exact(self) -> bool:
        return self.nu_low == self.nu_high


def normalizing_number_h(data: ForcingData, in_ideal: bool | None = None) -> NormalizingNumber:
    """Bounds for the normalizing number of (f_1, f_2; f_0) searched over multiples of H.

    nu_low is deg H times the largest j >= 0 with a nonzero section of the
    linear-form sheaf twisted down by j H (twists are measured from e_0 = 0,
    so the result does not depend on m). nu_high comes from the degree
    bound through the quotient line bundle.
    """
    ring = data.ring
    require_smooth_plane_curve(ring)
    if data.n != 2:
        raise ValueError("the normalizing number is defined here for two generators")
    degH = ring.d
    ell = leadno(data)
    if in_ideal is None:
        in_ideal = solve_membership(ring, list(data.generators), data.candidate, data.d0) is not None
    if ell <= 0:
        high = 0
    elif in_ideal:
        high = ell * degH
    else:
        high = ell * degH - 1
    scanned = []
    best = None
    j = 0
    # h^0 is non-increasing in the downward twist, so stop at the first zero
    while True:
        h0 = h0_forcing_sheaf(data, data.e0 - j).forcing.h0
        scanned.append((j, h0))
        if h0 == 0:
            break
        best = j
        if j * degH > high:
            break
        j += 1
    low = 0 if best is None else best * degH
    if low > high:
        raise AssertionError(f"section scan gives nu >= {low} above the bound {high}")
    return NormalizingNumber(low, high, degH, tuple(scanned))
