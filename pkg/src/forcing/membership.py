"""Homogeneous ideal membership with cofactors, primariness and smoothness tests."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import linalg
from .poly import Poly
from .ring import GradedRing


class InconclusiveError(ValueError):
    """The degree window is too small to decide the question."""


@dataclass(frozen=True)
class ForcingData:
    """Generators f_1..f_n, candidate f_0 and twist m over a graded ring.

    ``candidate_degree`` is only needed when the candidate is zero.
    """

    ring: GradedRing
    generators: tuple
    candidate: Poly
    twist: int | None = None
    candidate_degree: int | None = None

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        if len(gens) < 2:
            raise ValueError("need at least two generators")
        for g in gens:
            if g.is_zero() or not g.is_homogeneous():
                raise ValueError("generators must be nonzero and homogeneous")
            if g.p != self.ring.p or g.nvars != self.ring.nvars:
                raise ValueError("generator lives in a different ring")
        f0 = self.candidate
        if not f0.is_homogeneous():
            raise ValueError("candidate must be homogeneous")
        if f0.is_zero():
            if self.candidate_degree is None:
                raise ValueError("a zero candidate needs an explicit candidate_degree")
        elif self.candidate_degree is not None and self.candidate_degree != f0.degree:
            raise ValueError("candidate_degree disagrees with the candidate")
        else:
            object.__setattr__(self, "candidate_degree", f0.degree)
        if self.twist is None:
            object.__setattr__(self, "twist", self.candidate_degree)

    @classmethod
    def parse(cls, ring: GradedRing, generators: Sequence[str], candidate: str,
              twist: int | None = None) -> "ForcingData":
        return cls(ring, tuple(ring.poly(g) for g in generators), ring.poly(candidate), twist)

    @property
    def n(self) -> int:
        return len(self.generators)

    @property
    def degrees(self) -> list[int]:
        return [g.degree for g in self.generators]

    @property
    def d0(self) -> int:
        return self.candidate_degree

    @property
    def e(self) -> list[int]:
        return [self.twist - d for d in self.degrees]

    @property
    def e0(self) -> int:
        return self.twist - self.d0

    def with_generators(self, gens) -> "ForcingData":
        return ForcingData(self.ring, tuple(gens), self.candidate, self.twist, self.candidate_degree)


@dataclass(frozen=True)
class CofactorCertificate:
    """Cofactors a_i with f_0 = sum a_i g_i in R (deg a_i = d_0 - deg g_i)."""

    cofactors: tuple
    degrees: tuple = field(default=())

    def verify(self, ring: GradedRing, gens: Sequence[Poly], target: Poly) -> bool:
        acc = target
        for a, g in zip(self.cofactors, gens):
            acc = acc - a * g
        return acc.is_zero() or ring.is_zero(acc)

    def frobenius(self, q: int) -> "CofactorCertificate":
        return CofactorCertificate(tuple(a.frobenius(q) for a in self.cofactors),
                                   tuple(q * d for d in self.degrees))


def solve_membership(ring: GradedRing, gens: Sequence[Poly], target: Poly,
                     degree: int | None = None) -> CofactorCertificate | None:
    """Cofactors expressing ``target`` in the ideal generated by ``gens``, or None."""
    n = target.degree if degree is None else degree
    if n is None:
        raise ValueError("degree of the zero target must be given")
    zero = Poly.zero(ring.p, ring.nvars)
    if target.is_zero():
        return CofactorCertificate(tuple(zero for _ in gens), tuple(n - g.degree for g in gens))
    M, sizes = ring.block_matrix(gens, n)
    b = ring.coords(target, n)
    x = linalg.solve(M, b, ring.p) if M.shape[1] else (None if np.any(b) else np.zeros(0, dtype=np.int64))
    if x is None:
        return None
    cof = ring.split_blocks(x, gens, n, sizes)
    cert = CofactorCertificate(tuple(cof), tuple(n - g.degree for g in gens))
    assert cert.verify(ring, gens, target), "cofactor re-multiplication failed"
    return cert


def in_ideal(data: ForcingData) -> CofactorCertificate | None:
    """Certificate for f_0 in (f_1..f_n), solved as one linear system in degree d_0."""
    return solve_membership(data.ring, data.generators, data.candidate, data.d0)


def colength(ring: GradedRing, gens: Sequence[Poly], n: int) -> int:
    """dim (R/(gens))_n."""
    gens = [g for g in gens if not g.is_zero()]
    if n < 0:
        return 0
    M, _ = ring.block_matrix(gens, n)
    return ring.dim(n) - (linalg.rank(M, ring.p) if M.shape[1] else 0)


def default_primary_window(ring: GradedRing, gens: Sequence[Poly]) -> int:
    return sum(g.degree for g in gens if not g.is_zero()) + (ring.d or 0)


def is_primary(ring: GradedRing, gens: Sequence[Poly], n_max: int | None = None) -> bool:
    """Whether (gens) has finite colength, i.e. (R/(gens))_n = 0 for some n <= n_max.

    Vanishing in one degree persists in all higher degrees because R is
    generated in degree one, so only degree ``n_max`` is checked.
    """
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return ring.dim(0) == 0
    for g in gens:
        if not g.is_homogeneous():
            raise ValueError("generators must be homogeneous")
    if n_max is None:
        n_max = default_primary_window(ring, gens)
    top = max(g.degree for g in gens)
    if n_max < top:
        raise InconclusiveError(f"window {n_max} is below the top generator degree {top}")
    return colength(ring, gens, n_max) == 0


def is_smooth_curve(ring: GradedRing) -> bool:
    """Jacobian criterion: F and its partials generate an irrelevant-primary ideal."""
    if not ring.is_plane_curve:
        raise ValueError("smoothness test needs a plane curve F in three variables")
    F = ring.relation
    gens = [F] + [F.derivative(i) for i in range(3)]
    gens = [g for g in gens if not g.is_zero()]
    ambient = GradedRing(ring.p, 3, None, ring.variables)
    # a primary ideal generated in degree <= d contains a regular sequence of
    # three degree-d forms, whose quotient vanishes from degree 3d - 2 on
    return is_primary(ambient, gens, 3 * ring.d - 2)
