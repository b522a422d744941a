"""Frobenius powers of ideals, closure witnesses and the Frobenius action on H^1(O_Y)."""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import linalg
from .membership import CofactorCertificate, ForcingData, is_primary, is_smooth_curve, solve_membership
from .poly import Poly
from .ring import DegreeCapError, GradedRing

DEFAULT_DEGREE_CAP = 20000


class Cancelled(RuntimeError):
    pass


class NotACoboundary(ValueError):
    """The Cech class is not fixed by Frobenius and does not die under it either."""


def default_test_element(ring: GradedRing) -> Poly:
    """First nonzero partial derivative of the relation (1 when there is none)."""
    if ring.relation is None:
        return ring.one()
    for i in range(ring.nvars):
        g = ring.relation.derivative(i)
        if not g.is_zero() and not ring.is_zero(g):
            return g
    raise ValueError("all partial derivatives of the relation vanish; supply a test element")


@dataclass
class FrobeniusConfig:
    test_element: Poly | None = None
    e_max: int = 2
    degree_cap: int | None = DEFAULT_DEGREE_CAP
    cancel: threading.Event | None = field(default=None, repr=False)

    def resolve_test_element(self, ring: GradedRing) -> Poly:
        c = self.test_element if self.test_element is not None else default_test_element(ring)
        if not c.is_homogeneous() or ring.is_zero(c):
            raise ValueError("test element must be homogeneous and nonzero in R")
        return c

    def check_cancel(self) -> None:
        if self.cancel is not None and self.cancel.is_set():
            raise Cancelled("computation cancelled")


def _check_q(q: int, p: int) -> int:
    e, r = 0, q
    while r > 1 and r % p == 0:
        r //= p
        e += 1
    if r != 1:
        raise ValueError(f"q = {q} is not a power of p = {p}")
    return e


def bracket_membership(data: ForcingData, q: int, multiplier: Poly | None = None,
                       config: FrobeniusConfig | None = None) -> CofactorCertificate | None:
    """Cofactors for multiplier * f_0^q in (f_1^q, ..., f_n^q), or None."""
    config = config or FrobeniusConfig()
    ring = data.ring
    _check_q(q, ring.p)
    mult = multiplier if multiplier is not None else ring.one()
    if mult.is_zero() or not mult.is_homogeneous():
        raise ValueError("multiplier must be nonzero and homogeneous")
    n = mult.degree + q * data.d0
    ring.check_cap(n, config.degree_cap)
    config.check_cancel()
    gens = [f.frobenius(q) for f in data.generators]
    target = mult * data.candidate.frobenius(q)
    return solve_membership(ring, gens, target, n)


def certificate_is_valid(data: ForcingData, q: int, multiplier: Poly, cert: CofactorCertificate) -> bool:
    gens = [f.frobenius(q) for f in data.generators]
    return cert.verify(data.ring, gens, multiplier * data.candidate.frobenius(q))


@dataclass(frozen=True)
class ClosureTest:
    status: str  # "in" or "unknown"
    witness_q: int | None
    certificate: CofactorCertificate | None
    tested_q: tuple


def frobenius_closure_test(data: ForcingData, config: FrobeniusConfig | None = None) -> ClosureTest:
    """Least q <= p^e_max with f_0^q in I^[q]; failure never proves exclusion."""
    config = config or FrobeniusConfig()
    p = data.ring.p
    tested = []
    for e in range(config.e_max + 1):
        q = p**e
        tested.append(q)
        cert = bracket_membership(data, q, None, config)
        if cert is not None:
            return ClosureTest("in", q, cert, tuple(tested))
    return ClosureTest("unknown", None, None, tuple(tested))


SUPPORTS = "supports membership"
REFUTES = "refutes membership (under test-element assumption)"


@dataclass(frozen=True)
class TightClosureWitness:
    test_element: Poly
    qs: tuple
    results: tuple
    certificates: tuple
    assumptions: tuple

    @property
    def summary(self) -> str:
        return SUPPORTS if all(self.results) else REFUTES

    @property
    def refutes(self) -> bool:
        return not all(self.results)


def tight_closure_witness(data: ForcingData, config: FrobeniusConfig | None = None) -> TightClosureWitness:
    """Test c * f_0^q in I^[q] for q = p, ..., p^e_max."""
    config = config or FrobeniusConfig()
    ring = data.ring
    c = config.resolve_test_element(ring)
    assumptions = []
    if ring.relation is None:
        assumptions.append("regular ring: every nonzero element is a test element")
    elif ring.is_plane_curve and is_smooth_curve(ring):
        assumptions.append("isolated singularity: a partial derivative of F is assumed to be a test element")
    else:
        assumptions.append("test element not justified: Proj R was not verified smooth")
    qs, res, certs = [], [], []
    for e in range(1, config.e_max + 1):
        q = ring.p**e
        cert = bracket_membership(data, q, c, config)
        if cert is not None:
            assert certificate_is_valid(data, q, c, cert)
        qs.append(q)
        res.append(cert is not None)
        certs.append(cert)
    return TightClosureWitness(c, tuple(qs), tuple(res), tuple(certs), tuple(assumptions))


# -- Hasse invariant and the Frobenius action on H^1 -------------------------

def _check_plane(F: Poly) -> None:
    if F.nvars != 3 or not F.is_homogeneous() or F.is_zero():
        raise ValueError("need a nonzero homogeneous plane curve equation")


def hasse_invariant(F: Poly, p: int | None = None) -> int:
    """Coefficient of (xyz)^(p-1) in F^(p-1) for a plane cubic F."""
    _check_plane(F)
    if F.degree != 3:
        raise ValueError("the Hasse invariant is defined here for cubics")
    p = F.p if p is None else p
    if p != F.p:
        raise ValueError("F is defined over a different field")
    top = (p - 1,) * 3
    return F.power_truncated(p - 1, top).coefficient(top)


def hasse_vanishes_by_membership(F: Poly) -> bool:
    """Whether F^(p-1) lies in (x^p, y^p, z^p) in the polynomial ring."""
    _check_plane(F)
    p = F.p
    ambient = GradedRing(p, 3)
    gens = [Poly.monomial(p, tuple(p if j == i else 0 for j in range(3))) for i in range(3)]
    return solve_membership(ambient, gens, F ** (p - 1)) is not None


def h1_structure_basis(d: int) -> list[tuple]:
    """Exponents (a, b, c) of x^-a y^-b z^-c with a, b, c >= 1 and a + b + c = d."""
    return [(a, b, d - a - b) for a in range(d - 2, 0, -1) for b in range(d - a - 1, 0, -1)]


@dataclass(frozen=True)
class FrobeniusAction:
    matrix: np.ndarray
    basis: tuple
    p: int
    genus: int
    rank_chain: tuple  # rank of the t-fold composite for t = 0..genus
    fixed_dim: int  # F_p-dimension of the vectors fixed by the action

    @property
    def p_rank(self) -> int:
        return self.rank_chain[-1]

    @property
    def nilpotent_dim(self) -> int:
        return self.genus - self.p_rank

    @property
    def nilpotency_index(self) -> int:
        """Least t whose composite has already dropped to the stable rank."""
        return next(t for t, r in enumerate(self.rank_chain) if r == self.p_rank)

    @property
    def needs_extension(self) -> bool:
        """A basis of fixed vectors for the stable part is not defined over F_p."""
        return self.fixed_dim < self.p_rank


def frobenius_action_h1(ring: GradedRing) -> FrobeniusAction:
    """Matrix of the p-linear Frobenius on H^1(O_Y) for a smooth plane curve.

    On the basis x^-a y^-b z^-c the class goes to F^(p-1) times its p-th
    power, keeping only monomials with all exponents negative. Over F_p
    the p-power map on coordinates is the identity, so the t-fold
    composite is the t-th matrix power.
    """
    if not ring.is_plane_curve:
        raise ValueError("need a plane curve ring")
    if not is_smooth_curve(ring):
        raise ValueError("Proj R is not smooth")
    p, d, F = ring.p, ring.d, ring.relation
    basis = h1_structure_basis(d)
    g = len(basis)
    reach = p * (d - 2)
    Fp = F.power_truncated(p - 1, (reach,) * 3)
    M = np.zeros((g, g), dtype=np.int64)
    for j, src in enumerate(basis):
        for i, tgt in enumerate(basis):
            M[i, j] = Fp.coefficient(tuple(p * s - t for s, t in zip(src, tgt)))
    chain = [g]
    P = np.eye(g, dtype=np.int64)
    for _ in range(g):
        P = linalg.matmul(M, P, p)
        chain.append(linalg.rank(P, p))
    fixed = g - linalg.rank((M - np.eye(g, dtype=np.int64)) % p, p) if g else 0
    return FrobeniusAction(M, tuple(basis), p, g, tuple(chain), fixed)


# -- Artin-Schreier glue data ------------------------------------------------

@dataclass(frozen=True)
class CoverDatum:
    """Glue data T_i^p - T_i + a_i = 0 with a_i = u_i / f_i^p on D(f_i).

    The class c = h / (f_1 f_2) satisfies c^p - c = a_2 - a_1, which is the
    identity h^p - h (f_1 f_2)^(p-1) = u_2 f_1^p - u_1 f_2^p checked by
    ``verify``. For the nilpotent route the datum is the trivial one for
    the Frobenius image (f_1^q, f_2^q, h^q) of the input.
    """

    f1: Poly
    f2: Poly
    h: Poly
    u1: Poly
    u2: Poly
    route: str  # "trivial", "nilpotent" or "artin_schreier"
    witness_q: int = 1
    note: str = ""

    def verify(self, ring: GradedRing) -> bool:
        p = ring.p
        lhs = self.h.frobenius(p) - self.h * (self.f1 * self.f2) ** (p - 1)
        rhs = self.u2 * self.f1.frobenius(p) - self.u1 * self.f2.frobenius(p)
        return ring.is_zero(lhs - rhs)


def _trivial_datum(ring: GradedRing, f1: Poly, f2: Poly, h: Poly, cert: CofactorCertificate,
                   route: str, q: int, note: str) -> CoverDatum:
    # h = b1 f1 + b2 f2 gives h^p - h (f1 f2)^(p-1) = alpha1 f1^p + alpha2 f2^p
    p = ring.p
    b1, b2 = cert.cofactors
    alpha1 = b1.frobenius(p) - b1 * f2 ** (p - 1)
    alpha2 = b2.frobenius(p) - b2 * f1 ** (p - 1)
    return CoverDatum(f1, f2, h, ring.reduce(-alpha2), ring.reduce(alpha1), route, q, note)


def artin_schreier_split(ring: GradedRing, f1: Poly, f2: Poly, h: Poly, e_max: int = 3,
                         degree_cap: int | None = DEFAULT_DEGREE_CAP) -> CoverDatum:
    """Glue data splitting the class h / (f_1 f_2) in H^1(O_Y).

    Tries, in order: h already in (f_1, f_2); a Frobenius power of the class
    vanishes; the class is fixed by Frobenius.
    """
    if h.degree is not None and h.degree != f1.degree + f2.degree:
        raise ValueError("need deg h = deg f_1 + deg f_2")
    if not is_primary(ring, [f1, f2]):
        raise ValueError("(f_1, f_2) is not primary")
    p = ring.p
    cert = solve_membership(ring, [f1, f2], h, f1.degree + f2.degree)
    if cert is not None:
        return _trivial_datum(ring, f1, f2, h, cert, "trivial", 1, "class is already a coboundary")
    q = 1
    for _ in range(e_max):
        q *= p
        n = q * (f1.degree + f2.degree)
        ring.check_cap(n, degree_cap)
        fq1, fq2, hq = f1.frobenius(q), f2.frobenius(q), h.frobenius(q)
        cert = solve_membership(ring, [fq1, fq2], hq, n)
        if cert is not None:
            datum = _trivial_datum(ring, fq1, fq2, hq, cert, "nilpotent", q,
                                   "nilpotent route, no Artin-Schreier layer needed")
            assert datum.verify(ring)
            return datum
    n = p * (f1.degree + f2.degree)
    ring.check_cap(n, degree_cap)
    N = h.frobenius(p) - h * (f1 * f2) ** (p - 1)
    cert = solve_membership(ring, [f1.frobenius(p), f2.frobenius(p)], N, n)
    if cert is None:
        raise NotACoboundary("h^p - h (f_1 f_2)^(p-1) is not in (f_1^p, f_2^p)")
    alpha1, alpha2 = cert.cofactors
    datum = CoverDatum(f1, f2, h, -alpha2, alpha1, "artin_schreier", p, "class is fixed by Frobenius")
    assert datum.verify(ring), "Cech identity failed"
    return datum


__all__ = [
    "Cancelled", "ClosureTest", "CoverDatum", "DegreeCapError", "FrobeniusAction", "FrobeniusConfig",
    "NotACoboundary", "TightClosureWitness", "artin_schreier_split", "bracket_membership",
    "certificate_is_valid", "default_test_element", "frobenius_action_h1", "frobenius_closure_test",
    "h1_structure_basis", "hasse_invariant", "hasse_vanishes_by_membership", "tight_closure_witness",
]
