"""Integer intersection theory of forcing bundles over a curve."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .membership import ForcingData, solve_membership
from .syzygy import RelationVector


def leadno(d_list: Sequence[int], d0: int) -> int:
    """sum d_i - (n - 1) d_0, the top self-intersection in units of deg H."""
    if len(d_list) < 2:
        raise ValueError("need at least two generator degrees")
    return sum(d_list) - (len(d_list) - 1) * d0


def chern_polynomial(e_list: Sequence[int], m: int) -> list[int]:
    """c_0..c_(n-1) of V_m as multiples of H^i.

    Solves c_t (1 - m H t) = prod (1 - e_i H t) as a power series in t and
    truncates at the rank n - 1. Only c_0 and c_1 are geometric on a curve.
    """
    n = len(e_list)
    rhs = [1]
    for e in e_list:
        rhs = [a - e * b for a, b in zip(rhs + [0], [0] + rhs)]
    c = []
    for k in range(n):
        c.append(rhs[k] + (m * c[k - 1] if k else 0))
    return c


def self_intersection_top(data: ForcingData, degH: int | None = None) -> int:
    degH = _degH(data, degH)
    return leadno(data.degrees, data.d0) * degH


def _degH(data: ForcingData, degH: int | None) -> int:
    if degH is None:
        degH = data.ring.default_degH
    if degH is None:
        raise ValueError("deg H must be supplied for this ring")
    if degH < 1:
        raise ValueError("deg H must be positive")
    return degH


@dataclass(frozen=True)
class EBounds:
    nu: tuple
    e: tuple
    notes: tuple = ()

    @property
    def exact(self) -> bool:
        return self.nu[0] == self.nu[1] and self.e[0] == self.e[1]


def _certify_relation(data: ForcingData, relation: RelationVector) -> None:
    triple = list(data.generators) + [data.candidate]
    if len(relation.components) != 3:
        raise ValueError("need a relation for (f_1, f_2, f_0)")
    if not relation.verify(data.ring, triple):
        raise ValueError("relation does not annihilate (f_1, f_2, f_0)")
    if not relation.is_primary(data.ring):
        raise ValueError("relation components are not primary")


def e_bounds(data: ForcingData, degH: int | None = None, relation: RelationVector | None = None,
             candidate_in_ideal: bool | None = None) -> EBounds:
    """Intervals for the normalizing number and the e-invariant of P(f_1, f_2; f_0).

    A primary relation of total degree k for (f_1, f_2, f_0) tightens the
    upper bounds; it is re-verified here and rejected if it does not check.
    """
    if data.n != 2:
        raise ValueError("e-invariants are defined here for two generators")
    degH = _degH(data, degH)
    ell = leadno(data.degrees, data.d0)
    L = ell * degH
    notes = []
    if ell <= 0:
        return EBounds((0, 0), (-L, -L), ("nonpositive top self-intersection",))
    if candidate_in_ideal is None:
        candidate_in_ideal = solve_membership(data.ring, list(data.generators), data.candidate, data.d0) is not None
    nu_lo, nu_hi = 0, L if candidate_in_ideal else L - 1
    e_hi_extra = None
    if relation is not None:
        _certify_relation(data, relation)
        k = relation.total_degree
        d1, d2 = data.degrees
        total = d1 + d2 + data.d0
        if 2 * k == total:
            notes.append(f"primary relation of total degree {k} = half the degree sum")
            return EBounds((L // 2, L // 2), (0, 0), tuple(notes))
        a = max(k - data.d0, d1 + d2 - k)
        nu_hi = min(nu_hi, a * degH)
        e_hi_extra = abs(2 * k - total) * degH
        notes.append(f"primary relation of total degree {k}")
    e_lo, e_hi = 2 * nu_lo - L, 2 * nu_hi - L
    if e_hi_extra is not None:
        e_hi = min(e_hi, e_hi_extra)
    return EBounds((nu_lo, nu_hi), (e_lo, e_hi), tuple(notes))


@dataclass(frozen=True)
class IntersectionReport:
    m: int
    e: tuple
    e0: int
    ell: int
    degH: int
    z_top: int
    chern: tuple
    nu_bounds: tuple | None = None
    e_bounds: tuple | None = None
    notes: tuple = field(default=())

    def as_dict(self) -> dict:
        return {
            "m": self.m, "e": list(self.e), "e0": self.e0, "leadno": self.ell, "degH": self.degH,
            "z_top": self.z_top, "chern": list(self.chern),
            "nu_bounds": list(self.nu_bounds) if self.nu_bounds is not None else None,
            "e_bounds": list(self.e_bounds) if self.e_bounds is not None else None,
            "notes": list(self.notes),
        }


def build_report(data: ForcingData, degH: int | None = None,
                 relation: RelationVector | None = None) -> IntersectionReport:
    degH = _degH(data, degH)
    ell = leadno(data.degrees, data.d0)
    nu = e = None
    notes: tuple = ()
    if data.n == 2:
        b = e_bounds(data, degH, relation)
        nu, e, notes = b.nu, b.e, b.notes
    return IntersectionReport(data.twist, tuple(data.e), data.e0, ell, degH, ell * degH,
                              tuple(chern_polynomial(data.e, data.twist)), nu, e, notes)
