"""Graded pieces of relation modules and the search for primary relations."""
from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import linalg
from .membership import is_primary
from .poly import Poly
from .ring import GradedRing


@dataclass(frozen=True)
class RelationVector:
    """(g_1..g_n) with sum g_i f_i = 0 in R and deg g_i = k - deg f_i."""

    components: tuple
    total_degree: int

    def verify(self, ring: GradedRing, gens: Sequence[Poly]) -> bool:
        acc = Poly.zero(ring.p, ring.nvars)
        for g, f in zip(self.components, gens):
            acc = acc + g * f
        return ring.is_zero(acc)

    def is_primary(self, ring: GradedRing) -> bool:
        comps = [g for g in self.components if not g.is_zero()]
        return bool(comps) and is_primary(ring, comps)

    def is_zero(self) -> bool:
        return all(g.is_zero() for g in self.components)

    def scale(self, c: int) -> "RelationVector":
        return RelationVector(tuple(g * c for g in self.components), self.total_degree)

    def format(self, ring: GradedRing) -> list[str]:
        return [ring.fmt(g) for g in self.components]


def _relation_matrix(ring: GradedRing, gens: Sequence[Poly], k: int):
    M, sizes = ring.block_matrix(gens, k)
    return M, sizes


def _vector_to_relation(ring, gens, k, v, sizes) -> RelationVector:
    comps = ring.split_blocks(v, gens, k, sizes)
    return RelationVector(tuple(comps), k)


def _relation_coords(ring: GradedRing, gens: Sequence[Poly], rel: RelationVector) -> np.ndarray:
    k = rel.total_degree
    parts = [ring.coords(g, k - f.degree) for g, f in zip(rel.components, gens)
             if k - f.degree >= 0]
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)


def _normalize(rel: RelationVector, p: int) -> RelationVector:
    for g in rel.components:
        if not g.is_zero():
            c = g.leading_term()[1]
            return rel.scale(pow(c, -1, p)) if c != 1 else rel
    return rel


def relation_space(ring: GradedRing, gens: Sequence[Poly], k: int) -> list[RelationVector]:
    """Basis of Rel_k, the kernel of the map from the sum of R_{k - d_i} to R_k.

    Each vector is scaled so the first nonzero component is monic.
    """
    gens = list(gens)
    M, sizes = _relation_matrix(ring, gens, k)
    if M.shape[1] == 0:
        return []
    K = linalg.nullspace(M, ring.p) if M.shape[0] else np.eye(M.shape[1], dtype=np.int64)
    out = []
    for v in K:
        rel = _normalize(_vector_to_relation(ring, gens, k, v, sizes), ring.p)
        assert rel.verify(ring, gens), "relation basis vector does not re-multiply to zero"
        out.append(rel)
    return out


def relation_dim(ring: GradedRing, gens: Sequence[Poly], k: int) -> int:
    M, _ = _relation_matrix(ring, list(gens), k)
    if M.shape[1] == 0:
        return 0
    return M.shape[1] - linalg.rank(M, ring.p)


def _degree_one_products(ring, gens, rels: Sequence[RelationVector]) -> list[RelationVector]:
    out = []
    for rel in rels:
        for i in range(ring.nvars):
            x = ring.var(i)
            out.append(RelationVector(tuple(g * x for g in rel.components), rel.total_degree + 1))
    return out


@dataclass(frozen=True)
class GeneratorDegrees:
    """Minimal generator counts of the relation module by total degree.

    Over a quotient ring these are only a graded Betti window: degrees in
    [window[0], window[1]] are reported and nothing is claimed beyond.
    """

    counts: tuple
    window: tuple
    label: str = "graded Betti window"

    def as_dict(self) -> dict[int, int]:
        return dict(self.counts)

    def multiset(self) -> list[int]:
        return sorted(itertools.chain.from_iterable([k] * c for k, c in self.counts))


def minimal_generator_degrees(ring: GradedRing, gens: Sequence[Poly], k_max: int) -> GeneratorDegrees:
    """Count new relations in each degree: dim Rel_k - dim (R_1 * Rel_{k-1})."""
    gens = list(gens)
    degs = [g.degree for g in gens]
    if k_max < max(degs):
        raise ValueError("k_max must reach the top generator degree")
    k_min = min(degs)
    counts = []
    prev: list[RelationVector] = []
    for k in range(k_min, k_max + 1):
        cur = relation_space(ring, gens, k)
        if cur:
            if prev:
                prods = [_relation_coords(ring, gens, r) for r in _degree_one_products(ring, gens, prev)]
                old = linalg.rank(np.array(prods), ring.p)
            else:
                old = 0
            new = len(cur) - old
            if new:
                counts.append((k, new))
        prev = cur
    return GeneratorDegrees(tuple(counts), (k_min, k_max))


@dataclass(frozen=True)
class SplittingType:
    """Relation module of a primary sequence in F_p[x,y] as a sum of O(m - k_j)."""

    degrees: tuple
    twist: int
    generator_degrees: tuple

    @property
    def summands(self) -> tuple:
        return tuple(self.twist - k for k in self.degrees)

    @property
    def hirzebruch_index(self) -> int:
        return max(self.degrees) - min(self.degrees) if self.degrees else 0

    def component_degrees(self, index: int = -1) -> tuple:
        """Degrees of the component at ``index`` in a relation basis, k_j - d_index."""
        d = self.generator_degrees[index]
        return tuple(k - d for k in self.degrees)

    def determinant_ok(self) -> bool:
        n = len(self.generator_degrees)
        return sum(self.summands) == (n - 1) * self.twist - sum(self.generator_degrees)


def splitting_type_p1(ring: GradedRing, gens: Sequence[Poly], m: int) -> SplittingType:
    """Splitting type of the relation bundle on P^1 = Proj F_p[x,y]."""
    if ring.relation is not None or ring.nvars != 2:
        raise ValueError("splitting types need the polynomial ring in two variables")
    gens = list(gens)
    if not is_primary(ring, gens):
        raise ValueError("generators are not primary")
    k_max = sum(g.degree for g in gens)
    gd = minimal_generator_degrees(ring, gens, k_max)
    degrees = tuple(gd.multiset())
    st = SplittingType(degrees, m, tuple(g.degree for g in gens))
    # the relation module of a primary sequence over F_p[x,y] is free of rank n - 1
    assert len(degrees) == len(gens) - 1, f"expected {len(gens) - 1} generators, got {degrees}"
    assert st.determinant_ok(), "determinant identity failed"
    return st


@dataclass(frozen=True)
class RelationSearch:
    status: str  # "found", "no_relation_space" or "exhausted"
    relation: RelationVector | None
    degree: int
    seed: int
    attempts: int
    space_dim: int
    complete: bool = False  # every nonzero vector of Rel_k was tried

    @property
    def found(self) -> bool:
        return self.status == "found"


DEFAULT_BUDGET = 1000


def check_pairwise_primary(ring: GradedRing, gens: Sequence[Poly]) -> bool:
    return all(is_primary(ring, [a, b]) for a, b in itertools.combinations(gens, 2))


def find_primary_relation(ring: GradedRing, gens: Sequence[Poly], k: int,
                          budget: int = DEFAULT_BUDGET, seed: int = 0,
                          check_pairs: bool = True) -> RelationSearch:
    """Search Rel_k for a relation whose components generate a primary ideal.

    Basis vectors are tried first, then ``budget`` seeded random combinations.
    When Rel_k has at most ``budget`` nonzero vectors up to scaling they are
    all enumerated instead, so an empty result is a proof.
    """
    gens = list(gens)
    if check_pairs and not check_pairwise_primary(ring, gens):
        raise ValueError("generators must be pairwise primary")
    basis = relation_space(ring, gens, k)
    dim = len(basis)
    if dim == 0:
        return RelationSearch("no_relation_space", None, k, seed, 0, 0, True)
    attempts = 0
    for rel in basis:
        attempts += 1
        if rel.is_primary(ring):
            return RelationSearch("found", rel, k, seed, attempts, dim)
    p = ring.p
    vecs = np.array([_relation_coords(ring, gens, r) for r in basis], dtype=object)
    _, sizes = _relation_matrix(ring, gens, k)

    def build(coeffs) -> RelationVector:
        v = np.array([int(x) % p for x in np.dot(np.array(coeffs, dtype=object), vecs)], dtype=np.int64)
        return _normalize(_vector_to_relation(ring, gens, k, v, sizes), p)

    n_projective = (p**dim - 1) // (p - 1)
    if n_projective - dim <= budget:
        # enumerate one representative per line: first nonzero coordinate 1
        for lead in range(dim):
            for tail in itertools.product(range(p), repeat=dim - lead - 1):
                coeffs = [0] * lead + [1] + list(tail)
                if sum(1 for c in coeffs if c) == 1:
                    continue  # basis vectors were already tried
                attempts += 1
                rel = build(coeffs)
                if rel.is_primary(ring):
                    return RelationSearch("found", rel, k, seed, attempts, dim)
        return RelationSearch("exhausted", None, k, seed, attempts, dim, True)
    rng = random.Random(seed)
    for _ in range(budget):
        coeffs = [rng.randrange(p) for _ in range(dim)]
        if not any(coeffs):
            continue
        attempts += 1
        rel = build(coeffs)
        if rel.is_primary(ring):
            return RelationSearch("found", rel, k, seed, attempts, dim)
    return RelationSearch("exhausted", None, k, seed, attempts, dim)
