import itertools

import pytest
from hypothesis import given, strategies as st

from forcing.cohomology import normalizing_number_h
from forcing.geometry import build_report, chern_polynomial, e_bounds, leadno, self_intersection_top
from forcing.membership import ForcingData
from forcing.ring import GradedRing
from forcing.syzygy import RelationVector, find_primary_relation


def test_leadno_examples():
    assert leadno([2, 2, 2], 3) == 0
    assert leadno([1, 1], 3) == -1
    assert leadno([3, 5], 8) == 0


@given(st.lists(st.integers(0, 9), min_size=2, max_size=5), st.integers(0, 9))
def test_leadno_permutation_invariant(ds, d0):
    assert all(leadno(list(p), d0) == leadno(ds, d0) for p in itertools.permutations(ds))


def _elementary(es, k):
    return sum(eval("*".join(map(str, c)) or "1") for c in itertools.combinations(es, k))


@given(st.lists(st.integers(-6, 6), min_size=1, max_size=5), st.integers(-6, 6))
def test_chern_against_symmetric_functions(es, m):
    c = chern_polynomial(es, m)
    oracle = [sum((-1) ** i * _elementary(es, i) * m ** (k - i) for i in range(k + 1)) for k in range(len(es))]
    assert c == oracle
    if len(es) > 1:
        assert c[1] == m - sum(es)


def test_chern_small_cases():
    assert chern_polynomial([3], 3) == [1]
    assert chern_polynomial([2, 2, 2], 2) == [1, -4, 4]


def test_self_intersection(quartic5, cubic7):
    assert self_intersection_top(ForcingData.parse(quartic5, ["x", "y"], "z^3")) == -4
    P = GradedRing.parse(5, None, ("x", "y"))
    assert self_intersection_top(ForcingData.parse(P, ["x^4", "y^4", "x^4"], "x^3*y^3"), 1) == 0
    assert self_intersection_top(ForcingData.parse(cubic7, ["x", "y"], "z^2")) == 0
    with pytest.raises(ValueError):
        self_intersection_top(ForcingData.parse(GradedRing.parse(5, None, ("x", "y", "z")), ["x", "y"], "z"))


def test_e_bounds_nonpositive_leadno(quartic5):
    b = e_bounds(ForcingData.parse(quartic5, ["x", "y"], "z^3"))
    assert b.nu == (0, 0) and b.e == (4, 4)


def _relation(ring, data, k):
    s = find_primary_relation(ring, list(data.generators) + [data.candidate], k)
    assert s.found
    return s.relation


def test_e_zero_from_balanced_relation(cubic7, quartic5):
    d = ForcingData.parse(cubic7, ["x^2", "y^2"], "z^2")
    b = e_bounds(d, relation=_relation(cubic7, d, 3))
    assert b.e == (0, 0) and b.nu == (3, 3)
    d = ForcingData.parse(quartic5, ["x^3", "y^3"], "z^2")
    b = e_bounds(d, relation=_relation(quartic5, d, 4))
    assert b.e == (0, 0) and b.nu == (8, 8)


def test_unbalanced_relation_bound(quartic5):
    d = ForcingData.parse(quartic5, ["x^2", "y^2"], "z^2")
    b = e_bounds(d, relation=_relation(quartic5, d, 4))
    assert b.nu[1] <= 2 * 4 and b.e[1] <= 2 * 4
    nu = normalizing_number_h(d)
    assert b.nu[0] <= nu.nu_low <= b.nu[1]


def test_relation_certificate_is_required(cubic7):
    d = ForcingData.parse(cubic7, ["x^2", "y^2"], "z^2")
    x, y, z = (cubic7.poly(s) for s in "xyz")
    with pytest.raises(ValueError):
        e_bounds(d, relation=RelationVector((x, y, x), 3))
    with pytest.raises(ValueError):
        e_bounds(d, relation=RelationVector((x, x * 0, x * 0), 3))


def test_report_fields(quartic5):
    r = build_report(ForcingData.parse(quartic5, ["x", "y"], "z^3")).as_dict()
    assert r["z_top"] == -4 and r["leadno"] == -1 and r["degH"] == 4
    assert r["chern"] == [1, 3 - 2 - 2]
