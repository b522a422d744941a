import pytest
from hypothesis import given, strategies as st

from forcing.membership import (ForcingData, InconclusiveError, colength, in_ideal, is_primary,
                                is_smooth_curve, solve_membership)
from forcing import linalg
from forcing.ring import GradedRing


def test_candidate_equal_to_generator(cubic7):
    cert = in_ideal(ForcingData.parse(cubic7, ["x^2", "y^2", "z^2"], "x^2"))
    assert [cubic7.fmt(a) for a in cert.cofactors] == ["1", "0", "0"]


def test_nonmembers(cubic7):
    assert in_ideal(ForcingData.parse(cubic7, ["x", "y"], "z^2")) is None
    assert in_ideal(ForcingData.parse(cubic7, ["x^2", "y^2", "z^2"], "x*y*z")) is None


def test_certificate_remultiplies(quartic5):
    d = ForcingData.parse(quartic5, ["x^2", "y^2", "z^2"], "x^2*y + z^3 - y^3")
    cert = in_ideal(d)
    assert cert is not None and cert.verify(quartic5, d.generators, d.candidate)


def test_forcing_data_validation(cubic7):
    with pytest.raises(ValueError):
        ForcingData.parse(cubic7, ["x"], "y")
    with pytest.raises(ValueError):
        ForcingData.parse(cubic7, ["x", "y + z^2"], "z")
    with pytest.raises(ValueError):
        ForcingData(cubic7, (cubic7.poly("x"), cubic7.poly("y")), cubic7.poly("0"))
    d = ForcingData.parse(cubic7, ["x", "y^2"], "z^3")
    assert d.twist == 3 and d.e == [2, 1] and d.e0 == 0
    assert ForcingData.parse(cubic7, ["x", "y^2"], "z^3", twist=5).e == [4, 3]


def test_is_primary_examples(cubic7, quartic5):
    xyz = [cubic7.poly(s) for s in "xyz"]
    assert is_primary(cubic7, xyz)
    assert is_primary(cubic7, xyz[:2])
    assert colength(cubic7, xyz[:2], 3) == 0
    assert colength(cubic7, xyz[:2], 2) == 1
    assert not is_primary(quartic5, [quartic5.poly("x"), quartic5.poly("x^2")])
    with pytest.raises(InconclusiveError):
        is_primary(cubic7, [cubic7.poly("x^3"), cubic7.poly("y")], n_max=2)


def test_smoothness():
    assert is_smooth_curve(GradedRing.parse(5, "x^3 + y^3 + z^3"))
    assert not is_smooth_curve(GradedRing.parse(3, "x^3 + y^3 + z^3"))
    assert is_smooth_curve(GradedRing.parse(5, "x^4 + y^4 + z^4"))
    assert not is_smooth_curve(GradedRing.parse(7, "y^2*z - x^3"))


def test_colength_matches_rank(quartic5):
    gens = [quartic5.poly(s) for s in ("x^2", "x*y", "z^3")]
    for n in range(8):
        M, _ = quartic5.block_matrix(gens, n)
        r = linalg.rank(M, 5) if M.shape[1] else 0
        assert colength(quartic5, gens, n) == quartic5.dim(n) - r


SMALL = ["x", "y", "z", "x^2", "y*z", "x*y + z^2", "y^2", "x^3 + z^3", "z^2 - x*y"]


@given(st.lists(st.sampled_from(SMALL), min_size=1, max_size=3, unique=True), st.sampled_from(SMALL))
def test_primary_is_monotone(cubic7_strings, extra):
    R = GradedRing.parse(7, "x^3 + y^3 + z^3")
    gens = [R.poly(s) for s in cubic7_strings]
    window = 12
    if is_primary(R, gens, window):
        assert is_primary(R, gens + [R.poly(extra)], window)


@given(st.lists(st.sampled_from(SMALL), min_size=2, max_size=3, unique=True), st.sampled_from(SMALL),
       st.sampled_from(["x^3", "x*y*z", "z^3", "y^2*z", "x^4", "x*y^3"]))
def test_membership_is_monotone(gens_s, extra, target_s):
    R = GradedRing.parse(7, "x^3 + y^3 + z^3")
    gens = [R.poly(s) for s in gens_s]
    target = R.poly(target_s)
    cert = solve_membership(R, gens, target)
    if cert is not None:
        bigger = gens + [R.poly(extra)]
        cert2 = solve_membership(R, bigger, target)
        assert cert2 is not None and cert2.verify(R, bigger, target)
