import random

import pytest

from chainfill.catalog import load_rows
from chainfill.chains import family, identities
from chainfill.exactalg import Mat2
from chainfill.manifolds import FillingTuple, Slope
from chainfill.notation import parse_expr, parse_slopes
from chainfill.symmetry import (CuspSymmetry, GroupTooLarge, SlopeMap, act, canonical_rep,
                                close, factor_check, factors, family_group, orbit)

C1 = Mat2(0, 1, -1, 1)
C2 = Mat2(-1, 1, -1, 0)


def s(text):
    return parse_slopes(text)


def random_tuple(rng, n):
    out = []
    for _ in range(n):
        r = rng.random()
        if r < 0.15:
            out.append(None)
        elif r < 0.25:
            out.append(Slope.infinity())
        else:
            out.append(Slope(rng.randint(-6, 6), rng.randint(1, 5)))
    return FillingTuple(tuple(out))


def test_slope_map_c1_on_minus_one():
    assert SlopeMap(C1)(Slope(-1, 1)) == Slope(1, 2)


def test_slope_map_projective():
    assert SlopeMap(C1) == SlopeMap(-C1)
    with pytest.raises(ValueError):
        SlopeMap(Mat2(2, 0, 0, 1))


def test_c1_c2_relation():
    assert C1 @ C2 == Mat2(-1, 0, 0, -1)
    assert (SlopeMap(C1) @ SlopeMap(C2)).is_identity


def test_orbit_of_minus_one_under_c1():
    g = close([CuspSymmetry((0,), (SlopeMap(C1),))])
    assert g.order == 3
    assert {t[0] for t in orbit(g, s("-1"))} == {Slope(-1, 1), Slope(1, 2), Slope(2, 1)}


def test_identity_action():
    t = s("-2,-2,-2")
    assert act(CuspSymmetry.identity(3), t) == t


def test_rotation():
    rot = CuspSymmetry.from_cycles(7, [list(range(7))])
    t = s("1,2,3,4,5,6,7")
    assert act(rot, t) == s("7,1,2,3,4,5,6")


def test_act_length_mismatch():
    with pytest.raises(ValueError):
        act(CuspSymmetry.identity(3), s("1,2"))


def test_close_dihedral_14():
    rot = CuspSymmetry.from_cycles(7, [list(range(7))])
    ref = CuspSymmetry.from_cycles(7, [[1, 6], [2, 5], [3, 4]])
    assert close([rot, ref]).order == 14
    assert close([], cusps=3).order == 1
    assert close([CuspSymmetry.identity(4)]).order == 1


def test_close_limits():
    rot = CuspSymmetry.from_cycles(7, [list(range(7))])
    with pytest.raises(GroupTooLarge):
        close([rot], max_size=3)
    with pytest.raises(ValueError):
        close([rot], max_size=0)
    with pytest.raises(ValueError):
        close([rot], declared_order=5)


def test_family_groups():
    assert family_group("M7").order == 14
    assert family_group("M5").order == 30
    assert family_group("M3").order == 6


@pytest.mark.parametrize("name", ["M3", "M5", "M7", "N4"])
def test_group_axioms_on_random_tuples(name):
    g = family_group(name)
    elems = sorted(g.elements, key=repr)
    rng = random.Random(name)
    n = family(name).cusp_count
    for _ in range(1000):
        t = random_tuple(rng, n)
        a, b = rng.choice(elems), rng.choice(elems)
        assert act(a @ b, t) == act(a, act(b, t))
        assert act(CuspSymmetry.identity(n), t) == t
        orb = orbit(g, t)
        assert g.order % len(orb) == 0
        assert canonical_rep(g, act(a, t)) == canonical_rep(g, t)
        assert act(a, t) in orb


def test_orbits_partition():
    g = family_group("M5")
    rng = random.Random(3)
    tuples = {random_tuple(rng, 5) for _ in range(200)}
    for t in list(tuples):
        tuples |= orbit(g, t)
    seen = {}
    for t in tuples:
        o = frozenset(orbit(g, t))
        for u in o:
            assert seen.setdefault(u, o) == o


def test_all_infinity_orbit_is_itself():
    g = family_group("M7")
    t = FillingTuple((Slope.infinity(),) * 7)
    assert orbit(g, t) == {t}


def test_canonical_order():
    g = family_group("M3")
    assert canonical_rep(g, s("2,inf,.")) == s(".,inf,2")


@pytest.mark.parametrize("name,text,expected", [
    ("M6", "2,2,1", True),
    ("M6", "-2,-1/2,.,1/2,2", False),
    ("M7", "-2,-2,0,0,0,0,0", True),
    ("M7", "0,0,0,0,0,-2,-2", True),
    ("M7", "-2,0,0,0,0,0,-2", True),
    ("M7", "-2,.,-2", False),
    ("N5", "2,2,2,2,2", False),
    ("M5", "2,3", True),
    ("M4", "3/2", True),
    ("W", "-1,2", True),
    ("N6", "-3", False),
])
def test_factors_examples(name, text, expected):
    assert factors(name, s(text)) is expected


def test_factor_reasons():
    assert str(factor_check("M7", s("-2,-2,0,0,0,0,0"))) == "factors: true (pair (-2,-2) consecutive)"
    assert str(factor_check("M6", s("1"))) == "factors: true (slope 1)"
    assert str(factor_check("M7", s("-2,.,-2"))) == "factors: false (no factoring slope)"


def test_factoring_is_orbit_invariant():
    rng = random.Random(21)
    for name in ("M4", "M6", "M7", "N5"):
        g = family_group(name)
        n = family(name).cusp_count
        for _ in range(200):
            t = random_tuple(rng, n)
            assert {factors(name, u) for u in orbit(g, t)} == {factors(name, t)}


def test_fixture_rows_do_not_factor():
    for r in load_rows():
        assert not factors(r.family, s(r.slopes)), r.id


def test_table8_left_sides_factor():
    checked = 0
    for ident in identities():
        if ident.source != "table 8":
            continue
        e = parse_expr(ident.left)
        if e.name.startswith("N"):
            assert factors(e.name, e.slopes), ident
            checked += 1
    assert checked == 15
