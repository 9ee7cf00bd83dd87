import random

import pytest

from chainfill.exactalg import Mat2
from chainfill.manifolds import (BaseSurface, ConnectedSum, FiberPair, FilledBlock,
                                 FillingTuple, Gluing, GraphManifold, LensSpace,
                                 SeifertBlock, Slope, SolidTorus, TorusBundle,
                                 free_boundary_count, from_json, to_json, validate)
from chainfill.notation import parse_expr

from randexpr import random_expr

D = BaseSurface.named("D")


@pytest.mark.parametrize("name,triple", [
    ("S2", (True, 0, 0)), ("D", (True, 0, 1)), ("A", (True, 0, 2)), ("P", (True, 0, 3)),
    ("RP2", (False, 1, 0)), ("Mb", (False, 1, 1)), ("K", (False, 2, 0)),
])
def test_base_aliases(name, triple):
    b = BaseSurface.named(name)
    assert (b.orientable, b.genus, b.boundary) == triple


def test_validate_flags_bad_gluing_det():
    b = SeifertBlock(D, (FiberPair(2, 1),))
    G = GraphManifold((b, b), (Gluing((0, 0), (1, 0), Mat2(1, 1, 0, 1)),))
    (msg,) = validate(G)
    assert "gluing det must be -1" in msg and "gluing 0" in msg


def test_validate_flags_non_coprime_fiber():
    G = GraphManifold((SeifertBlock(D, (FiberPair(2, 4),)),), ())
    (msg,) = validate(G)
    assert "non-coprime" in msg and "block 0" in msg


def test_validate_accepts_self_glued_annulus():
    assert validate(parse_expr("SFS(A;(2,1)) /[0,1;1,0]")) == []


@pytest.mark.parametrize("expr,problem", [
    (ConnectedSum((LensSpace(2, 1),)), "at least two summands"),
    (LensSpace(4, 2), "non-coprime"),
    (TorusBundle(Mat2(0, 1, 1, 0)), "det must be +1"),
    (GraphManifold((SeifertBlock(BaseSurface(False, 0, 1)),), ()), "crosscap"),
    (GraphManifold((SeifertBlock(D), SeifertBlock(D)), ()), "disconnected"),
])
def test_validate_other_violations(expr, problem):
    assert any(problem in v for v in validate(expr))


def test_validate_port_reuse_and_missing_port():
    A = SeifertBlock(BaseSurface.named("A"))
    g = Mat2(0, 1, 1, 0)
    G = GraphManifold((A, A), (Gluing((0, 0), (1, 0), g), Gluing((0, 0), (1, 1), g)))
    assert any("used twice" in v for v in validate(G))
    G = GraphManifold((A, A), (Gluing((0, 5), (1, 0), g),))
    assert any("does not exist" in v for v in validate(G))


@pytest.mark.parametrize("text,count", [
    ("PxS1", 3),
    ("PxS1 =[0,1;1,0]= PxS1 =[0,1;1,0]= PxS1", 5),
    ("SFS(S2;(2,1),(3,1),(7,-6))", 0),
    ("SFS(D;(2,1),(2,1)) =[0,1;1,0]= SFS(D;(2,1),(3,1))", 0),
    ("M6(-2,-1/2,.,1/2,2)", 2),
    ("L(2,1) # PxS1", 3),
    ("DxS1", 1),
])
def test_free_boundary_count(text, count):
    assert free_boundary_count(parse_expr(text)) == count


def test_free_boundary_count_formula_on_graphs():
    rng = random.Random(3)
    n = 0
    while n < 300:
        e = random_expr(rng)
        if not isinstance(e, GraphManifold):
            continue
        n += 1
        ports = sum(b.base.boundary for b in e.blocks)
        assert free_boundary_count(e) == ports - 2 * len(e.gluings)


def test_slope_reduction():
    assert Slope(2, -4) == Slope(-1, 2)
    assert Slope(-1, 0) == Slope.infinity()
    with pytest.raises(ValueError):
        Slope(0, 0)


def test_filling_tuple_padding():
    t = FillingTuple((Slope(1, 1),))
    assert len(t.padded(3)) == 3 and t.padded(3).unfilled == [1, 2]
    with pytest.raises(ValueError):
        FillingTuple((Slope(1, 1),) * 3).padded(2)


def test_filled_block_checks_cusp_count():
    with pytest.raises(ValueError):
        FilledBlock("M2", FillingTuple((Slope(1, 1),) * 3))


def test_json_round_trip_random():
    rng = random.Random(11)
    for _ in range(300):
        e = random_expr(rng)
        assert from_json(to_json(e)) == e


def test_json_round_trip_other_kinds():
    for e in (SolidTorus(), LensSpace(0, 1), parse_expr("M7(-2,-2)")):
        assert from_json(to_json(e)) == e
