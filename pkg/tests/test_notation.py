import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chainfill.catalog import load_rows
from chainfill.exactalg import Mat2
from chainfill.manifolds import (FilledBlock, GraphManifold, LensSpace, SeifertBlock,
                                 SolidTorus, TorusBundle, validate)
from chainfill.notation import ParseError, parse_expr, parse_slopes, print_expr

from randexpr import random_expr


def test_parse_seifert_over_sphere():
    e = parse_expr("SFS(S2;(2,1),(3,1),(7,-6))")
    (b,) = e.blocks
    assert [(f.p, f.q) for f in b.fibers] == [(2, 1), (3, 1), (7, -6)]
    assert b.base.boundary == 0 and not e.gluings


def test_parse_self_gluing():
    e = parse_expr("SFS(A;(2,1)) /[0,1;1,0]")
    (g,) = e.gluings
    assert g.is_self and g.matrix == Mat2(0, 1, 1, 0)


def test_lens_zero_alias():
    assert parse_expr("L(0,1)") == LensSpace(0, 1)


def test_whitespace_insensitive():
    a = parse_expr("SFS(D;(2,1),(3,1)) =[1,1;0,-1]= SFS(D;(2,1),(3,1))")
    b = parse_expr("  SFS( D ; (2, 1) ,(3,1))=[ 1,1 ; 0,-1 ]=SFS(D;(2,1),(3,1)) ")
    assert a == b


def test_fibers_are_not_normalized_at_parse_time():
    assert print_expr(parse_expr("SFS(S2;(2,1),(3,1),(7,-6))")) == "SFS(S2;(2,1),(3,1),(7,-6))"


def test_print_aliases():
    assert print_expr(SolidTorus()) == "DxS1"
    assert print_expr(TorusBundle(Mat2(3, 1, -1, 0))) == "TB[3,1;-1,0]"
    assert parse_expr("DxS1") == SolidTorus()


def test_named_block_with_slopes():
    e = parse_expr("M6(-2,-1/2,.,1/2,2)")
    assert isinstance(e, FilledBlock) and e.name == "M6"
    # M6 has six cusps; the missing trailing entry is unfilled
    assert str(e.slopes) == "-2,-1/2,.,1/2,2,."
    assert print_expr(e) == "M6(-2,-1/2,.,1/2,2)"


def test_chain_of_products():
    e = parse_expr("PxS1 =[0,1;1,0]= PxS1 =[0,1;1,0]= PxS1")
    assert isinstance(e, GraphManifold) and len(e.blocks) == 3 and len(e.gluings) == 2


def test_general_graph_form_round_trip():
    text = "G{SFS(P;); SFS(A;(2,1)); SFS(A;) | 0.0-1.0:[0,1;1,0], 0.1-2.0:[0,1;1,0], 0.2-1.1:[0,1;1,0]}"
    e = parse_expr(text)
    assert len(e.gluings) == 3
    assert parse_expr(print_expr(e)) == e


def test_every_fixture_expression_round_trips():
    rows = load_rows()
    assert rows
    for r in rows:
        e = parse_expr(r.expr)
        assert validate(e) == []
        assert parse_expr(print_expr(e)) == e, r.id


def test_round_trip_random_expressions():
    rng = random.Random(5)
    for _ in range(1000):
        e = random_expr(rng)
        assert parse_expr(print_expr(e)) == e


def test_print_is_deterministic():
    e = parse_expr("SFS(D;(2,1),(2,1)) =[0,1;1,0]= SFS(D;(2,1),(3,1))")
    assert print_expr(e) == print_expr(parse_expr(print_expr(e)))


@pytest.mark.parametrize("text,pos", [
    ("SFS(S2;(2,1)", 12),
    ("L(2,", 4),
    ("SFS(Q;(1,1))", 4),
    ("TB[1,2;3]", 8),
])
def test_positioned_errors(text, pos):
    with pytest.raises(ParseError) as info:
        parse_expr(text)
    assert f"position {pos}" in str(info.value)


def test_invariant_violations_forwarded():
    with pytest.raises(ParseError, match="det must be -1"):
        parse_expr("SFS(D;(2,1)) =[1,1;0,1]= SFS(D;(2,1))")
    with pytest.raises(ParseError, match="non-coprime"):
        parse_expr("SFS(D;(2,4))")


@settings(max_examples=500, deadline=None)
@given(st.text(alphabet="SFDAPL()[];,=/#0123456789-xTBMKRGb{}|.: ", max_size=40))
def test_parser_is_total(text):
    try:
        parse_expr(text)
    except ParseError:
        pass


def test_parse_slopes_examples():
    t = parse_slopes("-2,-1/2,.,1/2,2")
    assert len(t) == 5 and t.unfilled == [2]
    assert parse_slopes("inf")[0] == parse_slopes("1/0")[0]
    assert (parse_slopes("inf")[0].p, parse_slopes("inf")[0].q) == (1, 0)
    s = parse_slopes("4/6")[0]
    assert (s.p, s.q) == (2, 3)


@pytest.mark.parametrize("bad", ["0/0", "", "1/x", "1,,2"])
def test_parse_slopes_rejects(bad):
    with pytest.raises(ParseError):
        parse_slopes(bad)


def test_seifert_block_port_count():
    e = parse_expr("SFS(P;(2,1))")
    (b,) = e.blocks
    assert isinstance(b, SeifertBlock) and len(b.ports()) == 3
