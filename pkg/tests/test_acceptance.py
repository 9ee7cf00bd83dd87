"""Acceptance criteria 1-10.

Each test carries a ``criterion`` marker; the conftest hook prints one
PASS/FAIL line per criterion at the end of the run.
"""

import itertools
import random
import time

import pytest

from chainfill import catalog
from chainfill.catalog import (TABLE_TALLIES, b_matrix, c_matrix, classify_double_annulus,
                               classify_self_glue, classify_three_block, classify_two_block,
                               coprime_pairs, flat_reachability, load_rows, shape, shape_fits,
                               tallies, thm27_matrix_reachable, three_torus_unreachable,
                               verify_catalog)
from chainfill.chains import check_identity, identities
from chainfill.exactalg import AbelianGroup, Mat2, parse_group
from chainfill.homology import h1
from chainfill.manifolds import GraphManifold, Slope
from chainfill.moves import Move, MoveError, apply_move, normalize
from chainfill.notation import parse_expr, parse_slopes, print_expr
from chainfill.symmetry import (CuspSymmetry, act, canonical_rep, close, factors,
                                family_generators, family_group, orbit)

from randexpr import move_instances, random_expr
from test_homology import ANCHOR_4, ANCHOR_35, WRONG, det, two_block_relations


def say(n, ok, detail):
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})")


# ----------------------------------------------------------------------------


@pytest.mark.criterion(1, "three-way homology check of every fixture row")
def test_c1_table_verification():
    t0 = time.perf_counter()
    reports = verify_catalog()
    elapsed = time.perf_counter() - t0
    failed = [r.summary() for r in reports if not r.passed]
    ok = not failed and elapsed < 10
    say(1, ok, f"{len(reports) - len(failed)}/{len(reports)} rows, {elapsed:.1f}s")
    assert elapsed < 10
    assert not failed, "\n".join(failed)


@pytest.mark.criterion(2, "calibration anchors and rejected conventions")
def test_c2_calibration_anchors():
    z35, z4 = AbelianGroup(0, (35,)), AbelianGroup(0, (4,))
    # route 1: the library
    lib = (h1(parse_expr(ANCHOR_35)), h1(parse_expr(ANCHOR_4)))
    # route 2: hand-built presentation determinants
    dets = (abs(det(two_block_relations(((2, 1), (3, 1)), ((2, 1), (3, 1)), (1, 1, 0, -1)))),
            abs(det(two_block_relations(((2, 1), (2, 1)), ((2, 1), (3, 1)), (0, 1, 1, 0)))))
    wrong = {c: (h1(parse_expr(ANCHOR_35), c), h1(parse_expr(ANCHOR_4), c)) for c in WRONG}
    ok = lib == (z35, z4) and dets == (35, 4) and all(w != (z35, z4) for w in wrong.values())
    say(2, ok, f"anchors {lib[0]}, {lib[1]}; determinants {dets}")
    assert lib == (z35, z4)
    assert dets == (35, 4)
    for c, w in wrong.items():
        assert w != (z35, z4), c


@pytest.mark.criterion(3, "move soundness over 1000 instances per move")
def test_c3_move_soundness():
    rng = random.Random(77)
    for mid in range(1, 12):
        inst = move_instances(rng, mid, 1000)
        assert len(inst) == 1000
        for e, m in inst:
            after = apply_move(e, m)
            assert h1(after) == h1(e), (mid, print_expr(e))
            n = normalize(after)
            assert normalize(n) == n, (mid, print_expr(e))
    rejected = 0
    while rejected < 1000:
        e = random_expr(rng)
        if not isinstance(e, GraphManifold):
            continue
        for j, g in enumerate(e.gluings):
            if g.is_self:
                with pytest.raises(MoveError):
                    apply_move(e, Move(5, gluing=j))
                rejected += 1
        if not any(g.is_self for g in e.gluings):
            selfglued = parse_expr(f"SFS(A;({rng.randint(2, 7)},1)) /[0,1;1,0]")
            with pytest.raises(MoveError):
                apply_move(selfglued, Move(5, gluing=0))
            rejected += 1
    say(3, True, f"11 moves x 1000 instances, {rejected} self-gluings rejected by move 5")


@pytest.mark.criterion(4, "torus bundle homology")
def test_c4_torus_bundles():
    a = h1(parse_expr("TB[3,1;-1,0]"))
    b = h1(parse_expr("TB[-3,1;-1,0]"))
    # independent route: H1 of a mapping torus is Z + coker(A - I)
    from chainfill.exactalg import cokernel
    ca = cokernel([[3 - 1, 1], [-1, 0 - 1]])
    cb = cokernel([[-3 - 1, 1], [-1, 0 - 1]])
    ok = a == parse_group("Z") and b == parse_group("Z x Z5")
    say(4, ok, f"{a}, {b}")
    assert a == parse_group("Z") and ca.free_rank == 0 and ca.torsion == ()
    assert b == parse_group("Z x Z5") and cb.torsion == (5,)


@pytest.mark.criterion(5, "3-torus unreachable and every [[-1,0],[a,-1]] found, bound 20")
def test_c5_corollaries():
    bound = 20
    t0 = time.perf_counter()
    unreachable = three_torus_unreachable(bound)
    rep = flat_reachability(bound)
    elapsed = time.perf_counter() - t0
    # second route: build each monodromy as a product of elementary matrices
    flip = Mat2(-1, 0, 0, 1)
    found, identity_hits = set(), 0
    rng = range(-bound, bound + 1)
    for m, n, f in itertools.product(rng, rng, rng):
        C = flip @ Mat2(1, 0, -n, 1) @ Mat2(1, f, 0, -1) @ Mat2(1, 0, m, 1)
        identity_hits += C == Mat2(1, 0, 0, 1)
        if (C.a, C.b, C.d) == (-1, 0, -1):
            found.add(C.c)
    ok = (unreachable and not rep.identity_found and not rep.missing_a
          and identity_hits == 0 and found >= set(rng) and elapsed < 5)
    say(5, ok, f"identity absent, all |a| <= {bound} found, {elapsed:.2f}s")
    assert unreachable and not rep.identity_found and identity_hits == 0
    assert not rep.missing_a and found >= set(rng)
    assert elapsed < 5


@pytest.mark.criterion(6, "det -1 gluing matrix test against generator compositions")
def test_c6_thm27_matrices():
    # entries of B = L(-n) [[1,f],[0,-1]] L(m) bound |f| <= 10 and |m|,|n| <= 11 here
    oracle = set()
    for m, n in itertools.product(range(-11, 12), repeat=2):
        for f in range(-10, 11):
            B = Mat2(1, 0, -n, 1) @ Mat2(1, f, 0, -1) @ Mat2(1, 0, m, 1)
            for M in (B, -B):
                if max(map(abs, (M.a, M.b, M.c, M.d))) <= 10:
                    oracle.add(M)
    checked = disagree = 0
    r = range(-10, 11)
    for a, b, c in itertools.product(r, r, r):
        for d in r:
            if a * d - b * c != -1:
                continue
            M = Mat2(a, b, c, d)
            checked += 1
            disagree += thm27_matrix_reachable(M) != (M in oracle)
    say(6, disagree == 0, f"{checked - disagree}/{checked} agree")
    assert checked > 0 and disagree == 0


# ----------------------------------------------------------------------------
# criterion 7


def _blocks(pairs):
    return list(itertools.combinations_with_replacement(pairs, 2))


def _labels_two_block(bound):
    """Labels over orbit representatives under fiber and block swaps."""
    blocks = _blocks(coprime_pairs(bound))
    hist = {}
    for L, R in itertools.combinations_with_replacement(blocks, 2):
        lab = classify_two_block(*L[0], *L[1], *R[0], *R[1], outputs=False).label
        hist[lab] = hist.get(lab, 0) + 1
    return hist


def _labels_three_block(bound):
    pairs = coprime_pairs(bound)
    blocks = _blocks(pairs)
    hist = {}
    for L, R in itertools.combinations_with_replacement(blocks, 2):
        for e, f in pairs:
            lab = classify_three_block(*L[0], *L[1], e, f, *R[0], *R[1], outputs=False).label
            hist[lab] = hist.get(lab, 0) + 1
    return hist


def _check_h1(kind, c):
    return h1(c.output) == h1(c.input) and shape_fits(kind, c.label, shape(c.output))


@pytest.mark.slow
@pytest.mark.criterion(7, "case classifiers exhaustive to bound 6 with H1 agreement")
def test_c7_classifiers():
    bound = 6
    pairs = coprime_pairs(bound)
    notes, gaps = [], []

    # self-gluing and double annulus: exhaustive, labels and H1
    for kind, fn, k, valid in (("self_glue", classify_self_glue, 1, {1, 2, 3}),
                               ("double_annulus", classify_double_annulus, 2, {1, 2, 3, 4})):
        n = 0
        for ps in itertools.product(pairs, repeat=k):
            c = fn(*itertools.chain.from_iterable(ps))
            assert c.label in valid
            if kind == "self_glue":
                assert h1(c.output) == h1(c.input), ps
            else:
                assert _check_h1(kind, c), ps
            n += 1
        notes.append(f"{kind}: {n} inputs, labels and H1 exhaustive")

    # two blocks: labels exhaustive over swap-orbit representatives
    hist25 = _labels_two_block(bound)
    assert set(hist25) <= {1, 2, 3, 4, 5}
    assert 3 in hist25 and 4 in hist25, "sporadic cases not hit"
    rng = random.Random(7)
    for _ in range(300):
        a, b, c, d = (rng.choice(pairs) for _ in range(4))
        lab = classify_two_block(*a, *b, *c, *d, outputs=False).label
        assert classify_two_block(*b, *a, *d, *c, outputs=False).label == lab
        assert classify_two_block(*c, *d, *a, *b, outputs=False).label == lab
    notes.append(f"two_block: {sum(hist25.values())} representatives labelled {dict(sorted(hist25.items()))}")

    # three blocks: labels exhaustive only at bound 4
    hist28 = _labels_three_block(4)
    assert set(hist28) == set(range(1, 9))
    notes.append(f"three_block: {sum(hist28.values())} representatives at bound 4 labelled")
    gaps.append("three_block labels beyond bound 4")

    # H1 for two and three blocks sampled at bound 6, sporadic cases forced in
    twos = [p for p in pairs if p[0] == 2]
    sampled = 0
    for kind, fn, k in (("two_block", classify_two_block, 4), ("three_block", classify_three_block, 5)):
        for _ in range(400):
            ps = [rng.choice(twos if rng.random() < 0.4 else pairs) for _ in range(k)]
            c = fn(*itertools.chain.from_iterable(ps))
            assert _check_h1(kind, c), (kind, ps)
            sampled += 1
    for label in (3, 4):
        hit = next(itertools.chain.from_iterable(
            (classify_two_block(2, b, 2, d, e, f, g, h)
             for (e, f), (g, h) in itertools.product(pairs, repeat=2)
             if classify_two_block(2, b, 2, d, e, f, g, h, outputs=False).label == label)
            for b, d in itertools.product((1, -1, 3, -3, 5, -5), repeat=2)))
        assert _check_h1("two_block", hit)
    notes.append(f"H1 sampled on {sampled} inputs of two_block/three_block, sporadic cases verified")
    gaps.append("exhaustive H1 for two_block and three_block at bound 6")

    say(7, not gaps, "; ".join(notes) + ("; not executed: " + ", ".join(gaps) if gaps else ""))
    assert not gaps, ("not executed within the test budget: " + ", ".join(gaps)
                      + " (see decisions ledger)")


@pytest.mark.criterion(8, "symmetry orbits, group axioms and factoring status")
def test_c8_symmetry():
    gens = family_generators("M5")
    c1 = [g for g in gens if g.perm == tuple(range(5)) and g.maps[0].matrix == Mat2(0, 1, -1, 1)]
    assert len(c1) == 1
    g = close(c1)
    orb = {t[0] for t in orbit(g, parse_slopes("-1").padded(5))}
    assert orb == {Slope(-1, 1), Slope(1, 2), Slope(2, 1)}

    group = family_group("M5")
    elems = sorted(group.elements, key=repr)
    rng = random.Random(8)
    seen = {}
    for _ in range(1000):
        t = parse_slopes(",".join(rng.choice(["-1", "2", "1/2", "3/2", "0", "inf", "."])
                                  for _ in range(5)))
        a, b = rng.choice(elems), rng.choice(elems)
        assert act(a @ b, t) == act(a, act(b, t))
        assert act(CuspSymmetry.identity(5), t) == t
        o = frozenset(orbit(group, t))
        assert group.order % len(o) == 0
        assert canonical_rep(group, act(a, t)) == canonical_rep(group, t)
        for u in o:
            assert seen.setdefault(u, o) == o

    rows = load_rows()
    assert not [r.id for r in rows if factors(r.family, parse_slopes(r.slopes))]
    left = [parse_expr(i.left) for i in identities() if i.source == "table 8"]
    n_left = [e for e in left if e.name.startswith("N")]
    assert n_left and all(factors(e.name, e.slopes) for e in n_left)
    say(8, True, f"orbit {{-1, 1/2, 2}}; {len(rows)} rows non-factoring; "
                 f"{len(n_left)} identity tuples factor")


@pytest.mark.criterion(9, "homology agreement of the identities")
def test_c9_identities():
    ids = identities()
    reports = [check_identity(i) for i in ids]
    bad = [f"{r.identity.left} = {r.identity.right}" for r in reports if not r.agree]
    assert any(i.left == "M7(-2,-2)" and i.right == "N6(-3)" for i in ids)
    t8 = sum(1 for i in ids if i.source == "table 8")
    say(9, not bad, f"{len(ids) - len(bad)}/{len(ids)} agree, {t8} from table 8")
    assert not bad


@pytest.mark.criterion(10, "non-reproducible counts stated; tallies reproduced")
def test_c10_tallies():
    got = tallies()
    for name, expected in TABLE_TALLIES.items():
        assert got[name] == expected, name
    n_total = sum(sum(got[n].values()) for n in ("N3", "N4", "N5", "N6"))
    m_total = sum(sum(got[f"M{i}"].values()) for i in range(1, 7))
    assert (n_total, m_total) == (21, 84)
    # fixture row count by table matches what criterion 1 checks
    assert len(load_rows()) == len(verify_catalog())
    say(10, True, "exceptional-filling counts and hyperbolicity verdicts need verified "
                  "Dehn-filling software and unpublished data, so they are not recomputed; "
                  f"tallies 3+3+5+10 = {n_total} and {m_total} generators reproduced")
