"""Rewrite moves on manifold expressions, normal forms and equivalence.

Moves are numbered 1..11 as in the classical list of notation ambiguities:

1. reverse the orientation (all fibers ``(a, b) -> (a, -b)``)
2. shift ``k`` between two fibers of a block
3. shift one fiber by ``k`` when the block has a free boundary torus
4. drop (or insert) a trivial fiber ``(1, 0)``
5. negate the matrix of a gluing between distinct blocks
6. shift a fiber of the left block of a gluing, compensated in the matrix
7. the same for the right block
8. refiber a left block ``(D,(2,1),(2,1))`` as the circle bundle over the
   Moebius band (and back)
9. the same for a right block
10. a closed block with a ``(0, 1)`` fiber splits into a connected sum
11. a bounded block with a ``(0, 1)`` fiber degenerates, filling its
    neighbours

:func:`normalize` applies the moves towards a canonical representative and
:func:`equivalent` compares two expressions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import factorial, gcd

from .exactalg import Mat2, Verdict, format_group, gl2_conjugate
from .manifolds import (
    BaseSurface,
    ConnectedSum,
    FiberPair,
    FilledBlock,
    FillingTuple,
    Gluing,
    GraphManifold,
    LensSpace,
    S2xS1,
    S3,
    SeifertBlock,
    Slope,
    SolidTorus,
    TorusBundle,
    free_boundary_count,
)

DISK = BaseSurface(True, 0, 1)
ANNULUS = BaseSurface(True, 0, 2)
SPHERE = BaseSurface(True, 0, 0)
MOEBIUS = BaseSurface(False, 1, 1)

# change of boundary basis across a product collar A x S1
_COLLAR = Mat2(-1, 0, 0, 1)

# label tie-groups are permuted exhaustively only up to this many orders
_MAX_ORDERS = 720


class MoveError(ValueError):
    """The requested move does not apply at the given site."""


@dataclass(frozen=True)
class Move:
    """A move and its site.

    ``block``/``fiber``/``fiber2`` address fibers (moves 2, 3, 4, 10, 11);
    ``gluing`` addresses a gluing (moves 5-9); ``k`` is the shift.
    """

    id: int
    block: int | None = None
    fiber: int | None = None
    fiber2: int | None = None
    gluing: int | None = None
    k: int = 0


def fiber_intersection(gluing):
    """Geometric intersection of the two fibers at a gluing: ``|n|``."""
    M = gluing.matrix if isinstance(gluing, Gluing) else gluing
    return abs(M.b)


# ----------------------------------------------------------------------------
# small helpers


def _shear(k):
    return Mat2(1, 0, k, 1)


def _is_seifert(b):
    return isinstance(b, SeifertBlock)


def _is_d22(b):
    return (_is_seifert(b) and b.base == DISK
            and sorted((f.p, f.q) for f in b.fibers if abs(f.p) != 1) == [(2, 1), (2, 1)])


def _is_mb(b):
    return (_is_seifert(b) and b.base == MOEBIUS
            and all(abs(f.p) == 1 for f in b.fibers))


def _with_fibers(b, fibers):
    return SeifertBlock(b.base, tuple(fibers))


def _replace(G, i, block):
    blocks = list(G.blocks)
    blocks[i] = block
    return GraphManifold(tuple(blocks), G.gluings)


def _set_gluing(G, j, gluing):
    gl = list(G.gluings)
    gl[j] = gluing
    return GraphManifold(G.blocks, tuple(gl))


def _transfer(g, side):
    """``M`` with ``basis(side) = basis(other side) . M``."""
    return g.matrix if side == g.left else g.matrix.inverse()


def _fill(block, port, p, q):
    """Fill one port of a block; Seifert ports are removed later by _prune."""
    if _is_seifert(block):
        return _with_fibers(block, block.fibers + (FiberPair(p, q),))
    entries = list(block.slopes)
    entries[port] = Slope(p, q)
    return FilledBlock(block.name, FillingTuple(tuple(entries)))


def _prune(blocks, gluings, removed, dropped):
    """Rebuild a graph after removing Seifert ports and whole blocks.

    Returns the graph and the old -> new block index map.
    """
    index, out_blocks, port_maps = {}, [], {}
    for i, b in enumerate(blocks):
        if i in dropped:
            continue
        gone = removed.get(i, set())
        if _is_seifert(b):
            alive = [k for k in range(b.base.boundary) if k not in gone]
            port_maps[i] = {k: n for n, k in enumerate(alive)}
            b = SeifertBlock(BaseSurface(b.base.orientable, b.base.genus, len(alive)),
                             b.fibers)
        else:
            port_maps[i] = {k: k for k in b.ports()}
        index[i] = len(out_blocks)
        out_blocks.append(b)
    out = []
    for g in gluings:
        (i, k), (j, l) = g.left, g.right
        out.append(Gluing((index[i], port_maps[i][k]), (index[j], port_maps[j][l]),
                          g.matrix))
    return GraphManifold(tuple(out_blocks), tuple(out)), index


def _subgraph(G, members):
    members = sorted(members)
    index = {old: new for new, old in enumerate(members)}
    blocks = tuple(G.blocks[i] for i in members)
    gl = tuple(Gluing((index[g.left[0]], g.left[1]), (index[g.right[0]], g.right[1]),
                      g.matrix) for g in G.gluings if g.left[0] in index)
    if len(blocks) == 1 and not gl and isinstance(blocks[0], FilledBlock):
        return blocks[0]
    return GraphManifold(blocks, gl)


def _is_sphere(e):
    return isinstance(e, LensSpace) and abs(e.p) == 1


def _combine(parts):
    flat = []
    for p in parts:
        if isinstance(p, ConnectedSum):
            flat.extend(p.parts)
        elif not _is_sphere(p):
            flat.append(p)
    flat = [p for p in flat if not _is_sphere(p)]
    if not flat:
        return S3
    if len(flat) == 1:
        return flat[0]
    return ConnectedSum(tuple(flat))


def _bridge_side(G, j):
    """Blocks on the right side of gluing ``j`` once it is cut, or None."""
    rest = GraphManifold(G.blocks, G.gluings[:j] + G.gluings[j + 1:])
    g = G.gluings[j]
    for comp in rest.components():
        if g.right[0] in comp:
            return None if g.left[0] in comp else set(comp)
    return None


def _negate_blocks(G, side):
    """Apply -I to every port of the blocks in ``side``."""
    gl = []
    for g in G.gluings:
        flips = (g.left[0] in side) + (g.right[0] in side)
        gl.append(Gluing(g.left, g.right, -g.matrix if flips == 1 else g.matrix))
    return GraphManifold(G.blocks, tuple(gl))


# ----------------------------------------------------------------------------
# orientation reversal


def mirror(expr):
    """Reverse the orientation of an expression (move 1)."""
    if isinstance(expr, GraphManifold):
        if any(not _is_seifert(b) for b in expr.blocks):
            raise MoveError("move 1: orientation reversal of a cusped block is not "
                            "an expression in the registry")
        blocks = tuple(_with_fibers(b, tuple(FiberPair(f.p, -f.q) for f in b.fibers))
                       for b in expr.blocks)
        gl = tuple(Gluing(g.left, g.right,
                          Mat2(g.matrix.a, -g.matrix.b, -g.matrix.c, g.matrix.d))
                   for g in expr.gluings)
        return GraphManifold(blocks, gl)
    if isinstance(expr, LensSpace):
        return LensSpace(expr.p, -expr.q)
    if isinstance(expr, TorusBundle):
        A = expr.monodromy
        return TorusBundle(Mat2(A.a, -A.b, -A.c, A.d))
    if isinstance(expr, ConnectedSum):
        return ConnectedSum(tuple(mirror(p) for p in expr.parts))
    if isinstance(expr, SolidTorus):
        return expr
    raise MoveError("move 1: orientation reversal of a cusped block is not "
                    "an expression in the registry")


# ----------------------------------------------------------------------------
# degenerate fibers (moves 10, 11)


def _degenerate(G, i):
    X = G.blocks[i]
    zero = next(j for j, f in enumerate(X.fibers) if f.p == 0)
    summands = [LensSpace(f.p, f.q) for j, f in enumerate(X.fibers) if j != zero]
    # each handle gives two S2 x S1 summands, each crosscap one
    summands += [S2xS1] * (X.base.genus * (2 if X.base.orientable else 1))
    blocks = list(G.blocks)
    removed, keep, neighbours = {}, [], []
    used = 0
    for g in G.gluings:
        A = g.matrix
        if g.left[0] == i and g.right[0] == i:
            summands += [LensSpace(A.b, A.d), S2xS1]
            used += 2
            continue
        if g.left[0] == i:
            (j, l), slope = g.right, (A.b, A.d)
        elif g.right[0] == i:
            (j, l), slope = g.left, (A.b, -A.a)
        else:
            keep.append(g)
            continue
        used += 1
        blocks[j] = _fill(blocks[j], l, *slope)
        if _is_seifert(blocks[j]):
            removed.setdefault(j, set()).add(l)
        neighbours.append(j)
    summands += [SolidTorus()] * (X.base.boundary - used)
    H, index = _prune(blocks, keep, removed, {i})
    comps = H.components() if H.blocks else []
    touched = {index[j] for j in neighbours}
    attached = sum(1 for c in comps if touched & set(c))
    summands += [_subgraph(H, c) for c in comps]
    summands += [S2xS1] * (len(neighbours) - attached)
    return _combine(summands)


# ----------------------------------------------------------------------------
# moves


def _block(G, m):
    if m.block is None or not 0 <= m.block < len(G.blocks):
        raise MoveError(f"move {m.id}: no block {m.block}")
    b = G.blocks[m.block]
    if not _is_seifert(b):
        raise MoveError(f"move {m.id}: block {m.block} is not a Seifert block")
    return b


def _fiber_index(b, j, m):
    if j is None or not 0 <= j < len(b.fibers):
        raise MoveError(f"move {m.id}: block {m.block} has no fiber {j}")
    return j


def _gluing(G, m):
    if m.gluing is None or not 0 <= m.gluing < len(G.gluings):
        raise MoveError(f"move {m.id}: no gluing {m.gluing}")
    return G.gluings[m.gluing]


def _shift_fiber(b, j, k):
    f = b.fibers[j]
    fibers = list(b.fibers)
    fibers[j] = FiberPair(f.p, f.q + k * f.p)
    return _with_fibers(b, fibers)


def _refiber_left(M, to_moebius):
    m, n, p, q = M.a, M.b, M.c, M.d
    if to_moebius:
        return Mat2(n, n - m, q, q - p)
    return Mat2(m - n, m, p - q, p)


def _refiber_right(M, to_moebius):
    m, n, p, q = M.a, M.b, M.c, M.d
    if to_moebius:
        return Mat2(m + p, n + q, -m, -n)
    return Mat2(-p, -q, m + p, n + q)


def _d22():
    return SeifertBlock(DISK, (FiberPair(2, 1), FiberPair(2, 1)))


def apply_move(expr, move):
    """Apply one move; raises :class:`MoveError` when the site is invalid."""
    mid = move.id
    if mid == 1:
        return mirror(expr)
    if not isinstance(expr, GraphManifold):
        raise MoveError(f"move {mid} needs a graph manifold expression")
    G = expr
    if mid == 2:
        b = _block(G, move)
        i = _fiber_index(b, move.fiber, move)
        j = _fiber_index(b, move.fiber2, move)
        if i == j:
            raise MoveError("move 2 needs two distinct fibers")
        b = _shift_fiber(b, i, move.k)
        b = _shift_fiber(b, j, -move.k)
        return _replace(G, move.block, b)
    if mid == 3:
        b = _block(G, move)
        i = _fiber_index(b, move.fiber, move)
        if b.base.boundary == 0:
            raise MoveError("move 3 needs a block with nonempty boundary")
        if not any(blk == move.block for blk, _ in G.free_ports()):
            raise MoveError("move 3: every boundary torus of the block is glued; "
                            "use move 6 or 7 at a gluing instead")
        return _replace(G, move.block, _shift_fiber(b, i, move.k))
    if mid == 4:
        b = _block(G, move)
        if move.fiber is None:
            return _replace(G, move.block, _with_fibers(b, b.fibers + (FiberPair(1, 0),)))
        i = _fiber_index(b, move.fiber, move)
        f = b.fibers[i]
        if abs(f.p) != 1 or f.q != 0:
            raise MoveError(f"move 4: fiber {f} is not (1,0)")
        return _replace(G, move.block, _with_fibers(b, b.fibers[:i] + b.fibers[i + 1:]))
    if mid == 5:
        g = _gluing(G, move)
        if g.is_self:
            raise MoveError("move 5 does not apply when two boundary tori of the "
                            "same block are glued")
        side = _bridge_side(G, move.gluing)
        if side is None:
            raise MoveError("move 5: the gluing lies on a cycle of the graph")
        left = set(range(len(G.blocks))) - side
        for s in (side, left):
            if all(_is_seifert(G.blocks[i]) for i in s):
                return _negate_blocks(G, s)
        raise MoveError("move 5: neither side of the gluing is made of Seifert blocks")
    if mid in (6, 7):
        g = _gluing(G, move)
        owner = g.left[0] if mid == 6 else g.right[0]
        b = G.blocks[owner]
        if not _is_seifert(b):
            raise MoveError(f"move {mid}: block {owner} is not a Seifert block")
        i = move.fiber if move.fiber is not None else None
        if i is None or not 0 <= i < len(b.fibers):
            raise MoveError(f"move {mid}: block {owner} has no fiber {i}")
        k = move.k
        M = g.matrix @ _shear(k) if mid == 6 else _shear(-k) @ g.matrix
        G = _set_gluing(G, move.gluing, Gluing(g.left, g.right, M))
        return _replace(G, owner, _shift_fiber(b, i, k))
    if mid in (8, 9):
        g = _gluing(G, move)
        owner = g.left[0] if mid == 8 else g.right[0]
        b = G.blocks[owner]
        if _is_seifert(b) and b.base == DISK and sorted(b.fibers) == [FiberPair(2, 1)] * 2:
            to_mb = True
        elif _is_mb(b) and not b.fibers:
            to_mb = False
        else:
            raise MoveError(f"move {mid} needs the block (D,(2,1),(2,1)) or the "
                            f"circle bundle over the Moebius band")
        ref = _refiber_left if mid == 8 else _refiber_right
        new_block = SeifertBlock(MOEBIUS) if to_mb else _d22()
        G = _set_gluing(G, move.gluing, Gluing(g.left, g.right, ref(g.matrix, to_mb)))
        return _replace(G, owner, new_block)
    if mid in (10, 11):
        b = _block(G, move)
        zero = [j for j, f in enumerate(b.fibers) if f.p == 0]
        if not zero:
            raise MoveError(f"move {mid} needs a fiber (0,1)")
        if mid == 10 and (b.base.boundary or len(G.blocks) != 1):
            raise MoveError("move 10 applies to a closed single block")
        if mid == 11 and not b.base.boundary:
            raise MoveError("move 11 applies to a block with boundary")
        return _degenerate(G, move.block)
    raise MoveError(f"unknown move {mid}")


def applicable_moves(expr, k=1):
    """Every site where some move applies, with shift ``k`` where relevant."""
    out = []
    try:
        mirror(expr)
        out.append(Move(1))
    except MoveError:
        pass
    if not isinstance(expr, GraphManifold):
        return out
    G = expr
    free_blocks = {i for i, _ in G.free_ports()}
    for i, b in enumerate(G.blocks):
        if not _is_seifert(b):
            continue
        n = len(b.fibers)
        for j in range(n):
            for j2 in range(n):
                if j != j2:
                    out.append(Move(2, block=i, fiber=j, fiber2=j2, k=k))
            if i in free_blocks:
                out.append(Move(3, block=i, fiber=j, k=k))
            f = b.fibers[j]
            if abs(f.p) == 1 and f.q == 0:
                out.append(Move(4, block=i, fiber=j))
        out.append(Move(4, block=i))
        if any(f.p == 0 for f in b.fibers):
            if b.base.boundary:
                out.append(Move(11, block=i))
            elif len(G.blocks) == 1:
                out.append(Move(10, block=i))
    for j, g in enumerate(G.gluings):
        cand = [Move(5, gluing=j)]
        for mid, owner in ((6, g.left[0]), (7, g.right[0])):
            b = G.blocks[owner]
            if _is_seifert(b):
                cand += [Move(mid, gluing=j, fiber=f, k=k) for f in range(len(b.fibers))]
        cand += [Move(8, gluing=j), Move(9, gluing=j)]
        for m in cand:
            try:
                apply_move(G, m)
                out.append(m)
            except MoveError:
                pass
    return out


# ----------------------------------------------------------------------------
# normalization


def _lens_normal(L):
    p, q = abs(L.p), L.q if L.p >= 0 else -L.q
    if p == 0:
        return S2xS1
    if p == 1:
        return S3
    q %= p
    inv = pow(q, -1, p)
    return LensSpace(p, min(q, (-q) % p, inv, (-inv) % p))


def _tidy_block(b, has_free_port):
    """Fibers as ``p >= 2, 0 < q < p`` (or ``(0, 1)``) plus one carrier ``(1, e)``."""
    e, out = 0, []
    for f in b.fibers:
        p, q = f.p, f.q
        if p < 0:
            p, q = -p, -q
        if p == 0:
            out.append(FiberPair(0, 1))
        elif p == 1:
            e += q
        else:
            e += q // p
            out.append(FiberPair(p, q % p))
    if e and not has_free_port and all(f.p for f in out):
        out.append(FiberPair(1, e))
    return _with_fibers(b, out)


def _tidy(G):
    free = {i for i, _ in G.free_ports()}
    return GraphManifold(tuple(_tidy_block(b, i in free) if _is_seifert(b) else b
                               for i, b in enumerate(G.blocks)), G.gluings)


def _carrier(b):
    return sum(f.q for f in b.fibers if f.p == 1)


def _core(b):
    return tuple(f for f in b.fibers if f.p != 1)


def _fold_carrier(G, i):
    """Push the carrier of block ``i`` into its first gluing."""
    b = G.blocks[i]
    e = _carrier(b)
    if not e:
        return G
    for j, g in enumerate(G.gluings):
        if g.left[0] == i:
            G = _set_gluing(G, j, Gluing(g.left, g.right, g.matrix @ _shear(-e)))
            break
        if g.right[0] == i:
            G = _set_gluing(G, j, Gluing(g.left, g.right, _shear(e) @ g.matrix))
            break
    else:
        return G
    return _replace(G, i, _with_fibers(b, _core(b)))


def _find_degenerate(G):
    for i, b in enumerate(G.blocks):
        if _is_seifert(b) and any(f.p == 0 for f in b.fibers):
            return i
    return None


def _solid_meridian(b):
    core = _core(b)
    e = _carrier(b)
    if not core:
        return 1, e
    a, q = core[0].p, core[0].q
    return a, q + e * a


def _absorb_solid_torus(G):
    for i, b in enumerate(G.blocks):
        if not (_is_seifert(b) and b.base == DISK and len(_core(b)) <= 1):
            continue
        if any(f.p == 0 for f in b.fibers):
            continue
        glued = [(j, g) for j, g in enumerate(G.gluings) if i in (g.left[0], g.right[0])]
        if not glued:
            if len(G.blocks) == 1:
                return SolidTorus()
            continue
        j, g = glued[0]
        a, bb = _solid_meridian(b)
        M = g.matrix
        if g.left[0] == i:
            (t, port) = g.right
            slope = (a * M.a - bb * M.b, a * M.c - bb * M.d)
        else:
            (t, port) = g.left
            slope = (-a * M.d - bb * M.b, a * M.c + bb * M.a)
        blocks = list(G.blocks)
        blocks[t] = _fill(blocks[t], port, *slope)
        removed = {t: {port}} if _is_seifert(blocks[t]) else {}
        rest = G.gluings[:j] + G.gluings[j + 1:]
        H, _ = _prune(blocks, rest, removed, {i})
        return H
    return None


def _absorb_collar(G):
    for i, b in enumerate(G.blocks):
        if not (_is_seifert(b) and b.base == ANNULUS and not _core(b)):
            continue
        G2 = _fold_carrier(G, i)
        glued = [(j, g) for j, g in enumerate(G2.gluings) if i in (g.left[0], g.right[0])]
        if not glued:
            continue
        if len(glued) == 1 and glued[0][1].is_self:
            g = glued[0][1]
            M = g.matrix if g.left[1] == 0 else g.matrix.inverse()
            return TorusBundle(_COLLAR @ M)
        if len(glued) == 1:
            j, g = glued[0]
            rest = G2.gluings[:j] + G2.gluings[j + 1:]
            H, _ = _prune(list(G2.blocks), rest, {}, {i})
            return H
        (j0, g0), (j1, g1) = glued
        s0 = g0.left if g0.left[0] == i else g0.right
        s1 = g1.left if g1.left[0] == i else g1.right
        y = g0.right if s0 == g0.left else g0.left
        z = g1.right if s1 == g1.left else g1.left
        # basis_y = basis_z . T(g1 from s1) . collar . T(g0 from y)
        M = _transfer(g1, s1) @ _COLLAR @ _transfer(g0, y)
        rest = [g for j, g in enumerate(G2.gluings) if j not in (j0, j1)]
        rest.append(Gluing(y, z, M))
        H, _ = _prune(list(G2.blocks), rest, {}, {i})
        return H
    return None


def _merge_parallel(G):
    """Merge two Seifert blocks whose fibers match across a gluing."""
    for j, g in enumerate(G.gluings):
        x, y = g.left[0], g.right[0]
        if x == y or g.matrix.b != 0:
            continue
        X, Y = G.blocks[x], G.blocks[y]
        if not (_is_seifert(X) and _is_seifert(Y)):
            continue
        if g.matrix.a == 1:
            G = _negate_blocks(G, {y})
            g = G.gluings[j]
        e = -g.matrix.c
        if X.base.orientable and Y.base.orientable:
            genus = X.base.genus + Y.base.genus
        else:
            genus = sum(b.base.genus * (2 if b.base.orientable else 1) for b in (X, Y))
        base = BaseSurface(X.base.orientable and Y.base.orientable, genus,
                           X.base.boundary + Y.base.boundary - 2)
        merged = SeifertBlock(base, X.fibers + Y.fibers + (FiberPair(1, e),))
        pmap = {}
        n = 0
        for blk, blk_ports, skip in ((x, X.base.boundary, g.left[1]),
                                     (y, Y.base.boundary, g.right[1])):
            for k in range(blk_ports):
                if k != skip:
                    pmap[(blk, k)] = (x, n)
                    n += 1
        blocks = list(G.blocks)
        blocks[x] = merged
        gl = []
        for jj, h in enumerate(G.gluings):
            if jj == j:
                continue
            gl.append(Gluing(pmap.get(h.left, h.left), pmap.get(h.right, h.right),
                             h.matrix))
        H, _ = _prune(blocks, gl, {}, {y})
        return H
    return None


def _swap_free_moebius(G):
    free = {i for i, _ in G.free_ports()}
    for i, b in enumerate(G.blocks):
        if i in free and _is_mb(b):
            return _replace(G, i, _d22())
    return None


def _split_projective(G):
    """A closed block over RP2 with at most one exceptional fiber also
    fibers over S2: cut off the Moebius band and refiber it."""
    if len(G.blocks) != 1 or G.gluings:
        return None
    b = G.blocks[0]
    if not (_is_seifert(b) and b.base == BaseSurface(False, 1, 0) and len(_core(b)) <= 1):
        return None
    if any(f.p == 0 for f in b.fibers):
        return None
    H = GraphManifold((SeifertBlock(MOEBIUS), SeifertBlock(DISK, b.fibers)),
                      (Gluing((0, 0), (1, 0), Mat2(-1, 0, 0, 1)),))
    return _refiber(H, 0)


def _split_four_twos(G):
    """A closed block over S2 with four fibers of order two may also fiber
    over the Klein bottle: cut it into two D22 halves and refiber both."""
    if len(G.blocks) != 1 or G.gluings:
        return None
    b = G.blocks[0]
    if not _is_seifert(b):
        return None
    core = _core(b)
    if not (b.base == SPHERE and len(core) == 4
            and all(f.p == 2 for f in core)):
        return None
    if any(f.p == 0 for f in b.fibers):
        return None
    rest = core[2:] + tuple(f for f in b.fibers if f.p == 1)
    H = GraphManifold((SeifertBlock(DISK, tuple(core[:2])), SeifertBlock(DISK, rest)),
                      (Gluing((0, 0), (1, 0), Mat2(-1, 0, 0, 1)),))
    H = _refiber(_refiber(H, 0), 1)
    return H if H.gluings[0].matrix.b == 0 else None


def _refiber_to_merge(G):
    """Refibering (one block or two neighbours) that makes fibers match."""

    def parallel(H, touched):
        return any(g.matrix.b == 0 and not g.is_self
                   and touched & {g.left[0], g.right[0]}
                   and _is_seifert(H.blocks[g.left[0]])
                   and _is_seifert(H.blocks[g.right[0]]) for g in H.gluings)

    sites = _alt_sites(G)
    for i in sites:
        H = _refiber(G, i)
        if parallel(H, {i}):
            return H
        for j in sites:
            if j != i:
                H2 = _refiber(H, j)
                if parallel(H2, {i, j}):
                    return H2
    return None


def _small_closed(G):
    if len(G.blocks) != 1 or G.gluings:
        return None
    b = G.blocks[0]
    if not (_is_seifert(b) and b.base == SPHERE and len(_core(b)) <= 2):
        return None
    core = list(_core(b)) + [FiberPair(1, 0)] * (2 - len(_core(b)))
    (a, bb), (c, d) = (core[0].p, core[0].q), (core[1].p, core[1].q)
    bb += _carrier(b) * a
    p = a * d + bb * c
    # a longitude (r, s) of the first solid torus: a s + bb r = 1
    s, r = _bezout(a, bb)
    return LensSpace(p, c * s - d * r)


def _bezout(a, b):
    """``(s, r)`` with ``a s + b r = 1`` for coprime ``a, b``."""
    old_r, rr = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while rr:
        qq = old_r // rr
        old_r, rr = rr, old_r - qq * rr
        old_s, s = s, old_s - qq * s
        old_t, t = t, old_t - qq * t
    if old_r < 0:
        old_s, old_t = -old_s, -old_t
    return old_s, old_t


def normalize(expr):
    """Canonical representative under the moves; idempotent."""
    if isinstance(expr, LensSpace):
        return _lens_normal(expr)
    if isinstance(expr, (TorusBundle, SolidTorus, FilledBlock)):
        return expr
    if isinstance(expr, ConnectedSum):
        parts = [normalize(p) for p in expr.parts]
        out = _combine(parts)
        if isinstance(out, ConnectedSum):
            from .notation import print_expr

            out = ConnectedSum(tuple(sorted(out.parts, key=print_expr)))
        return out
    if isinstance(expr, GraphManifold):
        return _normalize_graph(expr)
    raise TypeError(f"not a manifold expression: {expr!r}")


def _normalize_graph(G):
    while True:
        G = _tidy(G)
        i = _find_degenerate(G)
        if i is not None:
            return normalize(_degenerate(G, i))
        step = None
        for rule in (_absorb_solid_torus, _absorb_collar, _merge_parallel,
                     _swap_free_moebius, _split_projective, _split_four_twos,
                     _refiber_to_merge):
            step = rule(G)
            if step is not None:
                break
        if step is None:
            break
        if not isinstance(step, GraphManifold):
            return normalize(step)
        G = step
    small = _small_closed(G)
    if small is not None:
        return normalize(small)
    return _canonical(G)


# -- canonical labelling


def _alt_sites(G):
    out = []
    for i, b in enumerate(G.blocks):
        if not (_is_d22(b) or _is_mb(b)):
            continue
        if any(i in (g.left[0], g.right[0]) for g in G.gluings):
            out.append(i)
    return out


def _refiber(G, i):
    G = _fold_carrier(G, i)
    b = G.blocks[i]
    to_mb = _is_d22(b)
    for j, g in enumerate(G.gluings):
        if g.left[0] == i:
            M = _refiber_left(g.matrix, to_mb)
            break
        if g.right[0] == i:
            M = _refiber_right(g.matrix, to_mb)
            break
    G = _set_gluing(G, j, Gluing(g.left, g.right, M))
    return _replace(G, i, SeifertBlock(MOEBIUS) if to_mb else _d22())


def alternative_fibration(expr, block):
    """Swap block ``block`` between (D,(2,1),(2,1)) and the circle bundle over
    the Moebius band, after tidying fibers; the block must be glued."""
    if not isinstance(expr, GraphManifold):
        raise MoveError("alternative fibrations live in graph manifolds")
    G = _tidy(expr)
    if not 0 <= block < len(G.blocks):
        raise MoveError(f"no block {block}")
    b = G.blocks[block]
    if not (_is_d22(b) or _is_mb(b)):
        raise MoveError(f"block {block} has no alternative fibration")
    if not G.gluings_at(block):
        raise MoveError(f"block {block} is not glued")
    return _refiber(G, block)


def _reduce(M, left_seifert, right_seifert):
    """Reduce a gluing by shears; returns ``(matrix, shift_left, shift_right)``."""
    m, n = M.a, M.b
    dl = dr = 0
    if n != 0:
        if left_seifert:
            alpha = (m - m % abs(n)) // n
            M = M @ _shear(-alpha)
            dl = -alpha
        if right_seifert:
            beta = (M.d - M.d % abs(n)) // n
            M = _shear(-beta) @ M
            dr = beta
    elif left_seifert:
        k = -M.c * M.d
        M = M @ _shear(k)
        dl = k
    elif right_seifert:
        k = M.c * M.a
        M = _shear(-k) @ M
        dr = k
    return M, dl, dr


def _block_shape(b):
    if _is_seifert(b):
        return (0, b.base.orientable, b.base.genus, b.base.boundary,
                tuple(sorted((f.p, f.q) for f in _core(b))))
    return (1, b.name, tuple(s.sort_key() if s else (-1, 0) for s in b.slopes))


def _orders(G):
    shapes = [_block_shape(b) for b in G.blocks]
    idx = sorted(range(len(G.blocks)), key=lambda i: shapes[i])
    groups = [list(g) for _, g in itertools.groupby(idx, key=lambda i: shapes[i])]
    total = 1
    for grp in groups:
        total *= factorial(len(grp))
    if total > _MAX_ORDERS:
        yield idx
        return
    for combo in itertools.product(*(itertools.permutations(g) for g in groups)):
        yield [i for grp in combo for i in grp]


def _labelled(G, order):
    pos = {old: new for new, old in enumerate(order)}
    seif = [_is_seifert(b) for b in G.blocks]
    free = {i for i, _ in G.free_ports()}
    carrier = {i: _carrier(b) for i, b in enumerate(G.blocks) if seif[i]}
    edges = []
    for g in G.gluings:
        L, R, M = g.left, g.right, g.matrix
        if L[0] != R[0]:
            if pos[L[0]] > pos[R[0]]:
                L, R, M = R, L, M.inverse()
            red, dl, dr = _reduce(M, seif[L[0]], seif[R[0]])
        else:
            cands = []
            for LL, RR, MM in ((L, R, M), (R, L, M.inverse())):
                red, dl, dr = _reduce(MM, seif[LL[0]], seif[RR[0]])
                cands.append(((red.a, red.b, red.c, red.d), dl + dr, LL, RR, red, dl, dr))
            _, _, L, R, red, dl, dr = min(cands, key=lambda c: (c[0], c[1]))
        if seif[L[0]]:
            carrier[L[0]] += dl
        if seif[R[0]]:
            carrier[R[0]] += dr
        edges.append((L, R, red))
    for i in carrier:
        if i in free or any(f.p == 0 for f in G.blocks[i].fibers):
            carrier[i] = 0
    keyed = []
    for L, R, M in edges:
        lp = -1 if seif[L[0]] else L[1]
        rp = -1 if seif[R[0]] else R[1]
        keyed.append(((pos[L[0]], lp, pos[R[0]], rp, M.a, M.b, M.c, M.d), L, R, M))
    keyed.sort(key=lambda t: t[0])
    next_port = {i: 0 for i in range(len(G.blocks))}

    def port(side):
        i, k = side
        if not seif[i]:
            return (pos[i], k)
        k = next_port[i]
        next_port[i] += 1
        return (pos[i], k)

    gluings = tuple(Gluing(port(L), port(R), M) for _, L, R, M in keyed)
    blocks, bkeys = [], []
    for old in order:
        b = G.blocks[old]
        if seif[old]:
            core = tuple(sorted(_core(b), key=lambda f: (f.p, f.q)))
            e = carrier[old]
            b = SeifertBlock(b.base, core + ((FiberPair(1, e),) if e else ()))
            bkeys.append(_block_shape(b) + (e,))
        else:
            bkeys.append(_block_shape(b) + (0,))
        blocks.append(b)
    key = (tuple(bkeys), tuple(k for k, *_ in keyed))
    return key, GraphManifold(tuple(blocks), gluings)


def _canonical(G):
    best = None
    has_cusped = any(not _is_seifert(b) for b in G.blocks)
    for mir in (False,) if has_cusped else (False, True):
        G1 = _tidy(mirror(G)) if mir else G
        sites = _alt_sites(G1)
        for choice in itertools.product((False, True), repeat=len(sites)):
            G2 = G1
            for i, flip in zip(sites, choice):
                if flip:
                    G2 = _tidy(_refiber(G2, i))
            seif = [i for i, b in enumerate(G2.blocks) if _is_seifert(b)]
            for signs in itertools.product((False, True), repeat=len(seif)):
                neg = {i for i, s in zip(seif, signs) if s}
                G3 = _negate_blocks(G2, neg) if neg else G2
                for order in _orders(G3):
                    key, built = _labelled(G3, order)
                    if best is None or key < best[0]:
                        best = (key, built)
    return best[1]


# ----------------------------------------------------------------------------
# equivalence


@dataclass(frozen=True)
class Equivalence:
    verdict: Verdict
    reason: str = ""
    invariant: str | None = None
    witness: object = None


def _lens_parts(e):
    parts = e.parts if isinstance(e, ConnectedSum) else (e,)
    if all(isinstance(p, LensSpace) for p in parts):
        return sorted((p.p, p.q) for p in parts)
    return None


def _jsj_data(e):
    """Block and fiber-intersection multisets when the JSJ pieces are as written."""
    if not isinstance(e, GraphManifold):
        return None
    for b in e.blocks:
        if not (_is_seifert(b) and b.base.orientable):
            return None
        core = _core(b)
        chi = b.base.euler_characteristic - sum(1 - 1 / f.p for f in core)
        if chi >= 0:
            return None
    if any(g.matrix.b == 0 for g in e.gluings):
        return None
    blocks = sorted((b.base.genus, b.base.boundary, tuple(sorted(f.p for f in _core(b))))
                    for b in e.blocks)
    return blocks, sorted(fiber_intersection(g) for g in e.gluings)


def _match_summands(left, right, word_bound):
    if len(left) != len(right):
        return False
    if not left:
        return True
    head = left[0]
    for j, cand in enumerate(right):
        if equivalent(head, cand, word_bound).verdict == Verdict.YES:
            if _match_summands(left[1:], right[:j] + right[j + 1:], word_bound):
                return True
    return False


def equivalent(e1, e2, word_bound=8):
    """Tri-state comparison of two expressions (unoriented)."""
    from .homology import h1

    n1, n2 = normalize(e1), normalize(e2)
    if n1 == n2:
        return Equivalence(Verdict.YES, "normal forms coincide", witness=n1)
    g1, g2 = h1(n1), h1(n2)
    if g1 != g2:
        return Equivalence(Verdict.NO, f"H1 differs: {format_group(g1)} vs "
                           f"{format_group(g2)}", invariant="H1")
    b1, b2 = free_boundary_count(n1), free_boundary_count(n2)
    if b1 != b2:
        return Equivalence(Verdict.NO, f"{b1} vs {b2} boundary tori",
                           invariant="boundary")
    if isinstance(n1, TorusBundle) and isinstance(n2, TorusBundle):
        r = gl2_conjugate(n1.monodromy, n2.monodromy, word_bound)
        return Equivalence(r.verdict, r.reason or "conjugate monodromies",
                           invariant="monodromy" if r.verdict == Verdict.NO else None,
                           witness=r.witness)
    l1, l2 = _lens_parts(n1), _lens_parts(n2)
    if l1 is not None and l2 is not None:
        # normal lens forms are complete; prime decomposition is unique
        return Equivalence(Verdict.NO, "different lens space summands",
                           invariant="lens")
    if isinstance(n1, ConnectedSum) and isinstance(n2, ConnectedSum):
        if _match_summands(list(n1.parts), list(n2.parts), word_bound):
            return Equivalence(Verdict.YES, "summands match pairwise")
    j1, j2 = _jsj_data(n1), _jsj_data(n2)
    if j1 is not None and j2 is not None:
        if j1[0] != j2[0]:
            return Equivalence(Verdict.NO, "JSJ pieces differ", invariant="blocks")
        if j1[1] != j2[1]:
            return Equivalence(Verdict.NO, "fiber intersections differ",
                               invariant="fiber_intersection")
    return Equivalence(Verdict.UNKNOWN, "no decision procedure for this pair")


__all__ = [
    "Equivalence",
    "alternative_fibration",
    "Move",
    "MoveError",
    "applicable_moves",
    "apply_move",
    "equivalent",
    "fiber_intersection",
    "mirror",
    "normalize",
]
