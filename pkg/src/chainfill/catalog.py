"""Table fixtures, theorem families and the case classifiers.

Rows are read from ``data/v1/fixtures.jsonl``.  Each row is checked three
ways: homology of the printed manifold, homology of the filled chain-link
complement, and the printed group.
"""

from __future__ import annotations

import itertools
import json
from collections import Counter
from dataclasses import dataclass, field
from math import gcd

from .chains import data_path
from .exactalg import AbelianGroup, Mat2, format_group, parse_group
from .homology import h1, h1_filled
from .manifolds import (
    BaseSurface,
    ConnectedSum,
    GraphManifold,
    LensSpace,
    SeifertBlock,
    Slope,
    TorusBundle,
)
from .moves import alternative_fibration, fiber_intersection, normalize
from .notation import ParseError, parse_expr, parse_slopes

# ----------------------------------------------------------------------------
# fixture rows


@dataclass(frozen=True)
class CatalogRow:
    id: str
    family: str
    table: int
    slopes: str
    expr: str
    h1: str
    isolated: bool = True


@dataclass(frozen=True)
class RowReport:
    row: CatalogRow
    expr_h1: AbelianGroup | None = None
    filled_h1: AbelianGroup | None = None
    listed_h1: AbelianGroup | None = None
    error: str | None = None

    @property
    def passed(self):
        if self.error is not None:
            return False
        return self.expr_h1 == self.filled_h1 == self.listed_h1

    def summary(self):
        r = self.row
        if self.error is not None:
            return f"{r.id} table {r.table} {r.family}({r.slopes}): ERROR {self.error}"
        flag = "ok" if self.passed else "MISMATCH"
        groups = " | ".join(format_group(g) for g in
                            (self.expr_h1, self.filled_h1, self.listed_h1))
        return f"{r.id} table {r.table} {r.family}({r.slopes}): {groups} {flag}"


def load_rows(path=None):
    """All fixture rows; malformed JSON lines raise ValueError with the line."""
    path = path or data_path("fixtures.jsonl")
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                d = json.loads(line)
                rows.append(CatalogRow(d["id"], d["family"], int(d["table"]),
                                       d["slopes"], d["expr"], d["h1"]))
            except (ValueError, KeyError) as exc:
                raise ValueError(f"{path}:{lineno}: bad fixture record ({exc})") from None
    return rows


def verify_row(row):
    """Three-way homology comparison for one row; errors stay row-local."""
    try:
        listed = parse_group(row.h1)
    except ValueError as exc:
        return RowReport(row, error=f"listed group: {exc}")
    try:
        expr = parse_expr(row.expr)
    except ParseError as exc:
        return RowReport(row, listed_h1=listed, error=f"expression: {exc}")
    try:
        slopes = parse_slopes(row.slopes)
        from .chains import cusp_count

        filled = h1_filled(row.family, slopes.padded(cusp_count(row.family)))
    except (ParseError, ValueError, KeyError) as exc:
        return RowReport(row, listed_h1=listed, error=f"slopes: {exc}")
    return RowReport(row, h1(expr), filled, listed)


def verify_catalog(table=None, path=None):
    rows = load_rows(path)
    if table is not None:
        rows = [r for r in rows if r.table == table]
    return [verify_row(r) for r in rows]


# ----------------------------------------------------------------------------
# tallies

# numbers of non-factoring fillings per number of filled cusps
TABLE_TALLIES = {
    "M1": {1: 6},
    "M2": {1: 6, 2: 4},
    "M3": {1: 5, 2: 2, 3: 8},
    "M4": {1: 2, 4: 1},
    "M5": {1: 1, 5: 2},
    "M6": {1: 1, 4: 2, 5: 4, 6: 40},
    "N3": {1: 2, 3: 1},
    "N4": {1: 2, 4: 1},
    "N5": {1: 2, 5: 3},
    "N6": {1: 2, 5: 2, 6: 6},
    "M7": {1: 2, 6: 2, 7: 11},
}
TALLY_SOURCE = {**{f"M{i}": 3 for i in range(1, 7)},
                **{f"N{i}": 9 for i in range(3, 7)}, "M7": 10}


def printed_rows(rows):
    """Merge rows that differ only by a global sign (the ``+-`` rows)."""
    seen = {}
    for r in rows:
        t = parse_slopes(r.slopes)
        neg = tuple(None if s is None else Slope(-s.p, s.q) for s in t)
        key = (r.table, r.expr, r.h1, frozenset({tuple(t), neg}))
        seen.setdefault(key, r)
    return list(seen.values())


def tallies(rows=None):
    """``{family: {filled cusps: printed rows}}``."""
    rows = load_rows() if rows is None else rows
    out = {}
    for r in printed_rows(rows):
        n = len(parse_slopes(r.slopes).filled)
        out.setdefault(r.family, Counter())[n] += 1
    return {k: dict(v) for k, v in out.items()}


# ----------------------------------------------------------------------------
# theorem families


@dataclass(frozen=True)
class FamilySpec:
    id: str
    params: tuple
    template: str
    pairs: tuple = ()                  # names of coprime pairs, e.g. ("a", "b")
    ranges: dict = field(default_factory=dict)
    note: str = ""


def _spec(id, template, pairs=(), ranges=None, note=""):
    names = tuple(itertools.chain.from_iterable(pairs)) + tuple((ranges or {}).keys())
    return FamilySpec(id, names, template, tuple(pairs), dict(ranges or {}), note)


_AB, _CD, _EF, _GH, _IJ, _KL = (("a", "b"), ("c", "d"), ("e", "f"),
                                ("g", "h"), ("i", "j"), ("k", "l"))
_SWAP = "=[0,1;1,0]="

FAMILIES = {s.id: s for s in (
    _spec("Thm2.4-F1", f"SFS(D;(a,b),(c,d)) {_SWAP} SFS(D;(e,f),(g,h))", (_AB, _CD, _EF, _GH)),
    _spec("Thm2.4-F2", "SFS(D;(2,1),(2,1)) =[1+n,2+n;-n,-1-n]= SFS(D;(2,1),(3,1))",
          ranges={"n": (0, 1, 2, 3)}),
    _spec("Thm2.4-F3", "SFS(A;(a,b)) /[0,1;1,0]", (_AB,)),
    _spec("Thm2.4-F4", "SFS(A;(2,1)) /[1,2;0,-1]"),
    _spec("Thm2.7-F1", f"SFS(D;(a,b),(c,d)) {_SWAP} SFS(A;(e,f)) {_SWAP} SFS(D;(g,h),(i,j))",
          (_AB, _CD, _EF, _GH, _IJ)),
    _spec("Thm2.7-F2", f"SFS(A;(a,b)) {_SWAP} SFS(A;(c,d)) /[0,1;1,0]", (_AB, _CD)),
    _spec("Thm2.7-F3", "M1 =[-1,0;1,1]= SFS(D;(2,1),(2,1))"),
    _spec("Thm2.7-F4", "M1 =[-1,1;1,0]= SFS(D;(2,1),(2,1))"),
    _spec("Thm2.11-F1", f"SFS(D;(a,b),(c,d)) {_SWAP} SFS(A;(e,f)) {_SWAP} SFS(A;(g,h)) "
                        f"{_SWAP} SFS(D;(i,j),(k,l))", (_AB, _CD, _EF, _GH, _IJ, _KL)),
    _spec("Thm2.11-F2", f"SFS(A;(a,b)) {_SWAP} SFS(A;(c,d)) /[0,1;1,0]", (_AB, _CD)),
    _spec("Thm2.11-F3", f"(M5(a/b,c/d,e/f,g/h)) {_SWAP} SFS(D;(i,j),(k,l))",
          (_AB, _CD, _EF, _GH, _IJ, _KL), note="|i|, |k| >= 2"),
    _spec("Thm2.11-F4", "(M2(a/b)) =[-1,0;1,1]= SFS(D;(2,1),(2,1))", (_AB,)),
    _spec("Thm2.11-F5", "SFS(A;(2,1)) /[n-1,n;1,1]", ranges={"n": (3, 4, 5, 6)}),
    _spec("Tbl25", "table 25 row", ranges={"row": (1, 2, 3, 4, 5)}),
)}


class DomainError(ValueError):
    pass


def _check_params(spec, params):
    missing = [p for p in spec.params if p not in params]
    extra = [p for p in params if p not in spec.params]
    if missing or extra:
        raise DomainError(f"{spec.id}: expected parameters {list(spec.params)}")
    for p, q in spec.pairs:
        if gcd(params[p], params[q]) != 1:
            raise DomainError(f"{spec.id}: ({p},{q}) = ({params[p]},{params[q]}) is not coprime")
    for name, allowed in spec.ranges.items():
        if params[name] not in allowed:
            raise DomainError(f"{spec.id}: {name} must be one of {list(allowed)}")
    if spec.id == "Thm2.11-F3" and (abs(params["i"]) < 2 or abs(params["k"]) < 2):
        raise DomainError(f"{spec.id}: needs |i|, |k| >= 2")


def _slope_text(p, q):
    return str(Slope(p, q))


def family_text(spec_id, params=None):
    spec = FAMILIES[spec_id]
    params = dict(params or {})
    _check_params(spec, params)
    if spec_id == "Tbl25":
        return next(r.expr for r in load_rows() if r.id == f"T25-{params['row']:02d}")
    if spec_id in ("Thm2.4-F2", "Thm2.11-F5"):
        n = params["n"]
        M = (Mat2(1 + n, 2 + n, -n, -1 - n) if spec_id == "Thm2.4-F2"
             else Mat2(n - 1, n, 1, 1))
        head, _, tail = spec.template.partition("[")
        tail = tail.partition("]")[2]
        return f"{head}[{M.a},{M.b};{M.c},{M.d}]{tail}"
    text = spec.template
    if spec_id in ("Thm2.11-F3", "Thm2.11-F4"):
        for p, q in spec.pairs[:4] if spec_id == "Thm2.11-F3" else spec.pairs:
            text = text.replace(f"{p}/{q}", _slope_text(params[p], params[q]), 1)
    for p, q in spec.pairs:
        text = text.replace(f"({p},{q})", f"({params[p]},{params[q]})", 1)
    return text


def generate_family(spec_id, params=None):
    """The family's expression with parameters substituted."""
    if spec_id not in FAMILIES:
        raise DomainError(f"unknown family {spec_id!r}; known: {sorted(FAMILIES)}")
    return parse_expr(family_text(spec_id, params))


def coprime_pairs(bound):
    """Fibers ``(p, q)`` with ``|p|, |q| <= bound``, one per sign class."""
    out = []
    for p in range(0, bound + 1):
        for q in range(-bound, bound + 1):
            if gcd(p, q) != 1 or (p == 0 and q != 1):
                continue
            out.append((p, q))
    return out


def enumerate_family(spec_id, bound):
    """Yield ``(params, expr)`` over the family's domain at the given bound."""
    spec = FAMILIES[spec_id]
    pairs = coprime_pairs(bound)
    choices = [pairs] * len(spec.pairs) + [spec.ranges[k] for k in spec.ranges]
    for combo in itertools.product(*choices):
        params = {}
        for (p, q), v in zip(spec.pairs, combo):
            params[p], params[q] = v
        for k, v in zip(spec.ranges, combo[len(spec.pairs):]):
            params[k] = v
        try:
            yield params, generate_family(spec_id, params)
        except DomainError:
            continue


# ----------------------------------------------------------------------------
# shapes of normal forms

SPHERE_KEY = (True, 0, 0)
RP2_KEY = (False, 1, 0)
KLEIN_KEY = (False, 2, 0)
DISK_KEY = (True, 0, 1)
ANNULUS_KEY = (True, 0, 2)
MOEBIUS_KEY = (False, 1, 1)


def _base_key(base: BaseSurface):
    return (base.orientable, base.genus, base.boundary)


def _core_count(b):
    return sum(1 for f in b.fibers if abs(f.p) != 1)


def _block_shape(b):
    if not isinstance(b, SeifertBlock):
        return ("named", b.name)
    key, k = _base_key(b.base), _core_count(b)
    if key == MOEBIUS_KEY and k == 0:
        # the circle bundle over the Moebius band is (D,(2,1),(2,1))
        key, k = DISK_KEY, 2
    return ("seifert", key, k)


def _graph(blocks, gluings, selfs=0):
    return ("graph", tuple(sorted(blocks)), gluings, selfs)


def shape(expr):
    """Coarse descriptor of a normal form, used to cross-check case labels."""
    if isinstance(expr, LensSpace):
        if abs(expr.p) == 1:
            return ("S3",)
        return ("S2xS1",) if expr.p == 0 else ("lens",)
    if isinstance(expr, TorusBundle):
        return ("torus bundle",)
    if isinstance(expr, ConnectedSum):
        return ("sum",) + tuple(sorted(shape(p) for p in expr.parts))
    if isinstance(expr, GraphManifold):
        blocks = [_block_shape(b) for b in expr.blocks]
        if len(blocks) == 1 and not expr.gluings:
            b = expr.blocks[0]
            if isinstance(b, SeifertBlock):
                return ("seifert", _base_key(b.base), _core_count(b))
            return blocks[0]
        selfs = sum(1 for g in expr.gluings if g.is_self)
        return _graph(blocks, len(expr.gluings), selfs)
    return (type(expr).__name__,)


def _lensish(s):
    return s in (("lens",), ("S2xS1",))


def _sum_of(s, n):
    return s[0] == "sum" and len(s) == n + 1


_D2 = ("seifert", DISK_KEY, 2)
_A1 = ("seifert", ANNULUS_KEY, 1)
_TWO_D = _graph([_D2, _D2], 1)


def _two_block_shape(label, s):
    if label == 1:
        return s == ("S3",) or _lensish(s) or (_sum_of(s, 2) and all(map(_lensish, s[1:])))
    if label == 2:
        return s == ("seifert", SPHERE_KEY, 3)
    if label == 3:
        return s == ("seifert", RP2_KEY, 2)
    if label == 4:
        return s == ("seifert", KLEIN_KEY, 0)
    return s == _TWO_D


def shape_fits(kind, label, s):
    """Whether a normal form shape is of the kind the case label promises."""
    if kind == "two_block":
        return _two_block_shape(label, s)
    if kind == "self_glue":
        return {1: s == ("S2xS1",), 2: s == ("torus bundle",),
                3: s == _graph([_A1], 1, 1)}[label]
    if kind == "three_block":
        if label == 1:
            return any(_two_block_shape(k, s) for k in range(1, 6))
        if label == 2:
            return _sum_of(s, 3) and all(map(_lensish, s[1:]))
        if label == 3:
            return (_sum_of(s, 2) and ("seifert", SPHERE_KEY, 3) in s[1:]
                    and any(map(_lensish, s[1:])))
        if label == 4:
            return s in (("seifert", SPHERE_KEY, 4), ("seifert", KLEIN_KEY, 0))
        if label == 5:
            return s in (("seifert", KLEIN_KEY, 0), ("seifert", KLEIN_KEY, 1))
        if label == 6:
            return s == _TWO_D
        if label == 7:
            return s == _graph([_D2, ("seifert", MOEBIUS_KEY, 1)], 1)
        return s == _graph([_A1, _D2, _D2], 2)
    if kind == "double_annulus":
        if label == 1:
            return s == ("S2xS1",) or (_sum_of(s, 2) and ("S2xS1",) in s[1:]
                                       and all(map(_lensish, s[1:])))
        if label == 2:
            return s == ("torus bundle",)
        if label == 3:
            return s == _graph([_A1], 1, 1)
        return s == _graph([_A1, _A1], 2)
    raise ValueError(f"unknown classifier {kind!r}")


# ----------------------------------------------------------------------------
# arithmetic helpers for the decision trees


def _fold(fibers):
    """Core fiber of a one-port block with at most one exceptional fiber."""
    e = sum(p * q for p, q in fibers if abs(p) == 1)
    rest = [(p, q) if p > 0 else (-p, -q) for p, q in fibers if abs(p) != 1]
    if not rest:
        return (1, e)
    (p, q), = rest
    return (p, q + e * p)


def _fill_slope(core):
    # through [0,1;1,0] a solid torus with core (P, Q) fills its neighbour by (-Q, P)
    P, Q = core
    return (-Q, P)


def _lens_order(fibers):
    """|H1| of the closed block over S2 with these fibers (0 means infinite)."""
    total = 0
    for i, (p, q) in enumerate(fibers):
        prod = q
        for j, (pp, _) in enumerate(fibers):
            if j != i:
                prod *= pp
        total += prod
    return abs(total)


def _sphere_parts(fibers):
    """Prime pieces of the closed block over S2 with these fibers."""
    zeros = [f for f in fibers if f[0] == 0]
    if zeros:
        out = [("S2xS1",)] * (len(zeros) - 1)
        return out + [("lens",) for p, _ in fibers if abs(p) >= 2]
    k = sum(1 for p, _ in fibers if abs(p) >= 2)
    if k >= 3:
        return [("sfs", k)]
    order = _lens_order(fibers)
    if order == 1:
        return []
    return [("S2xS1",) if order == 0 else ("lens",)]


def _degenerate_parts(fibers):
    # a block with a (0,1) fiber: the remaining fibers split off as summands
    rest = list(fibers)
    rest.remove(next(f for f in rest if f[0] == 0))
    return [("S2xS1",) if p == 0 else ("lens",) for p, _ in rest if abs(p) != 1]


def _pairs(params, *names):
    return [(params[p], params[q]) for p, q in names]


def _is_d22(fibers):
    return sorted(abs(p) for p, _ in fibers) == [2, 2]


def _matches(G, block, gluing):
    return fiber_intersection(alternative_fibration(G, block).gluings[gluing]) == 0


def _matches_both(G, first, second):
    H = alternative_fibration(alternative_fibration(G, first), second)
    return all(fiber_intersection(g) == 0 for g in H.gluings)


@dataclass(frozen=True)
class Classification:
    label: int
    input: object
    output: object
    reason: str


class _Lazy:
    """Family expression built on first use; label-only runs skip it."""

    def __init__(self, spec_id, params):
        self.spec_id, self.params, self._expr = spec_id, params, None

    def __call__(self):
        if self._expr is None:
            self._expr = generate_family(self.spec_id, self.params)
        return self._expr


def _classified(label, G, reason, outputs=True):
    if not outputs:
        return Classification(label, None, None, reason)
    return Classification(label, G(), normalize(G()), reason)


def classify_two_block(a, b, c, d, e, f, g, h, outputs=True):
    """Case 1..5 for (D,(a,b),(c,d)) glued by [0,1;1,0] to (D,(e,f),(g,h))."""
    P = dict(a=a, b=b, c=c, d=d, e=e, f=f, g=g, h=h)
    G = _Lazy("Thm2.4-F1", P)
    left, right = _pairs(P, _AB, _CD), _pairs(P, _EF, _GH)
    if 0 in (a, c, e, g):
        return _classified(1, G, "a fiber with p = 0: connected sum of lens spaces", outputs)
    if 1 in map(abs, (a, c, e, g)):
        solid, other = (left, right) if 1 in (abs(a), abs(c)) else (right, left)
        filled = other + [_fill_slope(_fold(solid))]
        parts = _sphere_parts(filled)
        if parts == [("sfs", 3)]:
            return _classified(2, G, "filling of a two-fiber block: three fibers over S2", outputs)
        return _classified(1, G, "filling of a two-fiber block: lens space or sum", outputs)
    ld, rd = _is_d22(left), _is_d22(right)
    if ld and rd and _matches_both(G(), 0, 1):
        return _classified(4, G, "both blocks refiber and the fibers match: (K, +-1)", outputs)
    if (ld and _matches(G(), 0, 0)) or (rd and _matches(G(), 1, 0)):
        return _classified(3, G, "alternative fibration matches: two fibers over RP2", outputs)
    return _classified(5, G, "JSJ as written", outputs)


def classify_self_glue(a, b):
    """Case 1..3 for (A,(a,b)) self-glued by [0,1;1,0]."""
    G = generate_family("Thm2.4-F3", dict(a=a, b=b))
    if a == 0:
        return Classification(1, G, LensSpace(0, 1), "S2 x S1")
    if abs(a) == 1:
        s = b * a
        return Classification(2, G, TorusBundle(Mat2(s, 1, -1, 0)), "torus bundle")
    return Classification(3, G, G, "JSJ as written")


def collapse_collar(a, b, c, d, e, f, g, h, i, j):
    """The three-block chain with a unit middle fiber as a two-block gluing."""
    fp = e * f
    return parse_expr(f"SFS(D;({a},{b}),({c},{d})) =[1,{fp};0,-1]= "
                      f"SFS(D;({g},{h}),({i},{j}))")


def classify_three_block(a, b, c, d, e, f, g, h, i, j, outputs=True):
    """Case 1..8 for the chain (D,(a,b),(c,d)) - (A,(e,f)) - (D,(g,h),(i,j))."""
    P = dict(a=a, b=b, c=c, d=d, e=e, f=f, g=g, h=h, i=i, j=j)
    G = _Lazy("Thm2.7-F1", P)
    left, mid, right = _pairs(P, _AB, _CD), (e, f), _pairs(P, _GH, _IJ)
    lz = any(p == 0 for p, _ in left)
    rz = any(p == 0 for p, _ in right)
    if lz or rz:
        parts = []
        if lz:
            parts += _degenerate_parts(left)
        if rz:
            parts += _degenerate_parts(right)
        if lz and rz:
            parts += _sphere_parts([mid, (1, 0), (1, 0)])
        else:
            parts += _sphere_parts((right if lz else left) + [_fill_slope(mid)])
        sfs = [x for x in parts if x[0] == "sfs"]
        if sfs and len(parts) > 1:
            return _classified(3, G, "lens space plus three fibers over S2", outputs)
        if not sfs and len(parts) == 3:
            return _classified(2, G, "three lens space summands", outputs)
        return _classified(1, G, "degenerates to a manifold of the two-block family", outputs)
    if e == 0:
        return _classified(1, G, "middle fiber p = 0: two lens space summands", outputs)
    if 1 in map(abs, (a, c, g, i)):
        return _classified(1, G, "a unit end fiber reduces to the two-block family", outputs)
    ld, rd = _is_d22(left), _is_d22(right)
    if abs(e) == 1:
        if f == 0:
            return _classified(4, G, "fibers match across the collar: four fibers over S2", outputs)
        H = collapse_collar(a, b, c, d, e, f, g, h, i, j)
        if ld and rd and _matches_both(H, 0, 1):
            return _classified(5, G, "both ends refiber and match: base K", outputs)
        if (ld and _matches(H, 0, 0)) or (rd and _matches(H, 1, 0)):
            return _classified(1, G, "an end refibers and matches: two fibers over RP2", outputs)
        return _classified(6, G, "JSJ with matrix B", outputs)
    lm = ld and _matches(G(), 0, 0)
    rm = rd and _matches(G(), 2, 1)
    if lm and rm:
        return _classified(5, G, "both ends refiber and match the middle: base K", outputs)
    if lm or rm:
        return _classified(7, G, "one end refibers and matches the middle", outputs)
    return _classified(8, G, "JSJ as written", outputs)


def classify_double_annulus(a, b, c, d, outputs=True):
    """Case 1..4 for (A,(a,b)) and (A,(c,d)) glued twice by [0,1;1,0]."""
    G = _Lazy("Thm2.7-F2", dict(a=a, b=b, c=c, d=d))
    if a == 0 or c == 0:
        return _classified(1, G, "S2 x S1 plus a lens space", outputs)
    if abs(a) == 1 and abs(c) == 1:
        return _classified(2, G, "torus bundle", outputs)
    if abs(a) == 1 or abs(c) == 1:
        return _classified(3, G, "one annulus is a collar: self-glued annulus", outputs)
    return _classified(4, G, "JSJ as written", outputs)


# ----------------------------------------------------------------------------
# matrices and flat manifolds


def b_matrix(m, n, f):
    return Mat2(1 + m * f, f, -m - n - m * n * f, -(1 + n * f))


def c_matrix(m, n, f):
    return Mat2(-(1 + m * f), -f, -m - n - m * n * f, -(1 + n * f))


def thm27_matrix_reachable(B):
    """Whether ``B`` or ``-B`` is ``[[r, f], [s, t]]`` with r = 1, t = -1 mod f."""
    if not isinstance(B, Mat2):
        B = Mat2.of(B)
    if B.det != -1:
        raise ValueError(f"expected determinant -1, got {B.det}")
    for M in (B, -B):
        r, f, t = M.a, M.b, M.d
        if f == 0:
            if r == 1 and t == -1:
                return True
        elif (r - 1) % f == 0 and (t + 1) % f == 0:
            return True
    return False


FLAT_TYPES = ("3-torus", "half turn", "third turn", "quarter turn", "sixth turn",
              "Hantzsche-Wendt")
_TRACE_TYPE = {-2: "half turn", -1: "third turn", 0: "quarter turn", 1: "sixth turn"}


@dataclass(frozen=True)
class FlatReport:
    bound: int
    identity_found: bool
    missing_a: tuple
    reachable: dict
    unreachable: tuple

    def lines(self):
        out = [f"bound {self.bound}: identity monodromy "
               f"{'FOUND' if self.identity_found else 'never occurs'}"]
        out.append("[[-1,0],[a,-1]] for every |a| <= bound: "
                   + ("yes" if not self.missing_a else f"missing {list(self.missing_a)}"))
        for name in FLAT_TYPES:
            if name in self.reachable:
                out.append(f"  reachable: {name} via {self.reachable[name]}")
        for name in self.unreachable:
            out.append(f"  not reached: {name}")
        return out


def _hantzsche_wendt_witness(bound):
    from .moves import equivalent

    target = parse_expr("SFS(RP2;(2,1),(2,-1))")
    odd = [q for q in range(-bound, bound + 1) if q % 2]
    for b, d, f, h in itertools.product(odd, repeat=4):
        P = dict(a=2, b=b, c=2, d=d, e=2, f=f, g=2, h=h)
        if str(equivalent(generate_family("Thm2.4-F1", P), target).verdict) == "yes":
            return f"Thm2.4-F1 {P}"
    return None


def flat_reachability(bound):
    """Monodromies of the double-annulus family and the flat manifolds they reach."""
    if bound < 1:
        raise ValueError("bound must be positive")
    identity = Mat2(1, 0, 0, 1)
    found_a = set()
    identity_found = False
    reachable = {}
    rng = range(-bound, bound + 1)
    for m, n, f in itertools.product(rng, rng, rng):
        C = c_matrix(m, n, f)
        if C == identity:
            identity_found = True
            reachable.setdefault("3-torus", f"C({m},{n},{f})")
        if C.a == -1 and C.b == 0 and C.d == -1:
            found_a.add(C.c)
        if C == Mat2(-1, 0, 0, -1) or C.trace in (-1, 0, 1):
            reachable.setdefault(_TRACE_TYPE[C.trace], f"C({m},{n},{f}) = {C}")
    hw = _hantzsche_wendt_witness(min(bound, 3))
    if hw is not None:
        reachable["Hantzsche-Wendt"] = hw
    missing = tuple(a for a in rng if a not in found_a)
    unreachable = tuple(t for t in FLAT_TYPES if t not in reachable)
    return FlatReport(bound, identity_found, missing, reachable, unreachable)


def three_torus_unreachable(bound):
    identity = Mat2(1, 0, 0, 1)
    rng = range(-bound, bound + 1)
    return not any(c_matrix(m, n, f) == identity
                   for m, n, f in itertools.product(rng, rng, rng))


__all__ = [
    "CatalogRow",
    "Classification",
    "DomainError",
    "FAMILIES",
    "FamilySpec",
    "FlatReport",
    "RowReport",
    "TABLE_TALLIES",
    "b_matrix",
    "c_matrix",
    "classify_double_annulus",
    "classify_self_glue",
    "classify_three_block",
    "classify_two_block",
    "collapse_collar",
    "coprime_pairs",
    "enumerate_family",
    "family_text",
    "flat_reachability",
    "generate_family",
    "load_rows",
    "printed_rows",
    "shape",
    "shape_fits",
    "tallies",
    "thm27_matrix_reachable",
    "three_torus_unreachable",
    "verify_catalog",
    "verify_row",
]
