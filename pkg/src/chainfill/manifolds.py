"""Symbolic manifold expressions.

A :class:`GraphManifold` is a list of blocks (Seifert blocks or cusped named
blocks with a partial filling) plus gluings between labelled ports.  Each
Seifert port carries the basis (section boundary ``c``, fiber ``h``); each
cusp of a named block carries (meridian, longitude).

A gluing ``(left, right, A)`` with ``A = [[m, n], [p, q]]`` identifies
``c_left = m c_right + p h_right`` and ``h_left = n c_right + q h_right``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Union

from .exactalg import Mat2

# ----------------------------------------------------------------------------
# slopes and filling tuples


@dataclass(frozen=True)
class Slope:
    """A slope ``p/q`` in Q u {inf}, stored reduced with ``q >= 0``."""

    p: int
    q: int

    def __post_init__(self):
        p, q = self.p, self.q
        if p == 0 and q == 0:
            raise ValueError("0/0 is not a slope")
        g = gcd(p, q)
        p, q = p // g, q // g
        if q < 0 or (q == 0 and p < 0):
            p, q = -p, -q
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @classmethod
    def infinity(cls):
        return cls(1, 0)

    @property
    def is_infinite(self):
        return self.q == 0

    def value(self):
        return None if self.q == 0 else Fraction(self.p, self.q)

    def sort_key(self):
        # infinity sorts before every rational
        return (0, 0) if self.q == 0 else (1, Fraction(self.p, self.q))

    def __str__(self):
        if self.q == 0:
            return "inf"
        if self.q == 1:
            return str(self.p)
        return f"{self.p}/{self.q}"


@dataclass(frozen=True)
class FillingTuple:
    """Per-cusp slopes; ``None`` marks an unfilled cusp."""

    entries: tuple[Slope | None, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def padded(self, n):
        if len(self.entries) > n:
            raise ValueError(f"{len(self.entries)} slopes for {n} cusps")
        return FillingTuple(self.entries + (None,) * (n - len(self.entries)))

    def trimmed(self):
        e = list(self.entries)
        while e and e[-1] is None:
            e.pop()
        return FillingTuple(tuple(e))

    @property
    def filled(self):
        return [i for i, s in enumerate(self.entries) if s is not None]

    @property
    def unfilled(self):
        return [i for i, s in enumerate(self.entries) if s is None]

    def sort_key(self):
        return tuple((-1, 0) if s is None else s.sort_key() for s in self.entries)

    def __str__(self):
        return ",".join("." if s is None else str(s) for s in self.entries)


# ----------------------------------------------------------------------------
# blocks

_BASE_ALIASES = {
    (True, 0, 0): "S2",
    (True, 0, 1): "D",
    (True, 0, 2): "A",
    (True, 0, 3): "P",
    (False, 1, 0): "RP2",
    (False, 1, 1): "Mb",
    (False, 2, 0): "K",
}
BASE_BY_NAME = {v: k for k, v in _BASE_ALIASES.items()}


@dataclass(frozen=True, order=True)
class BaseSurface:
    orientable: bool
    genus: int
    boundary: int

    @classmethod
    def named(cls, name):
        return cls(*BASE_BY_NAME[name])

    @property
    def name(self):
        alias = _BASE_ALIASES.get((self.orientable, self.genus, self.boundary))
        if alias:
            return alias
        return f"({self.genus},{'or' if self.orientable else 'nonor'},{self.boundary})"

    @property
    def euler_characteristic(self):
        if self.orientable:
            return 2 - 2 * self.genus - self.boundary
        return 2 - self.genus - self.boundary


@dataclass(frozen=True, order=True)
class FiberPair:
    p: int
    q: int

    def __str__(self):
        return f"({self.p},{self.q})"


@dataclass(frozen=True)
class SeifertBlock:
    base: BaseSurface
    fibers: tuple[FiberPair, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "fibers", tuple(self.fibers))

    @property
    def port_count(self):
        return self.base.boundary

    def ports(self):
        return list(range(self.base.boundary))


@dataclass(frozen=True)
class FilledBlock:
    """A registered cusped manifold, e.g. ``M5`` or ``M2(-2)``.

    ``slopes`` always has one entry per cusp; unfilled cusps are ports.
    """

    name: str
    slopes: FillingTuple = field(default_factory=lambda: FillingTuple(()))

    def __post_init__(self):
        from .chains import cusp_count

        n = cusp_count(self.name)
        s = self.slopes
        if not isinstance(s, FillingTuple):
            s = FillingTuple(tuple(s))
        object.__setattr__(self, "slopes", s.padded(n))

    @property
    def port_count(self):
        return len(self.slopes.unfilled)

    def ports(self):
        return self.slopes.unfilled


Block = Union[SeifertBlock, FilledBlock]


@dataclass(frozen=True)
class Gluing:
    left: tuple[int, int]
    right: tuple[int, int]
    matrix: Mat2

    @property
    def is_self(self):
        return self.left[0] == self.right[0]


@dataclass(frozen=True)
class GraphManifold:
    blocks: tuple[Block, ...]
    gluings: tuple[Gluing, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))
        object.__setattr__(self, "gluings", tuple(self.gluings))

    def used_ports(self):
        used = []
        for g in self.gluings:
            used += [g.left, g.right]
        return used

    def free_ports(self):
        used = set(self.used_ports())
        return [(i, k) for i, b in enumerate(self.blocks) for k in b.ports()
                if (i, k) not in used]

    def gluings_at(self, block):
        return [g for g in self.gluings if block in (g.left[0], g.right[0])]

    def components(self):
        parent = list(range(len(self.blocks)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for g in self.gluings:
            a, b = find(g.left[0]), find(g.right[0])
            if a != b:
                parent[a] = b
        groups = {}
        for i in range(len(self.blocks)):
            groups.setdefault(find(i), []).append(i)
        return list(groups.values())


@dataclass(frozen=True)
class TorusBundle:
    monodromy: Mat2


@dataclass(frozen=True)
class LensSpace:
    """``L(p, q)``; ``L(0, 1)`` is S2 x S1 and ``L(1, 0)`` is S3."""

    p: int
    q: int


@dataclass(frozen=True)
class ConnectedSum:
    parts: tuple

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))


@dataclass(frozen=True)
class SolidTorus:
    pass


ManifoldExpr = Union[GraphManifold, TorusBundle, LensSpace, ConnectedSum,
                     SolidTorus, FilledBlock]

S3 = LensSpace(1, 0)
S2xS1 = LensSpace(0, 1)


def seifert(base, *pairs):
    """Single-block graph manifold, e.g. ``seifert("D", (2, 1), (3, 1))``."""
    if isinstance(base, str):
        base = BaseSurface.named(base)
    return GraphManifold((SeifertBlock(base, tuple(FiberPair(p, q) for p, q in pairs)),))


# ----------------------------------------------------------------------------
# validation


def validate(expr):
    """Return a list of human-readable invariant violations (empty if valid)."""
    out = []
    _validate(expr, "", out)
    return out


def _validate_block(block, where, out):
    if isinstance(block, SeifertBlock):
        b = block.base
        if b.genus < 0 or b.boundary < 0:
            out.append(f"{where}: negative genus or boundary count")
        if not b.orientable and b.genus < 1:
            out.append(f"{where}: non-orientable base needs at least one crosscap")
        for j, f in enumerate(block.fibers):
            if gcd(f.p, f.q) != 1:
                out.append(f"{where} fiber {j} {f}: non-coprime")
    elif isinstance(block, FilledBlock):
        from .chains import REGISTRY

        if block.name not in REGISTRY.families:
            out.append(f"{where}: unknown cusped block {block.name!r}")
    else:
        out.append(f"{where}: not a block: {block!r}")


def _validate(expr, where, out):
    if isinstance(expr, GraphManifold):
        if not expr.blocks:
            out.append(f"{where}graph manifold without blocks")
        for i, b in enumerate(expr.blocks):
            _validate_block(b, f"{where}block {i}", out)
        seen = set()
        for j, g in enumerate(expr.gluings):
            if g.matrix.det != -1:
                out.append(f"{where}gluing {j} {g.matrix}: gluing det must be -1 "
                           f"(got {g.matrix.det})")
            for side in (g.left, g.right):
                i, k = side
                if not 0 <= i < len(expr.blocks) or k not in expr.blocks[i].ports():
                    out.append(f"{where}gluing {j}: port {side} does not exist")
                elif side in seen:
                    out.append(f"{where}gluing {j}: port {side} used twice")
                seen.add(side)
        if expr.blocks and len(expr.components()) > 1:
            out.append(f"{where}gluing graph is disconnected")
    elif isinstance(expr, TorusBundle):
        if expr.monodromy.det != 1:
            out.append(f"{where}torus bundle monodromy {expr.monodromy}: det must be +1")
    elif isinstance(expr, LensSpace):
        if gcd(expr.p, expr.q) != 1:
            out.append(f"{where}lens space L({expr.p},{expr.q}): non-coprime")
    elif isinstance(expr, ConnectedSum):
        if len(expr.parts) < 2:
            out.append(f"{where}connected sum needs at least two summands")
        for i, part in enumerate(expr.parts):
            _validate(part, f"{where}summand {i}: ", out)
    elif isinstance(expr, SolidTorus):
        pass
    elif isinstance(expr, FilledBlock):
        _validate_block(expr, f"{where}{expr.name}", out)
    else:
        out.append(f"{where}unknown expression {expr!r}")


def free_boundary_count(expr):
    """Number of unglued, unfilled boundary tori."""
    if isinstance(expr, GraphManifold):
        return len(expr.free_ports())
    if isinstance(expr, ConnectedSum):
        return sum(free_boundary_count(p) for p in expr.parts)
    if isinstance(expr, SolidTorus):
        return 1
    if isinstance(expr, FilledBlock):
        return expr.port_count
    return 0


# ----------------------------------------------------------------------------
# JSON graph form


def to_json(expr):
    if isinstance(expr, GraphManifold):
        return {
            "kind": "graph",
            "blocks": [_block_json(b) for b in expr.blocks],
            "gluings": [{"left": list(g.left), "right": list(g.right),
                         "matrix": g.matrix.rows()} for g in expr.gluings],
        }
    if isinstance(expr, TorusBundle):
        return {"kind": "torus_bundle", "monodromy": expr.monodromy.rows()}
    if isinstance(expr, LensSpace):
        return {"kind": "lens", "p": expr.p, "q": expr.q}
    if isinstance(expr, ConnectedSum):
        return {"kind": "connected_sum", "parts": [to_json(p) for p in expr.parts]}
    if isinstance(expr, SolidTorus):
        return {"kind": "solid_torus"}
    if isinstance(expr, FilledBlock):
        return _block_json(expr)
    raise TypeError(f"not a manifold expression: {expr!r}")


def _block_json(b):
    if isinstance(b, SeifertBlock):
        return {"kind": "seifert",
                "base": {"orientable": b.base.orientable, "genus": b.base.genus,
                         "boundary": b.base.boundary},
                "fibers": [[f.p, f.q] for f in b.fibers]}
    return {"kind": "filled", "name": b.name,
            "slopes": [None if s is None else [s.p, s.q] for s in b.slopes]}


def from_json(d):
    kind = d["kind"]
    if kind == "graph":
        return GraphManifold(
            tuple(_block_from_json(b) for b in d["blocks"]),
            tuple(Gluing(tuple(g["left"]), tuple(g["right"]), Mat2.of(g["matrix"]))
                  for g in d["gluings"]))
    if kind == "torus_bundle":
        return TorusBundle(Mat2.of(d["monodromy"]))
    if kind == "lens":
        return LensSpace(d["p"], d["q"])
    if kind == "connected_sum":
        return ConnectedSum(tuple(from_json(p) for p in d["parts"]))
    if kind == "solid_torus":
        return SolidTorus()
    if kind == "filled":
        return _block_from_json(d)
    raise ValueError(f"unknown expression kind {kind!r}")


def _block_from_json(d):
    if d["kind"] == "seifert":
        b = d["base"]
        return SeifertBlock(BaseSurface(b["orientable"], b["genus"], b["boundary"]),
                            tuple(FiberPair(p, q) for p, q in d["fibers"]))
    return FilledBlock(d["name"], FillingTuple(tuple(
        None if s is None else Slope(*s) for s in d["slopes"])))
