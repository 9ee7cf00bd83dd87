"""Text notation for manifold expressions and filling tuples.

Grammar (whitespace-insensitive)::

    expr   := chain ('#' chain)*
    chain  := piece ( '=' matrix '=' piece | '/' matrix )*
    piece  := 'SFS(' base ';' [pair (',' pair)*] ')'
            | 'L(' int ',' int ')' | 'TB' matrix
            | 'S3' | 'S2xS1' | 'DxS1' | 'AxS1' | 'PxS1'
            | family ['(' slopes ')']
            | 'G{' piece (';' piece)* '|' [edge (',' edge)*] '}'
            | '(' expr ')'
    base   := S2 | D | A | P | RP2 | Mb | K | '(' int ',' ('or'|'nonor') ',' int ')'
    matrix := '[' int ',' int ';' int ',' int ']'
    edge   := int '.' int '-' int '.' int ':' matrix

``X =[A]= Y`` glues the last free port of ``X`` to the first free port of
``Y``; ``X /[A]`` glues the first free port of ``X`` to its last one.  The
``G{...}`` form spells out an arbitrary gluing graph by block and port.
"""

from __future__ import annotations

import re

from .exactalg import Mat2
from .manifolds import (
    BASE_BY_NAME,
    BaseSurface,
    ConnectedSum,
    FiberPair,
    FilledBlock,
    FillingTuple,
    Gluing,
    GraphManifold,
    LensSpace,
    SeifertBlock,
    Slope,
    SolidTorus,
    TorusBundle,
    validate,
)


class ParseError(ValueError):
    def __init__(self, message, text="", pos=None):
        self.message = message
        self.text = text
        self.pos = pos
        where = f" at position {pos}" if pos is not None else ""
        super().__init__(f"{message}{where}")

    def pretty(self):
        if self.pos is None:
            return str(self)
        return f"{self}\n  {self.text}\n  {' ' * self.pos}^"


_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9]*")
_INT = re.compile(r"[+-]?\d+")
_FAMILY = re.compile(r"^(M[1-7]|N[3-6]|W)$")


class _Parser:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    # -- lexing helpers
    def error(self, msg, pos=None):
        raise ParseError(msg, self.text, self.pos if pos is None else pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def accept(self, s):
        self.skip()
        if self.text.startswith(s, self.pos):
            self.pos += len(s)
            return True
        return False

    def expect(self, s):
        if not self.accept(s):
            found = self.text[self.pos:self.pos + 8] or "end of input"
            self.error(f"expected {s!r}, found {found!r}")

    def ident(self):
        self.skip()
        m = _IDENT.match(self.text, self.pos)
        if not m:
            self.error("expected a name")
        self.pos = m.end()
        return m.group()

    def integer(self):
        self.skip()
        m = _INT.match(self.text, self.pos)
        if not m:
            self.error("expected an integer")
        self.pos = m.end()
        return int(m.group())

    def matrix(self):
        self.expect("[")
        a = self.integer()
        self.expect(",")
        b = self.integer()
        self.expect(";")
        c = self.integer()
        self.expect(",")
        d = self.integer()
        self.expect("]")
        return Mat2(a, b, c, d)

    # -- grammar
    def expr(self):
        parts = [self.chain()]
        while self.accept("#"):
            parts.append(self.chain())
        return parts[0] if len(parts) == 1 else ConnectedSum(tuple(parts))

    def chain(self):
        start = self.pos
        acc = self.piece()
        while True:
            here = self.pos
            if self.accept("="):
                M = self.matrix()
                self.expect("=")
                rhs_pos = self.pos
                rhs = self.piece()
                acc = self._glue(_as_graph(acc, self, start), _as_graph(rhs, self, rhs_pos),
                                 M, here)
            elif self.accept("/"):
                M = self.matrix()
                acc = self._self_glue(_as_graph(acc, self, start), M, here)
            else:
                return acc

    def _glue(self, G, H, M, pos):
        left, right = G.free_ports(), H.free_ports()
        if not left or not right:
            self.error("gluing needs a free boundary torus on both sides", pos)
        off = len(G.blocks)
        li, lk = left[-1]
        ri, rk = right[0]
        shifted = tuple(Gluing((g.left[0] + off, g.left[1]), (g.right[0] + off, g.right[1]),
                               g.matrix) for g in H.gluings)
        return GraphManifold(G.blocks + H.blocks,
                             G.gluings + shifted + (Gluing((li, lk), (ri + off, rk), M),))

    def _self_glue(self, G, M, pos):
        free = G.free_ports()
        if len(free) < 2:
            self.error("self-gluing needs two free boundary tori", pos)
        return GraphManifold(G.blocks, G.gluings + (Gluing(free[0], free[-1], M),))

    def piece(self):
        if self.accept("("):
            inner = self.expr()
            self.expect(")")
            return inner
        start = self.pos
        name = self.ident()
        if name == "SFS":
            return self.sfs()
        if name == "L":
            self.expect("(")
            p = self.integer()
            self.expect(",")
            q = self.integer()
            self.expect(")")
            return LensSpace(p, q)
        if name == "TB":
            return TorusBundle(self.matrix())
        if name == "S3":
            return LensSpace(1, 0)
        if name == "S2xS1":
            return LensSpace(0, 1)
        if name == "DxS1":
            return SolidTorus()
        if name in ("AxS1", "PxS1"):
            return GraphManifold((SeifertBlock(BaseSurface.named(name[0])),))
        if name == "G":
            return self.graph()
        if _FAMILY.match(name):
            return self.named(name, start)
        self.error(f"unknown piece {name!r}", start)

    def sfs(self):
        self.expect("(")
        base = self.base()
        self.expect(";")
        pairs = []
        if self.peek() != ")":
            pairs.append(self.pair())
            while self.accept(","):
                pairs.append(self.pair())
        self.expect(")")
        return GraphManifold((SeifertBlock(base, tuple(pairs)),))

    def base(self):
        if self.accept("("):
            g = self.integer()
            self.expect(",")
            kind = self.ident()
            if kind not in ("or", "nonor"):
                self.error("expected 'or' or 'nonor'")
            self.expect(",")
            b = self.integer()
            self.expect(")")
            if g < 0 or b < 0:
                self.error("genus and boundary count must be nonnegative")
            return BaseSurface(kind == "or", g, b)
        start = self.pos
        name = self.ident()
        if name not in BASE_BY_NAME:
            self.error(f"unknown base surface {name!r}", start)
        return BaseSurface.named(name)

    def pair(self):
        self.expect("(")
        p = self.integer()
        self.expect(",")
        q = self.integer()
        self.expect(")")
        return FiberPair(p, q)

    def named(self, name, start):
        slopes = FillingTuple(())
        if self.peek() == "(":
            # only a slope list follows a family name
            self.expect("(")
            close = self.text.find(")", self.pos)
            if close < 0:
                self.error("unterminated slope list")
            body = self.text[self.pos:close]
            try:
                slopes = parse_slopes(body)
            except ParseError as e:
                self.error(e.message, self.pos + (e.pos or 0))
            self.pos = close + 1
        try:
            return FilledBlock(name, slopes)
        except (KeyError, ValueError) as e:
            self.error(str(e), start)

    def graph(self):
        self.expect("{")
        blocks = [self.graph_block()]
        while self.accept(";"):
            blocks.append(self.graph_block())
        self.expect("|")
        gluings = []
        if self.peek() != "}":
            gluings.append(self.edge())
            while self.accept(","):
                gluings.append(self.edge())
        self.expect("}")
        return GraphManifold(tuple(blocks), tuple(gluings))

    def graph_block(self):
        pos = self.pos
        p = self.piece()
        G = _as_graph(p, self, pos)
        if len(G.blocks) != 1 or G.gluings:
            self.error("graph form entries must be single blocks", pos)
        return G.blocks[0]

    def edge(self):
        i = self.integer()
        self.expect(".")
        k = self.integer()
        self.expect("-")
        j = self.integer()
        self.expect(".")
        l = self.integer()
        self.expect(":")
        return Gluing((i, k), (j, l), self.matrix())


def _as_graph(piece, parser, pos):
    if isinstance(piece, GraphManifold):
        return piece
    if isinstance(piece, SolidTorus):
        return GraphManifold((SeifertBlock(BaseSurface.named("D")),))
    if isinstance(piece, FilledBlock):
        return GraphManifold((piece,))
    parser.error("only Seifert blocks and cusped blocks can be glued", pos)


def parse_expr(text, check=True):
    """Parse notation into a manifold expression.

    Raises :class:`ParseError` on syntax errors and, when ``check`` is set,
    on invariant violations reported by :func:`validate`.
    """
    p = _Parser(text)
    expr = p.expr()
    p.skip()
    if p.pos != len(text):
        p.error(f"unexpected {text[p.pos:p.pos + 8]!r}")
    if check:
        problems = validate(expr)
        if problems:
            raise ParseError("; ".join(problems), text, None)
    return expr


# ----------------------------------------------------------------------------
# slopes

_SLOPE = re.compile(r"^([+-]?\d+)(?:/([+-]?\d+))?$")


def parse_slope(tok):
    """One slope entry; returns ``None`` for an unfilled mark."""
    t = tok.strip()
    if t in (".", "·", "_"):
        return None
    if t in ("inf", "oo", "∞", "1/0"):
        return Slope.infinity()
    m = _SLOPE.match(t)
    if not m:
        raise ParseError(f"bad slope {tok!r}", tok, 0)
    p = int(m.group(1))
    q = int(m.group(2)) if m.group(2) is not None else 1
    if p == 0 and q == 0:
        raise ParseError("0/0 is not a slope", tok, 0)
    return Slope(p, q)


def parse_slopes(text):
    """``"-2,-1/2,.,1/2,2"`` -> FillingTuple; ``.`` marks an unfilled cusp."""
    if not text.strip():
        raise ParseError("empty slope list", text, 0)
    out = []
    pos = 0
    for tok in text.split(","):
        try:
            out.append(parse_slope(tok))
        except ParseError as e:
            raise ParseError(e.message, text, pos) from None
        pos += len(tok) + 1
    return FillingTuple(tuple(out))


def format_slopes(t):
    return str(t)


# ----------------------------------------------------------------------------
# printing


def _print_block(b):
    if isinstance(b, FilledBlock):
        t = b.slopes.trimmed()
        return f"{b.name}({t})" if len(t) else b.name
    base = b.base
    if not b.fibers and base.orientable and base.genus == 0 and base.boundary in (2, 3):
        return f"{base.name}xS1"
    return f"SFS({base.name};{','.join(str(f) for f in b.fibers)})"


def _print_graph(G):
    n = len(G.blocks)
    chain = [g for g in G.gluings[:n - 1]]
    selfs = G.gluings[n - 1:]
    if len(chain) == n - 1:
        out = _print_block(G.blocks[0])
        for i, g in enumerate(chain):
            out += f" =[{g.matrix.a},{g.matrix.b};{g.matrix.c},{g.matrix.d}]= "
            out += _print_block(G.blocks[i + 1])
        for g in selfs:
            out += f" /[{g.matrix.a},{g.matrix.b};{g.matrix.c},{g.matrix.d}]"
        try:
            if parse_expr(out, check=False) == G:
                return out
        except ParseError:
            pass
    blocks = "; ".join(_print_block(b) for b in G.blocks)
    edges = ", ".join(f"{g.left[0]}.{g.left[1]}-{g.right[0]}.{g.right[1]}:{g.matrix}"
                      for g in G.gluings)
    return f"G{{{blocks} | {edges}}}"


def print_expr(expr):
    """Deterministic text form; ``parse_expr(print_expr(e)) == e``."""
    if isinstance(expr, GraphManifold):
        return _print_graph(expr)
    if isinstance(expr, SolidTorus):
        return "DxS1"
    if isinstance(expr, LensSpace):
        return f"L({expr.p},{expr.q})"
    if isinstance(expr, TorusBundle):
        return f"TB{expr.monodromy}"
    if isinstance(expr, FilledBlock):
        return _print_block(expr)
    if isinstance(expr, ConnectedSum):
        out = []
        for part in expr.parts:
            s = print_expr(part)
            out.append(f"({s})" if isinstance(part, ConnectedSum) else s)
        return " # ".join(out)
    raise TypeError(f"not a manifold expression: {expr!r}")
