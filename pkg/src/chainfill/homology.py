"""First homology of manifold expressions.

Every block contributes generators and relations to one integer
presentation; the cokernel is computed by Smith normal form.  Cycles in the
gluing graph add one free generator each.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .exactalg import AbelianGroup, cokernel
from .manifolds import (
    ConnectedSum,
    FilledBlock,
    FillingTuple,
    GraphManifold,
    LensSpace,
    SeifertBlock,
    SolidTorus,
    TorusBundle,
)

# How a gluing matrix [[m, n], [p, q]] identifies the two port bases.  Only
# "row" agrees with the tables; the others exist so tests can show that.
CONVENTIONS = ("row", "column", "transposed", "sign_flipped", "reversed")


@dataclass(frozen=True)
class PeripheralDatum:
    """Homology of a cusped block with its meridian/longitude classes.

    Generators are ``mu_1..mu_n`` followed by ``extra`` further generators;
    ``relations`` are rows over all of them and ``longitudes[j]`` is the
    class of the j-th longitude.
    """

    cusp_count: int
    longitudes: tuple[tuple[int, ...], ...]
    extra: int = 0
    relations: tuple[tuple[int, ...], ...] = ()

    @property
    def generator_count(self):
        return self.cusp_count + self.extra

    @classmethod
    def from_linking(cls, L):
        n = len(L)
        for i in range(n):
            if L[i][i] != 0:
                raise ValueError("linking matrix needs a zero diagonal")
            for j in range(n):
                if L[i][j] != L[j][i]:
                    raise ValueError("linking matrix must be symmetric")
        return cls(n, tuple(tuple(row) for row in L))

    def linking_matrix(self):
        if self.extra or self.relations:
            return None
        return [list(r) for r in self.longitudes]


class _Presentation:
    def __init__(self):
        self.ngens = 0
        self.rows = []
        self.labels = []

    def gen(self, label):
        self.ngens += 1
        self.labels.append(label)
        return {self.ngens - 1: 1}

    def relate(self, *terms):
        """Add the relation ``sum(coef * vec) = 0``."""
        row = {}
        for coef, vec in terms:
            for k, v in vec.items():
                row[k] = row.get(k, 0) + coef * v
        row = {k: v for k, v in row.items() if v}
        if row:
            self.rows.append(row)

    def group(self, extra_free=0):
        dense = [[r.get(k, 0) for k in range(self.ngens)] for r in self.rows]
        G = cokernel(dense, self.ngens) if dense else AbelianGroup(self.ngens)
        return G + AbelianGroup(extra_free)


def _seifert_ports(P, block, tag):
    b = block.base
    ngen_a = 2 * b.genus if b.orientable else b.genus
    a = [P.gen(f"{tag}.a{i}") for i in range(ngen_a)]
    x = [P.gen(f"{tag}.x{i}") for i in range(len(block.fibers))]
    c = [P.gen(f"{tag}.c{i}") for i in range(b.boundary)]
    h = P.gen(f"{tag}.h")
    for f, xi in zip(block.fibers, x):
        P.relate((f.p, xi), (f.q, h))
    terms = [(1, v) for v in x + c]
    if not b.orientable:
        terms += [(2, v) for v in a]
        P.relate((2, h))
    P.relate(*terms)
    return {k: (c[k], h) for k in range(b.boundary)}


def _filled_ports(P, block, tag):
    from .chains import peripheral

    datum = peripheral(block.name)
    gens = [P.gen(f"{tag}.mu{j}") for j in range(datum.cusp_count)]
    gens += [P.gen(f"{tag}.e{j}") for j in range(datum.extra)]

    def vec(coeffs):
        out = {}
        for g, v in zip(gens, coeffs):
            if v:
                (k,) = g
                out[k] = v
        return out

    for rel in datum.relations:
        P.relate((1, vec(rel)))
    ports = {}
    for j in range(datum.cusp_count):
        mu, lam = gens[j], vec(datum.longitudes[j])
        s = block.slopes[j]
        if s is None:
            ports[j] = (mu, lam)
        else:
            P.relate((s.p, mu), (s.q, lam))
    return ports


def _glue(P, left, right, M, convention):
    (c1, h1), (c2, h2) = left, right
    m, n, p, q = M.a, M.b, M.c, M.d
    if convention == "row":
        P.relate((1, c1), (-m, c2), (-p, h2))
        P.relate((1, h1), (-n, c2), (-q, h2))
    elif convention == "column":
        P.relate((1, c1), (-m, c2), (-n, h2))
        P.relate((1, h1), (-p, c2), (-q, h2))
    elif convention == "transposed":
        P.relate((1, c2), (-m, c1), (-n, h1))
        P.relate((1, h2), (-p, c1), (-q, h1))
    elif convention == "reversed":
        P.relate((1, c2), (-m, c1), (-p, h1))
        P.relate((1, h2), (-n, c1), (-q, h1))
    elif convention == "sign_flipped":
        P.relate((1, c1), (-m, c2), (-p, h2))
        P.relate((1, h1), (n, c2), (q, h2))
    else:
        raise ValueError(f"unknown convention {convention!r}")


def graph_h1(G, convention="row"):
    P = _Presentation()
    ports = []
    for i, block in enumerate(G.blocks):
        if isinstance(block, SeifertBlock):
            ports.append(_seifert_ports(P, block, f"b{i}"))
        else:
            ports.append(_filled_ports(P, block, f"b{i}"))
    for g in G.gluings:
        _glue(P, ports[g.left[0]][g.left[1]], ports[g.right[0]][g.right[1]],
              g.matrix, convention)
    cycles = len(G.gluings) - len(G.blocks) + len(G.components())
    return P.group(cycles)


def h1(expr, convention="row"):
    """First integral homology of an expression."""
    if isinstance(expr, GraphManifold):
        return graph_h1(expr, convention)
    if isinstance(expr, LensSpace):
        p = abs(expr.p)
        return AbelianGroup(1) if p == 0 else AbelianGroup.from_factors(0, [p])
    if isinstance(expr, TorusBundle):
        A = expr.monodromy
        return AbelianGroup(1) + cokernel([[A.a - 1, A.b], [A.c, A.d - 1]])
    if isinstance(expr, ConnectedSum):
        out = AbelianGroup()
        for part in expr.parts:
            out = out + h1(part, convention)
        return out
    if isinstance(expr, SolidTorus):
        return AbelianGroup(1)
    if isinstance(expr, FilledBlock):
        return h1_filled(expr.name, expr.slopes)
    raise TypeError(f"not a manifold expression: {expr!r}")


def filled_h1_from_datum(datum, slopes):
    rows = [list(r) for r in datum.relations]
    for j, s in enumerate(slopes):
        if s is None:
            continue
        row = [s.q * v for v in datum.longitudes[j]]
        row[j] += s.p
        rows.append(row)
    if not rows:
        return AbelianGroup(datum.generator_count)
    return cokernel(rows, datum.generator_count)


def h1_filled(name, slopes):
    """H1 of a registered cusped block filled along ``slopes``.

    ``slopes`` must have one entry per cusp (``None`` for unfilled).
    """
    from .chains import peripheral

    datum = peripheral(name)
    if not isinstance(slopes, FillingTuple):
        slopes = FillingTuple(tuple(slopes))
    if len(slopes) != datum.cusp_count:
        raise ValueError(f"{name} has {datum.cusp_count} cusps, "
                         f"got {len(slopes)} slopes")
    return filled_h1_from_datum(datum, slopes)


def _as_tuple(t):
    return t if isinstance(t, FillingTuple) else FillingTuple(tuple(t))


def cycle_edges(n):
    if n < 2:
        return []
    if n == 2:
        return [(0, 1)]
    return [(i, (i + 1) % n) for i in range(n)]


def calibrate_linking(block, fixtures, values=(-1, 0, 1)):
    """Every cycle-adjacency linking matrix reproducing all ``fixtures``.

    ``block`` is a registered family name or a cusp count.  ``fixtures`` is
    a list of ``(FillingTuple, AbelianGroup)``; shorter tuples are padded
    with unfilled cusps.  Returns a list of matrices, empty on calibration
    failure.
    """
    if isinstance(block, str):
        from .chains import cusp_count as _count

        cusp_count = _count(block)
    else:
        cusp_count = block
    fixtures = [(_as_tuple(t).padded(cusp_count), G) for t, G in fixtures]
    edges = cycle_edges(cusp_count)
    found = []
    for signs in itertools.product(values, repeat=len(edges)):
        L = [[0] * cusp_count for _ in range(cusp_count)]
        for (i, j), s in zip(edges, signs):
            L[i][j] = L[j][i] = s
        datum = PeripheralDatum.from_linking(L)
        if all(filled_h1_from_datum(datum, t) == G for t, G in fixtures):
            found.append(L)
    return found

