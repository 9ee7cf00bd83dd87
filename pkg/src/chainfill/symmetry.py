"""Symmetries of cusped blocks acting on filling tuples.

A symmetry permutes the cusps and applies an integral slope map on each.
Slope maps act projectively, so ``M`` and ``-M`` are the same map.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .exactalg import Mat2
from .manifolds import FillingTuple, Slope


def _projective(m):
    entries = (m.a, m.b, m.c, m.d)
    lead = next(x for x in entries if x != 0)
    return m if lead > 0 else Mat2(-m.a, -m.b, -m.c, -m.d)


@dataclass(frozen=True)
class SlopeMap:
    """``p/q -> (a p + b q) / (c p + d q)`` for a matrix of determinant +-1."""

    matrix: Mat2

    def __post_init__(self):
        m = self.matrix
        if not isinstance(m, Mat2):
            m = Mat2.of(m)
        if m.det not in (1, -1):
            raise ValueError(f"slope map needs determinant +-1, got {m.det}")
        object.__setattr__(self, "matrix", _projective(m))

    @classmethod
    def identity(cls):
        return cls(Mat2(1, 0, 0, 1))

    def __call__(self, s):
        if s is None:
            return None
        m = self.matrix
        return Slope(m.a * s.p + m.b * s.q, m.c * s.p + m.d * s.q)

    def __matmul__(self, other):
        return SlopeMap(self.matrix @ other.matrix)

    @property
    def is_identity(self):
        return self.matrix == Mat2(1, 0, 0, 1)


@dataclass(frozen=True)
class CuspSymmetry:
    """Cusp ``i`` is sent to cusp ``perm[i]`` and its slope through ``maps[i]``."""

    perm: tuple
    maps: tuple

    def __post_init__(self):
        perm = tuple(self.perm)
        if sorted(perm) != list(range(len(perm))):
            raise ValueError(f"not a permutation: {perm}")
        maps = tuple(m if isinstance(m, SlopeMap) else SlopeMap(m) for m in self.maps)
        if len(maps) != len(perm):
            raise ValueError("one slope map per cusp is required")
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "maps", maps)

    @classmethod
    def identity(cls, n):
        return cls(tuple(range(n)), (SlopeMap.identity(),) * n)

    @classmethod
    def from_cycles(cls, n, cycles=(), maps=None):
        """Build from disjoint cycles; ``[0, 1, 2]`` sends cusp 0 to cusp 1."""
        perm = list(range(n))
        for cyc in cycles:
            for k, c in enumerate(cyc):
                perm[c] = cyc[(k + 1) % len(cyc)]
        if maps is None:
            maps = [SlopeMap.identity()] * n
        return cls(tuple(perm), tuple(maps))

    def __len__(self):
        return len(self.perm)

    def compose(self, other):
        """``self`` after ``other``."""
        if len(other) != len(self):
            raise ValueError("cusp counts differ")
        return CuspSymmetry(
            tuple(self.perm[j] for j in other.perm),
            tuple(self.maps[other.perm[i]] @ other.maps[i] for i in range(len(self))),
        )

    __matmul__ = compose


def act(sym, t):
    """Apply a symmetry to a filling tuple."""
    entries = tuple(t)
    if len(entries) != len(sym):
        raise ValueError(f"tuple has {len(entries)} slopes, symmetry acts on {len(sym)} cusps")
    out = [None] * len(entries)
    for i, s in enumerate(entries):
        out[sym.perm[i]] = sym.maps[i](s)
    return FillingTuple(tuple(out))


class GroupTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class SymmetryGroup:
    generators: tuple
    elements: frozenset
    declared_order: int | None = None

    @property
    def order(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, sym):
        return sym in self.elements

    @property
    def cusp_count(self):
        return len(next(iter(self.elements)))


def close(generators, max_size=100_000, declared_order=None, cusps=None):
    """Breadth-first closure of ``generators`` under composition."""
    if max_size < 1:
        raise ValueError("max_size must be at least 1")
    gens = tuple(generators)
    if not gens and cusps is None:
        raise ValueError("need a generator or a cusp count")
    n = len(gens[0]) if gens else cusps
    ident = CuspSymmetry.identity(n)
    seen = {ident}
    queue = deque([ident])
    while queue:
        g = queue.popleft()
        for s in gens:
            h = s @ g
            if h not in seen:
                seen.add(h)
                if len(seen) > max_size:
                    raise GroupTooLarge(f"closure exceeds {max_size} elements")
                queue.append(h)
    if declared_order is not None and len(seen) != declared_order:
        raise ValueError(f"closure has order {len(seen)}, declared {declared_order}")
    return SymmetryGroup(gens, frozenset(seen), declared_order)


def orbit(group, t):
    """Full orbit; a short tuple is padded with unfilled cusps first."""
    t = FillingTuple(tuple(t))
    if len(t) < group.cusp_count:
        t = t.padded(group.cusp_count)
    return {act(g, t) for g in group}


def canonical_rep(group, t):
    """Least orbit element: unfilled < inf < rationals by value, lexicographic."""
    return min(orbit(group, t), key=FillingTuple.sort_key)


# ----------------------------------------------------------------------------
# registered families


def family_generators(name):
    from .chains import family

    fam = family(name)
    n = fam.cusp_count
    out = []
    for g in fam.symmetry.get("generators", []):
        maps = None
        if g.get("maps"):
            maps = [SlopeMap(Mat2.of(m)) for m in g["maps"]]
        out.append(CuspSymmetry.from_cycles(n, g.get("cycles", []), maps))
    return out


def family_group(name, max_size=100_000):
    """Closure of the shipped generators.

    The declared isometry order is checked only when the registry marks the
    generator set as complete.
    """
    from .chains import family

    fam = family(name)
    declared = fam.isom_order if fam.symmetry.get("complete") else None
    return close(family_generators(name), max_size, declared, cusps=fam.cusp_count)


@dataclass(frozen=True)
class FactorResult:
    factors: bool
    reason: str

    def __bool__(self):
        return self.factors

    def __str__(self):
        flag = "true" if self.factors else "false"
        return f"factors: {flag} ({self.reason})"


def factor_check(name, t):
    """Whether the tuple factors through a smaller block, with the reason."""
    from .chains import family

    fam = family(name)
    entries = tuple(t)
    if len(entries) != fam.cusp_count:
        entries = tuple(FillingTuple(entries).padded(fam.cusp_count))
    rule = fam.factoring
    if rule.kind != "none":
        for s in entries:
            if s is not None and s in rule.slopes:
                return FactorResult(True, f"slope {s}")
    if rule.kind == "slopes_or_adjacent_pair":
        n = len(entries)
        a, b = rule.pair
        for i in range(n):
            x, y = entries[i], entries[(i + 1) % n]
            if (x, y) in ((a, b), (b, a)):
                return FactorResult(True, f"pair ({a},{b}) consecutive")
    return FactorResult(False, "no factoring slope")


def factors(name, t):
    return factor_check(name, t).factors


__all__ = [
    "CuspSymmetry",
    "FactorResult",
    "GroupTooLarge",
    "SlopeMap",
    "SymmetryGroup",
    "act",
    "canonical_rep",
    "close",
    "factor_check",
    "factors",
    "family_generators",
    "family_group",
    "orbit",
]
