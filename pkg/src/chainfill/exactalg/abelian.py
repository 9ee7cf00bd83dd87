"""Finitely generated abelian groups in invariant-factor form."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .snf import invariant_factors


@dataclass(frozen=True, order=True)
class AbelianGroup:
    """``Z^free_rank + Z/d1 + ... + Z/dk`` with ``2 <= d1 | d2 | ... | dk``."""

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        t = tuple(self.torsion)
        for i, d in enumerate(t):
            if d < 2:
                raise ValueError(f"torsion coefficient {d} < 2")
            if i and d % t[i - 1]:
                raise ValueError(f"torsion {t} is not a divisor chain")
        object.__setattr__(self, "torsion", t)

    @classmethod
    def from_factors(cls, free_rank=0, cyclic=()):
        """Build from any list of cyclic orders (0 means a free factor)."""
        cyclic = list(cyclic)
        free_rank += sum(1 for c in cyclic if c == 0)
        orders = [abs(c) for c in cyclic if abs(c) > 1]
        if not orders:
            return cls(free_rank, ())
        diag = invariant_factors([[d if i == j else 0 for j in range(len(orders))]
                                  for i, d in enumerate(orders)])
        return cls(free_rank, tuple(d for d in diag if d > 1))

    @property
    def order(self):
        """Cardinality, or 0 for an infinite group."""
        if self.free_rank:
            return 0
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def is_trivial(self):
        return self.free_rank == 0 and not self.torsion

    def __add__(self, other):
        if not isinstance(other, AbelianGroup):
            return NotImplemented
        return AbelianGroup.from_factors(self.free_rank + other.free_rank,
                                         self.torsion + other.torsion)

    def __str__(self):
        return format_group(self)

    @classmethod
    def parse(cls, text):
        return parse_group(text)


def cokernel(M, ncols=None):
    """``Z^n / rowspan(M)`` for an ``m x n`` relation matrix ``M``."""
    rows = [list(r) for r in M]
    n = len(rows[0]) if rows else (ncols or 0)
    if ncols is not None and rows and len(rows[0]) != ncols:
        raise ValueError("column count does not match ncols")
    if not rows:
        return AbelianGroup(n, ())
    diag = invariant_factors(rows, n)
    nonzero = [d for d in diag if d]
    free = n - len(nonzero)
    return AbelianGroup(free, tuple(d for d in nonzero if d > 1))


def abelian_iso(G, H):
    """Isomorphism test; both arguments are already in normal form."""
    return G.free_rank == H.free_rank and G.torsion == H.torsion


def format_group(G):
    parts = []
    if G.free_rank == 1:
        parts.append("Z")
    elif G.free_rank > 1:
        parts.append(f"Z^{G.free_rank}")
    i = 0
    t = G.torsion
    while i < len(t):
        j = i
        while j < len(t) and t[j] == t[i]:
            j += 1
        parts.append(f"Z{t[i]}" if j - i == 1 else f"Z{t[i]}^{j - i}")
        i = j
    return " x ".join(parts) if parts else "0"


_FACTOR = re.compile(r"^Z(\d*)(?:\^(\d+))?$")


def parse_group(text):
    """Parse ``"0"``, ``"Z^2 x Z3"``, ``"Z x Z2^2"``, ``"Z35"``, ...

    Torsion factors need not form a divisor chain; ``"Z2 x Z3"`` parses to
    ``Z6``.  Also accepts ``"{e}"`` and ``"×"``/``"*"`` as separators.
    """
    s = text.strip()
    if not s:
        raise ValueError("empty group text")
    if s in ("0", "{e}", "1"):
        return AbelianGroup()
    free = 0
    cyclic = []
    for tok in re.split(r"\s*(?:x|×|\*)\s*", s):
        m = _FACTOR.match(tok.replace("_", ""))
        if not m:
            raise ValueError(f"bad abelian group factor {tok!r} in {text!r}")
        n = int(m.group(1)) if m.group(1) else 0
        power = int(m.group(2)) if m.group(2) else 1
        if m.group(1) and n < 2:
            raise ValueError(f"cyclic factor Z{n} must have order >= 2")
        if n == 0:
            free += power
        else:
            cyclic += [n] * power
    return AbelianGroup.from_factors(free, cyclic)

