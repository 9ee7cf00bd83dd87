"""2x2 integer matrices for gluing maps, monodromies and slope maps."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True, order=True)
class Mat2:
    """Row-major ``[[a, b], [c, d]]``."""

    a: int
    b: int
    c: int
    d: int

    @classmethod
    def of(cls, rows):
        (a, b), (c, d) = rows
        return cls(int(a), int(b), int(c), int(d))

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    @classmethod
    def gluing(cls, a, b, c, d):
        """Gluing matrices between blocks must have determinant -1."""
        M = cls(a, b, c, d)
        if M.det != -1:
            raise ValueError(f"gluing matrix {M} has det {M.det}, expected -1")
        return M

    @classmethod
    def monodromy(cls, a, b, c, d):
        M = cls(a, b, c, d)
        if M.det != 1:
            raise ValueError(f"monodromy {M} has det {M.det}, expected +1")
        return M

    @property
    def det(self):
        return self.a * self.d - self.b * self.c

    @property
    def trace(self):
        return self.a + self.d

    def rows(self):
        return [[self.a, self.b], [self.c, self.d]]

    def __matmul__(self, other):
        if not isinstance(other, Mat2):
            return NotImplemented
        return Mat2(self.a * other.a + self.b * other.c,
                    self.a * other.b + self.b * other.d,
                    self.c * other.a + self.d * other.c,
                    self.c * other.b + self.d * other.d)

    def __neg__(self):
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def inverse(self):
        """Integer inverse; only defined for det = +-1."""
        D = self.det
        if D not in (1, -1):
            raise ValueError(f"{self} is not invertible over Z")
        return Mat2(self.d * D, -self.b * D, -self.c * D, self.a * D)

    def transpose(self):
        return Mat2(self.a, self.c, self.b, self.d)

    def __str__(self):
        return f"[{self.a},{self.b};{self.c},{self.d}]"
