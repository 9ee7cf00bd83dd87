"""Bounded conjugacy search in GL(2, Z), up to inversion."""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass

from .abelian import cokernel
from .mat2 import Mat2


class Verdict(str, enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class ConjugacyResult:
    verdict: Verdict
    witness: Mat2 | None = None
    reason: str = ""


_GENERATORS = (
    Mat2(0, -1, 1, 0),
    Mat2(0, 1, -1, 0),
    Mat2(1, 1, 0, 1),
    Mat2(1, -1, 0, 1),
    Mat2(0, 1, 1, 0),
)


def conjugacy_invariants(A):
    """Invariants shared by every GL(2,Z)-conjugate of ``A`` and ``A^-1``."""
    minus = Mat2(A.a - 1, A.b, A.c, A.d - 1)
    plus = Mat2(A.a + 1, A.b, A.c, A.d + 1)
    return {
        "det": A.det,
        "trace": A.trace if A.det == 1 else None,
        "coker(A-I)": cokernel(minus.rows()),
        "coker(A+I)": cokernel(plus.rows()),
    }


def _words(bound):
    """Distinct matrices reachable by words of length <= bound."""
    seen = {Mat2.identity()}
    frontier = deque([(Mat2.identity(), 0)])
    while frontier:
        P, depth = frontier.popleft()
        yield P
        if depth == bound:
            continue
        for g in _GENERATORS:
            Q = P @ g
            if Q not in seen:
                seen.add(Q)
                frontier.append((Q, depth + 1))


def gl2_conjugate(A, B, word_bound=8):
    """Decide whether ``P A P^-1`` equals ``B`` or ``B^-1`` for some ``P``.

    Answers NO only on a differing invariant, YES only with a witness ``P``
    found among words of length ``<= word_bound``, and UNKNOWN otherwise.
    """
    if word_bound < 1:
        raise ValueError("word_bound must be positive")
    if A.det != 1 or B.det != 1:
        raise ValueError("monodromies must have determinant +1")
    inv_a, inv_b = conjugacy_invariants(A), conjugacy_invariants(B)
    for key in inv_a:
        if inv_a[key] != inv_b[key]:
            return ConjugacyResult(Verdict.NO, reason=f"{key} differs")
    targets = {B, B.inverse()}
    for P in _words(word_bound):
        if P @ A @ P.inverse() in targets:
            return ConjugacyResult(Verdict.YES, witness=P)
    return ConjugacyResult(Verdict.UNKNOWN,
                           reason=f"no conjugator of word length <= {word_bound}")
