"""Pure-Python Smith normal form over the integers.

Everything here works on lists of lists of Python ints, so intermediate
entries never overflow.  The compiled kernel in ``_snf_ext`` mirrors
:func:`invariant_factors` for the common case where entries fit in 64 bits.
"""

from __future__ import annotations


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _copy(M):
    return [list(map(int, row)) for row in M]


def smith_normal_form(M, ncols=None):
    """Return ``(U, S, V)`` with ``U @ M @ V == S``.

    ``U`` and ``V`` are unimodular and ``S`` is diagonal with nonnegative
    entries forming a divisor chain.  ``ncols`` is only needed when ``M``
    has no rows.
    """
    S = _copy(M)
    m = len(S)
    n = len(S[0]) if m else (ncols or 0)
    U = _identity(m)
    V = _identity(n)

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in S:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, k):
        # row_dst += k * row_src
        if k:
            S[dst] = [a + k * b for a, b in zip(S[dst], S[src])]
            U[dst] = [a + k * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, k):
        if k:
            for row in S:
                row[dst] += k * row[src]
            for row in V:
                row[dst] += k * row[src]

    t = 0
    while t < min(m, n):
        # pivot: smallest nonzero |entry| in the trailing block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                a = S[i][j]
                if a and (best is None or abs(a) < best[0]):
                    best = (abs(a), i, j)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = S[t][t]
            done = True
            for i in range(t + 1, m):
                if S[i][t]:
                    add_row(t, i, -(S[i][t] // p))
                    if S[i][t]:
                        done = False
            for j in range(t + 1, n):
                if S[t][j]:
                    add_col(t, j, -(S[t][j] // p))
                    if S[t][j]:
                        done = False
            if done:
                # pivot must divide the whole trailing block
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if S[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                add_row(bad, t, 1)
                continue
            # re-pick the smallest entry of row/column t as pivot
            best = (abs(p), t, t)
            for i in range(t + 1, m):
                if S[i][t] and abs(S[i][t]) < best[0]:
                    best = (abs(S[i][t]), i, t)
            for j in range(t + 1, n):
                if S[t][j] and abs(S[t][j]) < best[0]:
                    best = (abs(S[t][j]), t, j)
            _, i, j = best
            swap_rows(t, i)
            swap_cols(t, j)
        if S[t][t] < 0:
            S[t] = [-a for a in S[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    return U, S, V


def invariant_factors(M, ncols=None):
    """Diagonal of the Smith form of ``M`` (length ``min(rows, cols)``)."""
    A = _copy(M)
    m = len(A)
    n = len(A[0]) if m else (ncols or 0)
    diag = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                a = row[j]
                if a and (best is None or abs(a) < best[0]):
                    best = (abs(a), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        A[t], A[i] = A[i], A[t]
        if j != t:
            for row in A:
                row[t], row[j] = row[j], row[t]
        while True:
            p = A[t][t]
            clean = True
            for i in range(t + 1, m):
                q = A[i][t]
                if q:
                    k = q // p
                    A[i] = [a - k * b for a, b in zip(A[i], A[t])]
                    if A[i][t]:
                        clean = False
            for j in range(t + 1, n):
                q = A[t][j]
                if q:
                    k = q // p
                    for row in A:
                        row[j] -= k * row[t]
                    if A[t][j]:
                        clean = False
            if clean:
                break
            best = (abs(p), t, t)
            for i in range(t + 1, m):
                if A[i][t] and abs(A[i][t]) < best[0]:
                    best = (abs(A[i][t]), i, t)
            for j in range(t + 1, n):
                if A[t][j] and abs(A[t][j]) < best[0]:
                    best = (abs(A[t][j]), t, j)
            _, i, j = best
            A[t], A[i] = A[i], A[t]
            if j != t:
                for row in A:
                    row[t], row[j] = row[j], row[t]
        diag.append(abs(A[t][t]))
        t += 1
    diag += [0] * (min(m, n) - len(diag))
    return _chain(diag)


def _chain(diag):
    """Turn a diagonal into a divisor chain (nonzero entries first)."""
    from math import gcd

    d = [x for x in diag if x]
    zeros = len(diag) - len(d)
    # repeated gcd/lcm sweeps give d[0] | d[1] | ...
    for i in range(len(d)):
        for j in range(i + 1, len(d)):
            a, b = d[i], d[j]
            g = gcd(a, b)
            d[i], d[j] = g, a // g * b
    return d + [0] * zeros
