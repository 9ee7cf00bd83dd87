# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled invariant-factor kernel on 64-bit integers.

Raises OverflowError as soon as any intermediate leaves the int64 range;
the caller then retries with the arbitrary-precision Python path.
"""

from libc.stdlib cimport malloc, free

cdef extern from *:
    """
    static int cf_mul_ovf(long long a, long long b, long long *r) {
        return __builtin_mul_overflow(a, b, r);
    }
    static int cf_sub_ovf(long long a, long long b, long long *r) {
        return __builtin_sub_overflow(a, b, r);
    }
    """
    int cf_mul_ovf(long long a, long long b, long long *r) nogil
    int cf_sub_ovf(long long a, long long b, long long *r) nogil


cdef inline long long _floordiv(long long a, long long b) nogil:
    cdef long long q = a / b
    if (a % b != 0) and ((a < 0) != (b < 0)):
        q -= 1
    return q


cdef inline long long _abs(long long a) nogil:
    return -a if a < 0 else a


cdef int _eliminate(long long *A, int m, int n, long long *diag) nogil:
    """Return number of pivots written to diag, or -1 on overflow."""
    cdef int t = 0, i, j, bi, bj, r
    cdef long long best, a, p, q, k, prod, tmp
    cdef bint clean
    while t < m and t < n:
        best = 0
        bi = -1
        bj = -1
        for i in range(t, m):
            for j in range(t, n):
                a = _abs(A[i * n + j])
                if a != 0 and (best == 0 or a < best):
                    best = a
                    bi = i
                    bj = j
        if bi < 0:
            break
        if bi != t:
            for j in range(n):
                tmp = A[t * n + j]
                A[t * n + j] = A[bi * n + j]
                A[bi * n + j] = tmp
        if bj != t:
            for i in range(m):
                tmp = A[i * n + t]
                A[i * n + t] = A[i * n + bj]
                A[i * n + bj] = tmp
        while True:
            p = A[t * n + t]
            clean = True
            for i in range(t + 1, m):
                q = A[i * n + t]
                if q != 0:
                    k = _floordiv(q, p)
                    for j in range(t, n):
                        if cf_mul_ovf(k, A[t * n + j], &prod):
                            return -1
                        if cf_sub_ovf(A[i * n + j], prod, &A[i * n + j]):
                            return -1
                    if A[i * n + t] != 0:
                        clean = False
            for j in range(t + 1, n):
                q = A[t * n + j]
                if q != 0:
                    k = _floordiv(q, p)
                    for i in range(t, m):
                        if cf_mul_ovf(k, A[i * n + t], &prod):
                            return -1
                        if cf_sub_ovf(A[i * n + j], prod, &A[i * n + j]):
                            return -1
                    if A[t * n + j] != 0:
                        clean = False
            if clean:
                break
            best = _abs(p)
            bi = t
            bj = t
            for i in range(t + 1, m):
                a = _abs(A[i * n + t])
                if a != 0 and a < best:
                    best = a
                    bi = i
                    bj = t
            for j in range(t + 1, n):
                a = _abs(A[t * n + j])
                if a != 0 and a < best:
                    best = a
                    bi = t
                    bj = j
            if bi != t:
                for j in range(n):
                    tmp = A[t * n + j]
                    A[t * n + j] = A[bi * n + j]
                    A[bi * n + j] = tmp
            if bj != t:
                for i in range(m):
                    tmp = A[i * n + t]
                    A[i * n + t] = A[i * n + bj]
                    A[i * n + bj] = tmp
        diag[t] = _abs(A[t * n + t])
        t += 1
    return t


def invariant_factors(M, ncols=None):
    """Diagonal of the Smith form of ``M`` as a divisor chain."""
    cdef int m = len(M)
    cdef int n = len(M[0]) if m else (ncols or 0)
    cdef int i, j, r
    cdef int size = m * n if m * n > 0 else 1
    cdef long long *A = <long long *> malloc(size * sizeof(long long))
    cdef long long *diag = <long long *> malloc((min(m, n) + 1) * sizeof(long long))
    if A == NULL or diag == NULL:
        free(A)
        free(diag)
        raise MemoryError()
    try:
        for i in range(m):
            row = M[i]
            for j in range(n):
                # raises OverflowError for entries outside int64
                A[i * n + j] = row[j]
        with nogil:
            r = _eliminate(A, m, n, diag)
        if r < 0:
            raise OverflowError("intermediate entry exceeds int64")
        out = [diag[i] for i in range(r)]
    finally:
        free(A)
        free(diag)
    out += [0] * (min(m, n) - len(out))
    return _chain(out)


cdef object _chain(list diag):
    from math import gcd
    d = [x for x in diag if x]
    zeros = len(diag) - len(d)
    for i in range(len(d)):
        for j in range(i + 1, len(d)):
            a, b = d[i], d[j]
            g = gcd(a, b)
            d[i], d[j] = g, a // g * b
    return d + [0] * zeros
