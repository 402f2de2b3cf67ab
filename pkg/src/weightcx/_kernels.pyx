# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels mirroring ``_kernels_py`` on machine integers.

Entries live in int64. Any overflow raises OverflowError and the caller
reruns the pure-Python kernel, so results never depend on word size.
"""

from libc.limits cimport LLONG_MIN
from libc.stdlib cimport malloc, free

cdef extern from *:
    bint mul_ovf "__builtin_mul_overflow"(long long a, long long b, long long *res) nogil
    bint sub_ovf "__builtin_sub_overflow"(long long a, long long b, long long *res) nogil
    bint add_ovf "__builtin_add_overflow"(long long a, long long b, long long *res) nogil


cdef inline long long floordiv(long long a, long long b) nogil:
    cdef long long q = a / b
    if (a % b != 0) and ((a < 0) != (b < 0)):
        q -= 1
    return q


cdef inline long long nearestdiv(long long a, long long b) nogil:
    cdef long long q = floordiv(a, b)
    cdef long long r = a - q * b
    cdef long long ar = r if r > 0 else -r
    cdef long long ab = b if b > 0 else -b
    if ar > ab - ar:
        q += 1
    return q


cdef inline long long pymod(long long a, long long b) nogil:
    cdef long long r = a % b
    if r != 0 and ((r < 0) != (b < 0)):
        r += b
    return r


cdef long long* _load(list rows, int m, int n) except NULL:
    cdef long long* buf = <long long*> malloc(max(m * n, 1) * sizeof(long long))
    if buf == NULL:
        raise MemoryError()
    cdef int i, j
    try:
        for i in range(m):
            r = rows[i]
            for j in range(n):
                buf[i * n + j] = r[j]
    except OverflowError:
        free(buf)
        raise
    return buf


cdef long long* _eye(int k) except NULL:
    cdef long long* buf = <long long*> malloc(max(k * k, 1) * sizeof(long long))
    if buf == NULL:
        raise MemoryError()
    cdef int i
    for i in range(k * k):
        buf[i] = 0
    for i in range(k):
        buf[i * k + i] = 1
    return buf


cdef list _dump(long long* buf, int m, int n):
    return [[buf[i * n + j] for j in range(n)] for i in range(m)]


cdef inline int _axpy(long long* x, long long* y, long long q, int lo, int hi, int stride) nogil:
    """x[k] -= q * y[k] for k in [lo, hi); returns 1 on overflow."""
    cdef long long t
    cdef int k
    for k in range(lo, hi):
        if mul_ovf(q, y[k * stride], &t):
            return 1
        if sub_ovf(x[k * stride], t, &x[k * stride]):
            return 1
    return 0


cdef int _snf_core(long long* a, long long* U, long long* V, int m, int n) nogil:
    cdef int t, i, j, k, pi, pj, bad
    cdef long long best, x, ax, p, q, tmp
    cdef bint dirty
    for t in range(min(m, n)):
        while True:
            best = 0
            pi = -1
            pj = -1
            for i in range(t, m):
                for j in range(t, n):
                    x = a[i * n + j]
                    if x != 0:
                        if x == LLONG_MIN:
                            return 1
                        ax = x if x > 0 else -x
                        if best == 0 or ax < best:
                            best = ax
                            pi = i
                            pj = j
            if pi < 0:
                return 0
            if pi != t:
                for k in range(n):
                    tmp = a[t * n + k]; a[t * n + k] = a[pi * n + k]; a[pi * n + k] = tmp
                for k in range(m):
                    tmp = U[t * m + k]; U[t * m + k] = U[pi * m + k]; U[pi * m + k] = tmp
            if pj != t:
                for k in range(m):
                    tmp = a[k * n + t]; a[k * n + t] = a[k * n + pj]; a[k * n + pj] = tmp
                for k in range(n):
                    tmp = V[k * n + t]; V[k * n + t] = V[k * n + pj]; V[k * n + pj] = tmp
            p = a[t * n + t]
            dirty = False
            for i in range(t + 1, m):
                x = a[i * n + t]
                if x != 0:
                    q = nearestdiv(x, p)
                    if q != 0:
                        if _axpy(&a[i * n], &a[t * n], q, t, n, 1):
                            return 1
                        if _axpy(&U[i * m], &U[t * m], q, 0, m, 1):
                            return 1
                    if a[i * n + t] != 0:
                        dirty = True
            for j in range(t + 1, n):
                x = a[t * n + j]
                if x != 0:
                    q = nearestdiv(x, p)
                    if q != 0:
                        if _axpy(&a[j], &a[t], q, 0, m, n):
                            return 1
                        if _axpy(&V[j], &V[t], q, 0, n, n):
                            return 1
                    if a[t * n + j] != 0:
                        dirty = True
            if dirty:
                continue
            bad = -1
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if a[i * n + j] % p != 0:
                        bad = i
                        break
                if bad >= 0:
                    break
            if bad < 0:
                break
            for k in range(t, n):
                if add_ovf(a[t * n + k], a[bad * n + k], &a[t * n + k]):
                    return 1
            for k in range(m):
                if add_ovf(U[t * m + k], U[bad * m + k], &U[t * m + k]):
                    return 1
        if a[t * n + t] < 0:
            for k in range(n):
                a[t * n + k] = -a[t * n + k]
            for k in range(m):
                U[t * m + k] = -U[t * m + k]
    return 0


def snf(list rows, int m, int n):
    """Same contract as ``_kernels_py.snf``; raises OverflowError on int64 overflow."""
    cdef long long* a = _load(rows, m, n)
    cdef long long* U = NULL
    cdef long long* V = NULL
    cdef int rc
    try:
        U = _eye(m)
        V = _eye(n)
        with nogil:
            rc = _snf_core(a, U, V, m, n)
        if rc:
            raise OverflowError("int64 overflow in snf kernel")
        return _dump(U, m, m), _dump(a, m, n), _dump(V, n, n)
    finally:
        free(a)
        if U != NULL:
            free(U)
        if V != NULL:
            free(V)


cdef int _rref_core(long long* a, int m, int n, long long p, int* piv_out) nogil:
    cdef int r = 0, c, i, j, piv, npiv = 0
    cdef long long inv, f, tmp
    for i in range(m * n):
        a[i] = pymod(a[i], p)
    for c in range(n):
        if r == m:
            break
        piv = -1
        for i in range(r, m):
            if a[i * n + c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(n):
                tmp = a[r * n + j]; a[r * n + j] = a[piv * n + j]; a[piv * n + j] = tmp
        inv = _inv_mod(a[r * n + c], p)
        for j in range(n):
            a[r * n + j] = a[r * n + j] * inv % p
        for i in range(m):
            if i != r:
                f = a[i * n + c]
                if f != 0:
                    for j in range(n):
                        a[i * n + j] = pymod(a[i * n + j] - f * a[r * n + j], p)
        piv_out[npiv] = c
        npiv += 1
        r += 1
    return npiv


cdef long long _inv_mod(long long x, long long p) nogil:
    cdef long long t = 0, nt = 1, r = p, nr = x, q, tmp
    while nr != 0:
        q = r / nr
        tmp = t - q * nt; t = nt; nt = tmp
        tmp = r - q * nr; r = nr; nr = tmp
    if t < 0:
        t += p
    return t


def rref_mod(list rows, int m, int n, long long p):
    """Same contract as ``_kernels_py.rref_mod`` (rows rewritten in place)."""
    if p >= 3037000499:
        raise OverflowError("modulus too large for int64 kernel")
    cdef long long* a = <long long*> malloc(max(m * n, 1) * sizeof(long long))
    cdef int* piv = <int*> malloc(max(n, 1) * sizeof(int))
    cdef int i, j, npiv
    if a == NULL or piv == NULL:
        free(a); free(piv)
        raise MemoryError()
    try:
        for i in range(m):
            r = rows[i]
            for j in range(n):
                a[i * n + j] = r[j] % p
        with nogil:
            npiv = _rref_core(a, m, n, p, piv)
        for i in range(m):
            rows[i] = [a[i * n + j] for j in range(n)]
        return [piv[i] for i in range(npiv)]
    finally:
        free(a)
        free(piv)
