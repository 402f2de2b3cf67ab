"""Pure-Python reference kernels.

These define the exact pivoting order; the compiled kernels in
``_kernels.pyx`` must reproduce them bit for bit.
"""


def _nearest(x, p):
    """Quotient with the remainder of least absolute value (ties keep floor)."""
    q, r = divmod(x, p)
    ar, ap = (r if r > 0 else -r), (p if p > 0 else -p)
    if ar > ap - ar:
        q += 1
    return q


def snf(a, m, n):
    """Smith normal form of an integer matrix given as a list of row lists.

    Returns ``(U, D, V)`` as lists of lists with ``U*A*V == D``. ``a`` is
    consumed. Pivot: smallest absolute value, ties broken in row-major order;
    quotients round to the nearest integer to limit entry growth.
    """
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    V = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for t in range(min(m, n)):
        while True:
            best = 0
            pi = pj = -1
            for i in range(t, m):
                row = a[i]
                for j in range(t, n):
                    x = row[j]
                    if x:
                        ax = x if x > 0 else -x
                        if best == 0 or ax < best:
                            best, pi, pj = ax, i, j
            if pi < 0:
                return U, a, V
            if pi != t:
                a[t], a[pi] = a[pi], a[t]
                U[t], U[pi] = U[pi], U[t]
            if pj != t:
                for row in a:
                    row[t], row[pj] = row[pj], row[t]
                for row in V:
                    row[t], row[pj] = row[pj], row[t]
            p = a[t][t]
            dirty = False
            rt = a[t]
            ut = U[t]
            for i in range(t + 1, m):
                x = a[i][t]
                if x:
                    q = _nearest(x, p)
                    if q:
                        ri = a[i]
                        for j in range(t, n):
                            ri[j] -= q * rt[j]
                        ui = U[i]
                        for j in range(m):
                            ui[j] -= q * ut[j]
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                x = rt[j]
                if x:
                    q = _nearest(x, p)
                    if q:
                        for row in a:
                            row[j] -= q * row[t]
                        for row in V:
                            row[j] -= q * row[t]
                    if rt[j]:
                        dirty = True
            if dirty:
                continue
            # divisibility repair: fold an offending row into the pivot row
            bad = -1
            for i in range(t + 1, m):
                ri = a[i]
                for j in range(t + 1, n):
                    if ri[j] % p:
                        bad = i
                        break
                if bad >= 0:
                    break
            if bad < 0:
                break
            rb = a[bad]
            for j in range(t, n):
                rt[j] += rb[j]
            ub = U[bad]
            for j in range(m):
                ut[j] += ub[j]
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
    return U, a, V


def rref_mod(a, m, n, p):
    """Reduced row echelon form over Z/p (p prime), in place.

    Returns the list of pivot columns. Pivot: first nonzero entry in the
    column, scanning rows downward.
    """
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        piv = -1
        for i in range(r, m):
            if a[i][c] % p:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
        rr = a[r]
        inv = pow(rr[c], -1, p)
        for j in range(n):
            rr[j] = rr[j] * inv % p
        for i in range(m):
            if i != r:
                ri = a[i]
                f = ri[c] % p
                if f:
                    for j in range(n):
                        ri[j] = (ri[j] - f * rr[j]) % p
                else:
                    for j in range(n):
                        ri[j] %= p
        pivots.append(c)
        r += 1
    for i in range(r, m):
        a[i] = [x % p for x in a[i]]
    return pivots
