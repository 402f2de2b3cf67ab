"""Seeded random objects for tests, benchmarks and the harness."""

from __future__ import annotations

import random
from fractions import Fraction

from .complexes import ChainMap, Complex, cone
from .homotopy import HomotopyEquivalence, hom_differential, solve_null_homotopy
from .linalg import inverse, kernel_basis, solve_linear
from .matrix import ExactMatrix
from .rings import INTEGERS, RATIONALS


def rng_for(seed):
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def element(ring, rng, bound=2):
    if ring.is_modular:
        return rng.randrange(ring.modulus)
    if ring.kind == RATIONALS and rng.random() < 0.2:
        return Fraction(rng.randint(-bound, bound), rng.choice([1, 2, 3]))
    return rng.randint(-bound, bound)


def matrix(ring, rng, rows, cols, bound=2, density=0.7):
    data = [[element(ring, rng, bound) if rng.random() < density else 0 for _ in range(cols)] for _ in range(rows)]
    return ExactMatrix(ring, rows, cols, data)


def unit(ring, rng):
    if ring.kind == INTEGERS:
        return rng.choice([1, -1])
    if ring.kind == RATIONALS:
        return rng.choice([1, -1, 2, Fraction(1, 2), 3])
    while True:
        x = rng.randrange(1, ring.modulus)
        if ring.is_unit(x):
            return x


def unimodular(ring, rng, n, steps=None):
    """Random invertible matrix: a product of elementary operations."""
    rows = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    M = ExactMatrix(ring, n, n, rows)
    if n == 0:
        return M
    for _ in range(steps if steps is not None else 2 * n):
        i, j = rng.randrange(n), rng.randrange(n)
        E = [[1 if a == b else 0 for b in range(n)] for a in range(n)]
        if i == j:
            E[i][i] = unit(ring, rng)
        else:
            E[i][j] = element(ring, rng, 2)
        M = ExactMatrix(ring, n, n, E) @ M
    return M


def complex_(ring, rng, max_rank=3, max_len=4, lo_range=(-2, 2), bound=2):
    """Random bounded complex; ``d^{i+1}`` factors through the left kernel of ``d^i``."""
    rng = rng_for(rng)
    length = rng.randint(1, max_len)
    lo = rng.randint(*lo_range)
    ranks = [rng.randint(0, max_rank) for _ in range(length)]
    diffs = []
    prev = None
    for k in range(length - 1):
        r0, r1 = ranks[k], ranks[k + 1]
        if prev is None or prev.cols == 0 or prev.rows == 0:
            d = matrix(ring, rng, r1, r0, bound)
        else:
            L = kernel_basis(prev.T).T  # rows annihilate prev on the left
            d = matrix(ring, rng, r1, L.rows, bound) @ L if L.rows else ExactMatrix(ring, r1, r0)
        diffs.append(d)
        prev = d
    return Complex(ring, {lo + k: r for k, r in enumerate(ranks)}, {lo + k: d for k, d in enumerate(diffs)})


def contractible(ring, rng, max_rank=2, lo_range=(-2, 2)):
    """``cone(id_B)`` for ``B`` a random free module in one degree, twisted."""
    rng = rng_for(rng)
    r = rng.randint(1, max_rank)
    deg = rng.randint(*lo_range)
    B = Complex.concentrated(ring, r, deg)
    C = cone(ChainMap.identity(B)).cone
    return C.twist({i: unimodular(ring, rng, C.rank(i)) for i in C.degrees})


def chain_map(M, N, rng, bound=2):
    """Random chain map: a combination of a basis of degree-0 cycles of Hom(M, N)."""
    rng = rng_for(rng)
    D, src, _ = hom_differential(M, N, 0)
    K = kernel_basis(D) if D.rows else ExactMatrix.identity(M.ring, src.dim)
    v = [M.ring.zero()] * src.dim
    for col in K.columns():
        c = element(M.ring, rng, bound)
        v = [a + c * b for a, b in zip(v, col)]
    v = [M.ring.coerce(x) for x in v]
    return ChainMap(M, N, src.decode(v))


def equivalent(M, rng, junk=1):
    """A complex homotopy equivalent to ``M`` with the equivalence ``N -> M``.

    ``N`` is ``M`` plus contractible summands, conjugated by degreewise
    automorphisms.
    """
    rng = rng_for(rng)
    ring = M.ring
    N0 = M
    for _ in range(junk):
        lo = (M.lo - 1, M.hi + 1) if not M.is_zero_object() else (-1, 1)
        N0 = N0.direct_sum(contractible(ring, rng, 2, lo))
    autos = {i: unimodular(ring, rng, N0.rank(i)) for i in N0.degrees}
    N = N0.twist(autos)
    proj = {}
    incl = {}
    for i in N.degrees:
        if M.rank(i) == 0:
            continue
        Pi = ExactMatrix(ring, M.rank(i), N0.rank(i), [[1 if a == b else 0 for b in range(N0.rank(i))] for a in range(M.rank(i))])
        proj[i] = Pi @ inverse(autos[i])
        incl[i] = autos[i] @ Pi.T
    f = ChainMap(N, M, proj)
    g = ChainMap(M, N, incl)
    hN = solve_null_homotopy(g @ f - ChainMap.identity(N))
    hM = solve_null_homotopy(f @ g - ChainMap.identity(M))
    return N, HomotopyEquivalence(f, g, hN, hM)


def idempotent(ring, rng, n, bound=2):
    """Random idempotent ``u v`` with ``v u = id`` (a split idempotent), conjugated."""
    rng = rng_for(rng)
    r = rng.randint(0, n)
    P = ExactMatrix.diagonal(ring, [1] * r + [0] * (n - r))
    g = unimodular(ring, rng, n)
    return g @ P @ inverse(g)


def scalar_idempotent(ring, rng, n):
    """Conjugate of a diagonal of idempotent scalars (``3`` and ``4`` over Z/6).

    Over Z/n with n not a prime power the image need not be free.
    """
    rng = rng_for(rng)
    if ring.is_finite:
        idem = [x for x in ring.elements() if ring.coerce(x * x) == x]
    else:
        idem = [0, 1]
    P = ExactMatrix.diagonal(ring, [rng.choice(idem) for _ in range(n)])
    g = unimodular(ring, rng, n)
    return g @ P @ inverse(g)


def weakly_null_map(M, N, rng, bound=2):
    """Random chain map ``m = d H + H d + Z d`` with ``d Z d = 0``.

    Every such map is weakly homotopic to zero on all degrees, and every
    map that is arises this way. ``Z^{i+1}`` solves ``Z d_M = K B`` for a
    random ``B`` (``K`` spanning ``ker d_N``), plus a map killing ``im d_M``.
    """
    rng = rng_for(rng)
    ring = M.ring
    lo, hi = min(M.lo, N.lo) - 1, max(M.hi, N.hi) + 1
    H = {i: matrix(ring, rng, N.rank(i - 1), M.rank(i), bound) for i in range(lo, hi + 2)}
    Z = {}
    for i in range(lo, hi + 1):
        r, c = N.rank(i), M.rank(i + 1)
        z = ExactMatrix(ring, r, c)
        if r and c and M.rank(i):
            d = M.d(i)
            K = kernel_basis(N.d(i))
            if K.cols:
                target = K @ matrix(ring, rng, K.cols, d.cols, bound)
                zt = solve_linear(d.T, target.T)
                if zt is not None:
                    z = zt.T
            L = kernel_basis(d.T).T
            if L.rows:
                z = z + matrix(ring, rng, r, L.rows, bound) @ L
        Z[i + 1] = z
    comps = {}
    for i in range(lo, hi + 1):
        if not (M.rank(i) and N.rank(i)):
            continue
        comps[i] = N.d(i - 1) @ H[i] + H[i + 1] @ M.d(i) + Z[i + 1] @ M.d(i)
    return ChainMap(M, N, comps)
