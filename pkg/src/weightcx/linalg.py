"""Exact linear algebra: Smith normal form, solving, kernels, module invariants.

Over Z everything goes through the Smith normal form. Over Z/n a system
``A x = b`` is solved by lifting to ``[A | n I] (x, z) = b`` over Z. Over
fields plain Gauss-Jordan elimination is used.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import kernels
from .matrix import ExactMatrix, ShapeError
from .rings import INTEGERS, PRIME_FIELD, RATIONALS, ZZ, RingError, factorize


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

@lru_cache(maxsize=4096)
def _snf_cached(A):
    U, D, V = kernels.snf([list(r) for r in A.tolist()], A.rows, A.cols)
    return (
        ExactMatrix._raw(ZZ, A.rows, A.rows, U),
        ExactMatrix._raw(ZZ, A.rows, A.cols, D),
        ExactMatrix._raw(ZZ, A.cols, A.cols, V),
    )


def smith_normal_form(A):
    """Return ``(U, D, V)`` with ``U @ A @ V == D``, U and V unimodular.

    ``D`` is diagonal with nonnegative entries and ``d_1 | d_2 | ...``.

    >>> from weightcx.rings import ZZ
    >>> U, D, V = smith_normal_form(ExactMatrix(ZZ, 2, 2, [[2, 4], [6, 8]]))
    >>> [D[0, 0], D[1, 1]]
    [2, 4]
    """
    if A.ring.kind != INTEGERS:
        raise RingError(f"smith_normal_form needs an integer matrix, got {A.ring}")
    return _snf_cached(A)


def invariant_factors(A):
    """Nonzero diagonal entries of the Smith normal form of an integer matrix."""
    _, D, _ = smith_normal_form(A)
    return [D[i, i] for i in range(min(D.rows, D.cols)) if D[i, i] != 0]


# ---------------------------------------------------------------------------
# Gauss-Jordan over fields
# ---------------------------------------------------------------------------

def _rref_rational(a, m, n):
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        piv = next((i for i in range(r, m) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(m):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return pivots


def rref(A):
    """Reduced row echelon form over a field: ``(rows, pivot_columns)``."""
    ring = A.ring
    a = A.tolist()
    if ring.kind == RATIONALS:
        a = [[Fraction(x) for x in r] for r in a]
        piv = _rref_rational(a, A.rows, A.cols)
    elif ring.kind == PRIME_FIELD:
        piv = kernels.rref_mod(a, A.rows, A.cols, ring.modulus)
    else:
        raise RingError(f"rref needs a field, got {ring}")
    return a, piv


def rank(A):
    """Rank over a field; over Z the number of nonzero invariant factors."""
    if A.ring.is_field:
        return len(rref(A)[1])
    if A.ring.kind == INTEGERS:
        return len(invariant_factors(A))
    raise RingError("rank is not defined over a non-domain; use module_invariants")


# ---------------------------------------------------------------------------
# solving and kernels
# ---------------------------------------------------------------------------

def _lifted(A):
    """``[lift(A) | n I]`` over Z for a matrix over Z/n."""
    n = A.ring.modulus
    return A.lift().hstack(ExactMatrix.scalar(ZZ, A.rows, n))


def _solve_integer(A, B):
    U, D, V = smith_normal_form(A)
    C = U @ B
    r = len([1 for i in range(min(D.rows, D.cols)) if D[i, i] != 0])
    Y = [[0] * B.cols for _ in range(A.cols)]
    for i in range(A.rows):
        d = D[i, i] if i < min(D.rows, D.cols) else 0
        for k in range(B.cols):
            c = C[i, k]
            if i < r:
                if c % d:
                    return None
                Y[i][k] = c // d
            elif c != 0:
                return None
    return V @ ExactMatrix(ZZ, A.cols, B.cols, Y)


def _solve_field(A, B):
    ring = A.ring
    aug, piv = rref(A.hstack(B))
    if any(c >= A.cols for c in piv):
        return None
    X = [[ring.zero()] * B.cols for _ in range(A.cols)]
    for r, c in enumerate(piv):
        for k in range(B.cols):
            X[c][k] = aug[r][A.cols + k]
    return ExactMatrix(ring, A.cols, B.cols, X)


def solve_linear(A, b):
    """Find ``x`` with ``A @ x == b`` exactly, or return ``None``.

    ``b`` may have several columns; then all are solved at once and ``None``
    means at least one column has no solution.
    """
    if A.ring != b.ring:
        raise RingError(f"ring mismatch: {A.ring} vs {b.ring}")
    if A.rows != b.rows:
        raise ShapeError(f"cannot solve {A.shape} system against {b.shape}")
    ring = A.ring
    if A.rows == 0:
        return ExactMatrix(ring, A.cols, b.cols)
    if A.cols == 0:
        return ExactMatrix(ring, 0, b.cols) if b.is_zero() else None
    if ring.kind == INTEGERS:
        return _solve_integer(A, b)
    if ring.is_field:
        return _solve_field(A, b)
    X = _solve_integer(_lifted(A), b.lift())
    if X is None:
        return None
    return X.submatrix(range(A.cols), range(b.cols)).change_ring(ring)


def infeasibility_certificate(A, b):
    """A row vector ``y`` proving ``A x = b`` (one column) has no solution.

    Over Z (and Z/n via the lifted system ``[A | n I]``) ``y`` is rational
    with ``y A`` integral and ``y b`` not; over fields ``y A = 0`` and
    ``y b != 0``. Returns ``None`` when the system is solvable.
    """
    ring = A.ring
    if ring.is_field:
        if A.cols == 0:
            K = ExactMatrix.identity(ring, A.rows)
        else:
            K = kernel_basis(A.T)
        for col in K.columns():
            if ring.coerce(sum((y * v for y, v in zip(col, b.column(0))), ring.zero())) != 0:
                return list(col)
        return None
    L = A if ring.kind == INTEGERS else _lifted(A)
    bb = b if ring.kind == INTEGERS else b.lift()
    if L.cols == 0:
        L = ExactMatrix(ZZ, A.rows, 1)
    U, D, _ = smith_normal_form(L)
    c = U @ bb
    for i in range(L.rows):
        d = D[i, i] if i < min(D.rows, D.cols) else 0
        ci = c[i, 0]
        if d == 0 and ci != 0:
            return [Fraction(u, 2 * ci) for u in U.row(i)]
        if d and ci % d:
            return [Fraction(u, d) for u in U.row(i)]
    return None


def check_infeasibility(A, b, y):
    """Re-check an infeasibility certificate with plain arithmetic."""
    ring = A.ring
    if len(y) != A.rows:
        return False
    if ring.is_field:
        y = [ring.coerce(v) for v in y]
        def dot(col):
            return ring.coerce(sum((y[r] * col[r] for r in range(A.rows)), ring.zero()))
        yA_zero = all(dot(A.column(c)) == 0 for c in range(A.cols))
        return yA_zero and dot(b.column(0)) != 0
    L = A if ring.kind == INTEGERS else _lifted(A)
    bb = b if ring.kind == INTEGERS else b.lift()
    y = [Fraction(v) for v in y]
    for c in range(L.cols):
        if sum(y[r] * L[r, c] for r in range(L.rows)).denominator != 1:
            return False
    return sum(y[r] * bb[r, 0] for r in range(L.rows)).denominator != 1


def kernel_basis(A):
    """Columns generating ``ker A``.

    Over Z and fields the columns form a basis; over Z/n they generate.
    """
    ring = A.ring
    n = A.cols
    if n == 0:
        return ExactMatrix(ring, 0, 0)
    if A.rows == 0:
        return ExactMatrix.identity(ring, n)
    if ring.kind == INTEGERS:
        _, D, V = smith_normal_form(A)
        r = len([1 for i in range(min(D.rows, D.cols)) if D[i, i] != 0])
        return V.submatrix(range(n), range(r, n))
    if ring.is_field:
        a, piv = rref(A)
        free = [c for c in range(n) if c not in piv]
        cols = []
        for f in free:
            v = [ring.zero()] * n
            v[f] = ring.one()
            for r, c in enumerate(piv):
                v[c] = ring.coerce(-a[r][f])
            cols.append(v)
        return ExactMatrix.from_columns(ring, n, cols)
    K = kernel_basis(_lifted(A))
    cols = []
    seen = set()
    for col in K.columns():
        v = tuple(ring.coerce(x) for x in col[:n])
        if any(v) and v not in seen:
            seen.add(v)
            cols.append(v)
    return ExactMatrix.from_columns(ring, n, cols)


def is_invertible(A):
    return A.is_square() and A.ring.is_unit(A.det())


def inverse(A):
    if not A.is_square():
        raise ShapeError("inverse of a non-square matrix")
    X = solve_linear(A, ExactMatrix.identity(A.ring, A.rows))
    if X is None or not (X @ A).is_identity():
        raise ZeroDivisionError("matrix is not invertible")
    return X


# ---------------------------------------------------------------------------
# presented modules
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Invariants:
    """Canonical isomorphism invariant of a finitely generated module.

    ``rank`` is the free rank over Z or the dimension over a field;
    ``torsion`` holds invariant factors over Z and elementary divisors
    (prime powers) over Z/n.
    """

    ring: object
    rank: int = 0
    torsion: tuple = ()

    def is_zero(self):
        return self.rank == 0 and not self.torsion

    @property
    def order(self):
        """Cardinality of a finite module, ``None`` if infinite."""
        if self.ring.kind == INTEGERS or self.ring.kind == RATIONALS:
            if self.rank:
                return None
        if self.ring.kind == PRIME_FIELD:
            return self.ring.modulus ** self.rank
        out = 1
        for t in self.torsion:
            out *= t
        return out

    def lengths(self):
        """{prime: sorted summand lengths} for modules over Z/n."""
        out = {}
        for q in self.torsion:
            (p, k), = factorize(q)
            out.setdefault(p, []).append(k)
        return {p: sorted(v) for p, v in out.items()}

    def __str__(self):
        parts = []
        base = "Z" if self.ring.kind == INTEGERS else str(self.ring)
        if self.rank:
            parts.append(base if self.rank == 1 else f"{base}^{self.rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts) if parts else "0"

    def to_json(self):
        return {"ring": str(self.ring), "rank": self.rank, "torsion": list(self.torsion), "text": str(self)}


@dataclass(frozen=True)
class ModulePresentation:
    """``R^generators / (column span of relations)``."""

    ring: object
    generators: int
    relations: ExactMatrix

    def __post_init__(self):
        if self.relations.rows != self.generators:
            raise ShapeError("relations must have one row per generator")
        if self.relations.ring != self.ring:
            raise RingError("relations over the wrong ring")

    @classmethod
    def free(cls, ring, n):
        return cls(ring, n, ExactMatrix(ring, n, 0))

    @classmethod
    def cyclic(cls, ring, order):
        return cls(ring, 1, ExactMatrix(ring, 1, 1, [[order]]))

    def invariants(self):
        return module_invariants(self)

    def is_zero(self):
        return self.invariants().is_zero()

    def contains_zero(self, v):
        """True if the column vector ``v`` (over generators) is zero in the module."""
        if self.generators == 0:
            return True
        if v.is_zero():
            return True
        return solve_linear(self.relations, v) is not None

    def to_json(self):
        return {"gens": self.generators, "rels": self.relations.to_json()}


def module_invariants(M):
    ring = M.ring
    g = M.generators
    R = M.relations
    if ring.is_field:
        return Invariants(ring, g - (rank(R) if R.cols else 0), ())
    if ring.kind == INTEGERS:
        facs = invariant_factors(R) if R.cols and g else []
        return Invariants(ring, g - len(facs), tuple(sorted(d for d in facs if d != 1)))
    n = ring.modulus
    if g == 0:
        return Invariants(ring, 0, ())
    facs = invariant_factors(_lifted(R) if R.cols else ExactMatrix.scalar(ZZ, g, n))
    elem = []
    for d in facs:
        for p, _ in factorize(n):
            k = 0
            while d % p == 0:
                d //= p
                k += 1
            if k:
                elem.append(p ** k)
    return Invariants(ring, 0, tuple(sorted(elem)))


def subquotient(gens, sub):
    """Presentation of ``span(gens) / span(sub)`` inside a free module.

    ``sub`` must lie in the span of ``gens``; the generators of the result
    are the columns of ``gens``.
    """
    ring = gens.ring
    k = gens.cols
    if k == 0:
        return ModulePresentation(ring, 0, ExactMatrix(ring, 0, 0))
    rels = []
    if sub.cols:
        C = solve_linear(gens, sub)
        if C is None:
            raise ValueError("sub is not contained in the span of gens")
        rels.append(C)
    K = kernel_basis(gens)
    if K.cols:
        rels.append(K)
    R = rels[0].hstack(*rels[1:]) if rels else ExactMatrix(ring, k, 0)
    return ModulePresentation(ring, k, R)


def kernel_of_presented(F, target):
    """Generators (columns) of ``{x : F x = 0 in target}``."""
    if target.relations.cols:
        big = F.hstack(target.relations)
        K = kernel_basis(big)
        return K.submatrix(range(F.cols), range(K.cols))
    return kernel_basis(F)


def presented_homology(F, middle, G, target):
    """Homology at ``middle`` of ``. -F-> middle -G-> target``.

    ``F`` and ``G`` are matrices on generators; ``F`` may have zero columns.
    """
    ring = middle.ring
    Z = kernel_of_presented(G, target)
    pieces = [Z]
    if middle.relations.cols:
        pieces.append(middle.relations)
    gens = pieces[0].hstack(*pieces[1:]) if len(pieces) > 1 else Z
    sub_parts = [F] if F.cols else []
    if middle.relations.cols:
        sub_parts.append(middle.relations)
    sub = sub_parts[0].hstack(*sub_parts[1:]) if sub_parts else ExactMatrix(ring, middle.generators, 0)
    return subquotient(gens, sub)


def map_is_well_defined(F, source, target):
    if not source.relations.cols:
        return True
    return map_is_zero(F @ source.relations, target)


def map_is_zero(F, target):
    if F.cols == 0 or F.is_zero():
        return True
    if not target.relations.cols:
        return False
    return solve_linear(target.relations, F) is not None


def map_is_iso(F, source, target):
    ring = source.ring
    ker = presented_homology(ExactMatrix(ring, source.generators, 0), source, F, target)
    cok = ModulePresentation(ring, target.generators, target.relations.hstack(F))
    return ker.is_zero() and cok.is_zero()
