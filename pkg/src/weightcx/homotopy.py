"""Homotopy category computations: hom complexes, K^b hom groups, contractibility,
homotopy equivalences and the weak homotopy relation.

Maps ``X : A -> B`` are vectorized row-major, so ``vec(P X Q) = (P ⊗ Q^T) vec(X)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .complexes import ChainMap, Complex, ComplexError, Homotopy
from .linalg import ModulePresentation, kernel_basis, module_invariants, solve_linear, subquotient
from .matrix import ExactMatrix


def kron(A, B):
    ring = A.ring
    rows = []
    for i in range(A.rows):
        ai = A.row(i)
        for k in range(B.rows):
            bk = B.row(k)
            rows.append([a * b for a in ai for b in bk])
    return ExactMatrix._raw(ring, A.rows * B.rows, A.cols * B.cols, rows)


def _eye(ring, n):
    return ExactMatrix.identity(ring, n)


def _hstack(ring, rows, mats):
    if not mats:
        return ExactMatrix(ring, rows, 0)
    return mats[0].hstack(*mats[1:])


def _vstack(ring, cols, mats):
    if not mats:
        return ExactMatrix(ring, 0, cols)
    return mats[0].vstack(*mats[1:])


class HomSpace:
    """``⊕_i Hom(A^i, B^{i+k})`` with a fixed coordinate layout."""

    def __init__(self, A, B, k):
        self.A, self.B, self.k = A, B, k
        self.ring = A.ring
        self.blocks = []
        off = 0
        for i in A.degrees:
            r, c = B.rank(i + k), A.rank(i)
            if r and c:
                self.blocks.append((i, r, c, off))
                off += r * c
        self.dim = off
        self._index = {b[0]: b for b in self.blocks}

    def encode(self, comps):
        """Column vector of the family ``{i: matrix}`` (missing degrees are zero)."""
        v = [0] * self.dim
        for i, r, c, off in self.blocks:
            m = comps.get(i) if isinstance(comps, dict) else comps[i]
            if m is not None:
                v[off:off + r * c] = m.entries()
        return ExactMatrix(self.ring, self.dim, 1, [[x] for x in v])

    def decode(self, vec):
        col = vec.column(0) if isinstance(vec, ExactMatrix) else tuple(vec)
        out = {}
        for i, r, c, off in self.blocks:
            out[i] = ExactMatrix(self.ring, r, c, [col[off + a * c: off + (a + 1) * c] for a in range(r)])
        return out

    def block_of(self, i):
        return self._index.get(i)


def _embed(ring, rows_total, cols_total, placements):
    """Assemble a sparse block matrix from ``(row_off, col_off, matrix)`` placements."""
    data = [[0] * cols_total for _ in range(rows_total)]
    for r0, c0, m in placements:
        for a in range(m.rows):
            row = data[r0 + a]
            src = m.row(a)
            for b in range(m.cols):
                if src[b]:
                    row[c0 + b] += src[b]
    return ExactMatrix._raw(ring, rows_total, cols_total, data)


def hom_differential(A, B, k):
    """Matrix of ``D f = d_B f - (-1)^k f d_A`` from degree ``k`` to ``k+1``."""
    src, dst = HomSpace(A, B, k), HomSpace(A, B, k + 1)
    ring = A.ring
    sign = -1 if k % 2 == 0 else 1
    places = []
    for i, r, c, off in src.blocks:
        # d_B^{i+k} f^i lands in Hom(A^i, B^{i+k+1})
        tb = dst.block_of(i)
        if tb is not None:
            places.append((tb[3], off, kron(B.d(i + k), _eye(ring, c))))
        # f^i d_A^{i-1} lands in Hom(A^{i-1}, B^{i+k})
        tb = dst.block_of(i - 1)
        if tb is not None:
            places.append((tb[3], off, kron(_eye(ring, r), A.d(i - 1).T).scale(sign)))
    return _embed(ring, dst.dim, src.dim, places), src, dst


# ---------------------------------------------------------------------------
# hom groups
# ---------------------------------------------------------------------------

class KHomGroup:
    """``K(M, N)``: chain maps modulo null-homotopic ones, as a presented module.

    Generators of ``presentation`` are the chain maps in ``generator_maps``.
    """

    def __init__(self, M, N):
        if M.ring != N.ring:
            raise ComplexError("ring mismatch")
        self.source, self.target = M, N
        self.ring = M.ring
        D0, self.space, _ = hom_differential(M, N, 0)
        Dm1, self.hspace, _ = hom_differential(M, N, -1)
        self._D0, self._Dm1 = D0, Dm1
        Z = kernel_basis(D0) if self.space.dim else ExactMatrix(self.ring, 0, 0)
        self._Z = Z
        self.presentation = subquotient(Z, Dm1) if Z.cols else ModulePresentation(self.ring, 0, ExactMatrix(self.ring, 0, 0))
        self._inv = None

    @property
    def invariants(self):
        if self._inv is None:
            self._inv = module_invariants(self.presentation)
        return self._inv

    def is_zero(self):
        return self.invariants.is_zero()

    @property
    def generator_maps(self):
        return [self.map_from_vector(ExactMatrix(self.ring, self._Z.rows, 1, [[x] for x in col])) for col in self._Z.columns()]

    def map_from_vector(self, v):
        return ChainMap(self.source, self.target, self.space.decode(v), check=False)

    def vector_of(self, f):
        return self.space.encode(f.components())

    def class_of(self, f):
        """Coordinates of ``f`` on the generators (a column vector)."""
        if f.source != self.source or f.target != self.target:
            raise ComplexError("map does not belong to this hom group")
        if self._Z.cols == 0:
            return ExactMatrix(self.ring, 0, 1)
        c = solve_linear(self._Z, self.vector_of(f))
        if c is None:
            raise ComplexError("not a chain map")
        return c

    def null_homotopy(self, f):
        """A :class:`Homotopy` with ``f = d h + h d``, or ``None``."""
        if self.space.dim == 0:
            return Homotopy(self.source, self.target, {})
        if self.hspace.dim == 0:
            return Homotopy(self.source, self.target, {}) if f.is_zero() else None
        h = solve_linear(self._Dm1, self.vector_of(f))
        if h is None:
            return None
        return Homotopy(self.source, self.target, self.hspace.decode(h))

    def is_zero_class(self, f):
        return self.null_homotopy(f) is not None


def k_hom(M, N):
    return KHomGroup(M, N)


def hom_complex(A, B):
    """The total hom complex ``Hom(A, B)`` as a :class:`Complex`."""
    lo = B.lo - A.hi
    hi = B.hi - A.lo
    ranks, diffs = {}, {}
    for k in range(lo, hi + 1):
        ranks[k] = HomSpace(A, B, k).dim
    for k in range(lo, hi):
        diffs[k] = hom_differential(A, B, k)[0]
    return Complex(A.ring, ranks, diffs, check=False)


# ---------------------------------------------------------------------------
# contractibility and homotopy equivalences
# ---------------------------------------------------------------------------

def is_contractible(M):
    """A homotopy ``h`` with ``id = d h + h d``, or ``None``."""
    if M.is_zero_object():
        return Homotopy(M, M, {})
    D, hs, space = hom_differential(M, M, -1)
    ident = space.encode({i: _eye(M.ring, M.rank(i)) for i in M.degrees})
    if D.cols == 0:
        return None
    h = solve_linear(D, ident)
    if h is None:
        return None
    return Homotopy(M, M, hs.decode(h))


@dataclass(frozen=True)
class HomotopyEquivalence:
    """``f : A -> B`` and ``g : B -> A`` with ``g f - id = D(hA)``, ``f g - id = D(hB)``."""

    f: ChainMap
    g: ChainMap
    hA: Homotopy
    hB: Homotopy

    @property
    def source(self):
        return self.f.source

    @property
    def target(self):
        return self.f.target

    def verify(self):
        A, B = self.f.source, self.f.target
        return (
            self.f.is_chain_map()
            and self.g.is_chain_map()
            and self.g.source == B
            and self.g.target == A
            and self.hA.verifies(self.g @ self.f, ChainMap.identity(A))
            and self.hB.verifies(self.f @ self.g, ChainMap.identity(B))
        )

    def inverse(self):
        return HomotopyEquivalence(self.g, self.f, self.hB, self.hA)

    def compose(self, other):
        """``other ∘ self`` for ``self : A -> B`` and ``other : B -> C``.

        The homotopies are explicit: ``g f - 1 = g_s (g_o f_o - 1) f_s + (g_s f_s - 1)``.
        """
        f = other.f @ self.f
        g = self.g @ other.g
        hA = _add_h(self.hA, _sandwich(self.g, other.hA, self.f))
        hC = _add_h(other.hB, _sandwich(other.f, self.hB, other.g))
        return HomotopyEquivalence(f, g, hA, hC)

    @classmethod
    def identity(cls, M):
        return cls(ChainMap.identity(M), ChainMap.identity(M), Homotopy(M, M, {}), Homotopy(M, M, {}))


def _sandwich(u, h, v):
    """The homotopy ``u h v`` for chain maps ``v : X -> S``, ``u : T -> Y``."""
    X, Y = v.source, u.target
    comps = {}
    for i in X.degrees:
        if Y.rank(i - 1):
            comps[i] = u[i - 1] @ h[i] @ v[i]
    return Homotopy(X, Y, comps)


def _add_h(h1, h2):
    comps = dict(h1.components())
    for i, m in h2.components().items():
        comps[i] = comps[i] + m if i in comps else m
    return Homotopy(h1.source, h1.target, comps)


def solve_null_homotopy(f):
    """Homotopy ``h`` with ``f = d h + h d`` or ``None``."""
    D, hs, space = hom_differential(f.source, f.target, -1)
    v = space.encode(f.components())
    if space.dim == 0 or v.is_zero():
        return Homotopy(f.source, f.target, {})
    if D.cols == 0:
        return None
    h = solve_linear(D, v)
    return None if h is None else Homotopy(f.source, f.target, hs.decode(h))


def homotopy_equivalence(f):
    """Certify ``f`` as a homotopy equivalence, or return ``None``.

    Solves jointly for a chain map ``g`` and homotopies ``g f ~ id``,
    ``f g ~ id``; the system is linear in ``(g, hA, hB)``.
    """
    A, B = f.source, f.target
    ring = f.ring
    Dg, gs, gs1 = hom_differential(B, A, 0)
    DA, hAs, endA = hom_differential(A, A, -1)
    DB, hBs, endB = hom_differential(B, B, -1)
    n_g, n_a, n_b = gs.dim, hAs.dim, hBs.dim

    # g -> vec(f g) in End^0(B), g -> vec(g f) in End^0(A)
    def left_mult(g_space, target_space):
        places = []
        for i, r, c, off in g_space.blocks:
            tb = target_space.block_of(i)
            if tb is not None:
                places.append((tb[3], off, kron(f[i], _eye(ring, c))))
        return _embed(ring, target_space.dim, g_space.dim, places)

    def right_mult(g_space, target_space):
        places = []
        for i, r, c, off in g_space.blocks:
            tb = target_space.block_of(i)
            if tb is not None:
                places.append((tb[3], off, kron(_eye(ring, r), f[i].T)))
        return _embed(ring, target_space.dim, g_space.dim, places)

    Lf = left_mult(gs, endB)
    Rf = right_mult(gs, endA)
    rows = [
        # D g = 0
        Dg.hstack(ExactMatrix(ring, Dg.rows, n_a), ExactMatrix(ring, Dg.rows, n_b)),
        # g f - D hA = id_A
        Rf.hstack(-DA, ExactMatrix(ring, Rf.rows, n_b)),
        # f g - D hB = id_B
        Lf.hstack(ExactMatrix(ring, Lf.rows, n_a), -DB),
    ]
    big = _vstack(ring, n_g + n_a + n_b, rows)
    rhs = ExactMatrix(ring, Dg.rows, 1).vstack(
        endA.encode({i: _eye(ring, A.rank(i)) for i in A.degrees}),
        endB.encode({i: _eye(ring, B.rank(i)) for i in B.degrees}),
    )
    if big.cols == 0:
        if not rhs.is_zero():
            return None
        sol = ExactMatrix(ring, 0, 1)
    else:
        sol = solve_linear(big, rhs)
        if sol is None:
            return None
    col = sol.column(0)
    g = ChainMap(B, A, gs.decode(col[:n_g]), check=False)
    hA = Homotopy(A, A, hAs.decode(col[n_g:n_g + n_a]))
    hB = Homotopy(B, B, hBs.decode(col[n_g + n_a:]))
    return HomotopyEquivalence(f, g, hA, hB)


# ---------------------------------------------------------------------------
# weak homotopy
# ---------------------------------------------------------------------------

def degree_system(m, M, N, i):
    """``(A, b)`` encoding ``m^i = d_N^{i-1} x^i + y^{i+1} d_M^i``; ``A`` is ``None`` if trivial."""
    ring = M.ring
    a, b = N.rank(i), M.rank(i)
    xr, xc = N.rank(i - 1), M.rank(i)
    yr, yc = N.rank(i), M.rank(i + 1)
    target = ExactMatrix(ring, a * b, 1, [[x] for x in m[i].entries()])
    blocks = []
    if xr and xc:
        blocks.append(kron(N.d(i - 1), _eye(ring, xc)))
    if yr and yc:
        blocks.append(kron(_eye(ring, yr), M.d(i).T))
    if not blocks:
        return ExactMatrix(ring, a * b, 0), target
    return blocks[0].hstack(*blocks[1:]), target


def _solve_degree(m, M, N, i):
    """Solve ``m^i = d_N^{i-1} x^i + y^{i+1} d_M^i``; returns ``(x, y)`` or ``None``."""
    ring = M.ring
    a, b = N.rank(i), M.rank(i)
    xr, xc = N.rank(i - 1), M.rank(i)
    yr, yc = N.rank(i), M.rank(i + 1)
    zero_x = ExactMatrix(ring, xr, xc)
    zero_y = ExactMatrix(ring, yr, yc)
    if a == 0 or b == 0 or m[i].is_zero():
        return zero_x, zero_y
    A, target = degree_system(m, M, N, i)
    if A.cols == 0:
        return None
    sol = solve_linear(A, target)
    if sol is None:
        return None
    col = sol.column(0)
    nx = xr * xc
    x = ExactMatrix(ring, xr, xc, [col[k * xc:(k + 1) * xc] for k in range(xr)]) if nx else zero_x
    ycol = col[nx:] if xr and xc else col
    y = ExactMatrix(ring, yr, yc, [ycol[k * yc:(k + 1) * yc] for k in range(yr)]) if yr and yc else zero_y
    return x, y


def _as_bound(v, default):
    if v is None:
        return default
    if isinstance(v, float) and math.isinf(v):
        return v
    return int(v)


@dataclass(frozen=True)
class WeakHomotopyWitness:
    """``m1 - m2 - m0 = d_N X + Y d_M`` with ``m0`` a chain map vanishing on ``[k, l]``.

    ``x``/``y`` hold the degreewise solutions, ``X``/``Y`` the assembled
    global families (``X^i, Y^i : M^i -> N^{i-1}``).
    """

    m1: ChainMap
    m2: ChainMap
    k: object
    l: object
    x: dict
    y: dict
    X: dict
    Y: dict
    m0: ChainMap

    def verify(self):
        M, N = self.m1.source, self.m1.target
        if not self.m0.is_chain_map():
            return False
        m3 = self.m1 - self.m2
        for i in _window(M, N):
            if self.k <= i <= self.l and not self.m0[i].is_zero():
                return False
            lhs = m3[i] - self.m0[i]
            rhs = N.d(i - 1) @ _get(self.X, i, N.rank(i - 1), M.rank(i), M.ring) + _get(
                self.Y, i + 1, N.rank(i), M.rank(i + 1), M.ring
            ) @ M.d(i)
            if lhs != rhs:
                return False
        return True


def _get(d, i, r, c, ring):
    m = d.get(i)
    return m if m is not None else ExactMatrix(ring, r, c)


def _window(M, N):
    return range(min(M.lo, N.lo) - 1, max(M.hi, N.hi) + 2)


def weak_homotopy_range(m1, m2, k=-math.inf, l=math.inf):
    """Decide ``m1 ~_[k,l] m2`` degree by degree; witness or ``None``."""
    k = _as_bound(k, -math.inf)
    l = _as_bound(l, math.inf)
    M, N = m1.source, m1.target
    if m2.source != M or m2.target != N:
        raise ComplexError("maps have different endpoints")
    m3 = m1 - m2
    ring = M.ring
    xs, ys = {}, {}
    for i in _window(M, N):
        if not (k <= i <= l):
            continue
        sol = _solve_degree(m3, M, N, i)
        if sol is None:
            return None
        xs[i], ys[i + 1] = sol
    X = dict(xs)
    Y = dict(ys)
    if not math.isinf(k):
        Y[k] = xs.get(k, ExactMatrix(ring, N.rank(k - 1), M.rank(k)))
    if not math.isinf(l):
        X[l + 1] = ys.get(l + 1, ExactMatrix(ring, N.rank(l), M.rank(l + 1)))
    comps = {}
    for i in _window(M, N):
        if M.rank(i) and N.rank(i):
            corr = N.d(i - 1) @ _get(X, i, N.rank(i - 1), M.rank(i), ring) + _get(
                Y, i + 1, N.rank(i), M.rank(i + 1), ring
            ) @ M.d(i)
            comps[i] = m3[i] - corr
    m0 = ChainMap(M, N, comps, check=False)
    return WeakHomotopyWitness(m1, m2, k, l, xs, ys, X, Y, m0)


def weakly_homotopic_at(m1, m2, i):
    return _solve_degree(m1 - m2, m1.source, m1.target, i) is not None


def weak_homotopy_global(m1, m2, k=-math.inf, l=math.inf):
    """Decide ``m1 ~_[k,l] m2`` by one joint linear system.

    Unknowns: the families ``X, Y`` and the chain map ``m0`` outside
    ``[k, l]``. Independent of the degreewise route in
    :func:`weak_homotopy_range`.
    """
    k = _as_bound(k, -math.inf)
    l = _as_bound(l, math.inf)
    M, N = m1.source, m1.target
    ring = M.ring
    m3 = m1 - m2
    degs = list(_window(M, N))
    # unknown layout
    layout = []  # (kind, degree, rows, cols, offset)
    off = 0
    for i in degs:
        for kind, r, c in (("X", N.rank(i - 1), M.rank(i)), ("Y", N.rank(i - 1), M.rank(i))):
            if r and c:
                layout.append((kind, i, r, c, off))
                off += r * c
        if not (k <= i <= l) and N.rank(i) and M.rank(i):
            layout.append(("m0", i, N.rank(i), M.rank(i), off))
            off += N.rank(i) * M.rank(i)
    nvar = off
    where = {(kind, i): (r, c, o) for kind, i, r, c, o in layout}
    rhs = []
    eq_off = 0
    places = []
    # m3^i = d X^i + Y^{i+1} d + m0^i
    for i in degs:
        r, c = N.rank(i), M.rank(i)
        if not (r and c):
            continue
        if ("X", i) in where:
            xr, xc, o = where[("X", i)]
            places.append((eq_off, o, kron(N.d(i - 1), _eye(ring, xc))))
        if ("Y", i + 1) in where:
            yr, yc, o = where[("Y", i + 1)]
            places.append((eq_off, o, kron(_eye(ring, yr), M.d(i).T)))
        if ("m0", i) in where:
            _, _, o = where[("m0", i)]
            places.append((eq_off, o, _eye(ring, r * c)))
        rhs.extend(m3[i].entries())
        eq_off += r * c
    # chain condition d_N m0^i - m0^{i+1} d_M^i = 0
    for i in degs:
        r, c = N.rank(i + 1), M.rank(i)
        if not (r and c):
            continue
        used = False
        if ("m0", i) in where:
            _, _, o = where[("m0", i)]
            places.append((eq_off, o, kron(N.d(i), _eye(ring, c))))
            used = True
        if ("m0", i + 1) in where:
            mr, mc, o = where[("m0", i + 1)]
            places.append((eq_off, o, kron(_eye(ring, mr), M.d(i).T).scale(-1)))
            used = True
        if used:
            rhs.extend([0] * (r * c))
            eq_off += r * c
    if eq_off == 0:
        return True
    A = _embed(ring, eq_off, nvar, places)
    b = ExactMatrix(ring, eq_off, 1, [[x] for x in rhs])
    if nvar == 0:
        return b.is_zero()
    return solve_linear(A, b) is not None
