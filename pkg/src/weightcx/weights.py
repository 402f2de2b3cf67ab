"""The stupid weight structure on K^b(free modules).

Homological convention: a complex concentrated in degree ``k`` has weight
``-k``. Membership is decided through the weak homotopy criterion

    M in C_{w>=0}  iff  id_M ~_[1,+inf] 0,
    M in C_{w<=0}  iff  id_M ~_[-inf,-1] 0,

shifted to level ``n`` by ``M in C_{w>=n} iff M[-n] in C_{w>=0}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

from .complexes import ChainMap, Complex, ComplexError, Homotopy, cone, homology, stupid_truncation
from .homotopy import (
    HomotopyEquivalence,
    _solve_degree,
    homotopy_equivalence,
    k_hom,
    solve_null_homotopy,
    weak_homotopy_range,
)
from .linalg import module_invariants
from .matrix import ExactMatrix, block
from .rings import INTEGERS

GE = ">="
LE = "<="


# ---------------------------------------------------------------------------
# membership and bounds
# ---------------------------------------------------------------------------

@lru_cache(maxsize=2048)
def _degree_solvable(M, j):
    """Whether ``id_{M^j} = d^{j-1} x + y d^j`` is solvable."""
    if M.rank(j) == 0:
        return True
    ident = ChainMap.identity(M)
    return _solve_degree(ident, M, M, j) is not None


def obstructed_degrees(M):
    """Degrees ``j`` where the identity is not weakly null at ``j``."""
    return [j for j in M.degrees if not _degree_solvable(M, j)]


@dataclass(frozen=True)
class Membership:
    complex: Complex
    side: str
    n: int
    member: bool
    witness: object = None
    failing_degree: int = None  # degree of M (not of the shifted complex)

    def __bool__(self):
        return self.member


def weight_membership(M, side, n):
    """Decide ``M in C_{w>=n}`` (``side='>='``) or ``M in C_{w<=n}``.

    A positive answer carries a :class:`WeakHomotopyWitness` for the identity
    of ``M[-n]``; a negative one names the first obstructed degree of ``M``.
    """
    if side not in (GE, LE):
        raise ValueError(f"side must be '>=' or '<=', got {side!r}")
    S = M.shift(-n)
    k, l = (1, math.inf) if side == GE else (-math.inf, -1)
    # degrees i of S correspond to degrees i - n of M
    for i in S.degrees:
        if k <= i <= l and not _degree_solvable(M, i - n):
            return Membership(M, side, n, False, None, i - n)
    ident = ChainMap.identity(S)
    w = weak_homotopy_range(ident, ChainMap.zero(S, S), k, l)
    if w is None:  # pragma: no cover - the degreewise scan above is exhaustive
        raise ComplexError("inconsistent membership computation")
    return Membership(M, side, n, True, w, None)


def weight_bounds(M):
    """``(low, high)``: largest ``n`` with ``M in w>=n``, smallest ``m`` with ``M in w<=m``.

    Returns ``None`` for a contractible complex (the zero object).
    """
    bad = obstructed_degrees(M)
    if not bad:
        return None
    return (-max(bad), -min(bad))


def weight_bounds_by_search(M):
    """Same as :func:`weight_bounds`, by monotone search over membership queries."""
    if M.is_zero_object():
        return None
    n = -M.hi
    if not weight_membership(M, GE, n):
        raise ComplexError("complex in degrees [a, b] must lie in w>=-b")
    while n <= -M.lo and weight_membership(M, GE, n + 1):
        n += 1
    if n > -M.lo:
        return None
    m = -M.lo
    while m >= -M.hi and weight_membership(M, LE, m - 1):
        m -= 1
    return (n, m)


def format_bounds(b):
    return "zero" if b is None else f"[{b[0]}, {b[1]}]"


# ---------------------------------------------------------------------------
# independent oracle: hereditary decomposition over Z and fields
# ---------------------------------------------------------------------------

def hereditary_weight_bounds(M):
    """Bounds read off homology: valid over Z and over fields.

    ``M in w>=n`` iff ``H^k = 0`` for ``k > -n``; ``M in w<=m`` iff ``H^k = 0``
    for ``k < -m`` and ``H^{-m}`` is free.
    """
    if not (M.ring.kind == INTEGERS or M.ring.is_field):
        raise ComplexError("hereditary oracle needs Z or a field")
    inv = {k: module_invariants(homology(M, k)) for k in M.degrees}
    support = [k for k, v in inv.items() if not v.is_zero()]
    if not support:
        return None
    top, bottom = max(support), min(support)
    high = -bottom + (1 if inv[bottom].torsion else 0)
    return (-top, high)


def hereditary_membership(M, side, n):
    b = hereditary_weight_bounds(M)
    if b is None:
        return True
    return b[0] >= n if side == GE else b[1] <= n


@dataclass(frozen=True)
class HereditaryDecomposition:
    """``M ≃ ⊕ (free resolution of H^k placed in degrees [k-1, k])``.

    ``pieces`` lists ``(k, kind, value)`` with kind ``'free'`` or ``'torsion'``;
    ``model`` is the direct sum and ``embedding : model -> M`` the certified
    homotopy equivalence.
    """

    pieces: tuple
    model: Complex
    embedding: ChainMap
    equivalence: HomotopyEquivalence


def hereditary_decomposition(M):
    ring = M.ring
    if ring.kind == INTEGERS:
        return _integer_decomposition(M)
    if not ring.is_field:
        raise ComplexError("hereditary decomposition needs Z or a field")
    from .linalg import kernel_basis, rank

    pieces = []
    images = {}
    for k in M.degrees:
        K = kernel_basis(M.d(k))
        if K.cols == 0:
            continue
        B = M.d(k - 1)
        # complete an image basis to a kernel basis
        cur = ExactMatrix(ring, M.rank(k), 0)
        if B.cols:
            for col in B.columns():
                cand = cur.hstack(ExactMatrix.from_columns(ring, M.rank(k), [col]))
                if rank(cand) > cur.cols:
                    cur = cand
        for col in K.columns():
            cand = cur.hstack(ExactMatrix.from_columns(ring, M.rank(k), [col]))
            if rank(cand) > cur.cols:
                cur = cand
                pieces.append((k, "free", 1))
                images.setdefault(k, []).append(("free", col, None))
    model, emb, _ = _assemble(M, images)
    eq = homotopy_equivalence(emb)
    if eq is None:
        raise ComplexError("hereditary embedding is not an equivalence")
    return HereditaryDecomposition(tuple(sorted(pieces)), model, emb, eq)


def _piece_order(item):
    return (0, 0) if item[0] == "free" else (1, item[3])


def _assemble(M, images):
    """Model complex and embedding, pieces in canonical order."""
    ring = M.ring
    model = Complex.zero(ring)
    comps = {}
    order = []
    for k in sorted(images):
        for item in sorted(images[k], key=_piece_order):
            if item[0] == "free":
                piece = Complex.concentrated(ring, 1, k)
                maps = {k: ExactMatrix.from_columns(ring, M.rank(k), [item[1]])}
            else:
                _, z, b, t = item[:4]
                piece = Complex.from_list(ring, k - 1, [ExactMatrix(ring, 1, 1, [[t]])])
                maps = {
                    k - 1: ExactMatrix.from_columns(ring, M.rank(k - 1), [b]),
                    k: ExactMatrix.from_columns(ring, M.rank(k), [z]),
                }
            order.append((k, item))
            model, comps = _append(model, comps, piece, maps, M)
    emb = ChainMap(model, M, comps)
    return model, emb, order


def _integer_decomposition(M):
    """Split ``M`` over Z in adapted bases; every map is explicit.

    In each degree ``M^k`` gets the basis ``P_k = [complement | cycles]``
    where the complement maps by a diagonal matrix onto multiples of the
    cycle basis. ``M`` is then literally a sum of pieces ``Z -t-> Z``
    and ``Z``; unit pieces are contractible and dropped.
    """
    from .linalg import inverse, smith_normal_form, solve_linear

    ring = M.ring
    degs = list(M.degrees)
    comp, cyc = {}, {}
    for k in degs:
        n = M.rank(k)
        if M.rank(k + 1) == 0:
            comp[k] = ExactMatrix(ring, n, 0)
            cyc[k] = ExactMatrix.identity(ring, n)
            continue
        _, D, V = smith_normal_form(M.d(k))
        r = sum(1 for i in range(min(D.rows, D.cols)) if D[i, i] != 0)
        comp[k] = V.submatrix(range(n), range(r))
        cyc[k] = V.submatrix(range(n), range(r, n))
    diag = {}
    for k in degs:
        Vc = comp.get(k - 1)
        if Vc is None or Vc.cols == 0:
            diag[k] = []
            continue
        C = solve_linear(cyc[k], M.d(k - 1) @ Vc)
        U, D, W = smith_normal_form(C)
        cyc[k] = cyc[k] @ inverse(U)
        comp[k - 1] = Vc @ W
        diag[k] = [D[j, j] for j in range(Vc.cols)]
    images = {}
    pieces = []
    unit = {}  # degree k -> list of (cycle index, complement index in k-1)
    for k in degs:
        for j in range(cyc[k].cols):
            t = diag[k][j] if j < len(diag[k]) else 0
            z = cyc[k].column(j)
            if t == 0:
                pieces.append((k, "free", 1))
                images.setdefault(k, []).append(("free", z, j))
            elif t == 1:
                unit.setdefault(k, []).append(j)
            else:
                pieces.append((k, "torsion", t))
                images.setdefault(k, []).append(("torsion", z, comp[k - 1].column(j), t, j))
    model, emb, order = _assemble(M, images)
    # the retraction reads coordinates in the adapted basis
    P = {k: comp[k].hstack(cyc[k]) for k in degs}
    Pinv = {k: inverse(P[k]) if P[k].rows else P[k] for k in degs}
    rows = {k: [] for k in degs}
    for k, item in order:
        if item[0] == "free":
            rows[k].append(Pinv[k].row(comp[k].cols + item[2]))
        else:
            j = item[4]
            rows[k - 1].append(Pinv[k - 1].row(j))
            rows[k].append(Pinv[k].row(comp[k].cols + j))
    g = {}
    for k in degs:
        if model.rank(k):
            g[k] = ExactMatrix(ring, len(rows[k]), M.rank(k), [list(r) for r in rows[k]])
    gmap = ChainMap(M, model, g)
    # contractible unit pieces: h sends their cycle back to the complement
    h = {}
    for k, js in unit.items():
        n0, n1 = M.rank(k - 1), M.rank(k)
        Hk = ExactMatrix(ring, n0, n1)
        for j in js:
            Hk = Hk + ExactMatrix.from_columns(ring, n0, [comp[k - 1].column(j)]) @ Pinv[k].submatrix(
                [comp[k].cols + j], range(n1))
        h[k] = -Hk
    eq = HomotopyEquivalence(emb, gmap, Homotopy(model, model, {}), Homotopy(M, M, h))
    return HereditaryDecomposition(tuple(sorted(pieces)), model, emb, eq)


def _append(model, comps, piece, maps, M):
    ring = M.ring
    new = model.direct_sum(piece)
    out = {}
    for i in new.degrees:
        left = comps.get(i, ExactMatrix(ring, M.rank(i), model.rank(i)))
        right = maps.get(i, ExactMatrix(ring, M.rank(i), piece.rank(i)))
        if left.cols + right.cols:
            out[i] = left.hstack(right) if M.rank(i) else ExactMatrix(ring, 0, left.cols + right.cols)
    return new, out


# ---------------------------------------------------------------------------
# Postnikov towers and weight complexes
# ---------------------------------------------------------------------------

class PostnikovTower:
    """Weight Postnikov tower built from stupid truncations of a model complex.

    ``model`` is a complex homotopy equivalent to ``M`` via ``equivalence``
    (``model -> M``). Then ``M_{<=i}`` is the part of ``model`` in degrees
    ``>= -i`` and the factor ``M_i`` is ``model^{-i}`` placed in degree ``-i``.
    """

    def __init__(self, M, model=None, equivalence=None):
        self.M = M
        self.model = M if model is None else model
        if equivalence is None:
            if model is not None and model != M:
                raise ComplexError("a model different from M needs an equivalence")
            equivalence = HomotopyEquivalence.identity(M)
        self.equivalence = equivalence
        self.ring = M.ring

    # the filtration is nonconstant only for i in [-model.hi, -model.lo]
    @property
    def levels(self):
        T = self.model
        if T.is_zero_object():
            return range(0, 0)
        return range(-T.hi, -T.lo + 1)

    def filtration(self, i):
        T = self.model
        return T.restrict(-i, max(T.hi, -i))

    def factor(self, i):
        T = self.model
        return Complex(self.ring, {-i: T.rank(-i)})

    def heart_term(self, p):
        """``M^p = M_{-p}[p]``: the module ``model^p`` in degree 0."""
        return self.factor(-p).shift(p)

    def h(self, i):
        F = self.filtration(i)
        inc = ChainMap(F, self.model, {k: ExactMatrix.identity(self.ring, F.rank(k)) for k in F.degrees}, check=False)
        return self.equivalence.f @ inc

    def j(self, i):
        A, B = self.filtration(i), self.filtration(i + 1)
        return ChainMap(A, B, {k: ExactMatrix.identity(self.ring, A.rank(k)) for k in A.degrees}, check=False)

    def c(self, i):
        F, Q = self.filtration(i), self.factor(i)
        comps = {-i: ExactMatrix.identity(self.ring, Q.rank(-i))} if Q.rank(-i) else {}
        return ChainMap(F, Q, comps, check=False)

    def e(self, i):
        """``e_i : M_{i+1} -> M_{<=i}[1]``, the map ``d^{-i-1}`` of the model."""
        Q = self.factor(i + 1)
        F1 = self.filtration(i).shift(1)
        deg = -i - 1
        comps = {deg: self.model.d(deg)} if Q.rank(deg) and F1.rank(deg) else {}
        return ChainMap(Q, F1, comps, check=False)

    # -- certification --------------------------------------------------------
    def certify(self):
        """Check every tower axiom; returns a list of failure strings (empty = ok)."""
        fails = []
        if not self.equivalence.verify():
            fails.append("model equivalence does not verify")
        rng = list(self.levels)
        span = range(rng[0] - 1, rng[-1] + 2) if rng else range(0, 1)
        for i in span:
            if self.h(i + 1) @ self.j(i) != self.h(i):
                fails.append(f"h_{i + 1} j_{i} != h_{i}")
            for name, m in (("j", self.j(i)), ("c", self.c(i)), ("e", self.e(i))):
                if not m.is_chain_map():
                    fails.append(f"{name}_{i} is not a chain map")
            if not _triangle_ok(self.j(i - 1), self.c(i), self.e(i - 1)):
                fails.append(f"triangle at level {i} is not distinguished")
            # h_i is an i-weight decomposition
            F = self.filtration(i)
            if not weight_membership(F, LE, i):
                fails.append(f"M_<={i} not in w<={i}")
            if not weight_membership(cone(self.h(i)).cone, GE, i + 1):
                fails.append(f"cone(h_{i}) not in w>={i + 1}")
        for p in range(self.model.lo, self.model.hi + 1):
            b = weight_bounds(self.heart_term(p))
            if b not in (None, (0, 0)):
                fails.append(f"M^{p} is not in the heart")
        return fails


def _triangle_ok(j, c, e):
    """``A -j-> B -c-> Q -e-> A[1]`` is isomorphic to the cone triangle of ``j``.

    Uses ``phi : cone(j) -> Q``, ``(a, b) -> c(b)``: it must be a homotopy
    equivalence with ``phi∘incl = c`` and ``e∘phi ≃ -proj``.
    """
    cd = cone(j)
    C, Q = cd.cone, c.target
    comps = {}
    for k in C.degrees:
        a = j.source.rank(k + 1)
        if Q.rank(k) and C.rank(k):
            comps[k] = block(C.ring, [[ExactMatrix(C.ring, Q.rank(k), a), c[k]]], [Q.rank(k)], [a, j.target.rank(k)])
    phi = ChainMap(C, Q, comps, check=False)
    if not phi.is_chain_map() or phi @ cd.inclusion != c:
        return False
    if homotopy_equivalence(phi) is None:
        return False
    return solve_null_homotopy(e @ phi + cd.projection) is not None


def postnikov_tower(M, model=None, equivalence=None):
    return PostnikovTower(M, model, equivalence)


@dataclass(frozen=True)
class WeightComplexResult:
    complex: Complex
    tower: PostnikovTower = field(repr=False, default=None)


def weight_complex(M_or_tower):
    """``t(M)``: terms ``M^p`` and boundaries ``c_{-p-1}[p+1] ∘ e_{-p-1}[p]``."""
    tower = M_or_tower if isinstance(M_or_tower, PostnikovTower) else PostnikovTower(M_or_tower)
    T = tower.model
    ring = tower.ring
    ranks, diffs = {}, {}
    for p in range(T.lo, T.hi + 1):
        ranks[p] = tower.heart_term(p).rank(0)
    for p in range(T.lo, T.hi):
        e = tower.e(-p - 1)  # M_{-p} -> M_{<=-p-1}[1]
        c1 = tower.c(-p - 1).shift(1)  # M_{<=-p-1}[1] -> M_{-p-1}[1]
        comp = (c1 @ e).shift(p)  # M^p -> M^{p+1}, both in degree 0
        diffs[p] = comp[0]
    return WeightComplexResult(Complex(ring, ranks, diffs), tower)


# ---------------------------------------------------------------------------
# morphisms of towers
# ---------------------------------------------------------------------------

@dataclass
class TowerMorphism:
    g: ChainMap
    source: PostnikovTower
    target: PostnikovTower
    model_map: ChainMap  # g~ : model(M) -> model(M')

    def level(self, i):
        A, B = self.source.filtration(i), self.target.filtration(i)
        return ChainMap(A, B, {k: self.model_map[k] for k in A.degrees if B.rank(k)}, check=False)

    def factor_map(self, i):
        A, B = self.source.factor(i), self.target.factor(i)
        return ChainMap(A, B, {-i: self.model_map[-i]} if A.rank(-i) and B.rank(-i) else {}, check=False)

    def weight_complex_map(self, tM=None, tN=None):
        tM = tM or weight_complex(self.source).complex
        tN = tN or weight_complex(self.target).complex
        return ChainMap(tM, tN, {p: self.model_map[p] for p in tM.degrees if tN.rank(p)}, check=False)

    def certify(self):
        fails = []
        S, T = self.source, self.target
        levels = set(S.levels) | set(T.levels)
        span = range(min(levels) - 1, max(levels) + 2) if levels else range(0, 1)
        for i in span:
            gi = self.level(i)
            if not gi.is_chain_map():
                fails.append(f"g_<={i} not a chain map")
            if solve_null_homotopy(T.h(i) @ gi - self.g @ S.h(i)) is None:
                fails.append(f"h'_{i} g_<={i} not homotopic to g h_{i}")
            if T.j(i) @ gi != self.level(i + 1) @ S.j(i):
                fails.append(f"j square at {i}")
            if T.c(i) @ gi != self.factor_map(i) @ S.c(i):
                fails.append(f"c square at {i}")
            if T.e(i) @ self.factor_map(i + 1) != gi.shift(1) @ S.e(i):
                fails.append(f"e square at {i}")
        if not self.weight_complex_map().is_chain_map():
            fails.append("t(g) is not a chain map")
        return fails


def lift_map_to_towers(g, tower_src=None, tower_dst=None):
    """Extend ``g : M -> M'`` to a morphism of Postnikov towers."""
    tower_src = tower_src or PostnikovTower(g.source)
    tower_dst = tower_dst or PostnikovTower(g.target)
    a = tower_src.equivalence.f  # model(M) -> M
    b = tower_dst.equivalence.g  # M' -> model(M')
    return TowerMorphism(g, tower_src, tower_dst, b @ g @ a)


def cone_map(f, fprime, u, v, K=None):
    """Map ``cone(f) -> cone(f')`` from a square ``v f ≃ f' u`` with homotopy ``K``.

    ``(a, b) -> (u a, K a + v b)`` where ``v f - f' u = d K + K d``.
    """
    if K is None:
        K = solve_null_homotopy(v @ f - fprime @ u)
        if K is None:
            raise ComplexError("square does not commute up to homotopy")
    C1, C2 = cone(f), cone(fprime)
    A, B = f.source, f.target
    A2, B2 = fprime.source, fprime.target
    ring = f.ring
    comps = {}
    for i in C1.cone.degrees:
        if C2.cone.rank(i) == 0:
            continue
        comps[i] = block(
            ring,
            [[u[i + 1], None], [K[i + 1], v[i]]],
            [A2.rank(i + 1), B2.rank(i)],
            [A.rank(i + 1), B.rank(i)],
        )
    return ChainMap(C1.cone, C2.cone, comps)


@dataclass
class ConeTriangleReport:
    t_source: Complex
    t_target: Complex
    t_cone: Complex
    equivalence: HomotopyEquivalence  # cone(t(g)) -> t(cone(g))
    splittings: dict  # degree -> (incl_M, incl_N, proj_M, proj_N)

    def verify(self):
        if self.equivalence is None or not self.equivalence.verify():
            return False
        for i, (iM, iN, pM, pN) in self.splittings.items():
            if not ((pM @ iM).is_identity() or pM.rows == 0) or not ((pN @ iN).is_identity() or pN.rows == 0):
                return False
            if not (pM @ iN).is_zero() or not (pN @ iM).is_zero():
                return False
            if iM.rows and not (iM @ pM + iN @ pN).is_identity():
                return False
        return True


def cone_triangle_weight_complexes(g, tower_src=None, tower_dst=None):
    """``t(cone g)`` versus ``cone(t g)`` with termwise split witnesses."""
    mor = lift_map_to_towers(g, tower_src, tower_dst)
    tM = weight_complex(mor.source).complex
    tN = weight_complex(mor.target).complex
    tg = mor.model_map
    C = cone(g).cone
    tC = weight_complex(C).complex
    u = mor.source.equivalence.f
    v = mor.target.equivalence.f
    phi = cone_map(tg, g, u, v)
    eq = homotopy_equivalence(phi)
    ct = cone(tg)
    splits = {}
    for i in ct.cone.degrees:
        a, b = tM.rank(i + 1), tN.rank(i)
        ring = g.ring
        iM = block(ring, [[ExactMatrix.identity(ring, a)], [None]], [a, b], [a]) if a else ExactMatrix(ring, a + b, 0)
        iN = block(ring, [[None], [ExactMatrix.identity(ring, b)]], [a, b], [b]) if b else ExactMatrix(ring, a + b, 0)
        pM = iM.T
        pN = iN.T
        splits[i] = (iM, iN, pM, pN)
    return ConeTriangleReport(tM, tN, tC, eq, splits)


# ---------------------------------------------------------------------------
# extension closure
# ---------------------------------------------------------------------------

@dataclass
class RebuildStep:
    level: int
    attaching_map: ChainMap  # M_i[-1] -> M_{<=i-1}
    rebuilt: Complex  # cone of the attaching map
    equivalence: HomotopyEquivalence  # rebuilt -> M_{<=i}


def rebuild_from_tower(tower):
    """Rebuild ``model`` from the factors ``M_i`` by iterated cones.

    Each step certifies ``cone(M_i[-1] -> M_{<=i-1}) ≃ M_{<=i}``.
    """
    steps = []
    ring = tower.ring
    for i in tower.levels:
        Fi = tower.filtration(i)
        Fprev = tower.filtration(i - 1)
        Qm1 = tower.factor(i).shift(-1)
        deg = -i + 1
        comps = {deg: tower.model.d(-i)} if Qm1.rank(deg) and Fprev.rank(deg) else {}
        att = ChainMap(Qm1, Fprev, comps)
        C = cone(att).cone
        # identify C with F_i: C^k = Qm1^{k+1} ⊕ Fprev^k = Fi^k up to block order
        ident = {}
        for k in C.degrees:
            a, b = Qm1.rank(k + 1), Fprev.rank(k)
            if Fi.rank(k):
                ident[k] = ExactMatrix.identity(ring, a + b)
        f = ChainMap(C, Fi, ident)
        eq = homotopy_equivalence(f)
        if eq is None:
            raise ComplexError(f"rebuild step {i} failed")
        steps.append(RebuildStep(i, att, C, eq))
    return steps


# ---------------------------------------------------------------------------
# further tower checks
# ---------------------------------------------------------------------------

def random_tower(M, rng, junk=1):
    """A tower for ``M`` built on a randomly chosen equivalent model."""
    from .generators import equivalent
    N, eq = equivalent(M, rng, junk)
    return PostnikovTower(M, N, eq)


def octahedron_check(M, m=0):
    """``M_m ≃ cone(w_{>=m} M -> w_{>=m+1} M)[-1]`` for the stupid truncations."""
    A = stupid_truncation(M, m - 1).quot
    B = stupid_truncation(M, m).quot
    p = ChainMap(A, B, {k: ExactMatrix.identity(M.ring, B.rank(k)) for k in B.degrees}, check=False)
    C = cone(p).cone.shift(-1)
    F = Complex(M.ring, {-m: M.rank(-m)})
    comps = {}
    if F.rank(-m):
        a, b = A.rank(-m), B.rank(-m - 1)
        comps[-m] = block(M.ring, [[ExactMatrix.identity(M.ring, a)], [None]], [a, b], [a])
    f = ChainMap(F, C, comps)
    return homotopy_equivalence(f)


def shift_compatibility(M, n):
    """Certify ``t(M[n]) ≃ t(M)[n]`` by an explicit equivalence (or ``None``)."""
    left = weight_complex(M.shift(n)).complex
    right = weight_complex(M).complex.shift(n)
    f = ChainMap(left, right, {i: ExactMatrix.identity(M.ring, left.rank(i)) for i in left.degrees if left.rank(i)})
    return homotopy_equivalence(f)


def dual_complex(M):
    """``Hom(M, R)``: terms ``(M^{-i})^*`` in degree ``i``, ``d^i = (-1)^{i+1} (d^{-i-1})^T``."""
    ranks = {-i: M.rank(i) for i in M.degrees}
    diffs = {}
    for i in range(-M.hi, -M.lo):
        sign = -1 if i % 2 == 0 else 1
        diffs[i] = M.d(-i - 1).T.scale(sign)
    return Complex(M.ring, ranks, diffs)


def right_weight_complex(M):
    """Weight complex through the dual: dualize, take ``t``, dualize back."""
    return dual_complex(weight_complex(dual_complex(M)).complex)


# ---------------------------------------------------------------------------
# axiom checker
# ---------------------------------------------------------------------------

@dataclass
class WeightPredicates:
    """A candidate pair of classes: ``le(M, n)`` for ``w<=n`` and ``ge(M, n)`` for ``w>=n``."""

    le: object
    ge: object
    name: str = "custom"


def stupid_predicates():
    def le(M, n):
        return weight_membership(M, LE, n).member

    def ge(M, n):
        return weight_membership(M, GE, n).member

    return WeightPredicates(le, ge, "w_stu")


def degree_predicates():
    """Deliberately wrong: ``w<=n`` means concentrated in degrees ``<= -n``."""
    good = stupid_predicates()

    def le(M, n):
        return M.is_zero_object() or M.hi <= -n

    return WeightPredicates(le, good.ge, "degrees<=0")


@dataclass
class AxiomReport:
    predicates: str
    passed: bool
    counts: dict
    violations: dict = field(default_factory=dict)  # axiom -> first witness

    @property
    def violation(self):
        """The first violation in axiom order, or ``None``."""
        for ax in AXIOMS:
            if ax in self.violations:
                return self.violations[ax]
        return None

    def to_json(self):
        return {
            "predicates": self.predicates,
            "passed": self.passed,
            "counts": dict(self.counts),
            "violations": {k: self.violations[k] for k in AXIOMS if k in self.violations},
        }


AXIOMS = ("retraction", "shift", "orthogonality", "decomposition")


def check_axioms(corpus, predicates=None, window=6):
    """Check the weight structure axioms for ``predicates`` on ``corpus``.

    Covers retraction closure on direct sums of consecutive members, the
    shift inclusions, orthogonality ``w<=0 ⊥ w>=1`` over all ordered pairs and
    all relative shifts allowed by the predicates, and a weight decomposition
    of every member built from stupid truncations. Each axiom records its
    first violation with witnesses; checking of that axiom then stops.
    """
    from .serialize import complex_to_json, chain_map_to_json

    P = predicates or stupid_predicates()
    counts = {ax: 0 for ax in AXIOMS}
    found = {}
    corpus = list(corpus)
    le_cache, ge_cache = {}, {}

    def le(M, n):
        key = (M, n)
        if key not in le_cache:
            le_cache[key] = bool(P.le(M, n))
        return le_cache[key]

    def ge(M, n):
        key = (M, n)
        if key not in ge_cache:
            ge_cache[key] = bool(P.ge(M, n))
        return ge_cache[key]

    def levels(M):
        if M.is_zero_object():
            return range(-1, 2)
        return range(-M.hi - 1, -M.lo + 2)

    def shifts():
        for M in corpus:
            for n in levels(M):
                counts["shift"] += 1
                if le(M, n) and not le(M, n + 1):
                    return dict(object=complex_to_json(M), n=n, side=LE)
                if ge(M, n) and not ge(M, n - 1):
                    return dict(object=complex_to_json(M), n=n, side=GE)
                if le(M, n) != le(M.shift(1), n + 1) or ge(M, n) != ge(M.shift(1), n + 1):
                    return dict(object=complex_to_json(M), n=n, side="[1]")
        return None

    def retraction():
        for A, B in zip(corpus, corpus[1:]):
            S = A.direct_sum(B)
            for n in levels(S):
                counts["retraction"] += 1
                for pred, side in ((le, LE), (ge, GE)):
                    if pred(S, n) and not (pred(A, n) and pred(B, n)):
                        return dict(sum=complex_to_json(S), n=n, side=side)
        return None

    def orthogonality():
        for A in corpus:
            if A.is_zero_object():
                continue
            lefts = [s for s in range(-window, window + 1) if le(A.shift(s), 0)]
            if not lefts:
                continue
            for B in corpus:
                if B.is_zero_object():
                    continue
                rights = [t for t in range(-window, window + 1) if ge(B.shift(t), 1)]
                # K(A[s], B[t]) = K(A, B[t - s]) up to sign
                for u in sorted({t - s for s in lefts for t in rights}):
                    counts["orthogonality"] += 1
                    Bu = B.shift(u)
                    if Bu.hi < A.lo or A.hi < Bu.lo:
                        continue
                    H = k_hom(A, Bu)
                    if not H.is_zero():
                        s = next(s for s in lefts if s + u in rights)
                        g = next(g for g in H.generator_maps if not H.is_zero_class(g))
                        return dict(
                            x=complex_to_json(A.shift(s)),
                            y=complex_to_json(B.shift(s + u)),
                            relative_shift=u,
                            hom=str(H.invariants),
                            nonzero_map=chain_map_to_json(g),
                        )
        return None

    def decomposition():
        for M in corpus:
            for m in levels(M):
                T = stupid_truncation(M, m)
                counts["decomposition"] += 1
                if not le(T.sub, m) or not ge(T.quot, m + 1):
                    return dict(object=complex_to_json(M), m=m)
                if not _triangle_ok(T.inclusion, T.projection, T.connecting):
                    return dict(object=complex_to_json(M), m=m, triangle=False)
        return None

    for ax, fn in zip(AXIOMS, (retraction, shifts, orthogonality, decomposition)):
        v = fn()
        if v is not None:
            found[ax] = {"axiom": ax, **v}
    return AxiomReport(P.name, not found, counts, found)
