"""Bounded complexes of finitely generated abelian groups.

A :class:`ModuleComplex` has presented terms ``Z^{g_i} / im R_i`` and
differentials given on generators. Its free replacement is the total
complex of the two-row resolution ``F1 -R-> F0``; all weight computations
then happen in the homotopy category of free complexes.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .complexes import Complex, ComplexError, homology
from .homotopy import HomotopyEquivalence, k_hom
from .linalg import (
    Invariants,
    ModulePresentation,
    kernel_basis,
    kernel_of_presented,
    map_is_iso,
    module_invariants,
    presented_homology,
    smith_normal_form,
    solve_linear,
)
from .matrix import ExactMatrix, block
from .rings import ZZ
from .weights import PostnikovTower, hereditary_decomposition, rebuild_from_tower, weight_bounds, weight_complex


def _zeros(r, c):
    return ExactMatrix(ZZ, r, c)


@dataclass(frozen=True)
class ModuleComplex:
    """Terms ``{i: ModulePresentation}`` and differentials on generators."""

    terms: dict
    diffs: dict

    def __post_init__(self):
        for i, P in self.terms.items():
            if P.ring != ZZ:
                raise ComplexError("module complexes are over Z")
        for i in self.degrees:
            d = self.d(i)
            if d.shape != (self.gens(i + 1), self.gens(i)):
                raise ComplexError(f"d^{i} has shape {d.shape}")
            R0, R1 = self.rels(i), self.rels(i + 1)
            if R0.cols and not _in_span(d @ R0, R1):
                raise ComplexError(f"d^{i} is not well defined on the quotient")
            dd = self.d(i + 1) @ d
            if not _in_span(dd, self.rels(i + 2)):
                raise ComplexError(f"d^{i + 1} d^{i} is not zero on the quotient")

    @property
    def degrees(self):
        ks = [i for i, P in self.terms.items() if P.generators]
        return range(min(ks), max(ks) + 1) if ks else range(0, 0)

    @property
    def lo(self):
        return self.degrees.start

    @property
    def hi(self):
        return self.degrees.stop - 1

    def term(self, i):
        P = self.terms.get(i)
        return P if P is not None else ModulePresentation(ZZ, 0, _zeros(0, 0))

    def gens(self, i):
        return self.term(i).generators

    def rels(self, i):
        return self.term(i).relations

    def d(self, i):
        m = self.diffs.get(i)
        return m if m is not None else _zeros(self.gens(i + 1), self.gens(i))

    @classmethod
    def single(cls, P, degree=0):
        return cls({degree: P}, {})

    @classmethod
    def from_complex(cls, M):
        """A free complex viewed as a module complex."""
        terms = {i: ModulePresentation.free(ZZ, M.rank(i)) for i in M.degrees}
        return cls(terms, {i: M.d(i) for i in range(M.lo, M.hi)})

    def homology(self, i):
        """``H^i`` as a presentation whose generators are cycles plus relations."""
        return presented_homology(self.d(i - 1), self.term(i), self.d(i), self.term(i + 1))

    def to_json(self):
        return {
            "ring": "Z",
            "lo": self.lo,
            "terms": [self.term(i).to_json() for i in self.degrees],
            "diff": [self.d(i).to_json() for i in range(self.lo, self.hi)],
        }

    @classmethod
    def from_json(cls, obj):
        from .serialize import SchemaError, presentation_from_json, _mat
        if not isinstance(obj, dict) or "terms" not in obj or "lo" not in obj:
            raise SchemaError("module complex needs 'lo' and 'terms'")
        lo = int(obj["lo"])
        terms = {lo + k: presentation_from_json(t, ZZ) for k, t in enumerate(obj["terms"])}
        diffs = {}
        for k, m in enumerate(obj.get("diff", [])):
            diffs[lo + k] = _mat(ZZ, m, terms[lo + k + 1].generators, terms[lo + k].generators)
        return cls(terms, diffs)


def _in_span(A, R):
    if A.cols == 0 or A.is_zero():
        return True
    if R.cols == 0:
        return False
    return solve_linear(R, A) is not None


def _injective_relations(R):
    """Columns spanning the same lattice as ``R`` and linearly independent."""
    if R.cols == 0:
        return R
    U, D, V = smith_normal_form(R)
    r = sum(1 for i in range(min(D.rows, D.cols)) if D[i, i] != 0)
    return (R @ V).submatrix(range(R.rows), range(r))


@dataclass
class FreeReplacement:
    """``Q`` with the quasi-isomorphism ``Q -> M``, ``(x, y) -> [x]``."""

    source: ModuleComplex
    Q: Complex
    projection: dict  # degree -> matrix Q^n -> Z^{g_n}
    relations: dict  # degree -> injective relation matrix used

    def verify(self):
        """The projection is a chain map to ``M`` inducing isomorphisms on homology."""
        M, Q = self.source, self.Q
        for n in range(min(M.lo, Q.lo) - 1, max(M.hi, Q.hi) + 2):
            pn, pn1 = self._proj(n), self._proj(n + 1)
            lhs = M.d(n) @ pn
            rhs = pn1 @ Q.d(n)
            if not _in_span(lhs - rhs, M.rels(n + 1)):
                return False
        for n in range(min(M.lo, Q.lo) - 1, max(M.hi, Q.hi) + 2):
            if not self._homology_iso(n):
                return False
        return True

    def _proj(self, n):
        return self.projection.get(n, _zeros(self.source.gens(n), self.Q.rank(n)))

    def _homology_iso(self, n):
        M, Q = self.source, self.Q
        HQ = homology(Q, n)
        HM = M.homology(n)
        if HQ.generators == 0 or HM.generators == 0:
            return HQ.is_zero() and HM.is_zero()
        img = self._proj(n) @ kernel_basis(Q.d(n))
        c = solve_linear(_homology_gens(M, n), img)
        if c is None:
            return False
        return map_is_iso(c, HQ, HM)


def _homology_gens(M, i):
    Z = kernel_of_presented(M.d(i), M.term(i + 1))
    R0 = M.rels(i)
    return Z.hstack(R0) if R0.cols else Z


def free_replacement(M):
    """Total complex of ``F1 -> F0``: ``Q^n = F0^n ⊕ F1^{n+1}``.

    ``d(x, y) = (D x + R y, -G x - E y)`` where ``D R = R E`` and ``D D = R G``.
    """
    if not M.degrees:
        return FreeReplacement(M, Complex.zero(ZZ), {}, {})
    lo, hi = M.lo, M.hi
    R = {i: _injective_relations(M.rels(i)) for i in range(lo - 2, hi + 4)}
    f0 = {i: M.gens(i) for i in range(lo - 2, hi + 4)}
    f1 = {i: R[i].cols for i in range(lo - 2, hi + 4)}
    E, G = {}, {}
    for i in range(lo - 1, hi + 2):
        D = M.d(i)
        if f1[i] and f1[i + 1]:
            e = solve_linear(R[i + 1], D @ R[i])
            if e is None:
                raise ComplexError("relation lift failed")
            E[i] = e
        if f1[i + 2] and f0[i]:
            g = solve_linear(R[i + 2], M.d(i + 1) @ D)
            if g is None:
                raise ComplexError("d∘d lift failed")
            G[i] = g
    ranks, diffs, proj = {}, {}, {}
    for n in range(lo - 1, hi + 1):
        ranks[n] = f0[n] + f1[n + 1]
    for n in range(lo - 1, hi):
        a0, a1 = f0[n], f1[n + 1]
        b0, b1 = f0[n + 1], f1[n + 2]
        grid = [
            [M.d(n) if b0 and a0 else None, R[n + 1] if b0 and a1 else None],
            [G[n].scale(-1) if n in G else None, E[n + 1].scale(-1) if (n + 1) in E else None],
        ]
        diffs[n] = block(ZZ, grid, [b0, b1], [a0, a1])
    for n in range(lo - 1, hi + 1):
        if ranks[n] and f0[n]:
            proj[n] = block(ZZ, [[ExactMatrix.identity(ZZ, f0[n]), None]], [f0[n]], [f0[n], f1[n + 1]])
    Q = Complex(ZZ, ranks, diffs)
    return FreeReplacement(M, Q, {n: m for n, m in proj.items() if Q.rank(n)}, R)


def derived_weight_bounds(M):
    return weight_bounds(free_replacement(M).Q)


# ---------------------------------------------------------------------------
# universal coefficients
# ---------------------------------------------------------------------------

def _cyclics(inv):
    """The module as a list of cyclic orders (0 for a copy of Z)."""
    return [0] * inv.rank + list(inv.torsion)


def _normalize(orders):
    """Invariants of ``⊕ Z/o`` (``o = 0`` meaning Z), via Smith normal form."""
    rank = sum(1 for o in orders if o == 0)
    tors = [o for o in orders if o > 1]
    if not tors:
        return Invariants(ZZ, rank, ())
    D = ExactMatrix.diagonal(ZZ, tors)
    facs = [f for f in _diag(D) if f != 1]
    return Invariants(ZZ, rank, tuple(sorted(facs)))


def _diag(D):
    _, S, _ = smith_normal_form(D)
    return [S[i, i] for i in range(min(S.rows, S.cols))]


def hom_groups(A, B):
    """``Hom(A, B)`` for finitely generated abelian groups given by invariants."""
    out = []
    for a in _cyclics(A):
        for b in _cyclics(B):
            if a == 0:
                out.append(b)
            elif b == 0:
                continue
            else:
                out.append(gcd(a, b))
    return _normalize(out)


def ext_groups(A, B):
    """``Ext^1(A, B)``: ``Ext(Z/s, Z) = Z/s``, ``Ext(Z/s, Z/t) = Z/gcd(s, t)``."""
    out = []
    for a in _cyclics(A):
        if a == 0:
            continue
        for b in _cyclics(B):
            out.append(a if b == 0 else gcd(a, b))
    return _normalize(out)


def direct_sum_invariants(*invs):
    orders = []
    for inv in invs:
        orders.extend(_cyclics(inv))
    return _normalize(orders)


def uct_oracle(M, N, n):
    """``Hom_D(M, N[n]) ≅ Hom(H^{-n} M, N) ⊕ Ext^1(H^{1-n} M, N)``."""
    h0 = module_invariants(M.homology(-n))
    h1 = module_invariants(M.homology(1 - n))
    Ninv = module_invariants(N)
    return direct_sum_invariants(hom_groups(h0, Ninv), ext_groups(h1, Ninv))


@dataclass
class UCTReport:
    ok: bool
    rows: dict

    def to_json(self):
        return {"ok": self.ok, "degrees": {str(k): v for k, v in sorted(self.rows.items())}}


def uct_cross_check(M, N):
    """Weight spectral sequence abutment for ``K(-, N)`` versus the UCT oracle.

    ``N`` is a :class:`ModulePresentation` over Z placed in degree 0.
    """
    from .spectral import weight_ss_cohomological

    Q = free_replacement(M).Q
    QN = free_replacement(ModuleComplex.single(N)).Q
    SS = weight_ss_cohomological(Q, QN)
    einf = SS.invariants(None)
    rows = {}
    ok = SS.check_d_squared() and SS.check_page_homology()
    lo = -(M.hi + 1) if M.degrees else 0
    hi = -(M.lo - 1) if M.degrees else 0
    for n in range(lo - 1, hi + 2):
        expect = uct_oracle(M, N, n)
        khom = k_hom(Q, QN.shift(n)).invariants
        pieces = [v for (p, q), v in einf.items() if p + q == n]
        total_rank = sum(v.rank for v in pieces)
        abut = SS.total_homology(n) if n in SS.F.K.degrees else Invariants(ZZ, 0, ())
        good = khom == expect and abut == expect and total_rank == expect.rank
        ok = ok and good
        rows[n] = {
            "oracle": str(expect),
            "k_hom": str(khom),
            "abutment": str(abut),
            "e_infinity": [str(v) for v in pieces if not v.is_zero()],
            "match": good,
        }
    return UCTReport(ok, rows)


# ---------------------------------------------------------------------------
# realizing a prescribed weight complex
# ---------------------------------------------------------------------------

@dataclass
class Realization:
    module_complex: ModuleComplex
    replacement: FreeReplacement
    target: Complex
    equivalence: HomotopyEquivalence  # target -> Q
    tower: PostnikovTower
    rebuild: list  # RebuildStep list

    def verify(self):
        t = weight_complex(self.tower).complex
        return (
            t == self.target
            and self.equivalence.verify()
            and self.replacement.verify()
            and all(s.equivalence.verify() for s in self.rebuild)
            and not self.tower.certify()
        )


def equivalence_between(A, B):
    """A homotopy equivalence ``A -> B`` of free complexes over Z or ``None``.

    Both sides are reduced to their canonical hereditary models; equal models
    give the composite ``A -> model -> B``.
    """
    if A.ring != B.ring:
        raise ComplexError("ring mismatch")
    da = hereditary_decomposition(A)
    db = hereditary_decomposition(B)
    if da.model != db.model:
        return None
    return da.equivalence.inverse().compose(db.equivalence)


def realize_weight_complex(M, target):
    """A tower for ``M`` whose weight complex is ``target`` term by term.

    ``target`` must be homotopy equivalent to the free replacement of ``M``;
    otherwise :class:`ComplexError` is raised.
    """
    rep = free_replacement(M)
    eq = equivalence_between(target, rep.Q)
    if eq is None:
        raise ComplexError("target is not homotopy equivalent to the free replacement")
    tower = PostnikovTower(rep.Q, target, eq)
    steps = rebuild_from_tower(tower)
    return Realization(M, rep, target, eq, tower, steps)


# ---------------------------------------------------------------------------
# random module complexes
# ---------------------------------------------------------------------------

def random_module_complex(rng, max_strands=3, lo_range=(-2, 1)):
    """Direct sum of two-term strands, twisted by base changes on generators.

    A strand is ``Z/s`` alone, ``Z -a-> Z``, ``Z -c-> Z/t`` or
    ``Z/s -c-> Z/t`` with ``t | c s``; ``s = 0`` stands for Z.
    """
    from .generators import unimodular
    from .linalg import inverse

    lo = rng.randint(*lo_range)
    gens = {lo: [], lo + 1: []}
    arrows = []
    for _ in range(rng.randint(1, max_strands)):
        kind = rng.randrange(3)
        s = rng.choice([0, 0, 2, 3, 4, 6])
        t = rng.choice([0, 0, 2, 4, 6])
        if kind == 0:
            gens[rng.choice([lo, lo + 1])].append(s)
            continue
        if s == 0:
            c = rng.randint(-3, 3)
        else:
            base = t // gcd(t, s) if t else 0
            c = base * rng.randint(0, 2) if base else 0
        arrows.append((len(gens[lo]), len(gens[lo + 1]), c))
        gens[lo].append(s)
        gens[lo + 1].append(t)
    terms, diffs = {}, {}
    for i, orders in gens.items():
        g = len(orders)
        cols = []
        for k, o in enumerate(orders):
            if o:
                col = [0] * g
                col[k] = o
                cols.append(col)
        R = ExactMatrix.from_columns(ZZ, g, cols) if cols else _zeros(g, 0)
        terms[i] = ModulePresentation(ZZ, g, R)
    rows = [[0] * len(gens[lo]) for _ in gens[lo + 1]]
    for a, b, c in arrows:
        rows[b][a] = c
    diffs[lo] = ExactMatrix(ZZ, len(gens[lo + 1]), len(gens[lo]), rows)
    for i in (lo, lo + 1):
        g = terms[i].generators
        if g == 0:
            continue
        U = unimodular(ZZ, rng, g)
        terms[i] = ModulePresentation(ZZ, g, U @ terms[i].relations)
        if i == lo:
            diffs[lo] = diffs[lo] @ inverse(U)
        else:
            diffs[lo] = U @ diffs[lo]
    return ModuleComplex(terms, diffs)
