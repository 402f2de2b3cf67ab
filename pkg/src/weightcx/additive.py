"""Free modules, their idempotent completion and the totalization trick.

Over Z, fields and Z/p^k every idempotent splits. Over Z/n with ``n``
divisible by two distinct primes it may not: ``3`` on ``Z/6`` has image
``Z/2``, which is projective but not free. Such objects are kept formally as
:class:`IdemObj` and only evaluated through windows of free complexes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .complexes import Complex, ComplexError
from .linalg import kernel_basis, module_invariants, rank, solve_linear, subquotient, ModulePresentation
from .matrix import ExactMatrix
from .rings import INTEGERS, PrimeField, RingError, factorize


@dataclass(frozen=True)
class FreeObj:
    ring: object
    rank: int

    def __post_init__(self):
        if self.rank < 0:
            raise ValueError("rank must be non-negative")


def hom_rank(X, Y):
    """Number of matrix entries of a morphism ``X -> Y``."""
    if X.ring != Y.ring:
        raise RingError(f"ring mismatch: {X.ring} vs {Y.ring}")
    return Y.rank * X.rank


@dataclass(frozen=True)
class IdemObj:
    """The formal image ``(R^rank, p)`` of an idempotent ``p``."""

    base: FreeObj
    p: ExactMatrix

    def __post_init__(self):
        if self.p.shape != (self.base.rank, self.base.rank):
            raise ValueError("idempotent must be square of the base rank")
        if self.p @ self.p != self.p:
            raise ValueError("p is not idempotent")

    @classmethod
    def of(cls, ring, p):
        return cls(FreeObj(ring, p.rows), p)

    @property
    def ring(self):
        return self.base.ring

    @property
    def rank(self):
        return self.base.rank

    def complement(self):
        return IdemObj(self.base, ExactMatrix.identity(self.ring, self.rank) - self.p)

    def image(self):
        """``im p`` as a presented module (``R^rank / im(1 - p)``)."""
        q = ExactMatrix.identity(self.ring, self.rank) - self.p
        return ModulePresentation(self.ring, self.rank, q)


def is_split_injective(h):
    """A retraction ``s`` with ``s h = id`` or ``None``."""
    if h.cols == 0:
        return ExactMatrix(h.ring, 0, h.rows)
    st = solve_linear(h.T, ExactMatrix.identity(h.ring, h.cols))
    return None if st is None else st.T


def is_split_surjective(h):
    """A section ``t`` with ``h t = id`` or ``None``."""
    if h.rows == 0:
        return ExactMatrix(h.ring, h.cols, 0)
    return solve_linear(h, ExactMatrix.identity(h.ring, h.rows))


class NonSplitIdempotent(ComplexError):
    """The image of the idempotent is not a free module."""

    def __init__(self, e, ranks):
        self.idempotent = e
        self.local_ranks = ranks
        inv = module_invariants(e.image())
        self.image_invariants = inv
        super().__init__(f"image {inv} is not free (local ranks {ranks})")


@dataclass(frozen=True)
class SplitIdempotent:
    """``u : R^r -> R^n``, ``v : R^n -> R^r`` with ``v u = id`` and ``u v = p``."""

    r: int
    u: ExactMatrix
    v: ExactMatrix

    def check(self, e):
        ok_vu = self.r == 0 or (self.v @ self.u).is_identity()
        return ok_vu and self.u @ self.v == e.p


def _independent_columns(P, prime):
    """Indices of columns of ``P`` forming a basis of its column space mod ``prime``."""
    F = PrimeField(prime)
    Pm = P.change_ring(F, lambda x: x % prime)
    chosen = []
    cur = ExactMatrix(F, P.rows, 0)
    for j in range(P.cols):
        cand = cur.hstack(Pm.submatrix(range(P.rows), [j]))
        if rank(cand) > cur.cols:
            cur = cand
            chosen.append(j)
    return chosen


def split_idempotent(e):
    ring, n, p = e.ring, e.rank, e.p
    if n == 0:
        return SplitIdempotent(0, ExactMatrix(ring, 0, 0), ExactMatrix(ring, 0, 0))
    if ring.kind == INTEGERS or ring.is_field:
        u = kernel_basis(ExactMatrix.identity(ring, n) - p)
    else:
        factors = factorize(ring.modulus)
        local = {}
        for q, k in factors:
            qk = q ** k
            cols = _independent_columns(p.lift(), q)
            local[qk] = [[p.lift()[i, j] % qk for j in cols] for i in range(n)]
        ranks = {qk: len(m[0]) if m else 0 for qk, m in local.items()}
        if len(set(ranks.values())) > 1:
            raise NonSplitIdempotent(e, ranks)
        r = next(iter(ranks.values()))
        data = [[_crt([(local[qk][i][j], qk) for qk in local]) for j in range(r)] for i in range(n)]
        u = ExactMatrix(ring, n, r, data)
    r = u.cols
    if r == 0:
        return SplitIdempotent(0, ExactMatrix(ring, n, 0), ExactMatrix(ring, 0, n))
    v = solve_linear(u, p)
    out = SplitIdempotent(r, u, v) if v is not None else None
    if out is None or not out.check(e):
        raise ComplexError("idempotent splitting failed to verify")
    return out


def _crt(pairs):
    x, m = 0, 1
    for a, q in pairs:
        t = ((a - x) * pow(m, -1, q)) % q
        x, m = x + m * t, m * q
    return x % m


# ---------------------------------------------------------------------------
# complexes over the idempotent completion
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IdemComplex:
    """A bounded complex of :class:`IdemObj` terms starting in degree ``lo``.

    ``diffs[k] : B^{lo+k} -> B^{lo+k+1}`` must satisfy ``e = p' e p`` and
    ``e' e = 0``.
    """

    ring: object
    lo: int
    terms: tuple
    diffs: tuple

    def __post_init__(self):
        if len(self.diffs) != max(len(self.terms) - 1, 0):
            raise ComplexError("need one differential between consecutive terms")
        for k, e in enumerate(self.diffs):
            a, b = self.terms[k], self.terms[k + 1]
            if e.shape != (b.rank, a.rank):
                raise ComplexError(f"differential {k} has the wrong shape")
            if b.p @ e @ a.p != e:
                raise ComplexError(f"differential {k} is not a map of images")
        for k in range(len(self.diffs) - 1):
            if not (self.diffs[k + 1] @ self.diffs[k]).is_zero():
                raise ComplexError("d∘d != 0")

    @property
    def hi(self):
        return self.lo + len(self.terms) - 1

    @classmethod
    def single(cls, e, degree=0):
        return cls(e.ring, degree, (e,), ())

    def term(self, i):
        k = i - self.lo
        return self.terms[k] if 0 <= k < len(self.terms) else None

    def diff(self, i):
        k = i - self.lo
        return self.diffs[k] if 0 <= k < len(self.diffs) else None

    def is_zero(self):
        return not self.terms


def karoubi_homology(C, i):
    """``(ker e^i ∩ im p^i) / e^{i-1}(im p^{i-1})`` as a presented module."""
    t = C.term(i)
    ring = C.ring
    if t is None or t.rank == 0:
        return ModulePresentation(ring, 0, ExactMatrix(ring, 0, 0))
    q = ExactMatrix.identity(ring, t.rank) - t.p
    e = C.diff(i)
    A = q if e is None else q.vstack(e)
    gens = kernel_basis(A)
    prev = C.diff(i - 1)
    if prev is None:
        sub = ExactMatrix(ring, t.rank, 0)
    else:
        sub = prev @ C.term(i - 1).p
    if gens.cols == 0:
        return ModulePresentation(ring, 0, ExactMatrix(ring, 0, 0))
    return subquotient(gens, sub)


def split_form(C):
    """The free complex ``R^{r_i}`` with ``d = v^{i+1} e^i u^i``."""
    splits = [split_idempotent(t) for t in C.terms]
    ranks = {C.lo + k: s.r for k, s in enumerate(splits)}
    diffs = {C.lo + k: splits[k + 1].v @ e @ splits[k].u for k, e in enumerate(C.diffs)}
    return Complex(C.ring, ranks, diffs)


def totalize_window(C, N):
    """Totalization of the double complex resolving ``C`` by free terms.

    Row ``i`` is ``B^i -(1-p)-> B^i -(p)-> B^i -(1-p)-> ...`` starting in
    column 0, and column 0 carries the differentials ``e^i``. The result is
    cut off at total degree ``lo + N - 1``; its homology agrees with that of
    ``C`` in degrees ``[lo, lo + N - 2]``.
    """
    ring = C.ring
    if C.is_zero():
        return Complex.zero(ring)
    length = len(C.terms)
    if N < length + 2:
        raise ValueError(f"window N={N} too small; need at least {length + 2}")
    top = C.lo + N - 1
    layout = {}  # total degree -> list of (i, j, rank)
    for n in range(C.lo, top + 1):
        layout[n] = [(i, n - i, C.term(i).rank) for i in range(C.lo, C.hi + 1) if n - i >= 0]

    def offsets(n):
        out, off = {}, 0
        for i, j, r in layout.get(n, []):
            out[(i, j)] = (off, r)
            off += r
        return out, off

    ranks, diffs = {}, {}
    for n in range(C.lo, top + 1):
        src, sdim = offsets(n)
        ranks[n] = sdim
        if n == top:
            continue
        dst, ddim = offsets(n + 1)
        data = [[0] * sdim for _ in range(ddim)]
        for (i, j), (so, r) in src.items():
            p = C.term(i).p
            h = (ExactMatrix.identity(ring, r) - p) if j % 2 == 0 else p
            if (i, j + 1) in dst:
                _place(data, dst[(i, j + 1)][0], so, h)
            if j == 0 and (i + 1, 0) in dst:
                _place(data, dst[(i + 1, 0)][0], so, C.diff(i))
        diffs[n] = ExactMatrix(ring, ddim, sdim, data)
    return Complex(ring, ranks, diffs)


def _place(data, r0, c0, m):
    for a in range(m.rows):
        row = m.row(a)
        for b in range(m.cols):
            if row[b]:
                data[r0 + a][c0 + b] += row[b]


def idem_weight_complex_window(e, N):
    """``B -(1-p)-> B -(p)-> B -> ...`` in degrees ``0..N``."""
    if N < 1:
        raise ValueError("window must have N >= 1")
    ring = e.ring
    one = ExactMatrix.identity(ring, e.rank)
    diffs = {i: (one - e.p) if i % 2 == 0 else e.p for i in range(N)}
    return Complex(ring, {i: e.rank for i in range(N + 1)}, diffs)
