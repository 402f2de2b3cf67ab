"""Bounded cochain complexes of free modules and the maps between them.

Indexing is cohomological: ``d^i : M^i -> M^{i+1}``. Shifts follow
``(M[n])^i = M^{i+n}`` with differentials multiplied by ``(-1)^n``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .linalg import ModulePresentation, kernel_basis, module_invariants, subquotient
from .matrix import ExactMatrix, ShapeError, block
from .rings import RingError


class ComplexError(ValueError):
    """Raised when d∘d != 0, a map is not a chain map, or shapes disagree."""


def _zero(ring, r, c):
    return ExactMatrix(ring, r, c)


class Complex:
    """A bounded complex; terms outside ``[lo, hi]`` are zero.

    The support window is trimmed on construction so that the end terms are
    nonzero; the zero complex has ``lo > hi``.
    """

    __slots__ = ("ring", "lo", "hi", "_ranks", "_diffs", "_hash")

    def __init__(self, ring, ranks, diffs=None, check=True):
        ranks = {int(k): int(v) for k, v in dict(ranks).items() if int(v) > 0}
        diffs = {int(k): v for k, v in dict(diffs or {}).items()}
        self.ring = ring
        if ranks:
            self.lo, self.hi = min(ranks), max(ranks)
        else:
            self.lo, self.hi = 0, -1
        self._ranks = tuple(ranks.get(i, 0) for i in range(self.lo, self.hi + 1))
        ds = []
        for i in range(self.lo, self.hi):
            r0, r1 = self.rank(i), self.rank(i + 1)
            m = diffs.get(i)
            if m is None:
                m = _zero(ring, r1, r0)
            if m.ring != ring:
                raise RingError(f"differential d^{i} over {m.ring}, complex over {ring}")
            if m.shape != (r1, r0):
                raise ShapeError(f"d^{i} has shape {m.shape}, expected {(r1, r0)}")
            ds.append(m)
        for i, m in diffs.items():
            if not (self.lo <= i < self.hi) and not m.is_zero() and m.rows and m.cols:
                raise ComplexError(f"nonzero differential d^{i} outside the support")
        self._diffs = tuple(ds)
        self._hash = None
        if check:
            self.validate()

    # -- construction helpers ---------------------------------------------
    @classmethod
    def zero(cls, ring):
        return cls(ring, {})

    @classmethod
    def concentrated(cls, ring, rank, degree=0):
        return cls(ring, {degree: rank})

    @classmethod
    def from_list(cls, ring, lo, matrices, ranks=None):
        """Complex starting in degree ``lo`` with the given differentials."""
        if ranks is None:
            if not matrices:
                raise ValueError("need ranks when no differentials are given")
            ranks = [matrices[0].cols] + [m.rows for m in matrices]
        rk = {lo + k: r for k, r in enumerate(ranks)}
        return cls(ring, rk, {lo + k: m for k, m in enumerate(matrices)})

    # -- access -------------------------------------------------------------
    def rank(self, i):
        if self.lo <= i <= self.hi:
            return self._ranks[i - self.lo]
        return 0

    def d(self, i):
        if self.lo <= i < self.hi:
            return self._diffs[i - self.lo]
        return _zero(self.ring, self.rank(i + 1), self.rank(i))

    @property
    def degrees(self):
        return range(self.lo, self.hi + 1)

    @property
    def ranks(self):
        return {i: self.rank(i) for i in self.degrees}

    def is_zero_object(self):
        """True if every term is zero (not merely contractible)."""
        return self.lo > self.hi

    def total_rank(self):
        return sum(self._ranks)

    def validate(self):
        for i in range(self.lo, self.hi - 1):
            if not (self.d(i + 1) @ self.d(i)).is_zero():
                raise ComplexError(f"d^{i + 1} d^{i} != 0")

    # -- operations -------------------------------------------------------
    def shift(self, n):
        """``M[n]``: ``(M[n])^i = M^{i+n}``, differentials times ``(-1)^n``."""
        sign = -1 if n % 2 else 1
        ranks = {i - n: r for i, r in self.ranks.items()}
        diffs = {i - n: (self.d(i) if sign == 1 else -self.d(i)) for i in range(self.lo, self.hi)}
        return Complex(self.ring, ranks, diffs, check=False)

    def __getitem__(self, n):
        return self.shift(n)

    def direct_sum(self, other):
        if other.ring != self.ring:
            raise RingError("ring mismatch in direct sum")
        lo = min(self.lo, other.lo)
        hi = max(self.hi, other.hi)
        ranks = {i: self.rank(i) + other.rank(i) for i in range(lo, hi + 1)}
        diffs = {}
        for i in range(lo, hi):
            diffs[i] = block(
                self.ring,
                [[self.d(i), None], [None, other.d(i)]],
                [self.rank(i + 1), other.rank(i + 1)],
                [self.rank(i), other.rank(i)],
            )
        return Complex(self.ring, ranks, diffs, check=False)

    def __add__(self, other):
        return self.direct_sum(other)

    def restrict(self, lo, hi):
        """Stupid truncation to the degrees ``[lo, hi]``."""
        ranks = {i: self.rank(i) for i in range(lo, hi + 1)}
        diffs = {i: self.d(i) for i in range(lo, hi)}
        return Complex(self.ring, ranks, diffs, check=False)

    def change_ring(self, ring, f=None):
        ranks = self.ranks
        diffs = {i: self.d(i).change_ring(ring, f) for i in range(self.lo, self.hi)}
        return Complex(ring, ranks, diffs)

    def twist(self, autos):
        """Conjugate by degreewise automorphisms ``{i: g^i}``: ``d' = g^{i+1} d g^{i,-1}``."""
        from .linalg import inverse
        diffs = {}
        for i in range(self.lo, self.hi):
            g1 = autos.get(i + 1) or ExactMatrix.identity(self.ring, self.rank(i + 1))
            g0 = autos.get(i) or ExactMatrix.identity(self.ring, self.rank(i))
            diffs[i] = g1 @ self.d(i) @ inverse(g0)
        return Complex(self.ring, self.ranks, diffs)

    # -- protocol -----------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Complex):
            return NotImplemented
        return (
            self.ring == other.ring
            and self.lo == other.lo
            and self._ranks == other._ranks
            and self._diffs == other._diffs
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, self.lo, self._ranks, self._diffs))
        return self._hash

    def __repr__(self):
        if self.is_zero_object():
            return f"Complex({self.ring}, 0)"
        terms = " -> ".join(f"R^{self.rank(i)}@{i}" for i in self.degrees)
        return f"Complex({self.ring}, {terms})"


# ---------------------------------------------------------------------------
# maps
# ---------------------------------------------------------------------------

class ChainMap:
    """Degreewise matrices ``f^i : M^i -> N^i``; missing degrees are zero."""

    __slots__ = ("source", "target", "_comps")

    def __init__(self, source, target, components=None, check=True):
        if source.ring != target.ring:
            raise RingError("chain map between complexes over different rings")
        self.source = source
        self.target = target
        comps = {}
        for i, m in dict(components or {}).items():
            i = int(i)
            shape = (target.rank(i), source.rank(i))
            if m.shape != shape:
                raise ShapeError(f"f^{i} has shape {m.shape}, expected {shape}")
            if shape[0] and shape[1] and not m.is_zero():
                comps[i] = m
        self._comps = comps
        if check and not self.is_chain_map():
            raise ComplexError("components do not commute with the differentials")

    @property
    def ring(self):
        return self.source.ring

    def __getitem__(self, i):
        m = self._comps.get(i)
        if m is None:
            return _zero(self.ring, self.target.rank(i), self.source.rank(i))
        return m

    @property
    def window(self):
        lo = min(self.source.lo, self.target.lo)
        hi = max(self.source.hi, self.target.hi)
        return range(lo, hi + 1)

    def is_chain_map(self):
        M, N = self.source, self.target
        for i in range(min(M.lo, N.lo) - 1, max(M.hi, N.hi) + 1):
            if not (N.d(i) @ self[i] - self[i + 1] @ M.d(i)).is_zero():
                return False
        return True

    def components(self):
        return dict(self._comps)

    @classmethod
    def identity(cls, M):
        return cls(M, M, {i: ExactMatrix.identity(M.ring, M.rank(i)) for i in M.degrees}, check=False)

    @classmethod
    def zero(cls, M, N):
        return cls(M, N, {}, check=False)

    def __matmul__(self, other):
        """Composition ``self ∘ other``."""
        if other.target != self.source:
            raise ComplexError("maps are not composable")
        comps = {i: self[i] @ other[i] for i in other.source.degrees if self.target.rank(i)}
        return ChainMap(other.source, self.target, comps, check=False)

    def _same_ends(self, other):
        if self.source != other.source or self.target != other.target:
            raise ComplexError("maps have different endpoints")

    def __add__(self, other):
        self._same_ends(other)
        degs = set(self._comps) | set(other._comps)
        return ChainMap(self.source, self.target, {i: self[i] + other[i] for i in degs}, check=False)

    def __neg__(self):
        return ChainMap(self.source, self.target, {i: -m for i, m in self._comps.items()}, check=False)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return ChainMap(self.source, self.target, {i: m.scale(c) for i, m in self._comps.items()}, check=False)

    def shift(self, n):
        """``f[n]`` between the shifted complexes (components unchanged)."""
        return ChainMap(
            self.source.shift(n), self.target.shift(n), {i - n: m for i, m in self._comps.items()}, check=False
        )

    def change_ring(self, ring, f=None, source=None, target=None):
        source = source or self.source.change_ring(ring, f)
        target = target or self.target.change_ring(ring, f)
        return ChainMap(source, target, {i: m.change_ring(ring, f) for i, m in self._comps.items()})

    def is_zero(self):
        return not self._comps

    def __eq__(self, other):
        if not isinstance(other, ChainMap):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self._comps == other._comps

    def __hash__(self):
        return hash((self.source, self.target, tuple(sorted(self._comps.items()))))

    def __repr__(self):
        return f"ChainMap({self.source!r} -> {self.target!r}, degrees {sorted(self._comps)})"


class Homotopy:
    """Maps ``h^i : M^i -> N^{i-1}``; ``boundary()`` is ``d h + h d``."""

    __slots__ = ("source", "target", "_comps")

    def __init__(self, source, target, components=None):
        self.source = source
        self.target = target
        comps = {}
        for i, m in dict(components or {}).items():
            i = int(i)
            shape = (target.rank(i - 1), source.rank(i))
            if m.shape != shape:
                raise ShapeError(f"h^{i} has shape {m.shape}, expected {shape}")
            if shape[0] and shape[1] and not m.is_zero():
                comps[i] = m
        self._comps = comps

    @property
    def ring(self):
        return self.source.ring

    def __getitem__(self, i):
        m = self._comps.get(i)
        if m is None:
            return _zero(self.ring, self.target.rank(i - 1), self.source.rank(i))
        return m

    def components(self):
        return dict(self._comps)

    def boundary(self):
        """The null-homotopic chain map ``d_N h + h d_M``."""
        M, N = self.source, self.target
        comps = {}
        for i in range(min(M.lo, N.lo), max(M.hi, N.hi) + 1):
            if M.rank(i) and N.rank(i):
                comps[i] = N.d(i - 1) @ self[i] + self[i + 1] @ M.d(i)
        return ChainMap(M, N, comps, check=False)

    def verifies(self, f, g=None):
        """True if ``f - g == d h + h d`` (``g`` defaults to zero)."""
        diff = f if g is None else f - g
        return diff == self.boundary()

    def __repr__(self):
        return f"Homotopy(degrees {sorted(self._comps)})"


# ---------------------------------------------------------------------------
# cones, truncations, homology
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConeData:
    """``cone(f)`` with its inclusion ``N -> cone`` and projection ``cone -> M[1]``.

    The distinguished triangle is ``M -f-> N -incl-> cone -(-proj)-> M[1]``.
    """

    f: ChainMap
    cone: Complex
    inclusion: ChainMap
    projection: ChainMap

    @property
    def connecting(self):
        return -self.projection


def cone(f):
    """``cone(f)^i = M^{i+1} ⊕ N^i`` with differential ``[[-d_M, 0], [f, d_N]]``."""
    M, N = f.source, f.target
    ring = f.ring
    lo = min(M.lo - 1, N.lo)
    hi = max(M.hi - 1, N.hi)
    ranks = {i: M.rank(i + 1) + N.rank(i) for i in range(lo, hi + 1)}
    diffs = {}
    for i in range(lo, hi):
        diffs[i] = block(
            ring,
            [[-M.d(i + 1), None], [f[i + 1], N.d(i)]],
            [M.rank(i + 2), N.rank(i + 1)],
            [M.rank(i + 1), N.rank(i)],
        )
    C = Complex(ring, ranks, diffs, check=False)
    M1 = M.shift(1)
    inc, proj = {}, {}
    for i in range(lo, hi + 1):
        a, b = M.rank(i + 1), N.rank(i)
        inc[i] = block(ring, [[None], [ExactMatrix.identity(ring, b)]], [a, b], [b])
        proj[i] = block(ring, [[ExactMatrix.identity(ring, a), None]], [a], [a, b])
    return ConeData(
        f,
        C,
        ChainMap(N, C, inc, check=False),
        ChainMap(C, M1, proj, check=False),
    )


@dataclass(frozen=True)
class Truncation:
    """``sub -> M -> quot -> sub[1]`` for a cut at weight ``m``.

    ``sub`` holds the degrees ``>= -m`` (weights ``<= m``), ``quot`` the
    degrees ``<= -m-1``.
    """

    m: int
    sub: Complex
    quot: Complex
    inclusion: ChainMap
    projection: ChainMap
    connecting: ChainMap


def stupid_truncation(M, m):
    cut = -m
    sub = M.restrict(cut, max(M.hi, cut))
    quot = M.restrict(min(M.lo, cut - 1), cut - 1)
    ring = M.ring
    inc = ChainMap(sub, M, {i: ExactMatrix.identity(ring, M.rank(i)) for i in sub.degrees}, check=False)
    proj = ChainMap(M, quot, {i: ExactMatrix.identity(ring, M.rank(i)) for i in quot.degrees}, check=False)
    sub1 = sub.shift(1)
    conn = {cut - 1: M.d(cut - 1)} if M.rank(cut - 1) and M.rank(cut) else {}
    connecting = ChainMap(quot, sub1, conn, check=False)
    return Truncation(m, sub, quot, inc, proj, connecting)


def homology(M, i):
    """Presentation of ``H^i(M) = ker d^i / im d^{i-1}``."""
    K = kernel_basis(M.d(i))
    if M.rank(i) == 0 or K.cols == 0:
        return ModulePresentation(M.ring, 0, ExactMatrix(M.ring, 0, 0))
    return subquotient(K, M.d(i - 1))


def homology_invariants(M, lo=None, hi=None):
    lo = M.lo if lo is None else lo
    hi = M.hi if hi is None else hi
    return {i: module_invariants(homology(M, i)) for i in range(lo, hi + 1)}


# ---------------------------------------------------------------------------
# periodic complexes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PeriodicComplex:
    """Unbounded complex with ``M^i = R^{ranks[i mod p]}`` and ``d^i = diffs[i mod p]``."""

    ring: object
    period: int
    ranks: tuple
    diffs: tuple = field(default=())

    def __post_init__(self):
        p = self.period
        if p < 1 or len(self.ranks) != p or len(self.diffs) != p:
            raise ComplexError("periodic complex needs one rank and one differential per residue")
        for r in range(p):
            shape = (self.ranks[(r + 1) % p], self.ranks[r])
            if self.diffs[r].shape != shape:
                raise ShapeError(f"d^{r} has shape {self.diffs[r].shape}, expected {shape}")
        for r in range(p + 1):
            if not (self.d(r + 1) @ self.d(r)).is_zero():
                raise ComplexError(f"d^{r + 1} d^{r} != 0")

    def rank(self, i):
        return self.ranks[i % self.period]

    def d(self, i):
        return self.diffs[i % self.period]

    def window(self, lo, hi):
        """Stupid truncation to ``[lo, hi]`` as a bounded :class:`Complex`."""
        return Complex(
            self.ring,
            {i: self.rank(i) for i in range(lo, hi + 1)},
            {i: self.d(i) for i in range(lo, hi)},
            check=False,
        )

    def to_json(self):
        return {
            "ring": str(self.ring),
            "period": self.period,
            "ranks": list(self.ranks),
            "diff": [m.to_json() for m in self.diffs],
        }


def periodic_homology_at(P, i):
    K = kernel_basis(P.d(i))
    if P.rank(i) == 0 or K.cols == 0:
        return ModulePresentation(P.ring, 0, ExactMatrix(P.ring, 0, 0))
    return subquotient(K, P.d(i - 1))
