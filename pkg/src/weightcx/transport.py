"""Weight-exact functors induced by ring homomorphisms.

A ring map ``R -> S`` sends free modules to free modules of the same rank
and matrices entrywise, so it induces an additive functor on complexes that
preserves the stupid weight structure. The checks here decide whether its
restriction to hearts is full and conservative, and run the conservativity
and weight-detection harness on random complexes.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .complexes import ChainMap, Complex, ComplexError, Homotopy
from .homotopy import is_contractible, k_hom
from .linalg import map_is_zero
from .matrix import ExactMatrix
from .rings import INTEGERS, INTEGERS_MOD, PRIME_FIELD, RATIONALS, RingError, RingSpec, factorize
from .weights import GE, LE, weight_bounds, weight_complex, weight_membership


class HypothesisFailure(RuntimeError):
    """A harness precondition (full and conservative heart functor) failed."""


@dataclass(frozen=True)
class RingMapFunctor:
    """Base change along the canonical map ``source -> target``.

    Supported: identity, ``Z -> Z/n``, ``Z -> F_p``, ``Z/n -> Z/m`` and
    ``Z/n -> F_p`` for ``m | n``, and ``Z -> Q``.
    """

    source: RingSpec
    target: RingSpec

    def __post_init__(self):
        s, t = self.source, self.target
        if s == t:
            return
        if s.kind == INTEGERS and t.kind in (INTEGERS_MOD, PRIME_FIELD, RATIONALS):
            return
        if s.is_modular and t.is_modular and s.modulus % t.modulus == 0:
            return
        raise RingError(f"no canonical ring map {s} -> {t}")

    @classmethod
    def parse(cls, text):
        a, b = text.replace(" ", "").split("->")
        return cls(RingSpec.parse(a), RingSpec.parse(b))

    @property
    def name(self):
        return f"{self.source}->{self.target}"

    @property
    def kind(self):
        if self.source == self.target:
            return "identity"
        if self.target.kind == RATIONALS:
            return "inclusion"
        return "reduction"

    def scalar(self, x):
        return self.target.coerce(x)

    def lift_scalar(self, y):
        """A preimage of ``y`` or ``None``."""
        if self.target.kind == RATIONALS:
            if self.source.kind == RATIONALS:
                return y
            y = Fraction(y)
            return y.numerator if y.denominator == 1 else None
        return self.source.coerce(int(y))

    def matrix(self, A):
        if A.ring != self.source:
            raise RingError(f"matrix over {A.ring}, functor starts at {self.source}")
        return A.change_ring(self.target)

    def lift_matrix(self, B):
        rows = []
        for r in B.tolist():
            row = []
            for y in r:
                x = self.lift_scalar(y)
                if x is None:
                    return None
                row.append(x)
            rows.append(row)
        return ExactMatrix(self.source, B.rows, B.cols, rows)

    def complex(self, M):
        if M.ring != self.source:
            raise ComplexError(f"complex over {M.ring}, functor starts at {self.source}")
        ranks = {i: M.rank(i) for i in M.degrees}
        diffs = {i: self.matrix(M.d(i)) for i in range(M.lo, M.hi)}
        return Complex(self.target, ranks, diffs)

    def chain_map(self, f, source=None, target=None):
        S = source or self.complex(f.source)
        T = target or self.complex(f.target)
        return ChainMap(S, T, {i: self.matrix(m) for i, m in f.components().items()}, check=False)

    def homotopy(self, h, source=None, target=None):
        S = source or self.complex(h.source)
        T = target or self.complex(h.target)
        return Homotopy(S, T, {i: self.matrix(m) for i, m in h.components().items()})

    def to_json(self):
        return {"source": str(self.source), "target": str(self.target), "kind": self.kind}


def transport_complex(F, M):
    return F.complex(M)


# ---------------------------------------------------------------------------
# heart checks
# ---------------------------------------------------------------------------

@dataclass
class HeartVerdict:
    property: str
    functor: str
    holds: bool
    witness: object = None
    note: str = ""

    def __bool__(self):
        return self.holds

    def to_json(self):
        w = self.witness
        if isinstance(w, ExactMatrix):
            w = [[w.ring.format(x) for x in r] for r in w.tolist()]
        return {"property": self.property, "functor": self.functor, "holds": self.holds,
                "witness": w, "note": self.note}


def _target_sample(F):
    t = F.target
    if t.is_finite:
        return list(t.elements())
    ints = list(range(-3, 4))
    if t.kind == RATIONALS:
        return [Fraction(1, 2), Fraction(-1, 3)] + [Fraction(k) for k in ints]
    return ints


def heart_full_check(F, max_rank=3, rng=None):
    """Fullness on free modules: every target matrix has a preimage.

    Hom between free modules is a matrix module, so fullness is surjectivity
    of the scalar map; a non-liftable scalar is the witness. Random matrices
    up to ``max_rank`` are lifted as a constructive check.
    """
    import random
    rng = rng or random.Random(0)
    for y in _target_sample(F):
        if F.lift_scalar(y) is None or F.scalar(F.lift_scalar(y)) != F.target.coerce(y):
            W = ExactMatrix(F.target, 1, 1, [[y]])
            return HeartVerdict("full", F.name, False, W, f"{F.target.format(y)} has no preimage")
    sample = _target_sample(F)
    for n in range(1, max_rank + 1):
        B = ExactMatrix(F.target, n, n, [[rng.choice(sample) for _ in range(n)] for _ in range(n)])
        A = F.lift_matrix(B)
        if A is None or F.matrix(A) != B:
            return HeartVerdict("full", F.name, False, B, "matrix lift failed")
    return HeartVerdict("full", F.name, True, None, "entrywise lift")


def _unit_counterexample(F, search=64):
    """A non-unit ``x`` with ``F(x)`` a unit, or ``None``."""
    s = F.source
    cands = s.elements() if s.is_finite else range(2, search)
    for x in cands:
        x = s.coerce(x)
        if x == s.zero() and not s.is_finite:
            continue
        if not s.is_unit(x) and F.target.is_unit(F.scalar(x)):
            return x
    return None


def heart_conservative_check(F, max_rank=3, rng=None):
    """Conservativity on free modules via the determinant-unit criterion.

    ``F(A)`` invertible means ``det F(A) = F(det A)`` is a unit, and every
    scalar is a determinant, so the criterion reduces to units of scalars.
    Random square matrices up to ``max_rank`` re-check the implication.
    """
    import random
    rng = rng or random.Random(0)
    if F.kind == "identity":
        return HeartVerdict("conservative", F.name, True, None, "identity")
    x = _unit_counterexample(F)
    if x is not None:
        W = ExactMatrix(F.source, 1, 1, [[x]])
        return HeartVerdict("conservative", F.name, False, W,
                            f"{F.source.format(x)} becomes invertible but is not invertible")
    if not F.source.is_finite:
        return HeartVerdict("conservative", F.name, True, None, "no unit counterexample in search range")
    els = list(F.source.elements())
    for n in range(1, max_rank + 1):
        for _ in range(20):
            A = ExactMatrix(F.source, n, n, [[rng.choice(els) for _ in range(n)] for _ in range(n)])
            if F.target.is_unit(F.matrix(A).det()) and not F.source.is_unit(A.det()):
                return HeartVerdict("conservative", F.name, False, A, "determinant criterion violated")
    return HeartVerdict("conservative", F.name, True, None, "unit criterion holds for every residue")


def _nilpotence_bound(ring, n):
    if ring.kind == INTEGERS or ring.is_field:
        return n
    return n * max(k for _, k in factorize(ring.modulus))


@dataclass
class NilpotenceVerdict:
    functor: str
    holds: bool
    checked: int
    counterexample: object = None
    indices: list = field(default_factory=list)

    def __bool__(self):
        return self.holds

    def to_json(self):
        c = self.counterexample
        return {"functor": self.functor, "holds": self.holds, "checked": self.checked,
                "counterexample": None if c is None else c.to_json(), "indices": self.indices}


def kernel_generator(F):
    """A scalar generating ``ker(source -> target)``; 0 when injective."""
    if F.kind != "reduction":
        return 0
    return F.target.modulus


def nilpotence_check(F, samples=20, max_rank=3, rng=None, extra=()):
    """Every sampled endomorphism killed by ``F`` is nilpotent.

    Kernel endomorphisms are ``g B`` for the kernel generator ``g``. Over Z a
    nilpotent ``n x n`` matrix has ``A^n = 0``; over ``Z/p^e`` it has
    ``A^{n e} = 0``, which bounds the search.
    """
    import random
    rng = rng or random.Random(0)
    g = kernel_generator(F)
    ring = F.source
    cands = list(extra)
    for n in range(1, max_rank + 1):
        cands.append(ExactMatrix(ring, n, n))
        cands.append(ExactMatrix.scalar(ring, n, g))
    while len(cands) < samples:
        n = rng.randint(1, max_rank)
        B = ExactMatrix(ring, n, n, [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)])
        cands.append(B.scale(g))
    indices = []
    for A in cands:
        if not F.matrix(A).is_zero():
            raise ValueError("sample is not killed by the functor")
        bound = max(1, _nilpotence_bound(ring, A.rows))
        P = A
        k = 1
        while not P.is_zero() and k < bound:
            P = P @ A
            k += 1
        if not P.is_zero():
            return NilpotenceVerdict(F.name, False, len(indices) + 1, A, indices)
        indices.append(k)
    return NilpotenceVerdict(F.name, True, len(indices), None, indices)


# ---------------------------------------------------------------------------
# functoriality and hom maps
# ---------------------------------------------------------------------------

def weight_complex_functoriality(F, M):
    """Compare ``t(F(M))`` with ``F`` applied termwise to ``t(M)``."""
    lhs = weight_complex(F.complex(M)).complex
    rhs = F.complex(weight_complex(M).complex)
    return lhs == rhs


@dataclass
class InducedHomMap:
    """``K(M, N) -> K(F M, F N)`` on the presentations of both groups."""

    functor: str
    source: object  # KHomGroup
    target: object
    matrix: ExactMatrix

    def is_zero(self):
        if self.matrix.cols == 0:
            return True
        return map_is_zero(self.matrix, self.target.presentation)

    def to_json(self):
        return {"functor": self.functor, "source": str(self.source.invariants),
                "target": str(self.target.invariants), "matrix": self.matrix.to_json(),
                "zero": self.is_zero()}


def induced_hom_map(F, M, N):
    H = k_hom(M, N)
    FM, FN = F.complex(M), F.complex(N)
    H2 = k_hom(FM, FN)
    cols = []
    for f in H.generator_maps:
        c = H2.class_of(F.chain_map(f, FM, FN))
        cols.append(c.column(0))
    rows = H2.presentation.generators
    mat = ExactMatrix.from_columns(F.target, rows, cols) if cols else ExactMatrix(F.target, rows, 0)
    return InducedHomMap(F.name, H, H2, mat)


def degeneracy_probe(F, M, depth=None):
    """Check the degeneracy criterion on ``M`` in the confirming direction.

    Starting at the top weight ``i`` of ``M``, test whether ``F`` kills
    ``K(M, R[-i])``; whenever it does, ``M`` must lie in ``C_{w<=i-1}``.
    Returns the list of probed levels with the observed facts.
    """
    b = weight_bounds(M)
    if b is None:
        return {"zero": True, "levels": [], "consistent": True}
    top = b[1]
    low = b[0] - 1 if depth is None else top - depth
    levels = []
    ok = True
    i = top
    while i >= low:
        N = Complex.concentrated(M.ring, 1, -i)
        killed = induced_hom_map(F, M, N).is_zero()
        lower = bool(weight_membership(M, LE, i - 1))
        if killed and not lower:
            ok = False
        levels.append({"level": i, "hypothesis": killed, "member_below": lower})
        if not killed:
            break
        i -= 1
    return {"zero": False, "levels": levels, "consistent": ok}


# ---------------------------------------------------------------------------
# the conservativity harness
# ---------------------------------------------------------------------------

def _threads():
    try:
        return max(1, int(os.environ.get("WEIGHTCX_THREADS", "1")))
    except ValueError:
        return 1


def harness_corpus(ring, size, seed, max_rank=4, max_len=5):
    """Seeded random bounded complexes, a third of them contractible."""
    from .generators import complex_, contractible, equivalent, rng_for
    out = []
    for k in range(size):
        rng = rng_for(seed * 100003 + k)
        if k % 3 == 2:
            M = contractible(ring, rng, max_rank=2)
        else:
            M = complex_(ring, rng, max_rank=max_rank, max_len=max_len)
            if k % 3 == 1 and M.hi - M.lo < max_len - 1:
                M, _ = equivalent(M, rng)
                if M.hi - M.lo >= max_len or max(M.rank(i) for i in M.degrees) > max_rank:
                    M = complex_(ring, rng, max_rank=max_rank, max_len=max_len)
        out.append(M)
    return out


def _fmt(b):
    return None if b is None else list(b)


def _evaluate(args):
    F, idx, M = args
    FM = F.complex(M)
    b, fb = weight_bounds(M), weight_bounds(FM)
    hM = is_contractible(M)
    hF = is_contractible(FM)
    reflects = (hF is None) or (hM is not None)
    row = {
        "index": idx,
        "ranks": [M.rank(i) for i in M.degrees],
        "lo": M.lo,
        "bounds": _fmt(b),
        "image_bounds": _fmt(fb),
        "contractible": hM is not None,
        "image_contractible": hF is not None,
        "pass": b == fb and reflects,
    }
    if not row["pass"]:
        from .serialize import complex_to_json
        cert = {"complex": complex_to_json(M)}
        levels = sorted({x for pair in (b or (), fb or ()) for x in pair})
        cert["memberships"] = [
            {"side": side, "n": n, "source": bool(weight_membership(M, side, n)),
             "image": bool(weight_membership(FM, side, n))}
            for n in levels for side in (GE, LE)
        ]
        row["certificate"] = cert
    return row


@dataclass
class HarnessReport:
    functor: str
    seed: int
    prechecks: list
    members: list

    @property
    def failures(self):
        return [m for m in self.members if not m["pass"]]

    @property
    def ok(self):
        return all(self.prechecks) and not self.failures

    def to_json(self):
        return {
            "functor": self.functor,
            "seed": self.seed,
            "prechecks": [p.to_json() for p in self.prechecks],
            "size": len(self.members),
            "failures": len(self.failures),
            "members": self.members,
        }


def conservativity_harness(F=None, size=200, seed=0, max_rank=4, max_len=5, threads=None):
    """Weight bounds and contractibility are reflected by ``F`` on a corpus."""
    from .rings import IntegersMod
    F = F or RingMapFunctor(IntegersMod(4), IntegersMod(2))
    pre = [heart_full_check(F), heart_conservative_check(F)]
    if not all(pre):
        bad = [p.property for p in pre if not p]
        raise HypothesisFailure(f"{F.name}: heart functor is not {' and '.join(bad)}")
    corpus = harness_corpus(F.source, size, seed, max_rank, max_len)
    jobs = [(F, k, M) for k, M in enumerate(corpus)]
    threads = threads or _threads()
    if threads > 1:
        with ProcessPoolExecutor(threads) as ex:
            rows = list(ex.map(_evaluate, jobs, chunksize=8))
    else:
        rows = [_evaluate(j) for j in jobs]
    return HarnessReport(F.name, seed, pre, rows)
