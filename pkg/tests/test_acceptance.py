"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` or directly with
``python3 tests/test_acceptance.py``. Each check returns ``(ok, detail)``.
"""

import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from weightcx import ZZ, QQ, IntegersMod, PrimeField, ChainMap, Complex, ExactMatrix  # noqa: E402
from weightcx import generators as gen  # noqa: E402
from weightcx.additive import (  # noqa: E402
    IdemComplex,
    IdemObj,
    NonSplitIdempotent,
    idem_weight_complex_window,
    karoubi_homology,
    split_form,
    totalize_window,
)
from weightcx.complexes import homology  # noqa: E402
from weightcx.derived import (  # noqa: E402
    ModuleComplex,
    free_replacement,
    random_module_complex,
    realize_weight_complex,
    uct_cross_check,
    uct_oracle,
)
from weightcx.homotopy import degree_system  # noqa: E402
from weightcx.linalg import Invariants, ModulePresentation, module_invariants  # noqa: E402
from weightcx.serialize import chain_map_from_json, complex_from_json, periodic_from_json  # noqa: E402
from weightcx.spectral import (  # noqa: E402
    HeartFunctor,
    cohomological_oracle,
    detect_weight_ge,
    e2_independence,
    pure_homology_periodic,
    weight_ss_cohomological,
)
from weightcx.transport import (  # noqa: E402
    HypothesisFailure,
    RingMapFunctor,
    heart_conservative_check,
    heart_full_check,
    conservativity_harness,
)
from weightcx.weights import (  # noqa: E402
    GE,
    LE,
    check_axioms,
    degree_predicates,
    hereditary_membership,
    hereditary_weight_bounds,
    random_tower,
    stupid_predicates,
    weight_bounds,
    weight_complex,
    weight_membership,
)
from weightcx.homotopy import k_hom  # noqa: E402

from conftest import brute_solutions, load_fixture  # noqa: E402
from laws import LAWS  # noqa: E402
from oracles import hand_uct, primary_parts  # noqa: E402

Z4, F5 = IntegersMod(4), PrimeField(5)


def convention_anchor():
    M = complex_from_json(load_fixture("z_degree5"))
    b = weight_bounds(M)
    return b == (-5, -5), f"weight_bounds = {b}"


def periodic_counterexample():
    P = periodic_from_json(load_fixture("periodic_z4"))
    A = HeartFunctor.hom_from(P.ring, 1)
    window = range(-20, 21)
    zero = [i for i in window if pure_homology_periodic(A, P, i).is_zero()]
    v = detect_weight_ge(P, 0, (-20, 20))
    # the per-degree system id = d x + y d, solved by enumeration over Z/4
    unsolvable = []
    for j in window:
        W = P.window(j - 1, j + 1)
        Amat, b = degree_system(ChainMap.identity(W), W, W, j)
        if not brute_solutions(P.ring, Amat, b):
            unsolvable.append(j)
    ok = len(zero) == 41 and len(unsolvable) == 41 and v.refuted_degrees == list(window)
    return ok, f"homology zero at {len(zero)}/41, system unsolvable at {len(unsolvable)}/41"


def dual_oracle():
    rng = random.Random(1000)
    bad, queries = 0, 0
    for _ in range(300):
        M = gen.complex_(ZZ, rng, max_rank=4, max_len=5)
        if weight_bounds(M) != hereditary_weight_bounds(M):
            bad += 1
        pad = M.hi - M.lo + 2
        for n in range(-M.hi - pad, -M.lo + pad + 1):
            for side in (GE, LE):
                queries += 1
                if bool(weight_membership(M, side, n)) != hereditary_membership(M, side, n):
                    bad += 1
    return bad == 0, f"300 complexes, {queries} membership queries, {bad} disagreements"


def weak_homotopy_laws():
    lines, ok = [], True
    for ring in (ZZ, Z4, F5):
        for name, law in LAWS.items():
            fails, sharp = 0, 0
            for seed in range(200):
                failure, s = law(ring, seed)
                fails += failure is not None
                sharp += bool(s)
            ok = ok and fails == 0
            lines.append(f"{ring}:{name} {fails}f/{sharp}s")
    return ok, "200 each; " + ", ".join(lines)


def axiom_suite():
    rng = random.Random(500)
    parts, ok = [], True
    for ring in (ZZ, QQ, Z4, IntegersMod(6), F5):
        corpus = [gen.complex_(ring, rng, max_rank=2, max_len=3) for _ in range(50)]
        rep = check_axioms(corpus, stupid_predicates())
        ok = ok and rep.passed
        parts.append(f"{ring} {'ok' if rep.passed else 'violated'}")
    corpus = [Complex.concentrated(ZZ, 1, 0), gen.complex_(ZZ, rng), Complex.concentrated(ZZ, 1, 1)]
    wrong = check_axioms(corpus, degree_predicates())
    w = wrong.violations.get("orthogonality")
    witness = False
    if w is not None:
        g = chain_map_from_json(w["nonzero_map"])
        witness = g.is_chain_map() and not k_hom(g.source, g.target).is_zero_class(g)
    ok = ok and not wrong.passed and witness
    return ok, ", ".join(parts) + f"; wrong predicate witness {'found' if witness else 'missing'}"


def harness_check():
    rep = conservativity_harness(RingMapFunctor(Z4, IntegersMod(2)), size=200, seed=0)
    flags = []
    for name, check in (("Z->F_3", heart_conservative_check), ("Z->Q", heart_full_check)):
        F = RingMapFunctor.parse(name)
        flagged = not check(F)
        try:
            conservativity_harness(F, size=5)
            refused = False
        except HypothesisFailure:
            refused = True
        flags.append(flagged and refused)
    ok = rep.ok and len(rep.members) == 200 and all(flags)
    return ok, f"{len(rep.failures)} failures on 200; controls flagged {sum(flags)}/2"


def spectral_convergence():
    bad, pairs, indep = 0, 0, 0
    for ring in (ZZ, F5):
        rng = random.Random(700)
        for k in range(100):
            M = gen.complex_(ring, rng, max_rank=3, max_len=3)
            N = gen.complex_(ring, rng, max_rank=3, max_len=3)
            S = weight_ss_cohomological(M, N)
            good, _ = S.abutment_check(cohomological_oracle(M, N))
            good = good and S.check_d_squared() and S.check_page_homology()
            pairs += 1
            bad += not good
            if k % 4 == 0:
                r = e2_independence(M, N, random_tower(M, rng))
                indep += 1
                bad += not (r.squares_commute and r.is_iso)
    return bad == 0, f"{pairs} pairs, {indep} randomized towers, {bad} mismatches"


def universal_coefficients():
    rng = random.Random(800)
    bad = 0
    for _ in range(50):
        M = random_module_complex(rng)
        N = rng.choice([ModulePresentation.free(ZZ, 1), ModulePresentation.cyclic(ZZ, 2),
                        ModulePresentation.cyclic(ZZ, 4), ModulePresentation.cyclic(ZZ, 6)])
        rep = uct_cross_check(M, N)
        hand = all(
            primary_parts(uct_oracle(M, N, n)) == hand_uct(
                module_invariants(M.homology(-n)), module_invariants(M.homology(1 - n)), module_invariants(N))
            for n in rep.rows
        )
        bad += not (rep.ok and hand)
    M = ModuleComplex.from_json(load_fixture("z2_module"))
    rep = uct_cross_check(M, ModulePresentation.free(ZZ, 1))
    Q = free_replacement(M).Q
    exact = rep.ok and k_hom(Q, Complex.concentrated(ZZ, 1, 0).shift(1)).invariants == Invariants(ZZ, 0, (2,))
    exact = exact and rep.rows[1]["k_hom"] == "Z/2"
    return bad == 0 and exact, f"{bad} mismatches on 50; Z/2 vs Z in degree 1: {rep.rows[1]['k_hom']}"


def karoubi_totalization():
    parts, ok = [], True
    for ring in (ZZ, QQ, Z4, IntegersMod(6), F5):
        rng = random.Random(900)
        nonsplit, bad = 0, 0
        for _ in range(50):
            make = gen.scalar_idempotent if rng.random() < 0.5 else gen.idempotent
            e = IdemObj.of(ring, make(ring, rng, rng.randint(1, 3)))
            N = rng.randint(2, 5)
            W = idem_weight_complex_window(e, N)
            one = ExactMatrix.identity(ring, e.rank)
            for i in range(N):
                want = one - e.p if i % 2 == 0 else e.p
                bad += W.d(i) != want or W.rank(i) != e.rank
                if i + 1 < N:
                    bad += not (W.d(i + 1) @ W.d(i)).is_zero()
            f = IdemObj.of(ring, make(ring, rng, rng.randint(1, 3)))
            d = f.p @ gen.matrix(ring, rng, f.rank, e.rank) @ e.p
            C = IdemComplex(ring, rng.randint(-1, 1), (e, f), (d,))
            T = totalize_window(C, len(C.terms) + 3)
            try:
                S = split_form(C)
            except NonSplitIdempotent:
                S = None
                nonsplit += 1
            for i in range(C.lo, C.lo + len(C.terms) + 2):
                got = module_invariants(homology(T, i))
                ref = module_invariants(homology(S, i)) if S is not None else module_invariants(karoubi_homology(C, i))
                bad += got != ref
        ok = ok and bad == 0
        parts.append(f"{ring} {bad}" + (f" ({nonsplit} non-split)" if nonsplit else ""))
    return ok, "mismatches: " + ", ".join(parts)


def realization():
    rng = random.Random(1100)
    bad = 0
    for _ in range(50):
        M = random_module_complex(rng)
        target, _ = gen.equivalent(free_replacement(M).Q, rng)
        R = realize_weight_complex(M, target)
        good = R.verify() and weight_complex(R.tower).complex == target
        good = good and all(s.equivalence.verify() for s in R.rebuild)
        bad += not good
    return bad == 0, f"{bad} failures on 50"


CRITERIA = [
    (1, "convention anchor", convention_anchor),
    (2, "periodic counterexample", periodic_counterexample),
    (3, "dual-oracle membership over Z", dual_oracle),
    (4, "weak homotopy laws", weak_homotopy_laws),
    (5, "axiom suite", axiom_suite),
    (6, "conservativity harness", harness_check),
    (7, "spectral sequence convergence", spectral_convergence),
    (8, "universal coefficients", universal_coefficients),
    (9, "Karoubi totalization", karoubi_totalization),
    (10, "realization", realization),
]


def _run(fn):
    t = time.perf_counter()
    ok, detail = fn()
    return ok, detail, time.perf_counter() - t


def _line(num, name, ok, detail, secs):
    return f"[{'PASS' if ok else 'FAIL'}] {num:>2} {name}: {detail} ({secs:.2f}s)"


@pytest.mark.parametrize("num, name, fn", CRITERIA, ids=[c[1].replace(" ", "_") for c in CRITERIA])
def test_criterion(num, name, fn, capsys):
    ok, detail, secs = _run(fn)
    with capsys.disabled():
        print("\n" + _line(num, name, ok, detail, secs))
    assert ok, detail


if __name__ == "__main__":
    results = []
    for num, name, fn in CRITERIA:
        ok, detail, secs = _run(fn)
        print(_line(num, name, ok, detail, secs), flush=True)
        results.append(ok)
    sys.exit(0 if all(results) else 1)
