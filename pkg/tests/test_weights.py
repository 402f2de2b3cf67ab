import random

import pytest

from weightcx import ZZ, QQ, IntegersMod, PrimeField, ChainMap, Complex, ExactMatrix
from weightcx import generators as gen
from weightcx.complexes import stupid_truncation
from weightcx.homotopy import homotopy_equivalence, is_contractible, k_hom, weak_homotopy_range
from weightcx.weights import (
    GE,
    LE,
    PostnikovTower,
    check_axioms,
    cone_triangle_weight_complexes,
    degree_predicates,
    dual_complex,
    format_bounds,
    hereditary_membership,
    hereditary_weight_bounds,
    lift_map_to_towers,
    octahedron_check,
    rebuild_from_tower,
    random_tower,
    right_weight_complex,
    shift_compatibility,
    stupid_predicates,
    weight_bounds,
    weight_bounds_by_search,
    weight_complex,
    weight_membership,
)

from conftest import two_term

Z4 = IntegersMod(4)


def test_degree_five_has_weight_minus_five(z_degree5):
    M = z_degree5
    assert weight_membership(M, GE, -5) and weight_membership(M, LE, -5)
    assert not weight_membership(M, GE, -4)
    assert weight_bounds(M) == (-5, -5)
    assert format_bounds(weight_bounds(M)) == "[-5, -5]"


def test_membership_witness_and_failing_degree():
    M = two_term(ZZ, 2)
    yes = weight_membership(M, GE, 0)
    assert yes and yes.witness.verify()
    no = weight_membership(M, GE, 1)
    assert not no and no.failing_degree == 0
    assert weight_bounds(M) == (0, 1)
    assert weight_membership(M, LE, 1) and not weight_membership(M, LE, 0)


def test_contractible_is_in_every_class():
    C = gen.contractible(ZZ, random.Random(1))
    for n in range(-4, 5):
        assert weight_membership(C, GE, n) and weight_membership(C, LE, n)
    assert weight_bounds(C) is None


@pytest.mark.parametrize("ring", [ZZ, Z4, QQ, PrimeField(5), IntegersMod(6)], ids=str)
def test_bounds_by_search_agree(ring):
    rng = random.Random(12)
    for _ in range(25):
        M = gen.complex_(ring, rng)
        assert weight_bounds(M) == weight_bounds_by_search(M)


@pytest.mark.parametrize("ring", [ZZ, Z4], ids=str)
def test_direct_sum_gives_interval_hull(ring):
    rng = random.Random(5)
    for _ in range(20):
        M, N = gen.complex_(ring, rng), gen.complex_(ring, rng)
        a, b = weight_bounds(M), weight_bounds(N)
        s = weight_bounds(M.direct_sum(N))
        if a is None or b is None:
            assert s == (a or b)
        else:
            assert s == (min(a[0], b[0]), max(a[1], b[1]))


@pytest.mark.parametrize("ring", [ZZ, QQ, PrimeField(3)], ids=str)
def test_linear_system_matches_hereditary_oracle(ring):
    rng = random.Random(21)
    for _ in range(40):
        M = gen.complex_(ring, rng, max_rank=4, max_len=5)
        assert weight_bounds(M) == hereditary_weight_bounds(M)
        for n in range(M.lo - M.hi - 2, M.hi - M.lo + 3):
            for side in (GE, LE):
                assert bool(weight_membership(M, side, -n)) == hereditary_membership(M, side, -n)


@pytest.mark.parametrize("ring", [ZZ, Z4, PrimeField(5)], ids=str)
def test_bounds_invariant_under_equivalence(ring):
    rng = random.Random(31)
    for _ in range(15):
        M = gen.complex_(ring, rng)
        N, eq = gen.equivalent(M, rng, junk=2)
        assert eq.verify()
        assert weight_bounds(M) == weight_bounds(N)


def test_degenerate_bounded_object_is_zero():
    rng = random.Random(2)
    for _ in range(20):
        M = gen.complex_(Z4, rng)
        width = M.hi - M.lo + 3
        if all(weight_membership(M, GE, n) for n in range(-M.hi - 1, -M.hi + width)):
            assert is_contractible(M) is not None
        else:
            assert is_contractible(M) is None or weight_bounds(M) is None


# -- towers and weight complexes -------------------------------------------------

def test_single_degree_tower():
    M = Complex.concentrated(ZZ, 2, 0)
    T = PostnikovTower(M)
    assert T.filtration(-1).is_zero_object() and T.filtration(0) == M and T.filtration(3) == M
    assert T.factor(0) == M
    assert T.certify() == []


def test_two_step_tower():
    M = two_term(ZZ, 2)
    T = PostnikovTower(M)
    assert list(T.levels) == [0, 1]
    assert T.heart_term(-1).rank(0) == 1 and T.heart_term(0).rank(0) == 1
    assert T.certify() == []


@pytest.mark.parametrize("ring", [ZZ, Z4, PrimeField(5)], ids=str)
def test_random_towers_certify(ring):
    rng = random.Random(41)
    for _ in range(8):
        M = gen.complex_(ring, rng)
        assert PostnikovTower(M).certify() == []
        assert random_tower(M, rng).certify() == []


@pytest.mark.parametrize("ring", [ZZ, Z4], ids=str)
def test_weight_complex_equals_complex(ring):
    rng = random.Random(43)
    for _ in range(15):
        M = gen.complex_(ring, rng)
        t = weight_complex(M).complex
        assert t == M
        B = Complex.concentrated(ring, 2, 0)
        assert weight_complex(B).complex == B


def test_weight_complex_of_truncation_vanishes_above():
    rng = random.Random(44)
    for _ in range(10):
        M = gen.complex_(ZZ, rng)
        n = rng.randint(-M.hi, -M.lo + 1) if not M.is_zero_object() else 0
        Q = stupid_truncation(M, n - 1).quot  # in w >= n
        t = weight_complex(Q).complex
        assert all(t.rank(i) == 0 for i in range(-n + 1, -n + 10))


@pytest.mark.parametrize("ring", [ZZ, Z4], ids=str)
def test_shift_compatibility(ring):
    rng = random.Random(45)
    for _ in range(10):
        M = gen.complex_(ring, rng)
        eq = shift_compatibility(M, rng.randint(-3, 3))
        assert eq is not None and eq.verify()


@pytest.mark.parametrize("ring", [ZZ, Z4], ids=str)
def test_octahedron(ring):
    rng = random.Random(46)
    for _ in range(10):
        M = gen.complex_(ring, rng)
        for m in range(-M.hi, -M.lo + 1):
            eq = octahedron_check(M, m)
            assert eq is not None and eq.verify()


def test_lift_identity_and_zero():
    rng = random.Random(47)
    M = gen.complex_(ZZ, rng, max_rank=3, max_len=3)
    mor = lift_map_to_towers(ChainMap.identity(M))
    assert mor.certify() == []
    assert mor.weight_complex_map() == ChainMap.identity(weight_complex(M).complex)
    z = lift_map_to_towers(ChainMap.zero(M, M))
    tz = z.weight_complex_map()
    assert weak_homotopy_range(tz, ChainMap.zero(tz.source, tz.target)) is not None


@pytest.mark.parametrize("ring", [ZZ, Z4], ids=str)
def test_lift_random_maps_with_random_towers(ring):
    rng = random.Random(48)
    for _ in range(6):
        M, N = gen.complex_(ring, rng), gen.complex_(ring, rng)
        g = gen.chain_map(M, N, rng)
        mor = lift_map_to_towers(g, random_tower(M, rng), random_tower(N, rng))
        assert mor.certify() == []
        assert mor.weight_complex_map().is_chain_map()


@pytest.mark.parametrize("ring", [ZZ, Z4], ids=str)
def test_cone_triangle(ring):
    rng = random.Random(49)
    for _ in range(6):
        M, N = gen.complex_(ring, rng, max_rank=3), gen.complex_(ring, rng, max_rank=3)
        for g in (gen.chain_map(M, N, rng), ChainMap.zero(M, N)):
            rep = cone_triangle_weight_complexes(g)
            assert rep.verify()
    M = gen.complex_(ring, rng)
    rep = cone_triangle_weight_complexes(ChainMap.identity(M))
    assert rep.verify() and is_contractible(rep.t_cone) is not None


@pytest.mark.parametrize("ring", [ZZ, Z4, PrimeField(5)], ids=str)
def test_rebuild_from_factors(ring):
    rng = random.Random(50)
    for _ in range(8):
        M = gen.complex_(ring, rng)
        steps = rebuild_from_tower(PostnikovTower(M))
        for st in steps:
            assert st.attaching_map.is_chain_map() and st.equivalence.verify()
        if steps:
            assert steps[-1].equivalence.target == M


def test_heart_retract_is_retract_of_degree_zero_term():
    rng = random.Random(51)
    for _ in range(10):
        N = Complex.concentrated(ZZ, rng.randint(1, 2), 0)
        X = gen.complex_(ZZ, rng, max_rank=2)
        S = N.direct_sum(X)
        autos = {i: gen.unimodular(ZZ, rng, S.rank(i)) for i in S.degrees}
        M = S.twist(autos)
        from weightcx.linalg import inverse
        k = N.rank(0)
        P = ExactMatrix.identity(ZZ, k).vstack(ExactMatrix(ZZ, X.rank(0), k))
        i = ChainMap(N, M, {0: autos[0] @ P})
        r = ChainMap(M, N, {0: P.T @ inverse(autos[0])})
        assert (r @ i) == ChainMap.identity(N)
        t0 = weight_complex(M).complex
        assert (r[0] @ i[0]).is_identity() and t0.rank(0) == M.rank(0)


def test_right_weight_complex_agrees():
    rng = random.Random(52)
    for _ in range(10):
        M = gen.complex_(ZZ, rng)
        negated = Complex(ZZ, M.ranks, {i: -M.d(i) for i in range(M.lo, M.hi)})
        assert dual_complex(dual_complex(M)) == negated
        R = right_weight_complex(M)
        sign = {i: ExactMatrix.scalar(ZZ, M.rank(i), (-1) ** i) for i in M.degrees if M.rank(i)}
        ident = {i: ExactMatrix.identity(ZZ, M.rank(i)) for i in M.degrees if M.rank(i)}
        f = ChainMap(R, M, ident if R == M else sign)
        assert homotopy_equivalence(f) is not None


# -- axioms --------------------------------------------------------------------

def test_axioms_on_heart_corpus():
    corpus = [Complex.concentrated(ZZ, r, 0) for r in (1, 2, 3)]
    rep = check_axioms(corpus)
    assert rep.passed and rep.violation is None


@pytest.mark.parametrize("ring", [ZZ, Z4, PrimeField(5)], ids=str)
def test_axioms_random_corpus(ring):
    rng = random.Random(53)
    corpus = [gen.complex_(ring, rng, max_rank=2, max_len=3) for _ in range(10)]
    rep = check_axioms(corpus, stupid_predicates())
    assert rep.passed, rep.violations


def test_wrong_predicate_yields_orthogonality_witness():
    from weightcx.serialize import chain_map_from_json
    corpus = [Complex.concentrated(ZZ, 1, 0), two_term(ZZ, 2), Complex.concentrated(ZZ, 1, 1)]
    rep = check_axioms(corpus, degree_predicates())
    assert not rep.passed
    v = rep.violations["orthogonality"]
    g = chain_map_from_json(v["nonzero_map"])
    assert g.is_chain_map() and not k_hom(g.source, g.target).is_zero_class(g)
