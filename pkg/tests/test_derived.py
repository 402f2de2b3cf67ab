import random

import pytest

from weightcx import ZZ, Complex, ComplexError
from weightcx.derived import (
    ModuleComplex,
    equivalence_between,
    derived_weight_bounds,
    free_replacement,
    random_module_complex,
    realize_weight_complex,
    uct_cross_check,
    uct_oracle,
)
from weightcx.generators import complex_, equivalent
from weightcx.homotopy import k_hom
from weightcx.linalg import Invariants, ModulePresentation, module_invariants
from weightcx.weights import hereditary_decomposition

from conftest import load_fixture, mat, two_term
from oracles import hand_uct, primary_parts


def cyclic(n):
    return ModulePresentation.cyclic(ZZ, n)


def test_rejects_ill_defined_differential():
    # Z/2 -> Z/3 by 1 is not well defined
    with pytest.raises(ComplexError):
        ModuleComplex({0: cyclic(2), 1: cyclic(3)}, {0: mat(ZZ, [[1]])})


def test_rejects_nonzero_square():
    P = ModulePresentation.free(ZZ, 1)
    with pytest.raises(ComplexError):
        ModuleComplex({0: P, 1: P, 2: P}, {0: mat(ZZ, [[1]]), 1: mat(ZZ, [[1]])})


def test_square_zero_modulo_relations_is_accepted():
    # Z -1-> Z -2-> Z/4 composes to 2, not zero; Z -2-> Z/4 -2-> Z/4 composes to 4 = 0
    M = ModuleComplex({0: ModulePresentation.free(ZZ, 1), 1: cyclic(4), 2: cyclic(4)},
                      {0: mat(ZZ, [[2]]), 1: mat(ZZ, [[2]])})
    assert M.degrees == range(0, 3)


def test_free_replacement_of_z2():
    M = ModuleComplex.from_json(load_fixture("z2_module"))
    rep = free_replacement(M)
    assert rep.verify()
    Q = rep.Q
    assert (Q.lo, Q.hi) == (-1, 0)
    assert abs(Q.d(-1)[0, 0]) == 2
    assert derived_weight_bounds(M) == (0, 1)


def test_free_complex_is_its_own_replacement():
    rng = random.Random(3)
    for _ in range(20):
        C = complex_(ZZ, rng)
        rep = free_replacement(ModuleComplex.from_complex(C))
        assert rep.verify()
        if not C.is_zero_object():
            assert rep.Q == C


def test_replacement_of_replacement_is_equivalent():
    rng = random.Random(5)
    for _ in range(30):
        M = random_module_complex(rng)
        Q = free_replacement(M).Q
        Q2 = free_replacement(ModuleComplex.from_complex(Q)).Q
        assert equivalence_between(Q, Q2) is not None


@pytest.mark.parametrize("M, expected", [
    (ModuleComplex.single(ModulePresentation.free(ZZ, 1)), (0, 0)),
    (ModuleComplex.single(ModulePresentation.cyclic(ZZ, 2)), (0, 1)),
    (ModuleComplex.single(ModulePresentation.cyclic(ZZ, 2), 5), (-5, -4)),
    (ModuleComplex.single(ModulePresentation.cyclic(ZZ, 1)), None),
])
def test_derived_bounds_examples(M, expected):
    assert derived_weight_bounds(M) == expected


def test_derived_bounds_match_hereditary_model():
    rng = random.Random(11)
    for _ in range(40):
        M = random_module_complex(rng)
        rep = free_replacement(M)
        assert rep.verify()
        model = hereditary_decomposition(rep.Q).model
        lo_obs = [i for i in model.degrees if model.rank(i)]
        got = derived_weight_bounds(M)
        if not lo_obs:
            assert got is None
        else:
            assert got == (-max(lo_obs), -min(lo_obs))


def test_bounds_invariant_under_equivalence():
    rng = random.Random(13)
    for _ in range(30):
        Q = free_replacement(random_module_complex(rng)).Q
        N, eq = equivalent(Q, rng)
        assert eq.verify()
        assert derived_weight_bounds(ModuleComplex.from_complex(N)) == derived_weight_bounds(
            ModuleComplex.from_complex(Q))


def test_free_groups_are_connective():
    # Hom(F, G[i]) = 0 for free groups in degree 0 and i > 0
    for a in range(1, 4):
        for b in range(1, 4):
            F = Complex(ZZ, {0: a}, {})
            G = Complex(ZZ, {0: b}, {})
            for i in range(1, 4):
                assert k_hom(F, G.shift(i)).invariants.is_zero()
            assert k_hom(F, G).invariants == Invariants(ZZ, a * b, ())


def test_uct_z2_against_z():
    M = ModuleComplex.single(cyclic(2))
    N = ModulePresentation.free(ZZ, 1)
    assert uct_oracle(M, N, 0).is_zero()
    assert uct_oracle(M, N, 1) == Invariants(ZZ, 0, (2,))
    rep = uct_cross_check(M, N)
    assert rep.ok
    assert rep.rows[1]["k_hom"] == "Z/2"


def test_uct_z4_against_z2():
    M = ModuleComplex.single(cyclic(4))
    N = cyclic(2)
    assert uct_oracle(M, N, 0) == Invariants(ZZ, 0, (2,))
    assert uct_oracle(M, N, 1) == Invariants(ZZ, 0, (2,))
    assert uct_cross_check(M, N).ok


@pytest.mark.parametrize("seed", range(15))
def test_uct_random(seed):
    rng = random.Random(seed)
    M = random_module_complex(rng)
    N = rng.choice([ModulePresentation.free(ZZ, 1), cyclic(2), cyclic(4), cyclic(6)])
    rep = uct_cross_check(M, N)
    assert rep.ok, rep.rows
    for n in rep.rows:
        h0 = module_invariants(M.homology(-n))
        h1 = module_invariants(M.homology(1 - n))
        assert primary_parts(uct_oracle(M, N, n)) == hand_uct(h0, h1, module_invariants(N))


def test_realize_canonical_target():
    M = ModuleComplex.single(cyclic(2))
    target = two_term(ZZ, 2)
    R = realize_weight_complex(M, target)
    assert R.verify()


def test_realize_target_with_contractible_summand():
    rng = random.Random(17)
    for _ in range(10):
        M = random_module_complex(rng)
        Q = free_replacement(M).Q
        target, _ = equivalent(Q, rng)
        R = realize_weight_complex(M, target)
        assert R.verify()


def test_realize_rejects_wrong_homology():
    M = ModuleComplex.single(cyclic(2))
    with pytest.raises(ComplexError):
        realize_weight_complex(M, two_term(ZZ, 3))
