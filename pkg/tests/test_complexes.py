import random

import pytest

from weightcx import ZZ, QQ, IntegersMod, PrimeField, ChainMap, Complex, ComplexError, PeriodicComplex, ExactMatrix
from weightcx import generators as gen
from weightcx.complexes import Homotopy, cone, homology, homology_invariants, periodic_homology_at, stupid_truncation
from weightcx.homotopy import homotopy_equivalence, is_contractible
from weightcx.linalg import Invariants, module_invariants
from weightcx.weights import GE, LE, hereditary_decomposition, weight_membership

from conftest import RINGS, mat, two_term


def inv(P):
    return module_invariants(P)


def test_d_squared_checked_on_construction():
    with pytest.raises(ComplexError):
        Complex(ZZ, {0: 1, 1: 1, 2: 1}, {0: mat(ZZ, [[1]]), 1: mat(ZZ, [[1]])})


def test_shift_convention_places_degree_five_at_zero(z_degree5):
    S = z_degree5.shift(5)
    assert (S.lo, S.hi) == (0, 0) and S.rank(0) == 1


@pytest.mark.parametrize("ring", RINGS, ids=str)
def test_shift_laws(ring):
    rng = random.Random(3)
    for _ in range(20):
        M = gen.complex_(ring, rng)
        assert M.shift(0) == M
        a, b = rng.randint(-3, 3), rng.randint(-3, 3)
        assert M.shift(a).shift(b) == M.shift(a + b)
        S = M.shift(1)
        for i in M.degrees:
            assert S.rank(i - 1) == M.rank(i)
            if i < M.hi:
                assert S.d(i - 1) == -M.d(i)


def test_cone_of_identity_contractible():
    B = Complex.concentrated(ZZ, 2, 0)
    assert is_contractible(cone(ChainMap.identity(B)).cone) is not None


def test_cone_of_zero_map_is_shift():
    M = two_term(ZZ, 3)
    c = cone(ChainMap.zero(M, Complex.zero(ZZ)))
    assert c.cone == M.shift(1)


def test_cone_of_multiplication_by_two():
    B = Complex.concentrated(ZZ, 1, 0)
    f = ChainMap(B, B, {0: mat(ZZ, [[2]])})
    C = cone(f).cone
    assert inv(homology(C, 0)) == Invariants(ZZ, 0, (2,))
    assert inv(homology(C, -1)).is_zero()


@pytest.mark.parametrize("ring", [ZZ, IntegersMod(4), PrimeField(5)], ids=str)
def test_cone_triangle_maps_are_chain_maps(ring):
    rng = random.Random(9)
    for _ in range(15):
        M, N = gen.complex_(ring, rng), gen.complex_(ring, rng)
        f = gen.chain_map(M, N, rng)
        cd = cone(f)
        assert cd.inclusion.is_chain_map() and cd.projection.is_chain_map()
        assert solve_zero(cd.inclusion @ f)
        assert (cd.projection @ cd.inclusion).is_zero()


def solve_zero(m):
    from weightcx.homotopy import solve_null_homotopy
    return solve_null_homotopy(m) is not None


def test_cone_of_split_injection_is_quotient():
    rng = random.Random(5)
    for _ in range(10):
        M = gen.complex_(ZZ, rng, max_rank=2)
        N = gen.complex_(ZZ, rng, max_rank=2)
        S = M.direct_sum(N)
        inc = ChainMap(M, S, {i: ExactMatrix.identity(ZZ, M.rank(i)).vstack(ExactMatrix(ZZ, N.rank(i), M.rank(i)))
                              for i in M.degrees if M.rank(i)})
        C = cone(inc).cone
        proj = {}
        for i in C.degrees:
            if N.rank(i):
                a = M.rank(i + 1)
                blockm = ExactMatrix(ZZ, N.rank(i), a).hstack(
                    ExactMatrix(ZZ, N.rank(i), M.rank(i)).hstack(ExactMatrix.identity(ZZ, N.rank(i))))
                proj[i] = blockm
        p = ChainMap(C, N, proj)
        assert homotopy_equivalence(p) is not None


def test_truncation_examples():
    M = Complex.concentrated(ZZ, 1, 0)
    T = stupid_truncation(M, 0)
    assert T.sub == M and T.quot.is_zero_object()
    M = two_term(ZZ, 2)
    T = stupid_truncation(M, 0)
    assert T.sub == Complex.concentrated(ZZ, 1, 0)
    assert T.quot == Complex.concentrated(ZZ, 1, -1)
    assert weight_membership(T.sub, LE, 0) and weight_membership(T.quot, GE, 1)
    T = stupid_truncation(M, 100)
    assert T.sub == M and T.quot.is_zero_object()


@pytest.mark.parametrize("ring", [ZZ, IntegersMod(4), QQ], ids=str)
def test_truncation_triangle_is_distinguished(ring):
    from weightcx.weights import _triangle_ok
    rng = random.Random(1)
    for _ in range(10):
        M = gen.complex_(ring, rng)
        for m in range(-M.hi - 1, -M.lo + 1):
            T = stupid_truncation(M, m)
            assert T.inclusion.is_chain_map() and T.projection.is_chain_map() and T.connecting.is_chain_map()
            assert _triangle_ok(T.inclusion, T.projection, T.connecting)


def test_homology_examples():
    M = two_term(ZZ, 2)
    assert inv(homology(M, 0)) == Invariants(ZZ, 0, (2,))
    assert inv(homology(M, -1)).is_zero()
    exact = two_term(ZZ, 1)
    assert all(v.is_zero() for v in homology_invariants(exact).values())
    Z = Complex(ZZ, {0: 2, 1: 3})
    assert inv(homology(Z, 0)).rank == 2 and inv(homology(Z, 1)).rank == 3


def test_periodic_homology():
    R = IntegersMod(4)
    P = PeriodicComplex(R, 1, (1,), (mat(R, [[2]]),))
    assert all(module_invariants(periodic_homology_at(P, i)).is_zero() for i in range(-20, 21))
    P0 = PeriodicComplex(R, 1, (1,), (mat(R, [[0]]),))
    assert all(module_invariants(periodic_homology_at(P0, i)).torsion == (4,) for i in range(-20, 21))
    P2 = PeriodicComplex(ZZ, 2, (1, 1), (mat(ZZ, [[1]]), mat(ZZ, [[0]])))
    assert all(module_invariants(periodic_homology_at(P2, i)).is_zero() for i in range(-6, 7))


def test_periodic_requires_d_squared_zero():
    with pytest.raises(ComplexError):
        PeriodicComplex(ZZ, 1, (1,), (mat(ZZ, [[1]]),))


def test_homotopy_verifies_boundary():
    B = Complex.concentrated(ZZ, 1, 0)
    C = cone(ChainMap.identity(B)).cone
    h = is_contractible(C)
    assert isinstance(h, Homotopy) and h.verifies(ChainMap.identity(C))


def test_hereditary_decomposition_over_z():
    rng = random.Random(100)
    for _ in range(100):
        M = gen.complex_(ZZ, rng, max_rank=4, max_len=5)
        dec = hereditary_decomposition(M)
        assert dec.equivalence.verify()
        assert dec.equivalence.f.target == M or dec.equivalence.g.target == M
        for k, kind, val in dec.pieces:
            assert kind in ("free", "torsion")
        # each piece sits in degrees [k-1, k]
        assert homology_invariants(dec.model, M.lo - 1, M.hi + 1) == homology_invariants(M, M.lo - 1, M.hi + 1)
