import json
import random

import pytest

from weightcx import ZZ, QQ, IntegersMod, PrimeField, Complex
from weightcx.additive import IdemObj
from weightcx.complexes import ChainMap
from weightcx.derived import ModuleComplex, random_module_complex
from weightcx.generators import chain_map, complex_, equivalent, idempotent
from weightcx.homotopy import weak_homotopy_range
from weightcx.serialize import (
    SchemaError,
    chain_map_from_json,
    chain_map_to_json,
    complex_from_json,
    complex_to_json,
    dumps,
    equivalence_from_json,
    equivalence_to_json,
    idem_from_json,
    idem_to_json,
    periodic_from_json,
    weak_witness_from_json,
    weak_witness_to_json,
)

from conftest import RINGS, load_fixture, mat


def rt(obj):
    return json.loads(dumps(obj))


@pytest.mark.parametrize("ring", RINGS, ids=str)
def test_complex_and_map_roundtrip(ring):
    rng = random.Random(31)
    for _ in range(10):
        M, N = complex_(ring, rng), complex_(ring, rng)
        assert complex_from_json(rt(complex_to_json(M))) == M
        f = chain_map(M, N, rng)
        g = chain_map_from_json(rt(chain_map_to_json(f)))
        assert g.source == M and g.target == N and g.components() == f.components()


def test_zero_complex_roundtrip():
    Z = Complex.zero(ZZ)
    assert complex_from_json(rt(complex_to_json(Z))).is_zero_object()


def test_equivalence_roundtrip():
    rng = random.Random(32)
    M = complex_(IntegersMod(6), rng)
    _, eq = equivalent(M, rng)
    back = equivalence_from_json(rt(equivalence_to_json(eq)))
    assert back.verify()
    assert back.f.components() == eq.f.components()


def test_weak_witness_roundtrip():
    M = Complex(ZZ, {-1: 1, 0: 1}, {-1: mat(ZZ, [[2]])})
    w = weak_homotopy_range(ChainMap.identity(M), ChainMap.zero(M, M), 1, 5)
    back = weak_witness_from_json(rt(weak_witness_to_json(w)))
    assert back.verify() and back.k == 1 and back.l == 5


def test_rationals_are_strings():
    M = Complex(QQ, {0: 1, 1: 1}, {0: mat(QQ, [["1/3"]])})
    obj = complex_to_json(M)
    assert obj["diff"][0] == [["1/3"]]
    assert complex_from_json(rt(obj)) == M


def test_idempotent_and_module_complex_roundtrip():
    rng = random.Random(33)
    for ring in (ZZ, IntegersMod(6), PrimeField(5)):
        e = IdemObj.of(ring, idempotent(ring, rng, 3))
        assert idem_from_json(rt(idem_to_json(e))) == e
    for _ in range(10):
        M = random_module_complex(rng)
        back = ModuleComplex.from_json(rt(M.to_json()))
        assert back.to_json() == M.to_json()


def test_fixtures_load():
    assert complex_from_json(load_fixture("z_degree5")).degrees == range(5, 6)
    P = periodic_from_json(load_fixture("periodic_z4"))
    assert P.period == 1
    assert idem_from_json(load_fixture("idempotent_z6")).ring == IntegersMod(6)
    ModuleComplex.from_json(load_fixture("z2_module"))


def test_dumps_is_sorted_and_stable():
    M = complex_(ZZ, random.Random(1))
    a = dumps(complex_to_json(M))
    assert a == dumps(json.loads(a))
    keys = list(json.loads(a))
    assert keys == sorted(keys)


@pytest.mark.parametrize("obj", [
    {"lo": 0, "ranks": [1]},
    {"ring": "Z", "ranks": [1]},
    {"ring": "Z", "lo": 0, "ranks": [1, 1], "diff": []},
    {"ring": "Z", "lo": 0, "hi": 3, "ranks": [1], "diff": []},
    [1, 2],
])
def test_malformed_complexes(obj):
    with pytest.raises(SchemaError):
        complex_from_json(obj)


def test_bad_ring_and_shape():
    from weightcx.rings import RingError
    from weightcx.matrix import ShapeError
    from weightcx.complexes import ComplexError
    with pytest.raises(RingError):
        complex_from_json({"ring": "Z/0x", "lo": 0, "ranks": [1], "diff": []})
    with pytest.raises((ShapeError, SchemaError)):
        complex_from_json({"ring": "Z", "lo": 0, "ranks": [1, 2], "diff": [[["1"]]]})
    with pytest.raises(ComplexError):
        complex_from_json({"ring": "Z", "lo": 0, "ranks": [1, 1, 1], "diff": [[["1"]], [["1"]]]})
