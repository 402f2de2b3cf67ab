import copy
import json
import random

import pytest

from weightcx import ZZ, QQ, IntegersMod
from weightcx.additive import IdemObj, NonSplitIdempotent, split_idempotent
from weightcx.certificates import (
    contractible_certificate,
    equivalence_certificate,
    membership_certificate,
    not_contractible_certificate,
    not_weakly_homotopic_certificate,
    split_certificate,
    tower_certificate,
    verify,
    weak_homotopy_certificate,
    weight_bounds_certificate,
)
from weightcx.complexes import ChainMap
from weightcx.generators import complex_, contractible, equivalent, idempotent, weakly_null_map
from weightcx.homotopy import is_contractible, weak_homotopy_range
from weightcx.serialize import SchemaError
from weightcx.weights import GE, LE, obstructed_degrees, random_tower, weight_bounds

from conftest import CORE_RINGS, two_term

RINGS = CORE_RINGS + [QQ, IntegersMod(6)]


def roundtrip(c):
    return json.loads(json.dumps(c))


@pytest.mark.parametrize("ring", RINGS, ids=str)
def test_bounds_certificates_verify(ring):
    rng = random.Random(21)
    seen = 0
    for _ in range(15):
        M = complex_(ring, rng)
        c = roundtrip(weight_bounds_certificate(M, weight_bounds(M)))
        assert verify(c)
        seen += c["kind"] == "weight_bounds"
    assert seen


@pytest.mark.parametrize("ring", RINGS, ids=str)
def test_contractible_certificates(ring):
    rng = random.Random(22)
    for _ in range(10):
        C = contractible(ring, rng)
        c = roundtrip(contractible_certificate(C, is_contractible(C)))
        assert verify(c)
        comps = c["homotopy"]["components"]
        if comps:
            bad = copy.deepcopy(c)
            k = next(iter(comps))
            bad["homotopy"]["components"][k][0][0] = "0" if comps[k][0][0] != "0" else "1"
            assert not verify(bad)


def test_not_contractible_certificate_and_tampering():
    M = two_term(ZZ, 2)
    j = obstructed_degrees(M)[0]
    c = roundtrip(not_contractible_certificate(M, j))
    assert verify(c)
    bad = copy.deepcopy(c)
    bad["y"] = ["0"] * len(bad["y"])
    assert not verify(bad)
    bad = copy.deepcopy(c)
    bad["complex"]["diff"][0][0][0] = "1"
    assert not verify(bad)


def test_membership_certificates_both_ways():
    M = two_term(ZZ, 2)
    yes = roundtrip(membership_certificate(M, LE, 1))
    no = roundtrip(membership_certificate(M, GE, 1))
    assert yes["kind"] == "membership" and verify(yes)
    assert no["kind"] == "non_membership" and verify(no)
    # an obstruction that does not refute the query is rejected
    wrong = dict(no, side=LE, n=1)
    assert not verify(wrong)


def test_bounds_certificate_rejects_wrong_bounds():
    M = two_term(ZZ, 2)
    c = roundtrip(weight_bounds_certificate(M, weight_bounds(M)))
    bad = copy.deepcopy(c)
    bad["bounds"] = [c["bounds"][0] - 1, c["bounds"][1]]
    assert not verify(bad)


@pytest.mark.parametrize("ring", RINGS, ids=str)
def test_equivalence_and_tower_certificates(ring):
    rng = random.Random(23)
    for _ in range(8):
        M = complex_(ring, rng)
        N, eq = equivalent(M, rng)
        assert verify(roundtrip(equivalence_certificate(eq)))
        T = random_tower(M, rng)
        assert verify(roundtrip(tower_certificate(T)))
        bad = roundtrip(tower_certificate(T))
        bad["model"] = bad["complex"] if N != M else bad["model"]
        if N != M:
            assert not verify(bad)


def test_weak_homotopy_certificates():
    rng = random.Random(24)
    R = IntegersMod(4)
    hits = 0
    for _ in range(20):
        M, N = complex_(R, rng), complex_(R, rng)
        m = weakly_null_map(M, N, rng)
        z = ChainMap.zero(M, N)
        w = weak_homotopy_range(m, z)
        assert w is not None
        assert verify(roundtrip(weak_homotopy_certificate(w)))
        hits += 1
    assert hits


def test_not_weakly_homotopic_certificate():
    M = two_term(ZZ, 2)
    idm, z = ChainMap.identity(M), ChainMap.zero(M, M)
    c = roundtrip(not_weakly_homotopic_certificate(idm, z, 0))
    assert verify(c)
    bad = copy.deepcopy(c)
    bad["degree"] = 5
    assert not verify(bad)


@pytest.mark.parametrize("ring", RINGS, ids=str)
def test_split_certificates(ring):
    rng = random.Random(25)
    made = 0
    for _ in range(10):
        e = IdemObj.of(ring, idempotent(ring, rng, rng.randint(1, 3)))
        try:
            s = split_idempotent(e)
        except NonSplitIdempotent:
            continue
        c = roundtrip(split_certificate(e, s))
        assert verify(c)
        made += 1
        if s.r:
            bad = copy.deepcopy(c)
            bad["u"][0][0] = "2" if bad["u"][0][0] == "1" else "1"
            if bad["u"] != c["u"]:
                assert not verify(bad)
    assert made


def test_unknown_kind_is_schema_error():
    with pytest.raises(SchemaError):
        verify({"kind": "nonsense"})
    with pytest.raises(SchemaError):
        verify({"complex": {}})
