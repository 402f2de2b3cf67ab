import itertools
import json
from pathlib import Path

import pytest

from weightcx import ZZ, QQ, IntegersMod, PrimeField, Complex, ExactMatrix
from weightcx.serialize import complex_from_json

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "weightcx" / "fixtures"

RINGS = [ZZ, QQ, IntegersMod(4), IntegersMod(6), PrimeField(5)]
CORE_RINGS = [ZZ, IntegersMod(4), PrimeField(5)]


def ring_id(r):
    return str(r)


def fixture_path(name):
    return FIXTURES / f"{name}.json"


def load_fixture(name):
    return json.loads(fixture_path(name).read_text())


def mat(ring, rows):
    return ExactMatrix.from_rows(ring, rows)


def two_term(ring, a, lo=-1):
    """``R -(a)-> R`` in degrees ``[lo, lo+1]``."""
    return Complex(ring, {lo: 1, lo + 1: 1}, {lo: mat(ring, [[a]])})


def brute_solutions(ring, A, b):
    """All ``x`` with ``A x = b`` over a finite ring, by enumeration."""
    n = ring.modulus
    out = []
    for x in itertools.product(range(n), repeat=A.cols):
        ok = all(sum(A[i, j] * x[j] for j in range(A.cols)) % n == b[i, 0] % n for i in range(A.rows))
        if ok:
            out.append(x)
    return out


@pytest.fixture
def z_degree5():
    return complex_from_json(load_fixture("z_degree5"))
