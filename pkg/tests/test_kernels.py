import os
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from weightcx import kernels, _kernels_py

compiled = pytest.importorskip("weightcx._kernels")

entries = st.integers(-5, 5)


def grids(max_m=7, max_n=7, elems=entries):
    return st.integers(1, max_m).flatmap(
        lambda m: st.integers(1, max_n).flatmap(
            lambda n: st.lists(st.lists(elems, min_size=n, max_size=n), min_size=m, max_size=m).map(
                lambda rows, m=m, n=n: (rows, m, n)
            )
        )
    )


@settings(max_examples=200, deadline=None)
@given(grids())
def test_snf_backends_agree(g):
    rows, m, n = g
    assert compiled.snf([list(r) for r in rows], m, n) == _kernels_py.snf([list(r) for r in rows], m, n)


@settings(max_examples=200, deadline=None)
@given(grids(8, 8, st.integers(0, 6)), st.sampled_from([2, 3, 5, 7]))
def test_rref_backends_agree(g, p):
    rows, m, n = g
    rows = [[x % p for x in r] for r in rows]
    assert compiled.rref_mod([list(r) for r in rows], m, n, p) == _kernels_py.rref_mod([list(r) for r in rows], m, n, p)


def test_overflow_falls_back_to_python():
    big = [[10 ** 30, 1], [1, 0]]
    assert kernels.snf(big, 2, 2) == _kernels_py.snf([list(r) for r in big], 2, 2)


def test_backend_selected_at_import():
    forced = os.environ.get("WEIGHTCX_PURE_PYTHON") == "1"
    assert kernels.BACKEND == ("python" if forced else "cython")
    out = subprocess.run(
        [sys.executable, "-c", "import weightcx; print(weightcx.BACKEND)"],
        capture_output=True, text=True, env={"WEIGHTCX_PURE_PYTHON": "1", "PATH": ""},
    )
    assert out.stdout.strip() == "python"
