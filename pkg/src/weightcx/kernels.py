"""Kernel selection: compiled ``_kernels`` when importable, else pure Python.

Set ``WEIGHTCX_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _kernels_py

BACKEND = "python"
_compiled = None
if os.environ.get("WEIGHTCX_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
        BACKEND = "cython"
    except ImportError:  # extension not built
        _compiled = None


def snf(rows, m, n):
    if _compiled is not None:
        try:
            return _compiled.snf(rows, m, n)
        except OverflowError:
            pass
    return _kernels_py.snf([list(r) for r in rows], m, n)


def rref_mod(rows, m, n, p):
    if _compiled is not None:
        try:
            return _compiled.rref_mod(rows, m, n, p)
        except OverflowError:
            pass
    return _kernels_py.rref_mod(rows, m, n, p)
