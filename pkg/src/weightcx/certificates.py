"""Certificates that can be re-checked with plain matrix arithmetic.

Every certificate is a JSON object with a ``kind`` field. :func:`verify`
recomputes products and sums only; it never calls a linear solver, so a
passing check does not depend on the code that produced the witness.
"""

from __future__ import annotations

from fractions import Fraction

from .complexes import ChainMap
from .homotopy import degree_system
from .linalg import check_infeasibility, infeasibility_certificate
from .serialize import (
    SchemaError,
    _need,
    chain_map_from_json,
    chain_map_to_json,
    complex_from_json,
    complex_to_json,
    equivalence_from_json,
    equivalence_to_json,
    homotopy_from_json,
    homotopy_to_json,
    idem_from_json,
    weak_witness_from_json,
    weak_witness_to_json,
)
from .weights import GE, LE, weight_membership


def _y_to_json(y):
    return [str(Fraction(v)) if not isinstance(v, int) else str(v) for v in y]


def _y_from_json(y):
    return [Fraction(v) for v in y]


# -- builders ------------------------------------------------------------------

def contractible_certificate(M, h):
    return {"kind": "contractible", "complex": complex_to_json(M), "homotopy": homotopy_to_json(h)}


def obstruction(M, j):
    """Certificate that ``id_{M^j}`` is not of the form ``d x + y d``."""
    A, b = degree_system(ChainMap.identity(M), M, M, j)
    y = infeasibility_certificate(A, b)
    if y is None:
        return None
    return {"degree": j, "y": _y_to_json(y)}


def obstruction_certificate(M, j):
    """The identity of ``M`` is not weakly null at degree ``j``."""
    return {"kind": "obstruction", "complex": complex_to_json(M), **obstruction(M, j)}


def not_contractible_certificate(M, j):
    ob = obstruction(M, j)
    return {"kind": "not_contractible", "complex": complex_to_json(M), **ob}


def refutes(side, n, j):
    """Whether an obstruction in degree ``j`` rules out the membership query."""
    return j >= 1 - n if side == GE else j <= -1 - n


def membership_certificate(M, side, n, res=None):
    res = res or weight_membership(M, side, n)
    if res.member:
        return {"kind": "membership", "complex": complex_to_json(M), "side": side, "n": n,
                "witness": weak_witness_to_json(res.witness)}
    return {"kind": "non_membership", "complex": complex_to_json(M), "side": side, "n": n,
            **obstruction(M, res.failing_degree)}


def weight_bounds_certificate(M, bounds):
    """Four membership facts pinning ``bounds`` down, or contractibility."""
    if bounds is None:
        from .homotopy import is_contractible
        return contractible_certificate(M, is_contractible(M))
    lo, hi = bounds
    parts = [
        membership_certificate(M, GE, lo),
        membership_certificate(M, GE, lo + 1),
        membership_certificate(M, LE, hi),
        membership_certificate(M, LE, hi - 1),
    ]
    return {"kind": "weight_bounds", "complex": complex_to_json(M), "bounds": [lo, hi], "parts": parts}


def equivalence_certificate(eq):
    return {"kind": "homotopy_equivalence", **equivalence_to_json(eq)}


def weak_homotopy_certificate(w):
    return {"kind": "weak_homotopy", **weak_witness_to_json(w)}


def not_weakly_homotopic_certificate(m1, m2, i):
    A, b = degree_system(m1 - m2, m1.source, m1.target, i)
    y = infeasibility_certificate(A, b)
    return {"kind": "not_weakly_homotopic", "m1": chain_map_to_json(m1), "m2": chain_map_to_json(m2),
            "degree": i, "y": _y_to_json(y)}


def split_certificate(e, s):
    return {"kind": "split_idempotent", "ring": str(e.ring), "rank": e.rank, "p": e.p.to_json(),
            "r": s.r, "u": s.u.to_json(), "v": s.v.to_json()}


def tower_certificate(tower):
    return {"kind": "tower", "complex": complex_to_json(tower.M), "model": complex_to_json(tower.model),
            "equivalence": equivalence_to_json(tower.equivalence)}


# -- checks -------------------------------------------------------------------

def _check_obstruction(M, obj):
    j = int(obj["degree"])
    A, b = degree_system(ChainMap.identity(M), M, M, j)
    return check_infeasibility(A, b, _y_from_json(obj["y"]))


def _v_contractible(obj):
    M = complex_from_json(obj["complex"])
    h = homotopy_from_json(obj["homotopy"])
    return h.source == M and h.verifies(ChainMap.identity(M))


def _v_not_contractible(obj):
    return _check_obstruction(complex_from_json(obj["complex"]), obj)


def _v_membership(obj):
    M = complex_from_json(obj["complex"])
    side, n = obj["side"], int(obj["n"])
    w = weak_witness_from_json(obj["witness"])
    S = M.shift(-n)
    if w.m1 != ChainMap.identity(S) or not w.m2.is_zero() or w.m1.source != S:
        return False
    k, l = (1, float("inf")) if side == GE else (float("-inf"), -1)
    if side not in (GE, LE) or w.k > k or w.l < l:
        return False
    return w.verify()


def _v_non_membership(obj):
    M = complex_from_json(obj["complex"])
    if not refutes(obj["side"], int(obj["n"]), int(obj["degree"])):
        return False
    return _check_obstruction(M, obj)


def _v_weight_bounds(obj):
    M = complex_from_json(obj["complex"])
    lo, hi = obj["bounds"]
    expect = [("membership", GE, lo), ("non_membership", GE, lo + 1),
              ("membership", LE, hi), ("non_membership", LE, hi - 1)]
    parts = obj["parts"]
    if len(parts) != 4:
        return False
    for part, (kind, side, n) in zip(parts, expect):
        if part.get("kind") != kind or part.get("side") != side or int(part.get("n")) != n:
            return False
        if complex_from_json(part["complex"]) != M or not verify(part):
            return False
    return True


def _v_equivalence(obj):
    return equivalence_from_json(obj).verify()


def _v_weak(obj):
    return weak_witness_from_json(obj).verify()


def _v_not_weak(obj):
    m1 = chain_map_from_json(obj["m1"])
    m2 = chain_map_from_json(obj["m2"])
    A, b = degree_system(m1 - m2, m1.source, m1.target, int(obj["degree"]))
    return check_infeasibility(A, b, _y_from_json(obj["y"]))


def _v_split(obj):
    from .additive import SplitIdempotent
    from .matrix import ExactMatrix
    e = idem_from_json(obj)
    r, n = int(obj["r"]), e.rank
    u = ExactMatrix.from_json(e.ring, obj["u"], n, r) if r and n else ExactMatrix(e.ring, n, r)
    v = ExactMatrix.from_json(e.ring, obj["v"], r, n) if r and n else ExactMatrix(e.ring, r, n)
    return SplitIdempotent(r, u, v).check(e)


def _v_tower(obj):
    M = complex_from_json(obj["complex"])
    T = complex_from_json(obj["model"])
    eq = equivalence_from_json(obj["equivalence"])
    return eq.f.source == T and eq.f.target == M and eq.verify()


CHECKS = {
    "contractible": _v_contractible,
    "not_contractible": _v_not_contractible,
    "obstruction": _v_not_contractible,
    "membership": _v_membership,
    "non_membership": _v_non_membership,
    "weight_bounds": _v_weight_bounds,
    "homotopy_equivalence": _v_equivalence,
    "weak_homotopy": _v_weak,
    "not_weakly_homotopic": _v_not_weak,
    "split_idempotent": _v_split,
    "tower": _v_tower,
}


def verify(obj):
    """Re-check a certificate; raises :class:`SchemaError` on unknown kinds."""
    _need(obj, "kind")
    check = CHECKS.get(obj["kind"])
    if check is None:
        raise SchemaError(f"unknown certificate kind {obj['kind']!r}")
    return bool(check(obj))
