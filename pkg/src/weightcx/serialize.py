"""JSON encoding of complexes, maps, witnesses and other domain values.

Matrices are arrays of arrays of decimal strings (rationals as ``"a/b"``).
All dictionaries are emitted with sorted keys so output is byte-stable.
"""

from __future__ import annotations

import json

from .complexes import ChainMap, Complex, Homotopy, PeriodicComplex
from .linalg import ModulePresentation
from .matrix import ExactMatrix
from .rings import RingSpec


class SchemaError(ValueError):
    """Raised when JSON input does not match the expected layout."""


def dumps(obj):
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)


def _need(obj, *keys):
    if not isinstance(obj, dict):
        raise SchemaError(f"expected an object, got {type(obj).__name__}")
    missing = [k for k in keys if k not in obj]
    if missing:
        raise SchemaError(f"missing keys: {', '.join(missing)}")


def ring_of(obj, ring=None):
    if ring is not None:
        return ring if isinstance(ring, RingSpec) else RingSpec.parse(ring)
    _need(obj, "ring")
    return RingSpec.parse(obj["ring"])


def _mat(ring, obj, rows, cols):
    if rows == 0 or cols == 0:
        return ExactMatrix(ring, rows, cols)
    return ExactMatrix.from_json(ring, obj, rows, cols)


# -- complexes ---------------------------------------------------------------

def complex_to_json(M):
    if M.is_zero_object():
        return {"ring": str(M.ring), "lo": 0, "hi": -1, "ranks": [], "diff": []}
    return {
        "ring": str(M.ring),
        "lo": M.lo,
        "hi": M.hi,
        "ranks": [M.rank(i) for i in M.degrees],
        "diff": [M.d(i).to_json() for i in range(M.lo, M.hi)],
    }


def complex_from_json(obj, ring=None):
    ring = ring_of(obj, ring)
    _need(obj, "lo", "ranks")
    lo = int(obj["lo"])
    ranks = [int(r) for r in obj["ranks"]]
    if "hi" in obj and int(obj["hi"]) != lo + len(ranks) - 1:
        raise SchemaError("hi does not match lo and the number of ranks")
    diffs = obj.get("diff", [])
    if len(diffs) != max(len(ranks) - 1, 0):
        raise SchemaError(f"expected {max(len(ranks) - 1, 0)} differentials, got {len(diffs)}")
    ds = {lo + k: _mat(ring, m, ranks[k + 1], ranks[k]) for k, m in enumerate(diffs)}
    return Complex(ring, {lo + k: r for k, r in enumerate(ranks)}, ds)


def periodic_from_json(obj, ring=None):
    ring = ring_of(obj, ring)
    _need(obj, "period", "ranks", "diff")
    p = int(obj["period"])
    ranks = tuple(int(r) for r in obj["ranks"])
    if len(ranks) != p or len(obj["diff"]) != p:
        raise SchemaError("periodic complex needs one rank and one differential per residue")
    diffs = tuple(_mat(ring, m, ranks[(k + 1) % p], ranks[k]) for k, m in enumerate(obj["diff"]))
    return PeriodicComplex(ring, p, ranks, diffs)


def periodic_to_json(P):
    return P.to_json()


# -- maps ----------------------------------------------------------------------

def _family_to_json(comps):
    return {str(i): m.to_json() for i, m in sorted(comps.items()) if m.rows and m.cols}


def _family_from_json(ring, obj, shape):
    out = {}
    for k, m in (obj or {}).items():
        i = int(k)
        r, c = shape(i)
        out[i] = _mat(ring, m, r, c)
    return out


def chain_map_to_json(f):
    return {
        "source": complex_to_json(f.source),
        "target": complex_to_json(f.target),
        "components": _family_to_json(f.components()),
    }


def chain_map_from_json(obj, ring=None, check=True):
    _need(obj, "source", "target")
    M = complex_from_json(obj["source"], ring)
    N = complex_from_json(obj["target"], ring)
    comps = _family_from_json(M.ring, obj.get("components"), lambda i: (N.rank(i), M.rank(i)))
    return ChainMap(M, N, comps, check=check)


def homotopy_to_json(h):
    return {
        "source": complex_to_json(h.source),
        "target": complex_to_json(h.target),
        "components": _family_to_json(h.components()),
    }


def homotopy_from_json(obj, ring=None):
    _need(obj, "source", "target")
    M = complex_from_json(obj["source"], ring)
    N = complex_from_json(obj["target"], ring)
    comps = _family_from_json(M.ring, obj.get("components"), lambda i: (N.rank(i - 1), M.rank(i)))
    return Homotopy(M, N, comps)


def equivalence_to_json(eq):
    return {
        "f": chain_map_to_json(eq.f),
        "g": chain_map_to_json(eq.g),
        "h_source": homotopy_to_json(eq.hA),
        "h_target": homotopy_to_json(eq.hB),
    }


def equivalence_from_json(obj, ring=None):
    from .homotopy import HomotopyEquivalence
    _need(obj, "f", "g", "h_source", "h_target")
    return HomotopyEquivalence(
        chain_map_from_json(obj["f"], ring, check=False),
        chain_map_from_json(obj["g"], ring, check=False),
        homotopy_from_json(obj["h_source"], ring),
        homotopy_from_json(obj["h_target"], ring),
    )


def _bound(v):
    return None if v in (float("inf"), float("-inf")) else int(v)


def weak_witness_to_json(w):
    return {
        "m1": chain_map_to_json(w.m1),
        "m2": chain_map_to_json(w.m2),
        "k": _bound(w.k),
        "l": _bound(w.l),
        "X": _family_to_json(w.X),
        "Y": _family_to_json(w.Y),
        "m0": _family_to_json(w.m0.components()),
    }


def weak_witness_from_json(obj, ring=None):
    import math
    from .homotopy import WeakHomotopyWitness
    _need(obj, "m1", "m2", "X", "Y", "m0")
    m1 = chain_map_from_json(obj["m1"], ring, check=False)
    m2 = chain_map_from_json(obj["m2"], ring, check=False)
    M, N = m1.source, m1.target
    shape = lambda i: (N.rank(i - 1), M.rank(i))  # noqa: E731
    X = _family_from_json(M.ring, obj["X"], shape)
    Y = _family_from_json(M.ring, obj["Y"], shape)
    m0 = ChainMap(M, N, _family_from_json(M.ring, obj["m0"], lambda i: (N.rank(i), M.rank(i))), check=False)
    k = -math.inf if obj.get("k") is None else int(obj["k"])
    l = math.inf if obj.get("l") is None else int(obj["l"])
    return WeakHomotopyWitness(m1, m2, k, l, {}, {}, X, Y, m0)


# -- heart objects and modules ---------------------------------------------

def idem_to_json(e):
    return {"ring": str(e.ring), "rank": e.rank, "p": e.p.to_json()}


def idem_from_json(obj, ring=None):
    from .additive import IdemObj
    ring = ring_of(obj, ring)
    _need(obj, "rank", "p")
    r = int(obj["rank"])
    return IdemObj.of(ring, _mat(ring, obj["p"], r, r))


def presentation_to_json(P):
    return P.to_json()


def presentation_from_json(obj, ring):
    _need(obj, "gens")
    g = int(obj["gens"])
    rels = obj.get("rels") or []
    if rels and (not isinstance(rels, list) or len(rels) != g):
        raise SchemaError("rels must have one row per generator")
    ncols = len(rels[0]) if rels else 0
    R = ExactMatrix.from_json(ring, rels, g, ncols) if g and ncols else ExactMatrix(ring, g, 0)
    return ModulePresentation(ring, g, R)
