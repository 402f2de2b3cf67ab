"""Command line front end.

Inputs are JSON files (``-`` reads stdin). Exit codes: 0 success, 1 a
mathematical refutation (with a certificate when one exists), 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import certificates as certs
from .complexes import ComplexError, homology_invariants, stupid_truncation
from .linalg import module_invariants
from .matrix import ShapeError
from .rings import RingError, RingSpec
from .serialize import (
    SchemaError,
    chain_map_from_json,
    complex_from_json,
    complex_to_json,
    dumps,
    idem_from_json,
    periodic_from_json,
)

OK, REFUTED, BAD_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _read(path):
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _ring(args):
    return RingSpec.parse(args.ring) if args.ring else None


def _complex(args, path):
    return complex_from_json(_read(path), _ring(args))


def _inv_table(invs):
    return {str(k): str(v) for k, v in sorted(invs.items())}


def _bounds_text(b):
    return "zero" if b is None else f"[{b[0]}, {b[1]}]"


# -- handlers: each returns (report, exit code, certificate or None) -----------

def cmd_homology(args):
    M = _complex(args, args.input)
    inv = homology_invariants(M) if not M.is_zero_object() else {}
    return {"ring": str(M.ring), "homology": _inv_table(inv)}, OK, None


def cmd_hom(args):
    from .homotopy import k_hom
    M, N = _complex(args, args.source), _complex(args, args.target)
    if M.ring != N.ring:
        raise RingError(f"ring mismatch: {M.ring} vs {N.ring}")
    H = k_hom(M, N.shift(args.shift))
    return {"shift": args.shift, "hom": str(H.invariants), "generators": H.presentation.generators}, OK, None


def cmd_is_contractible(args):
    from .homotopy import is_contractible
    from .weights import obstructed_degrees
    M = _complex(args, args.input)
    h = is_contractible(M)
    if h is not None:
        return {"contractible": True}, OK, certs.contractible_certificate(M, h)
    j = obstructed_degrees(M)[0]
    return {"contractible": False, "obstructed_degree": j}, REFUTED, certs.not_contractible_certificate(M, j)


def cmd_weak_homotopy(args):
    from .homotopy import weak_homotopy_range, weakly_homotopic_at, _window
    m1 = chain_map_from_json(_read(args.first), _ring(args))
    m2 = chain_map_from_json(_read(args.second), _ring(args))
    if m1.source != m2.source or m1.target != m2.target:
        raise ComplexError("maps have different endpoints")
    k = float("-inf") if args.lo is None else args.lo
    l = float("inf") if args.hi is None else args.hi
    w = weak_homotopy_range(m1, m2, k, l)
    rep = {"range": [args.lo, args.hi]}
    if w is not None:
        return {**rep, "weakly_homotopic": True}, OK, certs.weak_homotopy_certificate(w)
    bad = next(i for i in _window(m1.source, m1.target) if k <= i <= l and not weakly_homotopic_at(m1, m2, i))
    cert = certs.not_weakly_homotopic_certificate(m1, m2, bad)
    return {**rep, "weakly_homotopic": False, "failing_degree": bad}, REFUTED, cert


def cmd_weight_bounds(args):
    from .weights import GE, LE, weight_bounds, weight_membership
    M = _complex(args, args.input)
    if args.member is not None:
        side, n = args.member[0], int(args.member[1])
        if side not in (GE, LE):
            raise InputError("--member side must be '>=' or '<='")
        res = weight_membership(M, side, n)
        rep = {"query": f"w{side}{n}", "member": res.member}
        if not res.member:
            rep["verdict"] = "not a member"
            rep["obstructed_degree"] = res.failing_degree
        return rep, (OK if res.member else REFUTED), certs.membership_certificate(M, side, n, res)
    b = weight_bounds(M)
    rep = {"bounds": _bounds_text(b), "low": None if b is None else b[0], "high": None if b is None else b[1]}
    return rep, OK, certs.weight_bounds_certificate(M, b)


def cmd_truncate(args):
    M = _complex(args, args.input)
    t = stupid_truncation(M, args.at)
    return {"at": args.at, "low_part": complex_to_json(t.sub), "high_part": complex_to_json(t.quot)}, OK, None


def cmd_postnikov(args):
    from .weights import PostnikovTower
    M = _complex(args, args.input)
    T = PostnikovTower(M)
    fails = T.certify()
    rep = {
        "levels": [{"level": i, "filtration": complex_to_json(T.filtration(i)), "factor_rank": T.factor(i).rank(-i)}
                   for i in T.levels],
        "certified": not fails,
        "failures": fails,
    }
    return rep, (OK if not fails else REFUTED), certs.tower_certificate(T)


def cmd_weight_complex(args):
    from .weights import weight_complex
    M = _complex(args, args.input)
    W = weight_complex(M)
    return {"weight_complex": complex_to_json(W.complex)}, OK, certs.tower_certificate(W.tower)


def _heart_functor(spec, ring):
    from .spectral import HeartFunctor
    name, _, k = spec.partition(":")
    k = int(k or 1)
    if name == "hom_from":
        return HeartFunctor.hom_from(ring, k)
    if name == "hom_to":
        return HeartFunctor.hom_to(ring, k)
    raise InputError(f"unknown heart functor {spec!r}; use hom_from:k or hom_to:k")


def cmd_pure_homology(args):
    from .spectral import pure_homology
    M = _complex(args, args.input)
    A = _heart_functor(args.functor, M.ring)
    degs = [args.degree] if args.degree is not None else (
        [] if M.is_zero_object() else list(range(-M.hi - 1, -M.lo + 2)))
    out = {str(i): str(module_invariants(pure_homology(A, M, i))) for i in degs}
    return {"functor": A.name, "pure_homology": out}, OK, None


def cmd_detect(args):
    from .spectral import detect_weight_ge
    obj = _read(args.input)
    if isinstance(obj, dict) and "period" in obj:
        P = periodic_from_json(obj, _ring(args))
        w = args.window or 20
        v = detect_weight_ge(P, args.level, (-w, w))
        cert = None
        if v.refuted_degrees:
            j = v.refuted_degrees[0]
            cert = certs.obstruction_certificate(P.window(j - 1, j + 1), j)
        return {**v.to_json(), "window": [-w, w]}, REFUTED, cert
    M = complex_from_json(obj, _ring(args))
    v = detect_weight_ge(M, args.level)
    cert = certs.membership_certificate(M, ">=", args.level)
    return v.to_json(), (OK if v.member else REFUTED), cert


def cmd_wss(args):
    from .spectral import cohomological_oracle, weight_ss_cohomological
    M, N = _complex(args, args.source), _complex(args, args.target)
    if M.ring != N.ring:
        raise RingError(f"ring mismatch: {M.ring} vs {N.ring}")
    SS = weight_ss_cohomological(M, N)
    ok, rep = SS.abutment_check(cohomological_oracle(M, N))
    out = SS.to_json()
    out["abutment"] = {str(n): r for n, r in sorted(rep.items())}
    out["converges"] = ok
    return out, (OK if ok else REFUTED), None


def cmd_free_replace(args):
    from .derived import ModuleComplex, derived_weight_bounds, free_replacement
    M = ModuleComplex.from_json(_read(args.input))
    rep = free_replacement(M)
    ok = rep.verify()
    out = {
        "replacement": complex_to_json(rep.Q),
        "quasi_isomorphism": ok,
        "weight_bounds": _bounds_text(derived_weight_bounds(M)),
    }
    return out, (OK if ok else REFUTED), None


def cmd_karoubi_totalize(args):
    from .additive import IdemComplex, NonSplitIdempotent, karoubi_homology, split_form, split_idempotent, totalize_window
    from .complexes import homology
    from .matrix import ExactMatrix
    obj = _read(args.input)
    ring = _ring(args)
    if isinstance(obj, dict) and "terms" in obj:
        terms = tuple(idem_from_json(t, ring) for t in obj["terms"])
        r = terms[0].ring if terms else RingSpec.parse(obj.get("ring", "Z"))
        diffs = tuple(
            ExactMatrix.from_json(r, m, terms[k + 1].rank, terms[k].rank) for k, m in enumerate(obj.get("diff", []))
        )
        C = IdemComplex(r, int(obj.get("lo", 0)), terms, diffs)
    else:
        C = IdemComplex.single(idem_from_json(obj, ring))
    N = args.window or len(C.terms) + 2
    Tot = totalize_window(C, N)
    try:
        S = split_form(C)
        splits = [split_idempotent(t) for t in C.terms]
        nonsplit = None
    except NonSplitIdempotent as exc:
        S, splits, nonsplit = None, None, exc
    rows = {}
    match = True
    for i in range(C.lo, C.lo + N - 1):
        a = module_invariants(homology(Tot, i))
        b = module_invariants(karoubi_homology(C, i))
        row = {"totalization": str(a), "karoubi": str(b)}
        match = match and a == b
        if S is not None:
            c = module_invariants(homology(S, i))
            row["split"] = str(c)
            match = match and a == c
        rows[str(i)] = row
    out = {"window": N, "totalization": complex_to_json(Tot), "homology": rows, "match": match}
    cert = None
    if nonsplit is not None:
        out["split"] = None
        out["non_split"] = str(nonsplit)
        return out, REFUTED, None
    if C.terms:
        cert = certs.split_certificate(C.terms[0], splits[0])
    return out, (OK if match else REFUTED), cert


def cmd_transport(args):
    from .transport import RingMapFunctor
    from .weights import weight_bounds
    F = RingMapFunctor.parse(args.functor)
    M = complex_from_json(_read(args.input), _ring(args) or F.source)
    FM = F.complex(M)
    return {
        "functor": F.to_json(),
        "image": complex_to_json(FM),
        "bounds": _bounds_text(weight_bounds(M)),
        "image_bounds": _bounds_text(weight_bounds(FM)),
    }, OK, None


def cmd_check_axioms(args):
    from .generators import complex_, rng_for
    from .weights import check_axioms, degree_predicates, stupid_predicates
    ring = _ring(args) or RingSpec.parse("Z")
    rng = rng_for(args.seed)
    corpus = [complex_(ring, rng, max_rank=2, max_len=3) for _ in range(args.size)]
    preds = stupid_predicates() if args.predicates == "stupid" else degree_predicates()
    rep = check_axioms(corpus, preds)
    out = {"ring": str(ring), "seed": args.seed, "size": args.size, **rep.to_json()}
    return out, (OK if rep.passed else REFUTED), None


def cmd_harness(args):
    from .transport import HypothesisFailure, RingMapFunctor, conservativity_harness
    F = RingMapFunctor.parse(args.functor)
    try:
        rep = conservativity_harness(F, size=args.size, seed=args.seed)
    except HypothesisFailure as exc:
        from .transport import heart_conservative_check, heart_full_check
        pre = [heart_full_check(F).to_json(), heart_conservative_check(F).to_json()]
        return {"functor": F.name, "aborted": str(exc), "prechecks": pre}, REFUTED, None
    out = rep.to_json()
    return out, (OK if rep.ok else REFUTED), None


def cmd_verify(args):
    obj = _read(args.input)
    ok = certs.verify(obj)
    return {"kind": obj.get("kind"), "verified": ok}, (OK if ok else REFUTED), None


# -- plumbing ------------------------------------------------------------------

def _key_order(k):
    try:
        return (0, int(k), "")
    except (TypeError, ValueError):
        return (1, 0, str(k))


def _table(obj, prefix="", out=None):
    out = [] if out is None else out
    if isinstance(obj, dict):
        for k in sorted(obj, key=_key_order):
            _table(obj[k], f"{prefix}.{k}" if prefix else str(k), out)
    elif isinstance(obj, list) and obj and all(isinstance(x, (dict, list)) for x in obj):
        for k, v in enumerate(obj):
            _table(v, f"{prefix}[{k}]", out)
    else:
        val = json.dumps(obj, sort_keys=True) if isinstance(obj, (list, bool)) or obj is None else str(obj)
        out.append((prefix, val))
    return out


def render(report, fmt):
    if fmt == "json":
        return dumps(report)
    rows = _table(report)
    width = max((len(k) for k, _ in rows), default=0)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)


COMMANDS = {
    "homology": cmd_homology,
    "hom": cmd_hom,
    "is-contractible": cmd_is_contractible,
    "weak-homotopy": cmd_weak_homotopy,
    "weight-bounds": cmd_weight_bounds,
    "truncate": cmd_truncate,
    "postnikov": cmd_postnikov,
    "weight-complex": cmd_weight_complex,
    "pure-homology": cmd_pure_homology,
    "detect": cmd_detect,
    "wss": cmd_wss,
    "free-replace": cmd_free_replace,
    "karoubi-totalize": cmd_karoubi_totalize,
    "transport": cmd_transport,
    "check-axioms": cmd_check_axioms,
    "harness": cmd_harness,
    "verify": cmd_verify,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ring", help="override the ring of every input (Z, Q, Z/n, F_p)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--emit-certificate", metavar="PATH",
                        help="write the certificate JSON to PATH ('-' embeds it in the report)")
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--window", type=int, help="window for periodic inputs and totalizations")

    p = argparse.ArgumentParser(prog="weightcx", description="Weight structures on complexes of free modules.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_text, *inputs):
        sp = sub.add_parser(name, help=help_text, parents=[common])
        for i in inputs:
            sp.add_argument(i)
        return sp

    add("homology", "homology invariants in every degree", "input")
    add("hom", "K(M, N[shift]) as an abelian group", "source", "target").add_argument("--shift", type=int, default=0)
    add("is-contractible", "decide contractibility", "input")
    sp = add("weak-homotopy", "decide weak homotopy of two chain maps on a degree range", "first", "second")
    sp.add_argument("--lo", type=int)
    sp.add_argument("--hi", type=int)
    sp = add("weight-bounds", "weight interval, or a membership query", "input")
    sp.add_argument("--member", nargs=2, metavar=("SIDE", "N"), help="e.g. --member '>=' 0")
    add("truncate", "stupid truncation at a weight", "input").add_argument("--at", type=int, default=0)
    add("postnikov", "weight Postnikov tower with certification", "input")
    add("weight-complex", "the weight complex t(M)", "input")
    sp = add("pure-homology", "homology of a heart functor applied to t(M)", "input")
    sp.add_argument("--functor", default="hom_from:1")
    sp.add_argument("--degree", type=int)
    add("detect", "weight detection by pure homology", "input").add_argument("--level", type=int, default=0)
    add("wss", "weight spectral sequence for K(-, N)", "source", "target")
    add("free-replace", "free replacement of a complex of abelian groups", "input")
    add("karoubi-totalize", "windowed totalization of a Karoubi complex", "input")
    add("transport", "base change along a ring map", "input").add_argument("--functor", required=True)
    sp = add("check-axioms", "weight structure axioms on a seeded corpus")
    sp.add_argument("--size", type=int, default=50)
    sp.add_argument("--predicates", choices=("stupid", "degree"), default="stupid")
    sp = add("harness", "conservativity harness for a ring map")
    sp.add_argument("--functor", default="Z/4->Z/2")
    sp.add_argument("--size", type=int, default=200)
    add("verify", "re-check a certificate without solving", "input")
    return p


def run(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return BAD_INPUT if exc.code else OK
    try:
        report, code, cert = COMMANDS[args.command](args)
    except (InputError, SchemaError, RingError, ShapeError, ComplexError, ValueError, KeyError, TypeError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"weightcx: error: {msg}", file=stderr)
        return BAD_INPUT
    if cert is not None and args.emit_certificate:
        if args.emit_certificate == "-":
            report = {**report, "certificate": cert}
        else:
            with open(args.emit_certificate, "w", encoding="utf-8") as fh:
                fh.write(dumps(cert) + "\n")
    stdout.write(render(report, args.format) + "\n")
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
