"""Command-line interface.

All numeric output is exact: rationals as "num/den" strings, cyclotomic
values as coefficient arrays with their conductor.  Exit codes: 0 computed,
2 theorem hypotheses not met, 3 incomplete eigenform data, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict
from fractions import Fraction

from .cache import ResultCache, cache_get_put, request_digest
from .characters import (characters_of, gauss_sum, ideal_digest,
                         ray_class_group, trivial_character)
from .congruence import (IncompleteDataError, prime_by_label, prime_label,
                         search_congruence_primes, verify_congruence)
from .cyclotomic import CyclotomicNumber
from .eigenforms import EigenformParseError, parse_eigenform_file
from .eisenstein import (EisensteinSeries, constant_term_at_cusp,
                         construct_cusp_matrix, stabilize)
from .fields import (FieldError, FieldOrder, IdealHNF,
                     enumerate_integral_ideals)
from .lvalues import hecke_l_value

CHAR_RESOLVE_BOUND = 512


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_value(x) -> object:
    """Exact JSON form: plain string for rationals, object for cyclotomics."""
    if isinstance(x, (int, Fraction)):
        return format_rational(Fraction(x))
    m = x.minimal()
    if m.n == 1:
        return format_rational(m.coeffs[0])
    return {"conductor": m.n, "coeffs": [format_rational(c) for c in m.coeffs]}


def parse_value(obj) -> CyclotomicNumber:
    """Inverse of format_value."""
    if isinstance(obj, str):
        return CyclotomicNumber.rational(Fraction(obj))
    return CyclotomicNumber(int(obj["conductor"]),
                            [Fraction(c) for c in obj["coeffs"]])


def load_field(spec: str) -> FieldOrder:
    if os.path.isfile(spec):
        with open(spec, encoding="utf-8") as fh:
            return FieldOrder.from_description(json.load(fh))
    return FieldOrder.by_id(spec)


def parse_ideal_spec(F: FieldOrder, spec: str) -> IdealHNF:
    """'(int)' principal, 'p.i' prime label, or '*'-joined products."""
    out = F.ideal_one()
    for token in spec.split("*"):
        token = token.strip()
        if token in ("1", "O", "o"):
            continue
        if "." in token:
            out = out * prime_by_label(F, token)
        else:
            out = out * F.principal(int(token))
    return out


def resolve_character(F: FieldOrder, label: str):
    """'trivial', '<modulus-spec>#<idx>', or the full digest label."""
    if label == "trivial":
        return trivial_character(F)
    if "#" in label:
        spec, idx = label.rsplit("#", 1)
        G = ray_class_group(F, parse_ideal_spec(F, spec))
        chars = characters_of(G)
        i = int(idx)
        if not 0 <= i < len(chars):
            raise UsageError(f"character index {i} out of range (0..{len(chars)-1})")
        return chars[i]
    if label.startswith("F:"):
        # F:<field-id>/m:<digest>/idx:<k> -- recover the modulus by digest
        parts = dict(p.split(":", 1) for p in label.split("/"))
        want = parts.get("m")
        idx = int(parts.get("idx", "0"))
        for I in enumerate_integral_ideals(F, CHAR_RESOLVE_BOUND):
            if ideal_digest(I) == want:
                G = ray_class_group(F, I)
                return characters_of(G)[idx]
        raise UsageError(
            f"cannot resolve modulus digest {want} below norm {CHAR_RESOLVE_BOUND}")
    raise UsageError(f"unrecognized character label {label!r}")


def parse_element(F: FieldOrder, text: str):
    coords = [Fraction(c) for c in text.split(",")]
    return F(*coords)


def _emit(payload, args) -> None:
    indent = args.json_indent if args.json_indent and args.json_indent > 0 else None
    print(json.dumps(payload, indent=indent))


def build_parser() -> _Parser:
    p = _Parser(prog="eiscong", description=__doc__)
    p.add_argument("--field", default="rational",
                   help="field id (rational, rq5, ...) or a JSON description file")
    p.add_argument("--cache-dir", default=os.environ.get("EISCONG_CACHE"))
    p.add_argument("--json-indent", type=int, default=None)
    p.add_argument("--explain", action="store_true",
                   help="attach provenance metadata to the output")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("field", help="describe the field order")

    sub.add_parser("classgroup", help="class group and narrow class group")

    pc = sub.add_parser("chars", help="list ray class characters of a modulus")
    pc.add_argument("--modulus", required=True,
                    help="ideal spec: integer, prime label p.i, or products a*b")

    pl = sub.add_parser("lvalue", help="L(chi, 1-k) exactly")
    pl.add_argument("--char", required=True)
    pl.add_argument("--k", type=int, required=True)

    pg = sub.add_parser("gauss", help="Gauss sum of a character")
    pg.add_argument("--char", required=True)

    pe = sub.add_parser("eis", help="Eisenstein series data")
    esub = pe.add_subparsers(dest="eis_command", required=True)
    pec = esub.add_parser("coeffs")
    pec.add_argument("--eta", required=True)
    pec.add_argument("--psi", required=True)
    pec.add_argument("--k", type=int, required=True)
    pec.add_argument("--bound", type=int, required=True)
    pet = esub.add_parser("cusp-term")
    pet.add_argument("--eta", required=True)
    pet.add_argument("--psi", required=True)
    pet.add_argument("--k", type=int, required=True)
    pet.add_argument("--series", choices=["base", "raised", "delta-eta", "delta-psi"],
                     default="base")
    pet.add_argument("--p", help="prime label, required for raised/delta series")
    pet.add_argument("--cusp", required=True,
                     help="alpha:gamma with comma-separated coordinates")
    pet.add_argument("--lam", "--lambda", dest="lam", type=int, default=0)

    ps = sub.add_parser("search", help="congruence prime search (Theorems 5.1/5.2)")
    ps.add_argument("--eta", required=True)
    ps.add_argument("--psi", required=True)
    ps.add_argument("--k", type=int, required=True)
    ps.add_argument("--p", required=True, help="prime label")

    pv = sub.add_parser("verify", help="verify a congruence against eigenform data")
    pv.add_argument("--eta", default="trivial")
    pv.add_argument("--psi", default="trivial")
    pv.add_argument("--k", type=int, required=True)
    pv.add_argument("--p", required=True)
    pv.add_argument("--l", type=int, required=True)
    pv.add_argument("--eigenform", required=True)
    pv.add_argument("--bound", type=int, required=True)

    pca = sub.add_parser("cache", help="cache maintenance")
    pca.add_argument("action", choices=["clear", "stats"])
    return p


def _ideal_payload(I: IdealHNF) -> dict:
    return {"digest": ideal_digest(I), "norm": format_rational(I.norm()),
            "hnf": [list(r) for r in I.rows], "den": I.den}


def run_command(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 64
    cache = ResultCache(args.cache_dir)
    try:
        return _dispatch(args, cache)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 64
    except IncompleteDataError as exc:
        _emit({"error_kind": "incomplete-data", "missing": exc.missing}, args)
        return 3
    except EigenformParseError as exc:
        _emit({"error_kind": "eigenform-parse", "detail": str(exc)}, args)
        return 65
    except FieldError as exc:
        _emit({"error_kind": "domain", "detail": str(exc)}, args)
        return 65


def _dispatch(args, cache) -> int:
    F = load_field(args.field)

    if args.command == "field":
        _emit({
            "label": F.label, "degree": F.degree, "discriminant": F.disc,
            "different": _ideal_payload(F.different),
        }, args)
        return 0

    if args.command == "classgroup":
        cd = F.class_data()
        _emit({
            "h": cd.h, "h_plus": cd.h_plus,
            "wide_invariants": cd.wide_invariants,
            "narrow_invariants": cd.narrow_invariants,
            "wide_reps": [_ideal_payload(I) for I in cd.wide_reps],
            "narrow_reps": [_ideal_payload(I) for I in cd.narrow_reps],
        }, args)
        return 0

    if args.command == "chars":
        m = parse_ideal_spec(F, args.modulus)
        G = ray_class_group(F, m)
        out = {
            "modulus": _ideal_payload(m),
            "group_order": G.order,
            "invariants": G.invariants,
            "characters": [],
        }
        for i, ch in enumerate(characters_of(G)):
            cond, sig = ch.conductor()
            out["characters"].append({
                "index": i, "label": ch.label(), "order": ch.order,
                "signature": list(sig),
                "conductor_norm": format_rational(cond.norm()),
                "primitive": ch.is_primitive(),
            })
        _emit(out, args)
        return 0

    if args.command == "lvalue":
        chi = resolve_character(F, args.char)
        payload = {"op": "lvalue", "field": F.label, "char": chi.label(),
                   "k": args.k}
        def compute():
            lv = hecke_l_value(chi, args.k)
            return {"value": format_value(lv.value), "method": lv.method,
                    "conductor": lv.value.minimal().n}
        value, provenance = cache_get_put(cache, payload, compute)
        out = dict(value)
        out["convention"] = "L of the character as given (Euler factors at the modulus removed)"
        if args.explain:
            out["provenance"] = provenance
            out["request_digest"] = request_digest(payload)
        _emit(out, args)
        return 0

    if args.command == "gauss":
        chi = resolve_character(F, args.char)
        tau = gauss_sum(chi)
        out = {"tau": format_value(tau), "primitive": chi.is_primitive()}
        if not chi.is_primitive():
            out["note"] = "imprimitive character: literal defining sum, no correction"
        _emit(out, args)
        return 0

    if args.command == "eis":
        eta = resolve_character(F, args.eta)
        psi = resolve_character(F, args.psi)
        E = EisensteinSeries(eta, psi, args.k)
        if args.eis_command == "coeffs":
            rows = []
            for I in enumerate_integral_ideals(F, args.bound):
                rows.append({"ideal": _ideal_payload(I),
                             "value": format_value(E.coefficient(I))})
            _emit({"series": E.describe(), "level_norm": format_rational(E.level.norm()),
                   "newform": E.is_newform, "coefficients": rows}, args)
            return 0
        # cusp-term
        alpha_txt, gamma_txt = args.cusp.split(":")
        alpha = parse_element(F, alpha_txt)
        gamma = parse_element(F, gamma_txt)
        p = prime_by_label(F, args.p) if args.p else None
        level = E.level if args.series == "base" else E.level * p
        cd = F.class_data(coprime_to=level)
        datum = construct_cusp_matrix(alpha, gamma, args.lam, level, cd)
        if args.series == "base":
            val = constant_term_at_cusp(E, datum)
        elif args.series == "raised":
            val = constant_term_at_cusp(("raised", E), datum, p=p)
        else:
            which = "eta" if args.series == "delta-eta" else "psi"
            S = stabilize(E, p, which)
            val = constant_term_at_cusp(S, datum)
        _emit({"series": args.series, "lambda": args.lam,
               "n1_norm": format_rational(datum.n1.norm()),
               "n2_norm": format_rational(datum.n2.norm()),
               "value": format_value(val),
               "two_power_convention": "d"}, args)
        return 0

    if args.command == "search":
        eta = resolve_character(F, args.eta)
        psi = resolve_character(F, args.psi)
        p = prime_by_label(F, args.p)
        rep = search_congruence_primes(eta, psi, args.k, p)
        out = {
            "inputs": {"field": F.label, "eta": rep.eta_label, "psi": rep.psi_label,
                       "k": rep.k, "p": rep.p_label},
            "hypotheses": rep.hypotheses,
            "within_theorem": rep.within_theorem,
            "l_value": format_value(rep.l_value),
            "euler_factor": format_value(rep.euler_factor),
            "x": format_value(rep.x_value),
            "value_conductor": rep.value_conductor,
            "candidates": [dict(asdict(c), theorem_applicable=c.theorem_applicable)
                           for c in rep.candidates],
            "newform_conditions": [asdict(nf) for nf in rep.newform],
            "applicable_primes": rep.candidate_primes(),
            "newform_possible": {str(l): rep.newform_possible(l)
                                 for l in rep.candidate_primes()},
            "conventions": rep.conventions,
        }
        _emit(out, args)
        return 0 if rep.within_theorem else 2

    if args.command == "verify":
        eta = resolve_character(F, args.eta)
        psi = resolve_character(F, args.psi)
        p = prime_by_label(F, args.p)
        E = EisensteinSeries(eta, psi, args.k)
        data = parse_eigenform_file(args.eigenform)
        rep = verify_congruence(E, p, data, args.l, args.bound)
        _emit({
            "l": rep.l, "bound": rep.bound,
            "checked": len(rep.checked_primes),
            "lambdas": [asdict(lv) for lv in rep.lambdas],
            "notes": rep.notes,
            "all_passed": all(lv.passed for lv in rep.lambdas),
        }, args)
        return 0

    if args.command == "cache":
        if args.action == "clear":
            _emit({"cleared": cache.clear()}, args)
        else:
            _emit(cache.stats(), args)
        return 0

    raise UsageError(f"unknown command {args.command}")


def main(argv=None) -> int:
    return run_command(argv if argv is not None else sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
