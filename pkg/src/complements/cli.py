"""Command-line front end.

Every subcommand prints one JSON document on stdout. Exit codes:

0  success
1  domain error (argument outside the operation's domain)
2  nothing found: no index, no decomposition, a covering counterexample,
   or a failing batch case
3  malformed input (bad flags, unparsable numbers or JSON, unreadable file)

Numbers are written as exact fraction strings. ``--decimal K`` adds an
``approx_decimal`` copy of the output with K-digit decimal renderings.
Set ``COMPLEMENTS_LOG`` (e.g. ``DEBUG``) for log output on stderr.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction
from pathlib import Path

from . import core, curves, diophantine, elliptic, hyperstandard, rounding, surfaces
from .core import (
    ComplementsError,
    CoveringFailure,
    DomainError,
    MalformedInput,
    NoDecomposition,
    format_rational,
    parse_rational,
    parse_vector,
)

log = logging.getLogger("complements")

EXIT_OK, EXIT_DOMAIN, EXIT_NOT_FOUND, EXIT_MALFORMED = 0, 1, 2, 3

# subcommand -> library operations it reaches
REGISTRY = {
    "norm": (core.linf_norm,),
    "floor": (core.floor_rational,),
    "round": (rounding.round_coeff,),
    "round-vector": (rounding.round_vector,),
    "coeff-ok": (rounding.complement_coeff_ok,),
    "phi": (hyperstandard.phi_contains,),
    "gamma": (hyperstandard.gamma_contains, hyperstandard.low_approx, hyperstandard.gamma_enumerate_upto),
    "find-n": (diophantine.find_complementary_n,),
    "check-restriction": (diophantine.check_restriction,),
    "delta": (diophantine.continuity_delta,),
    "simultaneous": (diophantine.find_simultaneous_n,),
    "cover": (diophantine.construct_covering_set,),
    "verify-cover": (diophantine.verify_covering,),
    "curve": (
        curves.component_degree_data,
        curves.classify,
        curves.has_r_complement,
        curves.r_complement,
        curves.find_n_complement,
        curves.is_n_complement,
    ),
    "merge": (curves.merge_small_multiplicities,),
    "negdef": (surfaces.is_negative_definite,),
    "zariski": (surfaces.zariski_decompose,),
    "nef-check": (surfaces.check_nef,),
    "maximality": (surfaces.check_maximality,),
    "kodaira": (elliptic.divisorial_coeff, elliptic.complement_index, elliptic.adjunction_index_elliptic),
}


class NotFound(ComplementsError):
    """A search finished without a result."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise MalformedInput(f"{self.prog}: {message}")


# ---------------------------------------------------------------- argument types

def _rational(text):
    try:
        return parse_rational(text)
    except MalformedInput as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _vector(text):
    try:
        return parse_vector(text)
    except MalformedInput as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _int_list(text):
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from None


def _rows(text):
    """Vectors separated by ';', entries by ','."""
    return tuple(_vector(part) for part in text.split(";"))


def _load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


# ---------------------------------------------------------------- output

def _plain(obj):
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    return obj


def _decimal(q: Fraction, digits: int) -> str:
    with localcontext() as ctx:
        ctx.prec = digits + 60
        value = Decimal(q.numerator) / Decimal(q.denominator)
        return str(value.quantize(Decimal(1).scaleb(-digits), rounding=ROUND_HALF_EVEN))


def _approx(obj, digits):
    if isinstance(obj, Fraction):
        return _decimal(obj, digits)
    if isinstance(obj, dict):
        return {str(k): _approx(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_approx(v, digits) for v in obj]
    return obj


# ---------------------------------------------------------------- handlers

def _restriction(args):
    return diophantine.RestrictionData(args.I, args.v, args.e, args.eps)


def _problem(args):
    caps = args.c
    if len(caps) == 1 and args.m > 1:
        caps = caps * args.m
    if len(caps) != args.m:
        raise DomainError(f"--m {args.m} but {len(caps)} capacities given")
    return diophantine.CoveringProblem(_restriction(args), args.d, caps)


def cmd_norm(args):
    return {"result": core.linf_norm(args.v)}


def cmd_floor(args):
    return {"result": core.floor_rational(args.a)}


def cmd_round(args):
    return {"result": rounding.round_coeff(args.a, args.n)}


def cmd_round_vector(args):
    return {"result": list(rounding.round_vector(args.b, args.n))}


def cmd_coeff_ok(args):
    return {"result": rounding.complement_coeff_ok(args.d, args.d_plus, args.n)}


def cmd_phi(args):
    return {"result": hyperstandard.phi_contains(args.contains, args.rset)}


def cmd_gamma(args):
    spec = hyperstandard.GammaSpec.of(args.nset, args.rset)
    if args.contains is not None:
        return {"result": hyperstandard.gamma_contains(args.contains, spec)}
    if args.low_approx is not None:
        return {"result": hyperstandard.low_approx(args.low_approx, spec)}
    return {"result": hyperstandard.gamma_enumerate_upto(args.enumerate_upto, spec)}


def cmd_find_n(args):
    w = diophantine.find_complementary_n(_restriction(args), args.n_max)
    if w is None:
        raise NotFound(f"no admissible n <= {args.n_max}")
    return {"n": w.n, "v_n": list(w.v_n)}


def cmd_check_restriction(args):
    w = diophantine.RestrictionWitness(args.n, args.v_n)
    return {"result": diophantine.check_restriction(w, _restriction(args))}


def cmd_delta(args):
    return {"result": diophantine.continuity_delta(args.e_prime, args.l, args.eps)}


def cmd_simultaneous(args):
    problem = _problem(args)
    n = diophantine.find_simultaneous_n(problem, args.boundaries, args.n_max)
    if n is None:
        raise NotFound(f"no admissible n <= {args.n_max}")
    return {"n": n}


def cmd_cover(args):
    n_set = diophantine.construct_covering_set(_problem(args), args.denom_bound, args.n_max)
    return {"n_set": sorted(n_set), "denom_bound": args.denom_bound}


class _Counterexample(ComplementsError):
    def __init__(self, payload):
        super().__init__("counterexample found")
        self.payload = payload


def cmd_verify_cover(args):
    hit = diophantine.verify_covering(args.n_set, _problem(args), args.denom_bound, jobs=args.jobs)
    if hit is not None:
        raise _Counterexample({"result": "counterexample", "tuple": [list(v) for v in hit]})
    return {"result": "OK", "denom_bound": args.denom_bound}


def _curve(path):
    return curves.CurvePair.from_json(_load_json(path))


def cmd_curve(args):
    curve = _curve(args.file)
    action = args.action
    if action == "degrees":
        return {"components": [
            {"id": d.id, "genus": d.genus, "node_preimages": d.nodes, "degree": d.degree}
            for d in curves.component_degree_data(curve)
        ]}
    if action == "classify":
        cls = curves.classify(curve)
        out = {"class": cls.tag.value}
        if cls.chain_order is not None:
            out["order"] = list(cls.chain_order)
        return out
    if action == "r-complement":
        if not curves.has_r_complement(curve):
            return {"has_r_complement": False}
        comp = curves.r_complement(curve)
        return {"has_r_complement": True, "boundary": comp.to_json()["boundary"],
                "supports_extended": comp.supports_extended}
    if action == "complement":
        if args.candidates is None:
            raise MalformedInput("curve complement needs --candidates")
        comp = curves.find_n_complement(curve, args.candidates)
        if comp is None:
            raise NotFound("no candidate index gives an n-complement")
        return comp.to_json()
    # validate
    if args.b_plus is None or args.n is None:
        raise MalformedInput("curve validate needs --b-plus FILE and --n")
    raw = _load_json(args.b_plus)
    entries = raw.get("boundary", raw) if isinstance(raw, dict) else raw
    try:
        plus = [curves.BoundaryPoint(str(b["component"]), str(b["point"]), parse_rational(str(b["mult"])))
                for b in entries]
    except (KeyError, TypeError) as exc:
        raise MalformedInput(f"bad B+ JSON: {exc}") from exc
    return {"result": curves.is_n_complement(curve, plus, args.n)}


def cmd_merge(args):
    return {"result": list(curves.merge_small_multiplicities(args.mults, args.threshold))}


def _model(path):
    return surfaces.SurfaceModel.from_json(_load_json(path))


def _divisor(path):
    return surfaces.DivisorExpr.from_json(_load_json(path))


def cmd_negdef(args):
    return {"result": surfaces.is_negative_definite(_model(args.model).q)}


def cmd_zariski(args):
    try:
        return surfaces.zariski_decompose(_model(args.model), _divisor(args.divisor)).to_json()
    except NoDecomposition as exc:
        raise NotFound(str(exc)) from exc


def cmd_nef_check(args):
    return {"result": surfaces.check_nef(_model(args.model), _divisor(args.divisor))}


def cmd_maximality(args):
    model = _model(args.model)
    return {"result": surfaces.check_maximality(model, _divisor(args.divisor), _divisor(args.sub))}


def cmd_kodaira(args):
    t = elliptic.parse_kodaira(args.type)
    return {
        "type": str(t),
        "d_P": elliptic.divisorial_coeff(t),
        "complement_index": elliptic.complement_index(t),
        "adjunction_index": elliptic.adjunction_index_elliptic(),
    }


def cmd_batch(args):
    path = Path(args.manifest)
    manifest = _load_json(path)
    try:
        cases = manifest["cases"] if isinstance(manifest, dict) else None
        if not isinstance(cases, list):
            raise TypeError("'cases' must be a list")
        for case in cases:
            if not isinstance(case.get("argv"), list):
                raise TypeError(f"case {case.get('name')!r} has no argv list")
    except (TypeError, AttributeError) as exc:
        raise MalformedInput(f"{path}: bad manifest: {exc}") from exc
    base = str(path.resolve().parent)

    def run_case(case):
        argv = [str(a).replace("{dir}", base) for a in case["argv"]]
        code, payload = execute(argv)
        want_code = case.get("exit", 0)
        problems = []
        if code != want_code:
            problems.append(f"exit {code}, expected {want_code}")
        for key, want in case.get("expect", {}).items():
            got = payload.get(key) if isinstance(payload, dict) else None
            if got != want:
                problems.append(f"{key}: got {got!r}, expected {want!r}")
        return {"name": case.get("name", " ".join(argv)), "ok": not problems, "detail": "; ".join(problems)}

    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            report = list(pool.map(run_case, cases))
    else:
        report = [run_case(c) for c in cases]
    failed = [r["name"] for r in report if not r["ok"]]
    out = {"cases": report, "passed": len(report) - len(failed), "failed": len(failed)}
    if failed:
        raise _Counterexample({**out, "failing": failed})
    return out


# ---------------------------------------------------------------- parser

def _add_restriction(p, required=True):
    p.add_argument("--I", type=int, default=None if required else 1, required=required)
    p.add_argument("--v", type=_vector, default=None if required else (Fraction(0),), required=required)
    p.add_argument("--e", type=_vector, default=None if required else (Fraction(1),), required=required)
    p.add_argument("--eps", type=_rational, default=None if required else Fraction(2), required=required)


def _add_problem(p):
    _add_restriction(p, required=False)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--c", type=_vector, required=True, help="capacities, comma separated")
    p.add_argument("--d", type=int, required=True)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--decimal", type=int, metavar="K", help="add approximate K-digit decimals")
    common.add_argument("--jobs", type=int, default=1, help="workers for grid and batch work")

    parser = _Parser(prog="complements", description="Exact arithmetic of n-complements.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    p = add("norm", cmd_norm, "max-norm of a vector")
    p.add_argument("--v", type=_vector, required=True)
    p = add("floor", cmd_floor, "floor of a rational")
    p.add_argument("--a", type=_rational, required=True)
    p = add("round", cmd_round, "a^[n]")
    p.add_argument("--a", type=_rational, required=True)
    p.add_argument("--n", type=int, required=True)
    p = add("round-vector", cmd_round_vector, "componentwise a^[n]")
    p.add_argument("--b", type=_vector, required=True)
    p.add_argument("--n", type=int, required=True)
    p = add("coeff-ok", cmd_coeff_ok, "is d_plus >= d^[n]")
    p.add_argument("--d", type=_rational, required=True)
    p.add_argument("--d-plus", type=_rational, required=True)
    p.add_argument("--n", type=int, required=True)

    p = add("phi", cmd_phi, "membership in Phi(R)")
    p.add_argument("--rset", type=_vector, default=(Fraction(0), Fraction(1)))
    p.add_argument("--contains", type=_rational, required=True)
    p = add("gamma", cmd_gamma, "queries on Gamma(N, Phi)")
    p.add_argument("--rset", type=_vector, default=(Fraction(0), Fraction(1)))
    p.add_argument("--nset", type=_int_list, default=())
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--contains", type=_rational)
    mode.add_argument("--low-approx", type=_rational)
    mode.add_argument("--enumerate-upto", type=_rational)

    p = add("find-n", cmd_find_n, "smallest index under complementary restrictions")
    _add_restriction(p)
    p.add_argument("--n-max", type=int, required=True)
    p = add("check-restriction", cmd_check_restriction, "check a witness (n, v_n)")
    _add_restriction(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--v-n", type=_vector, required=True)
    p = add("delta", cmd_delta, "explicit continuity radius")
    p.add_argument("--e-prime", type=_vector, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--eps", type=_rational, required=True)
    p = add("simultaneous", cmd_simultaneous, "smallest index rounding given boundaries within capacity")
    _add_problem(p)
    p.add_argument("--boundaries", type=_rows, required=True, help="vectors separated by ';'")
    p.add_argument("--n-max", type=int, required=True)
    p = add("cover", cmd_cover, "greedy covering index set on a grid")
    _add_problem(p)
    p.add_argument("--denom-bound", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p = add("verify-cover", cmd_verify_cover, "exhaustive grid check of an index set")
    _add_problem(p)
    p.add_argument("--n-set", type=_int_list, required=True)
    p.add_argument("--denom-bound", type=int, required=True)

    p = add("curve", cmd_curve, "nodal curve pairs")
    p.add_argument("action", choices=["degrees", "classify", "r-complement", "complement", "validate"])
    p.add_argument("file")
    p.add_argument("--candidates", type=_int_list)
    p.add_argument("--b-plus")
    p.add_argument("--n", type=int)
    p = add("merge", cmd_merge, "join small multiplicities")
    p.add_argument("--mults", type=_vector, required=True)
    p.add_argument("--threshold", type=_rational, default=Fraction(1, 2))

    p = add("negdef", cmd_negdef, "negative definiteness of a model's matrix")
    p.add_argument("model")
    p = add("zariski", cmd_zariski, "Zariski decomposition")
    p.add_argument("model")
    p.add_argument("divisor")
    p = add("nef-check", cmd_nef_check, "nef on the model")
    p.add_argument("model")
    p.add_argument("divisor")
    p = add("maximality", cmd_maximality, "nef l <= d lies below the mobile part of d")
    p.add_argument("model")
    p.add_argument("divisor")
    p.add_argument("sub", help="divisor JSON for l")

    p = add("kodaira", cmd_kodaira, "table data for a Kodaira fibre type")
    p.add_argument("type")

    p = add("batch", cmd_batch, "run a manifest of cases")
    p.add_argument("manifest")
    return parser


def execute(argv) -> tuple:
    """Run one command; return ``(exit_code, payload)`` without printing."""
    try:
        args = build_parser().parse_args(argv)
        payload = args.func(args)
        code = EXIT_OK
    except _Counterexample as exc:
        return EXIT_NOT_FOUND, _plain(exc.payload)
    except (NotFound, NoDecomposition) as exc:
        return EXIT_NOT_FOUND, {"error": "not_found", "message": str(exc)}
    except CoveringFailure as exc:
        return EXIT_NOT_FOUND, {"error": "not_found", "message": str(exc),
                                "tuple": _plain([list(v) for v in exc.witness])}
    except MalformedInput as exc:
        return EXIT_MALFORMED, {"error": "malformed_input", "message": str(exc)}
    except DomainError as exc:
        return EXIT_DOMAIN, {"error": "domain_error", "message": str(exc)}
    out = _plain(payload)
    if getattr(args, "decimal", None) is not None:
        if args.decimal < 0:
            return EXIT_MALFORMED, {"error": "malformed_input", "message": "--decimal must be >= 0"}
        out["approx_decimal"] = _plain(_approx(payload, args.decimal))
    return code, out


def run(argv=None) -> int:
    level = os.environ.get("COMPLEMENTS_LOG")
    if level:
        logging.basicConfig(level=level.upper(), stream=sys.stderr, format="%(name)s: %(message)s")
    code, payload = execute(sys.argv[1:] if argv is None else list(argv))
    print(json.dumps(payload))
    if code != EXIT_OK and isinstance(payload, dict) and "message" in payload:
        print(payload["message"], file=sys.stderr)
    return code


def main():
    sys.exit(run())
