"""``qkrec`` command line.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 parse error.
Results go to stdout, diagnostics (warnings, dropped-degree counts) to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import re
import sys
from pathlib import Path

from . import serialize, verify
from .jfun import (
    ReconParams,
    jsym_cp1,
    q_string,
    reconstruct_t2,
    reconstruct_t3,
    small_j,
    theorem1_flow,
)
from .k_ring import KClass, KRingSpec
from .lambda_ring import DomainError, LambdaRing, LambdaScalar, StructureError
from .novikov import DiffOp, DiffTerm, NovikovSeries, apply_diffop, project_plus_series
from .oracle import cp1_degree1_inputs, omega_pair_example
from .parsing import ParseError, narrow, parse_qrat, scan_generators
from .q_algebra import QLaurent, QRat, expand_at_infinity, expand_at_one, expand_at_zero, project_plus

log = logging.getLogger("qkrec")


class UsageError(Exception):
    pass


# ------------------------------------------------------------------ helpers
def _read_json(source: str):
    text = source if source.lstrip().startswith(("{", "[")) else Path(source).read_text()
    return json.loads(text)


def _space(args) -> KRingSpec:
    if not args.space:
        raise UsageError("--space is required (e.g. CP:1 or CP:1,2)")
    try:
        return KRingSpec.parse(args.space)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _need(args, *names):
    for n in names:
        if getattr(args, n, None) is None:
            raise UsageError(f"--{n.replace('_', '-')} is required for this command")


def _novikov_cap(args, spec: KRingSpec) -> tuple[int, ...]:
    _need(args, "novikov_cap")
    caps = tuple(int(x) for x in str(args.novikov_cap).split(","))
    if len(caps) == 1:
        caps = caps * spec.rank
    if len(caps) != spec.rank or any(c < 0 for c in caps):
        raise UsageError(f"--novikov-cap needs one non-negative entry per factor of {spec.label()}")
    return caps


def _ring(args, texts=()) -> LambdaRing:
    _need(args, "weight_cap")
    if args.weight_cap < 0:
        raise UsageError("--weight-cap must be non-negative")
    if args.names is not None:
        names = tuple(n for n in args.names.split(",") if n)
    else:
        names = tuple(scan_generators(texts))
    try:
        return LambdaRing(names, args.weight_cap, args.mode)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _multi(text: str, spec: KRingSpec) -> tuple[int, ...]:
    try:
        a = tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise UsageError(f"invalid exponent {text!r}") from exc
    if len(a) != spec.rank:
        raise UsageError(f"exponent {text!r} needs {spec.rank} entries")
    return a


def _assignments(items, spec) -> dict[tuple[int, ...], str]:
    out = {}
    for item in items or ():
        if "=" not in item:
            raise UsageError(f"expected A=EXPR, got {item!r}")
        a, expr = item.split("=", 1)
        out[_multi(a.strip(), spec)] = expr
    return out


def _term_specs(items, spec):
    """``COEF@A[@E]``: coefficient, translation exponent, optional Q-shift."""
    out = []
    for item in items or ():
        parts = item.rsplit("@", 2) if item.count("@") >= 2 else item.rsplit("@", 1)
        if len(parts) < 2:
            raise UsageError(f"expected COEF@A or COEF@A@E, got {item!r}")
        coef, a = parts[0], _multi(parts[1], spec)
        e = _multi(parts[2], spec) if len(parts) == 3 else spec.zero_index
        out.append((coef, a, e))
    return out


def _diffop(args, spec, ring) -> DiffOp:
    if args.op:
        return serialize.diffop_from_json(_read_json(args.op), spec, ring)
    terms = []
    for coef, a, e in _term_specs(args.term, spec):
        f = parse_qrat(coef, ring, spec)
        if not f.is_laurent():
            raise DomainError(f"operator coefficient {coef!r} is not a Laurent polynomial")
        terms.append(DiffTerm(f.to_laurent(), e, a))
    if not terms:
        raise UsageError("give the operator with --op or one or more --term COEF@A[@E]")
    return DiffOp(spec, ring, terms)


def _seed(args, texts=()) -> NovikovSeries:
    """Seed series: a JSON file/document via --in/--seed, else the small J-function of --space."""
    source = getattr(args, "input", None) or getattr(args, "seed", None)
    if source and not re.match(r"^cp\d+(xcp\d+)*-small-j$", source.lower()):
        series = serialize.series_from_json(_read_json(source))
        if args.weight_cap is not None and args.weight_cap != series.ring.cap:
            raise UsageError(f"--weight-cap {args.weight_cap} does not match the input ({series.ring.cap})")
        return series
    if source:
        spec = KRingSpec(tuple(int(p[2:]) for p in source.lower()[:-len("-small-j")].split("x")))
    else:
        spec = _space(args)
    return small_j(spec, _ring(args, texts), _novikov_cap(args, spec))


def _params(args, spec, ring) -> ReconParams:
    doc = _read_json(args.params) if args.params else {}
    p = serialize.params_from_json(doc, spec, ring)
    for group in ("eps", "tau", "c"):
        for a, text in _assignments(getattr(args, group), spec).items():
            v = narrow(parse_qrat(text, ring, spec))
            if group != "c" and not isinstance(v, LambdaScalar):
                raise DomainError(f"{group}[{a}] must be a lambda-scalar, got {text!r}")
            getattr(p, group)[a] = v
    return p


def _expr_texts(args) -> list[str]:
    texts = []
    for group in ("eps", "tau", "c", "term"):
        for item in getattr(args, group, None) or ():
            texts.append(item.split("=", 1)[-1].split("@")[0])
    for name in ("expr", "fplus", "jd", "lam_expr", "eps_expr", "shift"):
        v = getattr(args, name, None)
        if v:
            texts.append(v)
    return texts


# ------------------------------------------------------------------- output
def _emit_series(series: NovikovSeries, args):
    if series.dropped:
        print(f"qkrec: {series.dropped} contribution(s) dropped outside the Novikov cap {series.cap}",
              file=sys.stderr)
    if args.format == "json":
        print(json.dumps(serialize.series_to_json(series), indent=1))
    else:
        print(series.format(args.basis))


def _emit_value(v, args):
    if args.format == "json":
        if isinstance(v, QRat):
            doc = serialize.qrat_to_json(v)
        elif isinstance(v, QLaurent):
            doc = serialize.laurent_to_json(v)
        elif isinstance(v, KClass):
            doc = serialize.kclass_to_json(v)
        else:
            doc = serialize.scalar_to_json(v)
        print(json.dumps(doc, indent=1))
    else:
        print(v.format(args.basis) if hasattr(v, "format") and not isinstance(v, (KClass, LambdaScalar)) else v)


# ----------------------------------------------------------------- commands
def cmd_jfun(args):
    if args.kind == "small":
        spec = _space(args)
        ring = _ring(args)
        _emit_series(small_j(spec, ring, _novikov_cap(args, spec)), args)
    else:
        ring = _ring(args, [args.lam_expr, args.eps_expr])
        spec = KRingSpec((1,))
        if args.space and _space(args) != spec:
            raise UsageError("the symmetrized family is defined for CP:1")
        if ring.mode != "free":
            raise UsageError("the symmetrized family is built in the free mode and specialized afterwards")
        lam = narrow(parse_qrat(args.lam_expr, ring), False)
        eps = narrow(parse_qrat(args.eps_expr, ring), False)
        for label, v in (("--lam", lam), ("--eps", eps)):
            if not isinstance(v, LambdaScalar):
                raise DomainError(f"{label} must be a lambda-scalar")
        _emit_series(jsym_cp1(lam, eps, _novikov_cap(args, spec)[0]), args)
    return 0


def cmd_reconstruct(args):
    seed = _seed(args, _expr_texts(args))
    p = _params(args, seed.spec, seed.ring)
    fn = reconstruct_t2 if args.kind == "t2" else reconstruct_t3
    if args.kind == "t2" and p.tau:
        raise UsageError("tau parameters belong to the t3 reconstruction")
    _emit_series(fn(seed, p), args)
    return 0


def cmd_flow(args):
    seed = _seed(args, _expr_texts(args))
    D = _diffop(args, seed.spec, seed.ring)
    _emit_series(theorem1_flow(seed, D, adams_raises_q=not args.fixed_q), args)
    return 0


def cmd_qstring(args):
    seed = _seed(args, _expr_texts(args))
    x = narrow(parse_qrat(args.shift, seed.ring), False)
    if not isinstance(x, LambdaScalar):
        raise DomainError("the q-string shift must be a lambda-scalar")
    _emit_series(q_string(seed, x), args)
    return 0


def cmd_apply_op(args):
    seed = _seed(args, _expr_texts(args))
    _emit_series(apply_diffop(_diffop(args, seed.spec, seed.ring), seed), args)
    return 0


def cmd_project_plus(args):
    if args.expr:
        spec = _space(args)
        ring = _ring(args, [args.expr])
        _emit_value(project_plus(parse_qrat(args.expr, ring, spec)), args)
        return 0
    if not args.input:
        raise UsageError("give --in SERIES.json or --expr EXPR")
    _emit_series(project_plus_series(_seed(args)), args)
    return 0


def cmd_pair_omega(args):
    if args.fplus or args.jd:
        if not (args.fplus and args.jd):
            raise UsageError("--fplus and --jd go together")
        spec = _space(args)
        ring = _ring(args, [args.fplus, args.jd])
        value = omega_pair_example(parse_qrat(args.fplus, ring, spec), parse_qrat(args.jd, ring, spec))
        doc = {"pairing": str(value)}
    else:
        ring = _ring(args, [args.lam_expr, args.eps_expr])
        lam = narrow(parse_qrat(args.lam_expr, ring), False)
        eps = narrow(parse_qrat(args.eps_expr, ring), False)
        f_plus, J1 = cp1_degree1_inputs(lam, eps)
        value = omega_pair_example(f_plus, J1)
        doc = {"fplus": f_plus.format("P"), "pairing": str(value), "f0_degree1": str(value / 2)}
    if args.format == "json":
        print(json.dumps(doc, indent=1))
    else:
        for k, v in doc.items():
            print(f"{k}: {v}")
    return 0


def cmd_verify(args):
    names = list(verify.CHECKS) if args.name == "all" else [args.name]
    if args.name != "all" and args.name not in verify.CHECKS:
        raise UsageError(f"unknown identity {args.name!r}; choose from all, {', '.join(verify.CHECKS)}")
    results = [verify.run(n, weight_cap=args.weight_cap, novikov_cap=args.novikov_cap) for n in names]
    if args.format == "json":
        print(json.dumps(results if args.name == "all" else results[0], indent=1))
    else:
        for r in results:
            caps = ",".join(f"{k}={v}" for k, v in r["caps"].items())
            line = f"{r['status'].upper():4} {r['identity']} [{caps}] {r['seconds']}s"
            print(line + (f" ({r['note']})" if r["note"] else ""))
    return 0 if all(r["status"] == "pass" for r in results) else 1


def cmd_expand(args):
    spec = _space(args)
    ring = _ring(args, [args.expr])
    f = parse_qrat(args.expr, ring, spec)
    n = args.expansion_order
    if args.at == "0":
        out = expand_at_zero(f, n)
    elif args.at == "inf":
        out = expand_at_infinity(f, n)
    else:
        coeffs = expand_at_one(f, n)
        if args.format == "json":
            print(json.dumps({"at": "1", "variable": "s = q - 1",
                              "coeffs": {str(e): serialize.kclass_to_json(c) for e, c in coeffs.items()}},
                             indent=1))
        else:
            print(re.sub(r"\bq\b", "s", QLaurent(spec, ring, coeffs).format(args.basis)))
        return 0
    if args.format == "json":
        print(json.dumps({"at": args.at, "coeffs": serialize.laurent_to_json(out)}, indent=1))
    else:
        print(out.format(args.basis))
    return 0


# ------------------------------------------------------------------- parser
def _common(p, *, caps=True):
    p.add_argument("--space", help="target space, e.g. CP:1 or CP:1,2")
    if caps:
        p.add_argument("--novikov-cap", help="per-factor Novikov degree bound (one value or comma list)")
        p.add_argument("--weight-cap", type=int, help="lambda-ring weight truncation E")
    p.add_argument("--mode", choices=("free", "symmetric"), default="free")
    p.add_argument("--names", help="comma-separated generator names (default: those appearing in expressions)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--basis", choices=("P", "u"), default="P", help="K-ring basis for text output")


def _seed_args(p):
    p.add_argument("--seed", help="cpN-small-j style name or series JSON (default: small J of --space)")
    p.add_argument("--in", dest="input", help="series JSON file")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qkrec", description="Reconstruction of genus-0 quantum K-theory J-functions.")
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("jfun", help="small J-function or the symmetrized CP^1 family")
    p.add_argument("kind", choices=("small", "sym"))
    p.add_argument("--lam", dest="lam_expr", default="lam")
    p.add_argument("--eps", dest="eps_expr", default="eps")
    _common(p)
    p.set_defaults(func=cmd_jfun)

    p = sub.add_parser("reconstruct", help="explicit reconstruction families")
    p.add_argument("kind", choices=("t2", "t3"))
    _seed_args(p)
    p.add_argument("--params", help="parameter JSON file or inline JSON")
    p.add_argument("--eps", action="append", metavar="A=EXPR")
    p.add_argument("--tau", action="append", metavar="A=EXPR")
    p.add_argument("--c", action="append", metavar="A=EXPR")
    _common(p)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("flow", help="Adams-exponential flow of a constant-coefficient operator")
    p.add_argument("kind", choices=("t1",))
    _seed_args(p)
    p.add_argument("--op", help="operator JSON file or inline JSON")
    p.add_argument("--term", action="append", metavar="COEF@A", help="operator term COEF*(P q^{Q d/dQ})^A")
    p.add_argument("--fixed-q", action="store_true", help="do not raise explicit q to q^k under psi^k")
    _common(p)
    p.set_defaults(func=cmd_flow)

    p = sub.add_parser("qstring", help="multiply by the q-string factor")
    _seed_args(p)
    p.add_argument("--shift", required=True, metavar="EXPR")
    _common(p)
    p.set_defaults(func=cmd_qstring)

    p = sub.add_parser("apply-op", help="apply a finite q-difference operator")
    _seed_args(p)
    p.add_argument("--op", help="operator JSON file or inline JSON")
    p.add_argument("--term", action="append", metavar="COEF@A[@E]", help="term COEF*Q^E*(P q^{Q d/dQ})^A")
    _common(p)
    p.set_defaults(func=cmd_apply_op)

    p = sub.add_parser("project-plus", help="Laurent-polynomial part of a series or expression")
    p.add_argument("--in", dest="input", help="series JSON file")
    p.add_argument("--expr")
    _common(p)
    p.set_defaults(func=cmd_project_plus)

    p = sub.add_parser("pair-omega-example", help="residue pairing of the degree-1 CP^1 example")
    p.add_argument("--fplus")
    p.add_argument("--jd")
    p.add_argument("--lam", dest="lam_expr", default="lam")
    p.add_argument("--eps", dest="eps_expr", default="eps")
    _common(p)
    p.set_defaults(func=cmd_pair_omega)

    p = sub.add_parser("verify", help="run identity checks")
    p.add_argument("name", help="identity name or 'all'")
    p.add_argument("--novikov-cap", type=int)
    p.add_argument("--weight-cap", type=int)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("expand", help="Laurent expansion at q = 0, 1 or infinity")
    p.add_argument("--at", choices=("0", "1", "inf"), required=True)
    p.add_argument("--expr", required=True)
    p.add_argument("--expansion-order", type=int, default=5)
    _common(p)
    p.set_defaults(func=cmd_expand)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:  # argparse already printed the message
        return exc.code if isinstance(exc.code, int) else 2
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="qkrec: %(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"qkrec: parse error: {exc}", file=sys.stderr)
        return 3
    except (UsageError, StructureError, DomainError, serialize.FormatError, ValueError, KeyError,
            OSError, json.JSONDecodeError) as exc:
        print(f"qkrec: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
