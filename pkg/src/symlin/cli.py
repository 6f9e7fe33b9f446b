"""Command-line workbench: ``symlin <subcommand> ...``.

Exit status is 0 for a passing report or a plain data result, 1 for a
failing or not-established report, and 2 for unusable input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import conncalc, jsonio, polyfun, sphere, symseq
from .combinat import enumerate_injections, enumerate_partitions

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _load(source: str):
    """Read JSON from a path, ``-`` for stdin, or an inline document."""
    if source == "-":
        text, name = sys.stdin.read(), "<stdin>"
    elif source.lstrip().startswith(("{", "[")):
        text, name = source, "<inline>"
    else:
        try:
            text, name = Path(source).read_text(), source
        except OSError as exc:
            raise InputError(f"cannot read {source}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{name}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _point(text: str):
    if text.strip() == "inf":
        return sphere.INF
    try:
        return sphere.SimplexPoint(tuple(Fraction(c) for c in text.split(",")))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad simplex point {text!r}: {exc}") from None


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"bad fraction {text!r}") from None


def cmd_partitions(args) -> dict:
    parts = enumerate_partitions(args.n, args.k)
    return {"n": args.n, "k": args.k, "count": len(parts), "partitions": [p.to_json() for p in parts]}


def cmd_injections(args) -> dict:
    maps = enumerate_injections(args.m, args.n)
    return {"dom": args.m, "cod": args.n, "count": len(maps), "injections": [f.to_json() for f in maps]}


def cmd_compose_symseq(args) -> dict:
    A = jsonio.symseq_from_json(_load(args.a))
    B = jsonio.symseq_from_json(_load(args.b))
    return jsonio.symseq_to_json(symseq.compose_product(A, B, args.max_level))


def cmd_check_operad(args) -> dict:
    O = jsonio.operad_from_json(_load(args.input))
    report = symseq.check_operad(O, args.max_level).to_json()
    return {"command": "check-operad", "max_level": args.max_level, **report}


def cmd_compose_funseq(args) -> dict:
    G = jsonio.funseq_from_json(_load(args.g))
    F = jsonio.funseq_from_json(_load(args.f))
    return jsonio.funseq_to_json(polyfun.compose_funseq(G, F, args.max_level))


def cmd_multilinearize(args) -> dict:
    F = jsonio.funseq_from_json(_load(args.input))
    return jsonio.symseq_to_json(polyfun.multilinearize_at_S0(F))


def cmd_chain_rule(args) -> dict:
    G = jsonio.funseq_from_json(_load(args.g))
    F = jsonio.funseq_from_json(_load(args.f))
    report = polyfun.chain_rule_compare(G, F, args.max_level).to_json()
    return {"command": "chain-rule", "max_level": args.max_level, **report}


def cmd_sphere_gamma(args) -> dict:
    if args.check:
        report = sphere.check_gamma_laws(args.samples, args.seed, args.grid, args.max_total)
        return {"command": "sphere gamma", "seed": args.seed, **report}
    if args.s is None:
        raise InputError("give --s and --t, or --check")
    s, ts = _point(args.s), [_point(t) for t in args.t or []]
    try:
        out = sphere.gamma(s, ts)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    return {"point": jsonio.sphere_point_to_json(out)}


def cmd_sphere_coend(args) -> dict:
    if args.check:
        report = sphere.check_coend(args.samples, args.seed, args.max_n)
        return {"command": "sphere coend", "seed": args.seed, **report}
    if args.s is None or args.x is None:
        raise InputError("give --s and --x, or --check")
    x = sphere.INF if args.x == "inf" else _fraction(args.x)
    try:
        z = sphere.coend_adjoint(_point(args.s), x)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    return {"point": "inf" if z is sphere.INF else [sphere.fraction_str(c) for c in z]}


def cmd_sphere_stabilize(args) -> dict:
    report = sphere.check_stabilization(args.samples, args.seed, args.max_dim, args.max_mult)
    return {"command": "sphere stabilize", "seed": args.seed, **report}


def cmd_sphere_tower(args) -> dict:
    return {"command": "sphere tower-example", **sphere.reproduce_tower_example(args.grid)}


def cmd_conncalc_report(args) -> dict:
    h = conncalc.ExcisionHypothesis(args.c, args.kappa)
    try:
        profile = conncalc.iterate_profile(h, args.ell, args.stages)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    verdict = conncalc.bokstedt_verdict(profile)
    return {
        "command": "conncalc report",
        "status": "pass" if verdict.satisfied else "not-established",
        "hypothesis": {"c": h.c, "kappa": h.kappa},
        "t1_connectivity": conncalc.t1_connectivity(h, args.ell),
        "profile": profile.to_json(),
        **verdict.to_json(),
    }


def cmd_emit_schemas(args) -> dict:
    written = jsonio.emit_schemas(args.out)
    return {"written": [p.name for p in written]}


def cmd_validate(args) -> dict:
    jsonio.validate(args.kind, _load(args.input))
    return {"valid": True, "kind": args.kind}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    common.add_argument("--output", help="write the result here instead of stdout")
    common.add_argument("--timing", action="store_true", help="add wall-clock seconds to the result")

    parser = argparse.ArgumentParser(prog="symlin", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("partitions", parents=[common], help="set partitions of [n]")
    p.add_argument("n", type=int)
    p.add_argument("--k", type=int, default=None, help="only partitions with k blocks")
    p.set_defaults(run=cmd_partitions)

    p = sub.add_parser("injections", parents=[common], help="injections [m] -> [n]")
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)
    p.set_defaults(run=cmd_injections)

    p = sub.add_parser("compose-symseq", parents=[common], help="composition product of two symmetric sequences")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--max-level", type=int, required=True)
    p.set_defaults(run=cmd_compose_symseq)

    p = sub.add_parser("check-operad", parents=[common], help="check operad laws of composition tables")
    p.add_argument("--input", required=True)
    p.add_argument("--max-level", type=int, required=True)
    p.set_defaults(run=cmd_check_operad)

    p = sub.add_parser("compose-funseq", parents=[common], help="composite of two functor sequences")
    p.add_argument("--g", required=True)
    p.add_argument("--f", required=True)
    p.add_argument("--max-level", type=int, required=True)
    p.set_defaults(run=cmd_compose_funseq)

    p = sub.add_parser("multilinearize", parents=[common], help="multilinearization at S^0")
    p.add_argument("--input", required=True)
    p.set_defaults(run=cmd_multilinearize)

    p = sub.add_parser("chain-rule", parents=[common], help="compare the chain-rule comparison map")
    p.add_argument("--g", required=True)
    p.add_argument("--f", required=True)
    p.add_argument("--max-level", type=int, required=True)
    p.set_defaults(run=cmd_chain_rule)

    sp = sub.add_parser("sphere", help="the sphere operad").add_subparsers(dest="sphere_command", required=True)
    p = sp.add_parser("gamma", parents=[common], help="compose points, or --check the operad laws")
    p.add_argument("--s", help="outer point, e.g. 1/2,1/2")
    p.add_argument("--t", action="append", help="inner point, repeated once per input")
    p.add_argument("--check", action="store_true")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--grid", type=int, default=6, help="largest grid denominator")
    p.add_argument("--max-total", type=int, default=5)
    p.set_defaults(run=cmd_sphere_gamma)
    p = sp.add_parser("coend", parents=[common], help="evaluate the homeomorphism to the cube, or --check it")
    p.add_argument("--s")
    p.add_argument("--x")
    p.add_argument("--check", action="store_true")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--max-n", type=int, default=4)
    p.set_defaults(run=cmd_sphere_coend)
    p = sp.add_parser("stabilize", parents=[common], help="check associativity of stabilization")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--max-dim", type=int, default=2)
    p.add_argument("--max-mult", type=int, default=3)
    p.set_defaults(run=cmd_sphere_stabilize)
    p = sp.add_parser("tower-example", parents=[common], help="two-step versus one-step stabilization")
    p.add_argument("--grid", type=int, default=12)
    p.set_defaults(run=cmd_sphere_tower)

    cp = sub.add_parser("conncalc", help="connectivity arithmetic").add_subparsers(dest="conncalc_command", required=True)
    p = cp.add_parser("report", parents=[common], help="stage profile and colimit-comparison verdict")
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--kappa", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--stages", type=int, default=10)
    p.set_defaults(run=cmd_conncalc_report)

    p = sub.add_parser("emit-schemas", parents=[common], help="write the JSON schemas")
    p.add_argument("--out", default="schemas")
    p.set_defaults(run=cmd_emit_schemas)

    p = sub.add_parser("validate", parents=[common], help="validate a document against a schema")
    p.add_argument("--kind", choices=sorted(jsonio.SCHEMAS), required=True)
    p.add_argument("--input", required=True)
    p.set_defaults(run=cmd_validate)
    return parser


def _text(result: dict) -> str:
    if result.get("command") == "conncalc report":
        stages = ",".join(str(v) for v in result["profile"]["stages"])
        return f"{result['verdict']}\nstages: ({stages})\nslope: {result['slope']}\nwindow: {result['window']}\n"
    lines = []
    for key, value in result.items():
        lines.append(f"{key}: {value if isinstance(value, (str, int)) else json.dumps(value, ensure_ascii=False)}")
    return "\n".join(lines) + "\n"


def exit_code(result: dict) -> int:
    status = result.get("status")
    if status is None or status == "pass":
        return EXIT_PASS
    return EXIT_FAIL


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        result = args.run(args)
    except (InputError, ValueError) as exc:
        # data, truncation and incomplete-table errors are all ValueErrors
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.timing:
        result["timing_s"] = round(time.perf_counter() - start, 3)
    text = jsonio.dumps(result) if args.format == "json" else _text(result)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return exit_code(result)


if __name__ == "__main__":
    sys.exit(main())
