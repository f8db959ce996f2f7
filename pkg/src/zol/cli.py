"""Command-line interface: ``zol <command> ...``.

Exit status: 0 success, 2 bad input, 3 budget or size cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import constructions as C
from .experiments import (
    run_extension_property_experiment,
    run_nonconvergence_demo,
    run_poisson_experiment,
    run_safe_extension_experiment,
    run_threshold_experiment,
)
from .extensions import InstanceTooLarge, RootedPair, is_alpha_safe, safety_threshold
from .games import extract_distinguishing_sentence, solve_ehr
from .graphs import GraphError, classify_balance, density, graph6_encode, max_density, parse_graph_text
from .logic import BudgetExceeded, evaluate, parse, to_text

EXIT_INPUT = 2
EXIT_CAP = 3


def fmt(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def _read_source(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read()
    if os.path.isfile(arg):
        with open(arg) as fh:
            return fh.read()
    return arg


def _graph(arg: str):
    return parse_graph_text(_read_source(arg))


def _pair(arg: str) -> RootedPair:
    return RootedPair.from_json(_read_source(arg))


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise GraphError(f"not a rational number: {text!r}") from None


def _labels(g, vertices) -> str:
    return " ".join(g.label(v) for v in sorted(vertices))


def cmd_density(args) -> None:
    print(fmt(density(_graph(args.graph))))


def cmd_maxden(args) -> None:
    g = _graph(args.graph)
    value, witness = max_density(g)
    print(f"{fmt(value)} {_labels(g, witness)}".rstrip())


def cmd_balance(args) -> None:
    g = _graph(args.graph)
    print(f"{classify_balance(g).value} {fmt(density(g))}")


def cmd_safe(args) -> None:
    pair = _pair(args.pair)
    safe, violator = is_alpha_safe(pair, _fraction(args.alpha), cap=args.cap)
    print("safe" if safe else f"unsafe {_labels(pair.g, violator)}")


def cmd_threshold(args) -> None:
    th = safety_threshold(_pair(args.pair), cap=args.cap)
    print("unbounded" if th is None else fmt(th))


def cmd_game(args) -> None:
    g1, g2 = _graph(args.g1), _graph(args.g2)
    if args.extract:
        s = extract_distinguishing_sentence(g1, g2, args.k)
        print("duplicator" if s is None else to_text(s))
        return
    out = solve_ehr(g1, g2, args.k)
    if out.spoiler_side is None:
        print("duplicator")
    else:
        print(f"spoiler side={out.spoiler_side + 1} move={out.first_move}")


def cmd_eval(args) -> None:
    g = _graph(args.graph)
    s = parse(_read_source(args.formula))
    print("true" if evaluate(g, s, budget=args.budget) else "false")


def build_target(name: str) -> dict:
    if name == "base-h":
        return C.build_base_h().to_json()
    if name == "g0":
        return C.build_g0().to_json()
    if name == "k4-host":
        return C.build_k4_game_host().to_json()
    kind, _, rest = name.partition(":")
    try:
        if kind == "case":
            return C.build_case_h0(int(rest)).to_json()
        if kind == "phi-witness":
            return C.build_phi_k_witness(int(rest)).to_json()
        if kind == "pair":
            family, k = (int(t) for t in rest.split(":"))
            return C.build_lower_pair(family, k).to_json()
        if kind == "k4-pair":
            return C.build_k4_companion_pair(rest or "a").to_json()
    except ValueError as exc:
        raise GraphError(f"bad build target {name!r}: {exc}") from None
    raise GraphError(f"unknown build target {name!r}")


def cmd_build(args) -> None:
    data = build_target(args.target)
    if args.format == "graph6":
        g = data["graph"] if "graph" in data else data
        print(data.get("graph6") or graph6_encode(parse_graph_text(json.dumps(g))))
    else:
        print(json.dumps(data, sort_keys=True))


def cmd_exp(args) -> None:
    params = json.loads(_read_source(args.params)) if args.params else {}
    if not isinstance(params, dict):
        raise GraphError("--params must be a JSON object")
    seed = args.seed
    common = {"seed": seed, "workers": args.workers}
    kind = args.kind
    try:
        if kind == "poisson":
            g = parse_graph_text(params.get("pattern", "Bw"))
            rec = run_poisson_experiment(g, float(params.get("c", 1.0)), int(params["n"]), int(params["trials"]), **common)
        elif kind == "threshold":
            g = parse_graph_text(params.get("pattern", "Bw"))
            rec = run_threshold_experiment(g, int(params["n"]), [float(a) for a in params["alphas"]], int(params["trials"]), **common)
        elif kind == "extension":
            rec = run_extension_property_experiment(
                int(params["n"]), float(params["alpha"]), int(params["r"]), int(params["trials"]), **common
            )
        elif kind == "safe-ext":
            pair = RootedPair.from_json(params["pair"])
            rec = run_safe_extension_experiment(pair, float(params["alpha"]), [int(n) for n in params["ns"]], int(params["trials"]), **common)
        else:
            g = parse_graph_text(params["pattern"]) if "pattern" in params else None
            rec = run_nonconvergence_demo(
                g, [int(n) for n in params.get("ns", (200, 400, 800))], int(params.get("trials", 2000)),
                c=float(params.get("c", 1.0)), **common,
            )
    except KeyError as exc:
        raise GraphError(f"missing experiment parameter {exc.args[0]!r}") from None
    if args.output:
        rec.write_json(args.output)
    else:
        print(json.dumps(rec.to_json(), sort_keys=True))
    if args.csv:
        rec.write_csv(args.csv)


def cmd_verify(args) -> int:
    from .golden import run_checks

    results = run_checks()
    for r in results:
        print(f"{'PASS' if r.ok else 'FAIL'}  {r.name}: {r.detail} ({r.seconds:.1f}s)")
    return 0 if all(r.ok for r in results) else 1


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zol", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name, fn in (("density", cmd_density), ("maxden", cmd_maxden), ("balance", cmd_balance)):
        sp = sub.add_parser(name)
        sp.add_argument("-g", "--graph", required=True, help="graph6, labelled JSON, a file, or - for stdin")
        sp.set_defaults(func=fn)
    sp = sub.add_parser("safe")
    sp.add_argument("--pair", required=True)
    sp.add_argument("--alpha", required=True)
    sp.add_argument("--cap", type=int, default=None)
    sp.set_defaults(func=cmd_safe)
    sp = sub.add_parser("threshold-alpha")
    sp.add_argument("--pair", required=True)
    sp.add_argument("--cap", type=int, default=None)
    sp.set_defaults(func=cmd_threshold)
    sp = sub.add_parser("game")
    sp.add_argument("--g1", required=True)
    sp.add_argument("--g2", required=True)
    sp.add_argument("-k", type=int, required=True)
    sp.add_argument("--extract", action="store_true")
    sp.set_defaults(func=cmd_game)
    sp = sub.add_parser("eval")
    sp.add_argument("-g", "--graph", required=True)
    sp.add_argument("-f", "--formula", required=True)
    sp.add_argument("--budget", type=int, default=10**9)
    sp.set_defaults(func=cmd_eval)
    sp = sub.add_parser("build")
    sp.add_argument("target", help="base-h | g0 | case:N | pair:FAMILY:K | phi-witness:K | k4-pair:a|b | k4-host")
    sp.add_argument("--format", choices=("json", "graph6"), default="json")
    sp.set_defaults(func=cmd_build)
    sp = sub.add_parser("exp")
    sp.add_argument("kind", choices=("poisson", "threshold", "extension", "safe-ext", "nonconv"))
    sp.add_argument("--params", default=None, help="JSON object or file")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("-o", "--output", default=None)
    sp.add_argument("--csv", default=None)
    sp.set_defaults(func=cmd_exp)
    sp = sub.add_parser("verify-paper", help="run the golden checks on the named constructions")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        code = args.func(args)
    except (BudgetExceeded, InstanceTooLarge) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return code or 0


if __name__ == "__main__":
    sys.exit(main())
