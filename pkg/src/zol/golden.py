"""Fixed numeric facts about the named constructions, checked end to end."""

from __future__ import annotations

import time
from collections.abc import Callable
from dataclasses import dataclass
from fractions import Fraction

from . import constructions as C
from .extensions import is_alpha_safe, safety_threshold
from .games import verify_k4_strategy
from .graphs import BalanceClass, classify_balance, density, graph6_encode, max_density
from .logic import build_phi4, build_phi_k, bound_variables, evaluate, quantifier_depth


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str
    seconds: float


def _base_and_cases() -> tuple[bool, str]:
    rows = [C.build_base_h()] + [C.build_case_h0(c) for c in C.CASE_NUMBERS]
    bad = [
        f"{nc.name}: ({nc.graph.n},{nc.graph.edge_count}) != ({nc.expected_vertices},{nc.expected_edges})"
        for nc in rows
        if (nc.graph.n, nc.graph.edge_count) != (nc.expected_vertices, nc.expected_edges)
    ]
    return not bad, "; ".join(bad) or f"{len(rows)} graphs match their vertex/edge counts"


def _g0_triple() -> tuple[bool, str]:
    g = C.build_g0().graph
    models = evaluate(g, build_phi4(), budget=10**8)
    balance = classify_balance(g)
    steps = C.schedule_edge_counts(g)
    steps_ok = all(want == got for _, want, got in steps)
    ok = models and balance is BalanceClass.STRICTLY_BALANCED and density(g) == Fraction(13, 7) and steps_ok
    return ok, f"models={models} balance={balance.value} density={density(g)} schedule_ok={steps_ok}"


def _g0_frozen() -> tuple[bool, str]:
    code = graph6_encode(C.build_g0().graph)
    return code == C.G0_GRAPH6, code


def _regions() -> tuple[bool, str]:
    bad = [(a, b, t) for a, b, t in C.REGION_INSTANCES if C.region_threshold(a, b) != t]
    return not bad, f"{len(C.REGION_INSTANCES)} region conditions" if not bad else f"mismatch {bad}"


def _companions() -> tuple[bool, str]:
    out = []
    ok = True
    for side in ("a", "b"):
        pair = C.build_k4_companion_pair(side)
        th = safety_threshold(pair)
        safe, _ = is_alpha_safe(pair, Fraction(7, 13))
        ok &= th is not None and th >= Fraction(3, 5) and safe
        out.append(f"{side}: threshold={th} safe@7/13={safe}")
    return ok, "; ".join(out)


def _lower_pairs() -> tuple[bool, str]:
    out = []
    ok = True
    for family, k in ((1, 5), (2, 5), (3, 5), (2, 6), (3, 6)):
        th = safety_threshold(C.build_lower_pair(family, k), cap=40)
        inside = th is not None and Fraction(1, k - 2) < th < Fraction(1, k - 3)
        ok &= inside
        out.append(f"F{family} k={k}: {th}")
    return ok, ", ".join(out)


def _sentences() -> tuple[bool, str]:
    phi = build_phi4()
    d4, nv = quantifier_depth(phi), len(bound_variables(phi))
    depths = {k: quantifier_depth(build_phi_k(k)) for k in (5, 6, 7)}
    witnesses = {k: evaluate(C.build_phi_k_witness(k).graph, build_phi_k(k)) for k in (5, 6)}
    ok = d4 == 4 and nv == 33 and all(depths[k] == k for k in depths) and all(witnesses.values())
    return ok, f"phi4 depth={d4} vars={nv}; phi_k depths={depths}; witnesses model={witnesses}"


def _maxden_g0() -> tuple[bool, str]:
    g = C.build_g0().graph
    value, witness = max_density(g)
    return value == Fraction(13, 7) and len(witness) == g.n, f"maxden={value} witness size={len(witness)}"


def _bounds() -> tuple[bool, str]:
    ok = C.eval_bound_formula("density_lower_bound", "closed", k=10, a=0, b=0, mu=0) == Fraction(9, 2)
    ok &= C.check_bound_inequality("upper_bound_2", k=20, lam=17 * 136, mu=17 * 136, g=800, h=0)
    return ok, "closed density bound at k=10 is 9/2; second upper bound exceeds k-2 at k=20"


def _k4_strategy() -> tuple[bool, str]:
    host = C.build_k4_game_host().graph
    report = verify_k4_strategy(host, host)
    return report.duplicator_won_all, f"{report.games} games, {len(report.losses)} losses, {len(report.violations)} violations"


CHECKS: list[tuple[str, Callable[[], tuple[bool, str]]]] = [
    ("base graph and thirteen cases", _base_and_cases),
    ("G0 models phi, strictly balanced, schedule", _g0_triple),
    ("G0 graph6 matches frozen value", _g0_frozen),
    ("G0 max density", _maxden_g0),
    ("region thresholds", _regions),
    ("k=4 companion pairs", _companions),
    ("lower-bound pair thresholds", _lower_pairs),
    ("sentence depths and witnesses", _sentences),
    ("bound formulas", _bounds),
    ("k=4 strategy against every Spoiler", _k4_strategy),
]


def run_checks(names: list[str] | None = None) -> list[CheckResult]:
    results = []
    for name, fn in CHECKS:
        if names and name not in names:
            continue
        start = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as exc:  # report, keep going
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(name, ok, detail, time.perf_counter() - start))
    return results
