"""Named graphs and rooted pairs behind the non-convergence and lower-bound arguments.

Vertex names follow one convention: ``a_1_0`` is a with subscript (1,0),
``a_1_1__1_0`` adds superscript (1,0), and a ``p`` after the letter marks a prime
(``ap_1_1`` is a'_(1,1)).
"""

from __future__ import annotations

import itertools
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .extensions import RootedPair
from .graphs import GraphError, PatternGraph, graph6_encode


@dataclass(frozen=True)
class NamedConstruction:
    name: str
    graph: PatternGraph
    expected_vertices: int
    expected_edges: int
    notes: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        data = self.graph.to_json()
        data.update(
            name=self.name,
            graph6=graph6_encode(self.graph),
            expected={"vertices": self.expected_vertices, "edges": self.expected_edges},
        )
        if self.notes:
            data["notes"] = self.notes
        return data


def _build(labels: Sequence[str], adjacency: dict[str, Sequence[str]]) -> PatternGraph:
    edges = []
    for v, nbrs in adjacency.items():
        edges += [(v, u) for u in nbrs]
    seen = set()
    unique = []
    for u, v in edges:
        key = frozenset((u, v))
        if key not in seen:
            seen.add(key)
            unique.append((u, v))
    return PatternGraph.from_labeled_edges(list(labels), unique)


# --- the ten-vertex core and its thirteen identification cases ---------------

BASE_H_LABELS = (
    "x", "a", "b", "a_1_1", "a_1_0", "a_1_1__1_1", "ap_1_1", "a_1_0__1_0", "b_0_1", "b_0_1__0_1",
)
BASE_H_EDGES = (
    ("x", "a"),
    ("a_1_1", "x"), ("a_1_1", "a"),
    ("a_1_0", "x"),
    ("a_1_1__1_1", "x"), ("a_1_1__1_1", "a"), ("a_1_1__1_1", "a_1_1"),
    ("ap_1_1", "x"), ("ap_1_1", "a"),
    ("a_1_0__1_0", "x"), ("a_1_0__1_0", "a_1_0"),
    ("b_0_1", "b"),
    ("b_0_1__0_1", "b"), ("b_0_1__0_1", "b_0_1"),
)


def build_base_h() -> NamedConstruction:
    g = PatternGraph.from_labeled_edges(BASE_H_LABELS, BASE_H_EDGES)
    return NamedConstruction("base-h", g, 10, 14)


# For each case: where a_(0,1) and its (0,1)-witness land (None = new vertex) and
# which edges are added.  New vertices are called a_0_1 and a_0_1__0_1.
_CASES: dict[int, tuple[str | None, str | None, tuple[tuple[str, str], ...], tuple[int, int]]] = {
    1: (None, None, (("a_0_1", "a"), ("a_0_1__0_1", "a"), ("a_0_1__0_1", "a_0_1")), (12, 17)),
    2: ("b", None, (("a", "b"), ("b", "a_0_1__0_1"), ("a_0_1__0_1", "a")), (11, 17)),
    3: ("b", "b_0_1", (("a", "b"), ("a", "b_0_1")), (10, 16)),
    4: ("b", "b_0_1__0_1", (("a", "b"), ("a", "b_0_1__0_1")), (10, 16)),
    5: ("b_0_1", None, (("a", "b_0_1"), ("b_0_1", "a_0_1__0_1"), ("a_0_1__0_1", "a")), (11, 17)),
    6: ("b_0_1", "b", (("a", "b"), ("a", "b_0_1")), (10, 16)),
    7: ("b_0_1", "b_0_1__0_1", (("a", "b_0_1"), ("a", "b_0_1__0_1")), (10, 16)),
    8: (None, "b", (("a", "b"), ("a", "a_0_1"), ("a_0_1", "b")), (11, 17)),
    9: (None, "b_0_1", (("a_0_1", "a"), ("a_0_1", "b_0_1"), ("a", "b_0_1")), (11, 17)),
    10: (None, "b_0_1__0_1", (("b_0_1__0_1", "a"), ("b_0_1__0_1", "a_0_1"), ("a_0_1", "a")), (11, 17)),
    11: ("b_0_1__0_1", None, (("a", "b_0_1__0_1"), ("a", "a_0_1__0_1"), ("a_0_1__0_1", "b_0_1__0_1")), (11, 17)),
    12: ("b_0_1__0_1", "b", (("a", "b_0_1__0_1"), ("a", "b")), (10, 16)),
    13: ("b_0_1__0_1", "b_0_1", (("a", "b_0_1__0_1"), ("a", "b_0_1")), (10, 16)),
}

CASE_NUMBERS = tuple(_CASES)


def build_case_h0(case: int) -> NamedConstruction:
    """The base graph with a_(0,1) and its (0,1)-witness added or identified."""
    if case not in _CASES:
        raise GraphError(f"case must be one of 1..13, got {case}")
    image01, image0101, extra, (nv, ne) = _CASES[case]
    labels = list(BASE_H_LABELS)
    if image01 is None:
        labels.append("a_0_1")
    if image0101 is None:
        labels.append("a_0_1__0_1")
    g = PatternGraph.from_labeled_edges(labels, BASE_H_EDGES + extra)
    notes = {"a_0_1": image01 or "new", "a_0_1__0_1": image0101 or "new"}
    return NamedConstruction(f"case:{case}", g, nv, ne, notes)


# --- the 21-vertex graph of density 13/7 ------------------------------------

G0_ADJACENCY: dict[str, tuple[str, ...]] = {
    "x": (),
    "a": ("x",),
    "a_1_1": ("x", "a"),
    "ap_1_1": ("x", "a"),
    "a_1_0": ("x", "a_1_1"),
    "a_0_1": ("a", "a_1_1"),
    "a_1_0__1_0": ("x", "a_1_0"),
    "a_1_0__0_1": ("a", "a_1_0"),
    "a_0_1__1_0": ("x", "a_0_1"),
    "a_0_1__0_1": ("a", "a_0_1"),
    "a_1_1__1_1": ("x", "a", "a_1_1"),
    "b_1_1": ("x",),
    "b_1_1__1_1": ("x", "b_1_1"),
    "b_1_0": ("x", "b_1_1"),
    "b": ("b_1_1", "b_1_1__1_1"),
    "b_1_0__1_0": ("x", "b_1_0"),
    "b_0_1": ("b", "b_1_1"),
    "bp_1_1": ("x", "b"),
    "b_1_0__0_1": ("b", "b_1_0"),
    "b_0_1__1_0": ("x", "b_0_1"),
    "b_0_1__0_1": ("b", "b_0_1"),
}

# Order in which vertices join, starting from x, with the number of edges each
# brings to the vertices already present.
G0_SCHEDULE: tuple[tuple[tuple[str, int], ...], ...] = (
    (("a", 1),),
    (("ap_1_1", 2), ("a_1_1", 2)),
    (("a_1_0", 2), ("a_0_1", 2)),
    (("a_1_0__1_0", 2), ("a_0_1__0_1", 2), ("a_1_0__0_1", 2), ("a_0_1__1_0", 2)),
    (("a_1_1__1_1", 3),),
    (("b_1_1", 1),),
    (("b_1_1__1_1", 2), ("b_1_0", 2)),
    (("b", 2), ("b_1_0__1_0", 2)),
    (("b_0_1", 2), ("bp_1_1", 2), ("b_1_0__0_1", 2)),
    (("b_0_1__1_0", 2), ("b_0_1__0_1", 2)),
)

# graph6 of build_g0(), frozen after the three-way check in the test suite
G0_GRAPH6 = "T}hcQQCPF?O?_@_@??s?A?@I??_?BC??O??g"


def build_g0() -> NamedConstruction:
    g = _build(list(G0_ADJACENCY), G0_ADJACENCY)
    return NamedConstruction("g0", g, 21, 39)


def schedule_edge_counts(g: PatternGraph, start: Sequence[str] = ("x",)) -> list[tuple[str, int, int]]:
    """For each scheduled vertex: (name, expected edges, edges actually brought)."""
    present = {g.index(v) for v in start}
    rows = []
    for step in G0_SCHEDULE:
        for name, want in step:
            v = g.index(name)
            rows.append((name, want, sum(1 for u in present if g.has_edge(u, v))))
        present |= {g.index(name) for name, _ in step}
    return rows


# --- four-vertex root pairs for the k=4 game --------------------------------


def build_k4_companion_pair(side: str = "a") -> RootedPair:
    """Roots (x, a, a_1_1, ap_1_1) induced from G0 plus a three-vertex extension.

    ``side="b"`` gives the analogue over (x, b, b_1_1, bp_1_1) with centre d.
    """
    if side not in ("a", "b"):
        raise GraphError("side must be 'a' or 'b'")
    g0 = build_g0().graph
    top = side
    roots = ["x", top, f"{top}_1_1", f"{top}p_1_1"]
    centre = "c" if side == "a" else "d"
    root_graph = g0.induced([g0.index(r) for r in roots])
    labels = roots + [centre, f"{centre}__1_0", f"{centre}__0_1"]
    edges = [(root_graph.labels[u], root_graph.labels[v]) for u, v in root_graph.edges()]
    edges += [
        (centre, f"{top}_1_1"),
        (f"{centre}__1_0", centre), (f"{centre}__1_0", "x"),
        (f"{centre}__0_1", centre), (f"{centre}__0_1", top),
    ]
    return RootedPair(PatternGraph.from_labeled_edges(labels, edges), 4)


# --- pairs behind the lower bound -------------------------------------------


def _default_pattern(length: int, ones: int) -> tuple[int, ...]:
    ones = max(0, min(ones, length))
    return (1,) * ones + (0,) * (length - ones)


def _pair_from(labels: list[str], edges: list[tuple[str, str]], roots: int) -> RootedPair:
    return RootedPair(PatternGraph.from_labeled_edges(labels, edges), roots)


def build_lower_pair(family: int, k: int, pattern: Sequence[int] | None = None) -> RootedPair:
    """Rooted pair used for round-by-round safety in the depth-k lower bound.

    ``pattern`` gives the adjacency of the first extension vertex to the roots:
    length k-4 for family 1, k-2 (at most k-4 ones) for family 2 and k-3 (at most
    k-4 ones) for family 3.  Defaults use as many ones as allowed.
    """
    if k < 5:
        raise GraphError("lower-bound pairs need k >= 5")
    if family == 1:
        return _first_family_pair(k, pattern)
    if family == 2:
        return _second_family_pair(k, pattern)
    if family == 3:
        return _third_family_pair(k, pattern)
    raise GraphError(f"family must be 1, 2 or 3, got {family}")


def _check_pattern(pattern: Sequence[int] | None, length: int, max_ones: int) -> tuple[int, ...]:
    if pattern is None:
        return _default_pattern(length, max_ones)
    pat = tuple(int(b) for b in pattern)
    if len(pat) != length or any(b not in (0, 1) for b in pat):
        raise GraphError(f"pattern must be a 0/1 vector of length {length}")
    if sum(pat) > max_ones:
        raise GraphError(f"pattern may have at most {max_ones} ones")
    return pat


def _first_family_pair(k: int, pattern: Sequence[int] | None) -> RootedPair:
    pat = _check_pattern(pattern, k - 4, k - 4)
    roots = [f"a_{i}" for i in range(1, k - 3)]
    a = lambda i: f"a_{i}"  # noqa: E731
    labels = list(roots)
    edges: list[tuple[str, str]] = []

    def add(name: str, nbrs: list[str]) -> None:
        labels.append(name)
        edges.extend((name, u) for u in nbrs)

    add(a(k - 3), [a(i + 1) for i, bit in enumerate(pat) if bit])
    add(a(k - 2), [a(i) for i in range(1, k - 2)])
    add(a(k - 1), [a(i) for i in range(1, k - 1)])
    for j in range(1, k - 1):
        add(f"a_{k - 1}_{j}", [a(l) for l in range(1, k - 1) if l != j])
    add(a(k), [a(i) for i in range(1, k)])
    for i in range(1, k - 1):
        add(f"a_{k}__{i}", [a(l) for l in range(1, k) if l != i])
    for j in range(1, k - 1):
        add(f"a_{k}__{k - 1}_{j}", [a(l) for l in range(1, k - 1)] + [f"a_{k - 1}_{j}"])
    for i in range(1, k - 1):
        for j in range(1, k - 1):
            add(f"a_{k}_{i}__{k - 1}_{j}", [a(l) for l in range(1, k - 1) if l != i] + [f"a_{k - 1}_{j}"])
    return _pair_from(labels, edges, len(roots))


def _second_family_pair(k: int, pattern: Sequence[int] | None) -> RootedPair:
    pat = _check_pattern(pattern, k - 2, k - 4)
    ys = [f"y_{i}" for i in range(1, k - 1)]
    top1, top2 = f"a_{k - 1}", f"a_{k}"
    labels = ys + [top1, top2]
    # root graph: y_(k-2) sees all earlier y's, the two tops see every y and each other
    edges: list[tuple[str, str]] = [(ys[-1], y) for y in ys[:-1]]
    edges += [(top1, y) for y in ys] + [(top2, y) for y in ys] + [(top2, top1)]
    b = f"b_{k - 1}"
    labels.append(b)
    edges += [(b, ys[i]) for i, bit in enumerate(pat) if bit] + [(b, top1)]
    for i in range(1, k - 1):
        name = f"b_{k}__{i}"
        labels.append(name)
        edges += [(name, b)] + [(name, ys[l - 1]) for l in range(1, k - 1) if l != i]
    return _pair_from(labels, edges, k)


def _third_family_pair(k: int, pattern: Sequence[int] | None) -> RootedPair:
    pat = _check_pattern(pattern, k - 3, k - 4)
    ys = [f"y_{i}" for i in range(1, k - 2)]
    labels = list(ys)
    edges: list[tuple[str, str]] = []

    def add(name: str, nbrs: list[str]) -> None:
        labels.append(name)
        edges.extend((name, u) for u in nbrs)

    def ys_but(i: int | None) -> list[str]:
        return [y for l, y in enumerate(ys, start=1) if l != i]

    c2, c1, c0 = f"c_{k - 2}", f"c_{k - 1}", f"c_{k}"
    add(c2, [ys[i] for i, bit in enumerate(pat) if bit])
    add(c1, ys + [c2])
    for j in range(1, k - 2):
        add(f"c_{k - 1}_{j}", ys_but(j) + [c2])
    add(f"c_{k - 1}_{k - 2}", list(ys))
    add(c0, ys + [c2, c1])
    for i in range(1, k - 2):
        add(f"c_{k}__{i}", ys_but(i) + [c2, c1])
    add(f"c_{k}__{k - 2}", ys + [c1])
    for j in range(1, k - 1):
        add(f"c_{k}__{k - 1}_{j}", ys + [c2, f"c_{k - 1}_{j}"])
    for j in range(1, k - 1):
        for i in range(1, k - 2):
            add(f"c_{k}_{i}__{k - 1}_{j}", ys_but(i) + [c2, f"c_{k - 1}_{j}"])
        add(f"c_{k}_{k - 2}__{k - 1}_{j}", ys + [f"c_{k - 1}_{j}"])
    return _pair_from(labels, edges, len(ys))


def lower_pair_nonroot_count(family: int, k: int) -> int:
    if family == 1:
        return 1 + 1 + 1 + (k - 2) + 1 + (k - 2) + (k - 2) + (k - 2) ** 2
    if family == 2:
        return 1 + (k - 2)
    if family == 3:
        return 1 + 1 + (k - 2) + 1 + (k - 2) + (k - 2) + (k - 2) ** 2
    raise GraphError(f"family must be 1, 2 or 3, got {family}")


# --- model of the depth-k sentence -------------------------------------------


def phi_k_witness_size(k: int) -> int:
    m = k - 3
    pairs = comb(m, 2)
    return m + pairs + m * pairs + m * m * pairs + m * pairs


def build_phi_k_witness(k: int) -> NamedConstruction:
    """A graph satisfying the depth-k sentence: a (k-3)-clique with all witnesses distinct.

    Second-level witnesses are pairwise non-adjacent; nothing in the sentence
    asks for more.
    """
    if not 5 <= k <= 6:
        raise GraphError("witness graphs are built for k in {5, 6}")
    m = k - 3
    roots = [f"r_{i}" for i in range(1, m + 1)]
    labels = list(roots)
    edges = [(roots[i], roots[j]) for i in range(m) for j in range(i + 1, m)]

    def but(t: int) -> list[str]:
        return [r for l, r in enumerate(roots, start=1) if l != t]

    for i, j in itertools.combinations(range(1, m + 1), 2):
        ground = f"g_{i}_{j}"
        labels.append(ground)
        edges += [(ground, r) for l, r in enumerate(roots, start=1) if l not in (i, j)]
        for ell in range(1, m + 1):
            first = f"f_{i}_{j}_{ell}"
            labels.append(first)
            edges += [(first, ground)] + [(first, r) for r in but(ell)]
            for t in range(1, m + 1):
                second = f"s_{i}_{j}_{ell}_{t}"
                labels.append(second)
                edges += [(second, ground), (second, first)] + [(second, r) for r in but(t)]
            top = f"u_{i}_{j}_{ell}"
            labels.append(top)
            edges += [(top, ground), (top, first)] + [(top, r) for r in roots]
    g = PatternGraph.from_labeled_edges(labels, edges)
    return NamedConstruction(f"phi-witness:{k}", g, phi_k_witness_size(k), g.edge_count)


# --- closed-form density bounds -----------------------------------------------

F = Fraction


def _c(k: int) -> int:
    return comb(k - 3, 2)


def density_lower_bound_raw(k: int, a: int, b: int, mu: int) -> Fraction:
    c = _c(k)
    num = c + (k - 5) * c + a * (k - 3) + b * (k - 2) + mu * (k - 2) + a
    return F(num, (k - 3) + c + a + b + mu)


def density_lower_bound_closed(k: int, a: int, b: int, mu: int) -> Fraction:
    s = a + b + mu
    return (F((k - 3) * (k - 4) ** 2, 2) + s * (k - 2)) / (F((k - 3) * (k - 2), 2) + s)


def upper_bound_1_raw(k: int, lam: int, mu: int) -> Fraction:
    c = _c(k)
    num = c + (k - 5) * c + lam * (k - 4) + c * (k - 3) + mu * (k - 2) + lam
    return F(num, (k - 3) + c + lam + mu)


def upper_bound_1_closed(k: int, lam: int, mu: int) -> Fraction:
    return (k - 2) + (F((k - 3) ** 2 * (k - 8), 2) - lam) / (F((k - 3) * (k - 2), 2) + lam + mu)


def upper_bound_2_raw(k: int, lam: int, mu: int, g: int, h: int) -> Fraction:
    c = _c(k)
    num = c + (k - 5) * c + lam * (k - 4) + (k - 3) * c + g + h + mu * (k - 2) + lam
    return F(num, (k - 3) + c + lam + mu)


def upper_bound_2_closed(k: int, lam: int, mu: int, g: int, h: int) -> Fraction:
    return (k - 2) + (F((k - 3) ** 2 * (k - 8), 2) + (g + h) - lam) / (F((k - 3) * (k - 2), 2) + lam + mu)


def upper_bound_3_raw(k: int, a: int, lam: int, mu: int) -> Fraction:
    c = _c(k)
    num = c + (k - 5) * c + a * (k - 3) + a * (k - 3) + lam * (k - 3) + mu * (k - 2) + a
    return F(num, (k - 3) + c + a + lam + mu)


def upper_bound_3_closed(k: int, a: int, lam: int, mu: int) -> Fraction:
    return (k - 2) + F(a * (k - 3) - lam - 2 * (k - 3) ** 2, (k - 3) + _c(k) + a + lam + mu)


def safe_round_bound_raw(k: int, gamma: int, delta: int, beta: int, cross: int) -> Fraction:
    """Edges over vertices when one of the two low vertices is present."""
    num = gamma * (2 * k - 4) + delta * (k - 2) + beta * (k - 2) + (k - 3) if cross == 1 else (
        gamma * (2 * k - 4) + delta * (k - 2) + beta * (k - 2) + 1 + 2 * (k - 3)
    )
    return F(num, 2 * gamma + delta + beta + cross)


def safe_round_bound_closed(k: int, gamma: int, delta: int, beta: int, cross: int) -> Fraction:
    return (k - 2) - F(1, 2 * gamma + delta + beta + cross)


def region_threshold(base_edges: int, base_vertices: int) -> int:
    """T with ``(A + 2s + e)/(B + s) < 13/7  iff  s + 7e < T`` for s, e >= 0."""
    return 13 * base_vertices - 7 * base_edges


# (edges, vertices, threshold) of every region condition in the thirteen-case
# analysis, in order of appearance; several regions recur
REGION_INSTANCES: tuple[tuple[int, int, int], ...] = (
    (23, 13, 8),
    (24, 13, 1),
    (22, 12, 2),
    (22, 12, 2),
    (20, 11, 3),
    (20, 11, 3),
    (20, 11, 3),
    (18, 10, 4),
    (18, 10, 4),
    (20, 11, 3),
)

# the distinct regions
REGION_TABLE: tuple[tuple[int, int, int], ...] = tuple(dict.fromkeys(REGION_INSTANCES))


BOUND_FORMULAS = {
    "density_lower_bound": (density_lower_bound_raw, density_lower_bound_closed),
    "upper_bound_1": (upper_bound_1_raw, upper_bound_1_closed),
    "upper_bound_2": (upper_bound_2_raw, upper_bound_2_closed),
    "upper_bound_3": (upper_bound_3_raw, upper_bound_3_closed),
    "safe_round_bound": (safe_round_bound_raw, safe_round_bound_closed),
}


def eval_bound_formula(name: str, form: str, **params: int) -> Fraction:
    if name not in BOUND_FORMULAS:
        raise KeyError(f"unknown bound formula {name!r}")
    raw, closed = BOUND_FORMULAS[name]
    if form == "raw":
        return raw(**params)
    if form == "closed":
        return closed(**params)
    raise ValueError("form must be 'raw' or 'closed'")


# side of k-2 on which each bound is meant to land
BOUND_DIRECTIONS = {
    "density_lower_bound": "<=",
    "upper_bound_1": ">",
    "upper_bound_2": ">",
    "upper_bound_3": ">",
    "safe_round_bound": "<",
}


def check_bound_inequality(name: str, **params: int) -> bool:
    """Whether the raw bound lands on its intended side of k-2."""
    k = params["k"]
    value = eval_bound_formula(name, "raw", **params)
    op = BOUND_DIRECTIONS[name]
    if op == ">":
        return value > k - 2
    if op == "<":
        return value < k - 2
    return value <= k - 2


# --- host for the four-round game --------------------------------------------

K4_PENDANT_AT = ("x", "a", "b", "a_1_1", "a_1_0", "a_0_1", "c", "b_1_1", "b_1_0", "b_0_1", "d")


def build_k4_game_host() -> NamedConstruction:
    """40 vertices: G0, both three-vertex companions, one pendant per possible early
    pebble image and two isolated vertices (witnesses for low-degree fourth pebbles)."""
    g0 = build_g0().graph
    labels = list(g0.labels)
    edges = [(g0.labels[u], g0.labels[v]) for u, v in g0.edges()]
    for side in ("a", "b"):
        pair = build_k4_companion_pair(side)
        labels += list(pair.g.labels[4:])
        edges += [
            (pair.g.labels[u], pair.g.labels[v]) for u, v in pair.g.edges() if max(u, v) >= 4
        ]
    for v in K4_PENDANT_AT:
        labels.append(f"pendant_{v}")
        edges.append((f"pendant_{v}", v))
    labels += ["isolated_1", "isolated_2"]
    g = PatternGraph.from_labeled_edges(labels, edges)
    return NamedConstruction("k4-host", g, 40, g.edge_count)
