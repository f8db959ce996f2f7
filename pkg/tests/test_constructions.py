import itertools
import json
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from zol import constructions as C
from zol.extensions import is_alpha_safe, safety_threshold
from zol.graphs import (
    BalanceClass,
    GraphError,
    classify_balance,
    density,
    graph6_decode,
    graph6_encode,
    max_density,
)
from zol.logic import build_phi4, build_phi_k, evaluate

CASE_COUNTS = {1: (12, 17)} | {c: (10, 16) for c in (3, 4, 6, 7, 12, 13)} | {c: (11, 17) for c in (2, 5, 8, 9, 10, 11)}


def test_base_graph_counts():
    h = C.build_base_h()
    assert (h.graph.n, h.graph.edge_count) == (10, 14)


@pytest.mark.parametrize("case", sorted(CASE_COUNTS))
def test_case_graph_counts(case):
    nc = C.build_case_h0(case)
    assert (nc.graph.n, nc.graph.edge_count) == CASE_COUNTS[case]
    assert (nc.expected_vertices, nc.expected_edges) == CASE_COUNTS[case]


@pytest.mark.parametrize("case", sorted(CASE_COUNTS))
def test_case_graphs_extend_base_graph_and_miss_phi(case):
    g = C.build_case_h0(case).graph
    base = C.build_base_h().graph
    for u, v in base.edges():
        assert g.has_edge(g.index(base.label(u)), g.index(base.label(v)))
    assert not evaluate(g, build_phi4())


def test_unknown_case():
    with pytest.raises(GraphError):
        C.build_case_h0(14)


def test_g0_triple():
    g = C.build_g0().graph
    assert (g.n, g.edge_count) == (21, 39)
    assert density(g) == Fraction(13, 7)
    assert classify_balance(g) is BalanceClass.STRICTLY_BALANCED
    assert max_density(g) == (Fraction(13, 7), frozenset(range(21)))
    assert evaluate(g, build_phi4(), budget=10**8)


def test_g0_schedule_and_frozen_encoding():
    g = C.build_g0().graph
    assert all(want == got for _, want, got in C.schedule_edge_counts(g))
    assert sum(want for _, want, _ in C.schedule_edge_counts(g)) == 39
    assert graph6_encode(g) == C.G0_GRAPH6
    assert graph6_decode(C.G0_GRAPH6) == g.induced(list(range(21)))


def test_g0_json_output():
    data = json.loads(json.dumps(C.build_g0().to_json()))
    assert data["graph6"] == C.G0_GRAPH6
    assert data["expected"] == {"vertices": 21, "edges": 39}


@pytest.mark.parametrize("side", ["a", "b"])
def test_companion_pairs(side):
    pair = C.build_k4_companion_pair(side)
    assert pair.root_count == 4 and pair.v == 3
    th = safety_threshold(pair)
    assert th == Fraction(3, 5)
    assert is_alpha_safe(pair, Fraction(7, 13))[0]
    assert not is_alpha_safe(pair, Fraction(3, 5))[0]
    # the roots induce the same graph as in G0
    g0 = C.build_g0().graph
    roots = pair.g.induced(list(range(4)))
    assert roots == g0.induced([g0.index(label) for label in pair.g.labels[:4]])


def test_companion_side_checked():
    with pytest.raises(GraphError):
        C.build_k4_companion_pair("c")


@pytest.mark.parametrize("family, k", [(1, 5), (2, 5), (3, 5), (2, 6), (3, 6)])
def test_lower_pair_thresholds_in_window(family, k):
    pair = C.build_lower_pair(family, k)
    assert pair.v == C.lower_pair_nonroot_count(family, k)
    th = safety_threshold(pair, cap=40)
    assert Fraction(1, k - 2) < th < Fraction(1, k - 3)
    t = k - 2 - 1 / th
    assert 0 < t < 1


PATTERN_SHAPES = {1: (lambda k: k - 4, lambda k: k - 4), 2: (lambda k: k - 2, lambda k: k - 4), 3: (lambda k: k - 3, lambda k: k - 4)}


@pytest.mark.parametrize("family, k", [(1, 5), (2, 5), (3, 5), (1, 6), (2, 6), (3, 6)])
def test_every_pattern_stays_in_window_and_default_is_worst(family, k):
    length, most = (f(k) for f in PATTERN_SHAPES[family])
    thresholds = []
    for pattern in itertools.product((0, 1), repeat=length):
        if sum(pattern) <= most:
            th = safety_threshold(C.build_lower_pair(family, k, pattern), cap=40)
            assert Fraction(1, k - 2) < th < Fraction(1, k - 3)
            thresholds.append(th)
    assert safety_threshold(C.build_lower_pair(family, k), cap=40) == min(thresholds)


def test_lower_pair_errors():
    with pytest.raises(GraphError):
        C.build_lower_pair(4, 5)
    with pytest.raises(GraphError):
        C.build_lower_pair(1, 4)
    with pytest.raises(GraphError):
        C.build_lower_pair(2, 5, (1, 1, 0))


@pytest.mark.parametrize("k", [5, 6])
def test_phi_k_witness(k):
    nc = C.build_phi_k_witness(k)
    assert nc.graph.n == C.phi_k_witness_size(k) == {5: 11, 6: 51}[k]
    assert evaluate(nc.graph, build_phi_k(k))


def test_region_table():
    for edges, vertices, threshold in C.REGION_TABLE:
        assert C.region_threshold(edges, vertices) == threshold
    assert len(C.REGION_TABLE) >= 5


@given(st.integers(0, 40), st.integers(1, 30), st.integers(0, 20), st.integers(0, 5))
def test_region_threshold_characterises_ratio(edges, vertices, s, e):
    t = C.region_threshold(edges, vertices)
    assert (Fraction(edges + 2 * s + e, vertices + s) < Fraction(13, 7)) == (s + 7 * e < t)


def test_density_lower_bound_example():
    assert C.eval_bound_formula("density_lower_bound", "closed", k=10, a=0, b=0, mu=0) == Fraction(9, 2)


@given(st.integers(5, 200), st.integers(0, 10**6), st.integers(0, 10**6), st.integers(0, 10**6))
def test_density_lower_bound_forms_agree(k, a, b, mu):
    assert C.density_lower_bound_raw(k, a, b, mu) == C.density_lower_bound_closed(k, a, b, mu)


@given(st.integers(5, 200), st.integers(0, 10**7), st.integers(0, 10**7), st.integers(0, 10**5), st.integers(0, 10**5))
def test_upper_bound_forms_agree(k, lam, mu, g, h):
    assert C.upper_bound_1_raw(k, lam, mu) == C.upper_bound_1_closed(k, lam, mu)
    assert C.upper_bound_2_raw(k, lam, mu, g, h) == C.upper_bound_2_closed(k, lam, mu, g, h)


@given(st.integers(5, 200), st.integers(0, 10**6), st.integers(0, 10**6), st.integers(0, 10**6))
def test_third_upper_bound_forms_agree(k, a, lam, mu):
    assert C.upper_bound_3_raw(k, a, lam, mu) == C.upper_bound_3_closed(k, a, lam, mu)


@given(st.integers(5, 60), st.integers(0, 500), st.integers(0, 500), st.integers(0, 500), st.sampled_from([1, 2]))
def test_safe_round_bound_forms_agree(k, gamma, delta, beta, cross):
    assert C.safe_round_bound_raw(k, gamma, delta, beta, cross) == C.safe_round_bound_closed(k, gamma, delta, beta, cross)
    assert C.check_bound_inequality("safe_round_bound", k=k, gamma=gamma, delta=delta, beta=beta, cross=cross)


@given(st.sampled_from(range(10, 101, 10)), st.data())
def test_second_upper_bound_exceeds_k_minus_2(k, data):
    lam = data.draw(st.integers(0, (k - 3) * comb(k - 3, 2)))
    mu = data.draw(st.integers(0, k**4))
    gh = data.draw(st.integers(2 * k * k, 4 * k * k))
    g = data.draw(st.integers(0, gh))
    assert C.check_bound_inequality("upper_bound_2", k=k, lam=lam, mu=mu, g=g, h=gh - g)


def test_bound_formula_lookup_errors():
    with pytest.raises(KeyError):
        C.eval_bound_formula("nope", "raw", k=5)
    with pytest.raises(ValueError):
        C.eval_bound_formula("upper_bound_1", "sideways", k=5, lam=0, mu=0)


def test_k4_host_shape():
    host = C.build_k4_game_host().graph
    g0 = C.build_g0().graph
    assert host.n == 40
    assert host.induced([host.index(v) for v in g0.labels]) == g0
    for side in ("a", "b"):
        pair = C.build_k4_companion_pair(side)
        assert host.induced([host.index(v) for v in pair.g.labels]) == pair.g


def test_region_instances_cover_table():
    assert set(C.REGION_INSTANCES) == set(C.REGION_TABLE)
    assert len(C.REGION_INSTANCES) == 10
