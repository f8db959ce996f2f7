import csv
import itertools
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import graphs
from oracles import brute_embeddings
from zol import constructions as C
from zol.experiments import (
    HostGraph,
    _pairs_from_index,
    contains_copy,
    count_copies,
    expected_induced_copies,
    poisson_pmf,
    run_extension_property_experiment,
    run_nonconvergence_demo,
    run_poisson_experiment,
    run_safe_extension_experiment,
    run_threshold_experiment,
    sample_gnp,
    trial_rng,
    tv_to_poisson,
)
from zol.extensions import RootedPair
from zol.graphs import GraphError, PatternGraph, automorphism_count

K3 = PatternGraph.complete(3)
C4 = PatternGraph.cycle(4)
RECORD_KEYS = {"experiment", "params", "seed", "trials", "outcomes", "summary"}


def test_trial_streams_are_stable_and_distinct():
    a = trial_rng(5, 3).random(4)
    assert np.array_equal(a, trial_rng(5, 3).random(4))
    assert not np.array_equal(a, trial_rng(5, 4).random(4))
    assert not np.array_equal(a, trial_rng(6, 3).random(4))


def test_pair_index_mapping():
    total = 50 * 49 // 2
    pairs = _pairs_from_index(np.arange(total))
    expected = [(i, j) for j in range(50) for i in range(j)]
    assert [tuple(p) for p in pairs.tolist()] == expected


@pytest.mark.parametrize("n, p", [(60, 0.05), (60, 0.6), (3000, 0.001)])
def test_edge_count_within_five_sigma(n, p):
    total = n * (n - 1) // 2
    sigma = math.sqrt(total * p * (1 - p))
    for i in range(20):
        host = sample_gnp(n, p, trial_rng(99, i))
        assert abs(host.edge_count - total * p) < 5 * sigma
        assert len({tuple(e) for e in host.edges.tolist()}) == host.edge_count
        assert all(u < v for u, v in host.edges.tolist())


def test_sampler_extremes():
    assert sample_gnp(10, 0.0, trial_rng(0, 0)).edge_count == 0
    assert sample_gnp(10, 1.0, trial_rng(0, 0)).edge_count == 45
    with pytest.raises(GraphError):
        sample_gnp(10, 1.5, trial_rng(0, 0))


def test_pair_frequencies_are_uniform():
    hits = np.zeros((12, 12))
    for i in range(400):
        for u, v in sample_gnp(12, 0.1, trial_rng(1, i)).edges.tolist():
            hits[u, v] += 1
    upper = hits[np.triu_indices(12, 1)]
    assert abs(upper.mean() - 40) < 3
    assert upper.min() > 15 and upper.max() < 70


def _exact_expected_copies(n: int, pattern: PatternGraph, p: float) -> float:
    pairs = list(itertools.combinations(range(n), 2))
    total = 0.0
    for bits in itertools.product((0, 1), repeat=len(pairs)):
        chosen = [e for e, b in zip(pairs, bits) if b]
        weight = p ** len(chosen) * (1 - p) ** (len(pairs) - len(chosen))
        total += weight * count_copies(HostGraph(n, np.array(chosen).reshape(-1, 2)), pattern)
    return total


@pytest.mark.parametrize("pattern", [K3, PatternGraph.path(3), PatternGraph.from_edges(3, [(0, 1)])])
def test_expected_count_formula_matches_enumeration(pattern):
    assert expected_induced_copies(5, pattern, 0.3) == pytest.approx(_exact_expected_copies(5, pattern, 0.3))


@given(graphs(max_n=7), graphs(max_n=4))
@settings(max_examples=40)
def test_host_graph_counts_match_brute_force(host, pattern):
    h = HostGraph.from_pattern(host)
    assert count_copies(h, pattern) * automorphism_count(pattern) == brute_embeddings(host, pattern)
    assert contains_copy(h, pattern) == (count_copies(h, pattern) > 0)


def test_poisson_helpers():
    assert sum(poisson_pmf(j, 0.7) for j in range(40)) == pytest.approx(1.0)
    assert tv_to_poisson([0] * 10, 0.0) == 0.0
    assert tv_to_poisson([5] * 10, 0.01) > 0.9


def test_poisson_record_is_deterministic_and_worker_independent():
    a = run_poisson_experiment(K3, 1.0, 60, 30, seed=4)
    b = run_poisson_experiment(K3, 1.0, 60, 30, seed=4)
    c = run_poisson_experiment(K3, 1.0, 60, 30, seed=4, workers=2)
    assert json.dumps(a.to_json(), sort_keys=True) == json.dumps(b.to_json(), sort_keys=True)
    assert a.outcomes == c.outcomes
    assert set(a.to_json()) == RECORD_KEYS
    assert a.summary["lambda"] == pytest.approx(1 / 6)


def test_poisson_refuses_unbalanced_pattern():
    lollipop = PatternGraph.from_edges(4, [(0, 1), (1, 2), (0, 2), (2, 3)])
    with pytest.raises(GraphError):
        run_poisson_experiment(lollipop, 1.0, 50, 2, seed=0)
    with pytest.raises(GraphError):
        run_nonconvergence_demo(lollipop, [50], 2, seed=0)


def test_zero_c_gives_zero_counts():
    rec = run_poisson_experiment(K3, 0.0, 50, 5, seed=0)
    assert rec.outcomes == [0] * 5


def test_threshold_record_and_csv(tmp_path):
    rec = run_threshold_experiment(K3, 80, [0.999, 0.3], 20, seed=2)
    freqs = [row["frequency"] for row in rec.table]
    assert freqs[0] < 0.2 and freqs[1] > 0.9
    path = tmp_path / "t.csv"
    rec.write_csv(path)
    rows = list(csv.DictReader(path.open()))
    assert [float(r["alpha"]) for r in rows] == [0.999, 0.3]
    out = tmp_path / "t.json"
    rec.write_json(out)
    assert set(json.loads(out.read_text())) == RECORD_KEYS


def test_extension_experiment_sparse_and_dense():
    assert run_extension_property_experiment(200, 0.9, 2, 10, seed=1).summary["frequency"] <= 0.1
    assert run_extension_property_experiment(150, 0.3, 1, 10, seed=1).summary["frequency"] == 1.0


def test_safe_extension_slopes():
    isolated = RootedPair(PatternGraph.from_edges(2, []), 1)
    rec = run_safe_extension_experiment(isolated, 0.5, [100, 400], 10, seed=0)
    assert rec.summary["predicted_slope"] == 1
    assert rec.summary["fitted_slope"] == pytest.approx(1, abs=0.05)
    pendant = RootedPair(PatternGraph.from_edges(2, [(0, 1)]), 1)
    rec = run_safe_extension_experiment(pendant, 0.5, [100, 400, 1600], 40, seed=0)
    assert rec.summary["predicted_slope"] == 0.5
    assert rec.summary["fitted_slope"] == pytest.approx(0.5, abs=0.15)


def test_safe_extension_refuses_unsafe_pair():
    with pytest.raises(GraphError):
        run_safe_extension_experiment(C.build_k4_companion_pair("a"), 0.6, [100], 2, seed=0)


def test_nonconvergence_demo_small():
    rec = run_nonconvergence_demo(K3, [100], 200, seed=3)
    row = rec.table[0]
    assert row["limit"] == pytest.approx(1 - math.exp(-1 / 6))
    assert abs(row["frequency"] - row["limit"]) < 0.08
