import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import graphs, random_graph
from oracles import brute_game_spoiler_wins
from zol import constructions as C
from zol.games import (
    EhrGame,
    K4State,
    K4Strategy,
    Winner,
    duplicator_k4_respond,
    extract_distinguishing_sentence,
    optimal_duplicator,
    optimal_spoiler,
    random_duplicator,
    random_spoiler,
    simulate_game,
    solve_ehr,
)
from zol.graphs import GraphError, PatternGraph
from zol.logic import check_closed, evaluate, quantifier_depth, random_sentence

K3 = PatternGraph.complete(3)
P3 = PatternGraph.path(3)


def test_triangle_against_path():
    out = solve_ehr(K3, P3, 2)
    assert out.winner is Winner.SPOILER
    assert solve_ehr(K3, P3, 1).winner is Winner.DUPLICATOR
    s = extract_distinguishing_sentence(K3, P3, 2)
    assert quantifier_depth(s) <= 2
    assert evaluate(K3, s) != evaluate(P3, s)


def test_isolated_vertex_needs_one_round():
    g = PatternGraph.from_edges(3, [(0, 1)])
    out = solve_ehr(g, PatternGraph.complete(2), 2)
    assert out.winner is Winner.SPOILER
    assert out.spoiler_side == 0


def test_zero_rounds_is_duplicator_win():
    assert solve_ehr(K3, PatternGraph(1, (0,)), 0).winner is Winner.DUPLICATOR
    assert extract_distinguishing_sentence(K3, P3, 0) is None


def test_limits_enforced():
    with pytest.raises(GraphError):
        solve_ehr(K3, P3, 6)
    with pytest.raises(GraphError):
        solve_ehr(PatternGraph.from_edges(41, []), K3, 1)


@given(graphs(max_n=7), st.integers(1, 3))
@settings(max_examples=100)
def test_duplicator_wins_against_itself(g, k):
    assert solve_ehr(g, g, k).winner is Winner.DUPLICATOR


@given(graphs(max_n=6), graphs(max_n=6), st.integers(1, 3))
@settings(max_examples=60)
def test_symmetric_and_monotone(g, h, k):
    a = solve_ehr(g, h, k).winner
    assert solve_ehr(h, g, k).winner is a
    if a is Winner.SPOILER:
        assert solve_ehr(g, h, k + 1).winner is Winner.SPOILER


@given(graphs(max_n=6), graphs(max_n=6), st.integers(1, 3))
@settings(max_examples=100)
def test_memo_matches_plain_search(g, h, k):
    assert solve_ehr(g, h, k).winner == solve_ehr(g, h, k, memo=False).winner


@given(graphs(max_n=4), graphs(max_n=4), st.integers(1, 3))
@settings(max_examples=60)
def test_solver_matches_minimax(g, h, k):
    assert (solve_ehr(g, h, k).winner is Winner.SPOILER) == brute_game_spoiler_wins(g, h, k)


@given(graphs(max_n=7), graphs(max_n=7), st.integers(1, 3))
@settings(max_examples=120)
def test_extracted_sentence_distinguishes(g, h, k):
    s = extract_distinguishing_sentence(g, h, k)
    if s is None:
        assert solve_ehr(g, h, k).winner is Winner.DUPLICATOR
        return
    check_closed(s)
    assert quantifier_depth(s) <= k
    assert evaluate(g, s) != evaluate(h, s)


@given(graphs(max_n=6), graphs(max_n=6), st.integers(0, 10**6))
@settings(max_examples=60)
def test_duplicator_win_means_no_small_sentence_separates(g, h, seed):
    if solve_ehr(g, h, 2).winner is Winner.SPOILER:
        return
    rng = random.Random(seed)
    for _ in range(10):
        s = random_sentence(rng, 2, width=3)
        assert evaluate(g, s) == evaluate(h, s)


def test_optimal_players_in_simulation(rng):
    for _ in range(30):
        g, h = random_graph(rng, 6, 0.5), random_graph(rng, 6, 0.5)
        out = solve_ehr(g, h, 3)
        side = 1 if out.spoiler_side in (None, 0) else 2
        res = simulate_game(g, h, 3, optimal_spoiler(out.game), optimal_duplicator(out.game), seed=7, spoiler_side=side)
        assert res.winner is out.winner


def test_simulation_forfeit_and_transcript():
    res = simulate_game(K3, P3, 2, lambda s, r: 99, random_duplicator, seed=1)
    assert res.winner is Winner.DUPLICATOR and "invalid" in res.reason
    res = simulate_game(K3, P3, 2, random_spoiler, lambda s, x, r: -1, seed=1)
    assert res.winner is Winner.SPOILER
    res = simulate_game(K3, P3, 2, random_spoiler, random_duplicator, seed=3)
    for line in res.transcript_lines().splitlines():
        assert set(json.loads(line)) == {"round", "side", "vertex", "ok"}
    with pytest.raises(GraphError):
        simulate_game(K3, P3, 2, random_spoiler, random_duplicator, seed=1, spoiler_side=0)


def test_simulation_is_seed_deterministic():
    a = simulate_game(K3, P3, 3, random_spoiler, random_duplicator, seed=11)
    b = simulate_game(K3, P3, 3, random_spoiler, random_duplicator, seed=11)
    assert a.transcript == b.transcript


@pytest.fixture(scope="module")
def k4_host():
    return C.build_k4_game_host().graph


def test_k4_strategy_opening_replies(k4_host):
    host = k4_host
    state = K4State(host, host)
    strategy = K4Strategy(host)
    x = host.index("x")
    assert duplicator_k4_respond(state, x, strategy) == x
    state.spoiler_moves.append(x)
    state.duplicator_moves.append(x)
    a = host.index("a")
    # a neighbour of the first pebble is answered by the top vertex a
    assert host.label(duplicator_k4_respond(state, a, strategy)) == "a"
    state.spoiler_moves.append(a)
    state.duplicator_moves.append(a)
    third = host.index("a_1_1")
    assert host.label(duplicator_k4_respond(state, third, strategy)) == "a_1_1"


def test_k4_strategy_needs_labels():
    with pytest.raises(GraphError):
        K4Strategy(PatternGraph.complete(3))


def test_k4_strategy_repeat_move_reuses_reply(k4_host):
    state = K4State(k4_host, k4_host, [5], [k4_host.index("x")])
    assert duplicator_k4_respond(state, 5) == k4_host.index("x")


def test_exhaustive_game_is_consistent():
    g = random_graph(random.Random(3), 6, 0.5)
    game = EhrGame(g, g, 3)
    assert game.spoiler_side() is None
    assert game.duplicator_reply(0, frozenset(), 3, 2) is not None
