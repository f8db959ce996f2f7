"""
Existential Ehrenfeucht games
=============================

Spoiler commits to one graph and pebbles k vertices there; Duplicator answers
in the other graph.  When Spoiler wins, the winning strategy turns into an existential
sentence of depth k that separates the graphs.
"""

import random

from zol.constructions import build_k4_game_host
from zol.games import extract_distinguishing_sentence, optimal_duplicator, optimal_spoiler, simulate_game, solve_ehr, verify_k4_strategy
from zol.graphs import PatternGraph
from zol.logic import evaluate, to_text

k3, p3 = PatternGraph.complete(3), PatternGraph.path(3)
out = solve_ehr(k3, p3, 2)
print(out.winner.value, out.spoiler_side, out.first_move)

s = extract_distinguishing_sentence(k3, p3, 2)
print(to_text(s), evaluate(k3, s), evaluate(p3, s))

# replay the optimal strategies move by move
result = simulate_game(k3, p3, 2, optimal_spoiler(out.game), optimal_duplicator(out.game), seed=0, spoiler_side=out.spoiler_side + 1)
print(result.transcript_lines())

# Duplicator's fixed four-round strategy against every Spoiler sequence in a random graph
host = build_k4_game_host().graph
rng = random.Random(1)
spoiler = PatternGraph.from_edges(12, [(u, v) for u in range(12) for v in range(u + 1, 12) if rng.random() < 0.5])
report = verify_k4_strategy(spoiler, host)
print(report.games, report.duplicator_won_all)
