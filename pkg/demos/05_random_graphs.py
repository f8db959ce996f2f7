"""
Copies of small patterns in G(n, p)
===================================

At p = n^(-1/rho) the number of induced copies of a strictly balanced
pattern is close to Poisson, so the probability of containing one settles
strictly between 0 and 1.
"""

import math

from zol.experiments import run_nonconvergence_demo, run_poisson_experiment, run_threshold_experiment
from zol.graphs import PatternGraph

rec = run_poisson_experiment(PatternGraph.complete(3), 1.0, 300, 500, seed=1)
print(rec.summary["lambda"], rec.summary["mean"], rec.summary["tv_distance"])

rec = run_nonconvergence_demo(PatternGraph.cycle(4), [200, 400], 500, seed=1)
print([row["frequency"] for row in rec.table], 1 - math.exp(-1 / 8))

# either side of the K4 threshold 2/3
rec = run_threshold_experiment(PatternGraph.complete(4), 400, [0.75, 0.6, 0.5], 100, seed=1)
for row in rec.table:
    print(row["alpha"], row["frequency"], round(row["expected_copies"], 3))
