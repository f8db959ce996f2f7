"""
The full level-r extension property
===================================

Every choice of at most r vertices, split into "must see" and "must avoid",
needs a witness vertex.  At p = n^-alpha this needs n p^r to be large.
"""

from zol.experiments import run_extension_property_experiment
from zol.extensions import has_full_extension_property
from zol.graphs import PatternGraph

print(has_full_extension_property(PatternGraph.cycle(5), 1))
print(has_full_extension_property(PatternGraph.complete(5), 1))

for n, alpha, r in ((500, 0.4, 1), (1000, 0.4, 2), (500, 0.9, 2)):
    rec = run_extension_property_experiment(n, alpha, r, 10, seed=1)
    print(n, alpha, r, rec.summary["frequency"], round(rec.summary["expected_common_witnesses"], 2))
