"""
Rooted pairs and safety thresholds
==================================

A rooted pair is a graph whose first few vertices are roots.  At edge
probability n^-alpha the pair is safe when every intermediate set S has more
new vertices than alpha times its new edges.  The threshold is the least
ratio of new vertices to new edges.
"""

from fractions import Fraction

from zol.constructions import build_k4_companion_pair, build_lower_pair
from zol.extensions import RootedPair, is_alpha_safe, safety_threshold, threshold_witness
from zol.graphs import PatternGraph

# a common neighbour of two roots: one vertex, two edges
common = RootedPair(PatternGraph.from_edges(3, [(0, 2), (1, 2)]), 2)
print(safety_threshold(common), is_alpha_safe(common, Fraction(2, 3)))

# the companion pairs used by Duplicator in the four-round game
for side in ("a", "b"):
    pair = build_k4_companion_pair(side)
    print(side, safety_threshold(pair), is_alpha_safe(pair, Fraction(7, 13))[0])

# pairs behind the depth-k lower bound land strictly between 1/(k-2) and 1/(k-3)
for family, k in ((1, 5), (2, 5), (3, 5), (2, 6), (3, 6)):
    pair = build_lower_pair(family, k)
    th = safety_threshold(pair, cap=40)
    print(family, k, th, k - 2 - 1 / th, sorted(pair.g.label(v) for v in threshold_witness(pair, cap=40))[:4])
