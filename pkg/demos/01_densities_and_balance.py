"""
Densities, maximal density and balance
======================================

A graph is strictly balanced when every proper subgraph is sparser than the
whole graph.  The 21-vertex graph G0 is the main example.
"""

from zol.constructions import build_g0
from zol.graphs import PatternGraph, classify_balance, density, disjoint_union, max_density

# a triangle plus a disjoint edge is unbalanced: the triangle alone is denser
k3 = PatternGraph.complete(3)
lopsided = disjoint_union(k3, PatternGraph.complete(2))
print(density(lopsided), max_density(lopsided)[0], classify_balance(lopsided).value)

# two disjoint triangles: balanced, but not strictly
print(classify_balance(disjoint_union(k3, k3)).value)

# G0 has 21 vertices, 39 edges and every proper subgraph is sparser than 13/7
g0 = build_g0().graph
value, witness = max_density(g0)
print(g0.n, g0.edge_count, value, len(witness), classify_balance(g0).value)
