"""
Existential sentences
=====================

Sentences are written with ``E x;`` for a quantifier, ``~`` for adjacency,
``=`` for equality, ``!`` in front of an atom, ``&`` and ``|``.
"""

from zol.constructions import build_case_h0, build_g0, build_phi_k_witness
from zol.graphs import PatternGraph
from zol.logic import build_phi4, build_phi_k, evaluate, parse, quantifier_depth, to_text

induced_path = parse("E x; E y; E z; x~y & y~z & !x~z & !x=z")
print(to_text(induced_path), quantifier_depth(induced_path))
print(evaluate(PatternGraph.path(3), induced_path), evaluate(PatternGraph.complete(3), induced_path))

# the depth-4 sentence holds in G0 and in none of the thirteen smaller candidates
phi = build_phi4()
print("G0:", evaluate(build_g0().graph, phi))
print("cases:", [evaluate(build_case_h0(c).graph, phi) for c in range(1, 14)])

# the depth-k family has a direct model for small k
for k in (5, 6):
    witness = build_phi_k_witness(k).graph
    print(k, witness.n, evaluate(witness, build_phi_k(k)))
