"""Slow, obviously-correct reference implementations used only by the tests."""

from __future__ import annotations

import itertools
from fractions import Fraction

from zol.graphs import PatternGraph
from zol.logic import Adj, And, Eq, Exists, Not, Or, bound_variables


def subset_edge_counts(rows: list[int]) -> list[int]:
    """e(S) for every bitmask S, by adding the lowest vertex last."""
    counts = [0] * (1 << len(rows))
    for s in range(1, 1 << len(rows)):
        low = s & -s
        v = low.bit_length() - 1
        rest = s ^ low
        counts[s] = counts[rest] + bin(rows[v] & rest).count("1")
    return counts


def brute_max_density(g: PatternGraph) -> Fraction:
    counts = subset_edge_counts(list(g.rows))
    return max(Fraction(counts[s], bin(s).count("1")) for s in range(1, 1 << g.n))


def brute_strictly_balanced(g: PatternGraph) -> bool:
    counts = subset_edge_counts(list(g.rows))
    full = (1 << g.n) - 1
    rho = Fraction(counts[full], g.n)
    return all(Fraction(counts[s], bin(s).count("1")) < rho for s in range(1, full))


def brute_embeddings(host: PatternGraph, pattern: PatternGraph) -> int:
    total = 0
    for image in itertools.permutations(range(host.n), pattern.n):
        if all(
            pattern.has_edge(u, v) == host.has_edge(image[u], image[v])
            for u, v in itertools.combinations(range(pattern.n), 2)
        ):
            total += 1
    return total


def brute_threshold(g: PatternGraph, root_count: int) -> Fraction | None:
    """min v(S,H)/e(S,H) over all S with e >= 1, by listing every subset."""
    k = root_count
    best = None
    others = list(range(k, g.n))
    root_edges = g.edges_within((1 << k) - 1)
    for size in range(1, len(others) + 1):
        for chosen in itertools.combinations(others, size):
            mask = (1 << k) - 1
            for v in chosen:
                mask |= 1 << v
            e = g.edges_within(mask) - root_edges
            if e:
                r = Fraction(size, e)
                best = r if best is None or r < best else best
    return best


def brute_extension_property(g: PatternGraph, r: int) -> bool:
    n = g.n
    for a in range(r + 1):
        for b in range(r + 1 - a):
            for tup in itertools.permutations(range(n), a + b):
                xs, ys = tup[:a], tup[a:]
                if not any(
                    w not in tup and all(g.has_edge(w, x) for x in xs) and not any(g.has_edge(w, y) for y in ys)
                    for w in range(n)
                ):
                    return False
    return True


def _matrix(node, env, g: PatternGraph) -> bool:
    if isinstance(node, Adj):
        return g.has_edge(env[node.left], env[node.right])
    if isinstance(node, Eq):
        return env[node.left] == env[node.right]
    if isinstance(node, Not):
        return not _matrix(node.atom, env, g)
    if isinstance(node, And):
        return all(_matrix(p, env, g) for p in node.parts)
    if isinstance(node, Or):
        return any(_matrix(p, env, g) for p in node.parts)
    if isinstance(node, Exists):
        return _matrix(node.body, env, g)
    raise TypeError(node)


def brute_evaluate(g: PatternGraph, s) -> bool:
    """Try every assignment of every quantified variable (names assumed distinct).

    With negation only on atoms, an existential sentence holds iff its
    quantifier-free matrix holds under some assignment of all its variables.
    Only usable when n ** (number of variables) is small.
    """
    names = bound_variables(s)
    assert len(set(names)) == len(names)
    for values in itertools.product(range(g.n), repeat=len(names)):
        if _matrix(s, dict(zip(names, values)), g):
            return True
    return False


def naive_evaluate(g: PatternGraph, s, env: dict | None = None) -> bool:
    """Textbook semantics: each quantifier tries every vertex, no pruning or filtering."""
    env = env or {}
    if isinstance(s, Exists):
        return any(naive_evaluate(g, s.body, {**env, s.var: v}) for v in range(g.n))
    if isinstance(s, And):
        return all(naive_evaluate(g, p, env) for p in s.parts)
    if isinstance(s, Or):
        return any(naive_evaluate(g, p, env) for p in s.parts)
    return _matrix(s, env, g)


def brute_game_spoiler_wins(g: PatternGraph, h: PatternGraph, k: int) -> bool:
    """Plain minimax over full move sequences, repeats included, no memo."""

    def ok(xs, ys, a, b) -> bool:
        for i in range(len(xs)):
            for j in range(i):
                if (xs[i] == xs[j]) != (ys[i] == ys[j]) or a.has_edge(xs[i], xs[j]) != b.has_edge(ys[i], ys[j]):
                    return False
        return True

    def wins(xs, ys, a, b, r) -> bool:
        if not ok(xs, ys, a, b):
            return True
        if r == 0:
            return False
        return any(all(wins(xs + (x,), ys + (y,), a, b, r - 1) for y in range(b.n)) for x in range(a.n))

    return wins((), (), g, h, k) or wins((), (), h, g, k)
