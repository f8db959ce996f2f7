"""Rooted pairs, safety thresholds and strict extensions in host graphs."""

from __future__ import annotations

import itertools
import json
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction

from .densest import best_set, max_ratio
from .graphs import GraphError, PatternGraph, iter_embeddings, parse_graph_text

DEFAULT_VERTEX_CAP = 26


class InstanceTooLarge(RuntimeError):
    """The non-root part exceeds the configured enumeration cap."""


@dataclass(frozen=True)
class RootedPair:
    """A graph whose first ``root_count`` vertices span the root graph."""

    g: PatternGraph
    root_count: int

    def __post_init__(self) -> None:
        if not 0 <= self.root_count <= self.g.n:
            raise GraphError(f"root count {self.root_count} outside 0..{self.g.n}")

    @property
    def roots(self) -> range:
        return range(self.root_count)

    @property
    def extension_vertices(self) -> range:
        return range(self.root_count, self.g.n)

    @property
    def v(self) -> int:
        return self.g.n - self.root_count

    @property
    def e(self) -> int:
        return self.g.edge_count - self.g.edges_within((1 << self.root_count) - 1)

    def to_json(self) -> dict:
        data = self.g.to_json()
        return {"graph": data, "roots": list(self.roots)}

    @classmethod
    def from_json(cls, data: Mapping | str) -> RootedPair:
        if isinstance(data, str):
            try:
                data = json.loads(data)
            except json.JSONDecodeError as exc:
                raise GraphError(f"bad pair JSON at offset {exc.pos}: {exc.msg}") from None
        try:
            graph = data["graph"]
            roots = [int(r) for r in data["roots"]]
        except (KeyError, TypeError, ValueError):
            raise GraphError("pair JSON needs 'graph' and 'roots'") from None
        if isinstance(graph, str):
            g = parse_graph_text(graph)
        elif isinstance(graph, Mapping):
            g = PatternGraph.from_json(graph)
        else:
            edges = [(int(u), int(v)) for u, v in graph]
            n = max((max(e) for e in edges), default=-1) + 1
            n = max(n, max(roots, default=-1) + 1)
            g = PatternGraph.from_edges(n, edges)
        return pair_with_roots(g, roots)


def pair_with_roots(g: PatternGraph, roots: Sequence[int]) -> RootedPair:
    """Renumber ``g`` so the given roots come first (in the given order)."""
    if len(set(roots)) != len(roots) or any(not 0 <= r < g.n for r in roots):
        raise GraphError(f"invalid root list {list(roots)}")
    rest = [v for v in range(g.n) if v not in set(roots)]
    return RootedPair(g.induced(list(roots) + rest), len(roots))


def _extension_system(pair: RootedPair) -> tuple[list[int], list[int]]:
    """Adjacency masks among non-roots and edge counts into the roots."""
    k = pair.root_count
    root_mask = (1 << k) - 1
    masks, weights = [], []
    for v in pair.extension_vertices:
        row = pair.g.rows[v]
        masks.append(row >> k)
        weights.append((row & root_mask).bit_count())
    return masks, weights


def _check_cap(pair: RootedPair, cap: int | None) -> None:
    limit = DEFAULT_VERTEX_CAP if cap is None else cap
    if pair.v > limit:
        raise InstanceTooLarge(f"instance too large: {pair.v} non-root vertices exceeds the cap of {limit}")


def counts_for(pair: RootedPair, vertices: Iterable[int]) -> tuple[int, int]:
    """``(v(S,H), e(S,H))`` for the vertex set S, which must contain every root."""
    s = set(vertices)
    missing = [r for r in pair.roots if r not in s]
    if missing:
        raise GraphError(f"vertex set is missing root(s) {missing}")
    if any(not 0 <= u < pair.g.n for u in s):
        raise GraphError("vertex set has out-of-range vertices")
    mask = sum(1 << u for u in s)
    root_mask = (1 << pair.root_count) - 1
    return len(s) - pair.root_count, pair.g.edges_within(mask) - pair.g.edges_within(root_mask)


def deficiency(pair: RootedPair, vertices: Iterable[int], alpha: Fraction) -> Fraction:
    """``v(S,H) - alpha * e(S,H)``."""
    v, e = counts_for(pair, vertices)
    return v - Fraction(alpha) * e


def is_alpha_safe(
    pair: RootedPair, alpha: Fraction, *, cap: int | None = None
) -> tuple[bool, frozenset[int] | None]:
    """Whether every S strictly containing the roots has positive deficiency.

    On failure the second item is a violating vertex set (roots included).
    """
    alpha = Fraction(alpha)
    if pair.v == 0:
        raise GraphError("pair has no extension vertices")
    if alpha < 0:
        raise GraphError("alpha must be nonnegative")
    _check_cap(pair, cap)
    if alpha == 0:
        return True, None
    masks, weights = _extension_system(pair)
    # deficiency <= 0  iff  e(S) - |S|/alpha >= 0
    hit = best_set(masks, weights, 1 / alpha)
    if hit is None or hit[0] < 0:
        return True, None
    k = pair.root_count
    violator = frozenset(range(k)) | {k + i for i in range(len(masks)) if hit[1] >> i & 1}
    return False, violator


def safety_threshold(pair: RootedPair, *, cap: int | None = None) -> Fraction | None:
    """Least ``v(S,H)/e(S,H)`` over S with at least one edge; ``None`` if unbounded.

    ``is_alpha_safe(pair, a)`` holds exactly when ``a`` is below this value.
    """
    if pair.v == 0:
        raise GraphError("pair has no extension vertices")
    _check_cap(pair, cap)
    masks, weights = _extension_system(pair)
    ratio, _ = max_ratio(masks, weights)
    if ratio == 0:
        return None
    return 1 / ratio


def threshold_witness(pair: RootedPair, *, cap: int | None = None) -> frozenset[int]:
    """Largest non-root set attaining the safety threshold (roots included)."""
    _check_cap(pair, cap)
    masks, weights = _extension_system(pair)
    _, mask = max_ratio(masks, weights)
    k = pair.root_count
    return frozenset(range(k)) | {k + i for i in range(len(masks)) if mask >> i & 1}


# --- strict extensions in hosts ------------------------------------------------


def _host_adjacency(host) -> Sequence[frozenset[int]] | Sequence[set[int]]:
    return host.adjacency_sets


def find_strict_extension(host, pair: RootedPair, root_image: Sequence[int]) -> dict[int, int] | None:
    """An injective extension of ``root_image`` realising the pair exactly on new pairs.

    Adjacency among the roots is not checked.
    """
    if len(root_image) != pair.root_count:
        raise GraphError(f"expected {pair.root_count} root images, got {len(root_image)}")
    pins = dict(enumerate(root_image))
    return next(iter_embeddings(_host_adjacency(host), pair.g, pins, check_pinned_pairs=False), None)


def count_strict_extensions(host, pair: RootedPair, root_image: Sequence[int]) -> int:
    """Number of vertex sets W such that some ordering of W is a strict extension."""
    if len(root_image) != pair.root_count:
        raise GraphError(f"expected {pair.root_count} root images, got {len(root_image)}")
    pins = dict(enumerate(root_image))
    seen = set()
    for emb in iter_embeddings(_host_adjacency(host), pair.g, pins, check_pinned_pairs=False):
        seen.add(frozenset(emb[v] for v in pair.extension_vertices))
    return len(seen)


def has_full_extension_property(host, r: int) -> tuple[bool, tuple[tuple[int, ...], tuple[int, ...]] | None]:
    """Level-r extension property: every disjoint X, Y with |X|+|Y| <= r has a witness.

    A witness is a vertex outside X and Y adjacent to all of X and none of Y.
    Returns the first failing ``(X, Y)`` when the property fails.
    """
    if r < 0:
        raise GraphError("r must be nonnegative")
    adj = _host_adjacency(host)
    n = len(adj)
    rows = [sum(1 << u for u in nbrs) for nbrs in adj]
    full = (1 << n) - 1
    for total in range(r + 1):
        if n < total:
            break
        for chosen in itertools.combinations(range(n), total):
            chosen_mask = sum(1 << u for u in chosen)
            for a in range(total + 1):
                for xs in itertools.combinations(chosen, a):
                    cand = full & ~chosen_mask
                    for x in xs:
                        cand &= rows[x]
                        if not cand:
                            break
                    if cand:
                        ys = [y for y in chosen if y not in xs]
                        for y in ys:
                            cand &= ~rows[y]
                            if not cand:
                                break
                    if not cand:
                        return False, (xs, tuple(y for y in chosen if y not in xs))
    return True, None
