"""Small labelled graphs, exact densities, balance and graph6 I/O."""

from __future__ import annotations

import enum
import json
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .densest import max_ratio, best_set

MAX_PATTERN_VERTICES = 64


class GraphError(ValueError):
    """Malformed graph input (bad edge, bad label, bad graph6 string)."""


class BalanceClass(enum.Enum):
    STRICTLY_BALANCED = "strictly-balanced"
    BALANCED = "balanced"
    UNBALANCED = "unbalanced"


@dataclass(frozen=True, eq=True)
class PatternGraph:
    """Immutable simple graph on vertices ``0..n-1`` stored as adjacency bitmasks.

    ``labels`` is optional; when present it names every vertex uniquely.
    """

    n: int
    rows: tuple[int, ...]
    labels: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if not 0 <= self.n <= MAX_PATTERN_VERTICES:
            raise GraphError(f"pattern graphs hold at most {MAX_PATTERN_VERTICES} vertices, got {self.n}")
        if len(self.rows) != self.n:
            raise GraphError("row count does not match vertex count")
        full = (1 << self.n) - 1
        for v, row in enumerate(self.rows):
            if row & ~full or row >> v & 1:
                raise GraphError(f"row {v} has out-of-range bits or a loop")
            for u in _bits(row):
                if not self.rows[u] >> v & 1:
                    raise GraphError(f"adjacency is not symmetric at {{{u},{v}}}")
        if self.labels is not None:
            if len(self.labels) != self.n:
                raise GraphError("label count does not match vertex count")
            if len(set(self.labels)) != self.n:
                raise GraphError("vertex labels must be unique")

    @classmethod
    def from_edges(
        cls, n: int, edges: Iterable[tuple[int, int]], labels: Sequence[str] | None = None
    ) -> PatternGraph:
        rows = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows), tuple(labels) if labels is not None else None)

    @classmethod
    def from_labeled_edges(cls, labels: Sequence[str], edges: Iterable[tuple[str, str]]) -> PatternGraph:
        index = {name: i for i, name in enumerate(labels)}
        try:
            pairs = [(index[a], index[b]) for a, b in edges]
        except KeyError as exc:
            raise GraphError(f"unknown vertex label {exc.args[0]!r}") from None
        return cls.from_edges(len(labels), pairs, labels)

    @classmethod
    def complete(cls, n: int) -> PatternGraph:
        return cls.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)])

    @classmethod
    def cycle(cls, n: int) -> PatternGraph:
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def path(cls, n: int) -> PatternGraph:
        return cls.from_edges(n, [(i, i + 1) for i in range(n - 1)])

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        return list(_bits(self.rows[v]))

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    @cached_property
    def adjacency_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(_bits(r)) for r in self.rows)

    @cached_property
    def edge_count(self) -> int:
        return sum(r.bit_count() for r in self.rows) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in _bits(self.rows[u]) if u < v]

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    def index(self, label: str) -> int:
        if self.labels is None:
            return int(label)
        try:
            return self.labels.index(label)
        except ValueError:
            raise GraphError(f"no vertex labelled {label!r}") from None

    def induced(self, vertices: Iterable[int]) -> PatternGraph:
        """Induced subgraph, vertices renumbered in the given order."""
        order = list(vertices)
        pos = {v: i for i, v in enumerate(order)}
        rows = []
        for v in order:
            row = 0
            for u in _bits(self.rows[v]):
                if u in pos:
                    row |= 1 << pos[u]
            rows.append(row)
        labels = tuple(self.labels[v] for v in order) if self.labels is not None else None
        return PatternGraph(len(order), tuple(rows), labels)

    def edges_within(self, mask: int) -> int:
        return sum((self.rows[v] & mask).bit_count() for v in _bits(mask)) // 2

    def to_json(self) -> dict:
        data: dict = {"n": self.n, "edges": [list(e) for e in self.edges()]}
        if self.labels is not None:
            data["labels"] = list(self.labels)
        return data

    @classmethod
    def from_json(cls, data: Mapping) -> PatternGraph:
        try:
            n = int(data["n"])
            edges = [(int(u), int(v)) for u, v in data["edges"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise GraphError(f"labelled graph JSON needs 'n' and 'edges': {exc}") from None
        labels = data.get("labels")
        return cls.from_edges(n, edges, labels)

    def __repr__(self) -> str:
        return f"PatternGraph(n={self.n}, e={self.edge_count}, g6={graph6_encode(self)!r})"


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def vertices_of(mask: int) -> list[int]:
    return list(_bits(mask))


def disjoint_union(*graphs: PatternGraph) -> PatternGraph:
    edges, offset = [], 0
    for g in graphs:
        edges += [(u + offset, v + offset) for u, v in g.edges()]
        offset += g.n
    return PatternGraph.from_edges(offset, edges)


# --- densities -------------------------------------------------------------


def density(g: PatternGraph) -> Fraction:
    """Edges per vertex; the empty graph and a single vertex have density 0."""
    if g.n == 0:
        return Fraction(0)
    return Fraction(g.edge_count, g.n)


def max_density(g: PatternGraph) -> tuple[Fraction, frozenset[int]]:
    """Largest density over nonempty induced subgraphs.

    The witness is the largest maximizing vertex set (maximizers are closed under
    union, so it is unique).
    """
    if g.n == 0:
        return Fraction(0), frozenset()
    value, mask = max_ratio(g.rows, [0] * g.n)
    return value, frozenset(_bits(mask))


def classify_balance(g: PatternGraph) -> BalanceClass:
    if g.n == 0:
        raise GraphError("balance is undefined for the empty graph")
    rho = density(g)
    best, _ = max_density(g)
    if best > rho:
        return BalanceClass.UNBALANCED
    if g.n == 1:
        return BalanceClass.STRICTLY_BALANCED
    # is there a proper nonempty subset reaching rho?
    hit = best_set(g.rows, [0] * g.n, rho, exclude_full=True)
    if hit is not None and hit[0] >= 0:
        return BalanceClass.BALANCED
    return BalanceClass.STRICTLY_BALANCED


# --- embeddings ------------------------------------------------------------


def iter_embeddings(
    host_adj: Sequence[Iterable[int]] | Sequence[frozenset[int]],
    pattern: PatternGraph,
    pins: Mapping[int, int] | None = None,
    *,
    check_pinned_pairs: bool = True,
) -> Iterator[dict[int, int]]:
    """Yield injective maps pattern -> host preserving adjacency and non-adjacency.

    ``host_adj`` holds one neighbour set per host vertex.  Pinned pattern vertices
    are mapped as given; with ``check_pinned_pairs=False`` pairs of pinned vertices
    are not required to match (the strict-extension convention).
    """
    pins = dict(pins or {})
    host_n = len(host_adj)
    for u, img in pins.items():
        if not 0 <= u < pattern.n:
            raise GraphError(f"pinned pattern vertex {u} out of range")
        if not 0 <= img < host_n:
            raise GraphError(f"pinned host vertex {img} out of range")
    if len(set(pins.values())) != len(pins):
        return
    if check_pinned_pairs:
        items = list(pins.items())
        for i, (u, a) in enumerate(items):
            for w, b in items[i + 1 :]:
                if pattern.has_edge(u, w) != (b in host_adj[a]):
                    return
    free = [u for u in range(pattern.n) if u not in pins]
    order = _match_order(pattern, set(pins), free)
    mapping = dict(pins)
    used = set(pins.values())
    everything = range(host_n)

    def extend(depth: int) -> Iterator[dict[int, int]]:
        if depth == len(order):
            yield dict(mapping)
            return
        u = order[depth]
        nbr_imgs = [mapping[w] for w in pattern.neighbors(u) if w in mapping]
        non_imgs = [mapping[w] for w in mapping if w != u and not pattern.has_edge(u, w)]
        need = pattern.degree(u)
        if nbr_imgs:
            sets = sorted((host_adj[a] for a in nbr_imgs), key=len)
            cands: Iterable[int] = set(sets[0]).intersection(*sets[1:]) if len(sets) > 1 else sets[0]
        else:
            cands = everything
        for c in cands:
            if c in used or len(host_adj[c]) < need:
                continue
            if any(c in host_adj[a] for a in non_imgs):
                continue
            mapping[u] = c
            used.add(c)
            yield from extend(depth + 1)
            used.discard(c)
            del mapping[u]

    yield from extend(0)


def _match_order(pattern: PatternGraph, placed: set[int], free: list[int]) -> list[int]:
    order: list[int] = []
    placed = set(placed)
    remaining = set(free)
    while remaining:
        u = max(
            remaining,
            key=lambda w: (sum(1 for x in pattern.neighbors(w) if x in placed), pattern.degree(w), -w),
        )
        order.append(u)
        placed.add(u)
        remaining.discard(u)
    return order


def find_induced_embedding(
    host: PatternGraph, pattern: PatternGraph, pins: Mapping[int, int] | None = None
) -> dict[int, int] | None:
    return next(iter_embeddings(host.adjacency_sets, pattern, pins), None)


def automorphism_count(g: PatternGraph) -> int:
    return sum(1 for _ in iter_embeddings(g.adjacency_sets, g))


def count_induced_copies(host: PatternGraph, pattern: PatternGraph) -> int:
    """Number of vertex subsets of ``host`` inducing a copy of ``pattern``."""
    if pattern.n == 0:
        return 1
    embeddings = sum(1 for _ in iter_embeddings(host.adjacency_sets, pattern))
    return embeddings // automorphism_count(pattern)


# --- graph6 ----------------------------------------------------------------


def graph6_encode(g: PatternGraph) -> str:
    n = g.n
    if n <= 62:
        head = [n + 63]
    elif n <= 258047:
        head = [126, 63 + (n >> 12 & 63), 63 + (n >> 6 & 63), 63 + (n & 63)]
    else:  # pragma: no cover - bounded by MAX_PATTERN_VERTICES
        raise GraphError("graph too large for graph6")
    bits = [int(g.has_edge(i, j)) for j in range(1, n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    body = [63 + int("".join(map(str, bits[k : k + 6])), 2) for k in range(0, len(bits), 6)]
    return bytes(head + body).decode("ascii")


def graph6_decode(text: str, *, max_vertices: int = MAX_PATTERN_VERTICES) -> PatternGraph:
    n, edges = _graph6_parse(text, max_vertices)
    return PatternGraph.from_edges(n, edges)


def _graph6_parse(text: str, max_vertices: int) -> tuple[int, list[tuple[int, int]]]:
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<") :]
    data = s.encode("ascii", errors="replace")
    for i, byte in enumerate(data):
        if not 63 <= byte <= 126:
            raise GraphError(f"graph6: byte at offset {i} is outside the printable range 63..126")
    if not data:
        raise GraphError("graph6: empty input at offset 0")
    if data[0] != 126:
        n, pos = data[0] - 63, 1
    else:
        if len(data) >= 2 and data[1] == 126:
            if len(data) < 8:
                raise GraphError(f"graph6: truncated 8-byte size header at offset {len(data)}")
            n = 0
            for b in data[2:8]:
                n = n << 6 | (b - 63)
            pos = 8
        else:
            if len(data) < 4:
                raise GraphError(f"graph6: truncated 4-byte size header at offset {len(data)}")
            n = (data[1] - 63) << 12 | (data[2] - 63) << 6 | (data[3] - 63)
            pos = 4
    if n > max_vertices:
        raise GraphError(f"graph6: {n} vertices exceeds the limit of {max_vertices}")
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    body = data[pos:]
    if len(body) != need:
        raise GraphError(
            f"graph6: expected {need} body bytes for n={n}, found {len(body)} (offset {pos + min(len(body), need)})"
        )
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if (body[k // 6] - 63) >> (5 - k % 6) & 1:
                edges.append((i, j))
            k += 1
    return n, edges


def parse_graph_text(text: str) -> PatternGraph:
    """Read either a graph6 line or the labelled JSON form."""
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            data = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise GraphError(f"bad graph JSON at offset {exc.pos}: {exc.msg}") from None
        return PatternGraph.from_json(data)
    return graph6_decode(stripped.splitlines()[0] if stripped else "")
