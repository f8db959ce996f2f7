"""Existential Ehrenfeucht games: exact solver, distinguishing sentences, strategies, simulation.

Spoiler picks one of the two graphs once and then places k pebbles in it, one per
round (repeats allowed).  Duplicator answers each pebble in the other graph.
Duplicator wins if the pebbled vertices span the same equalities and adjacencies.
"""

from __future__ import annotations

import enum
import itertools
import json
import random
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field

from .extensions import RootedPair, find_strict_extension, safety_threshold
from .graphs import GraphError, PatternGraph
from .logic import Adj, Eq, Exists, Not, Sentence, conj

MAX_GAME_VERTICES = 40
MAX_GAME_ROUNDS = 5


class Winner(enum.Enum):
    SPOILER = "spoiler"
    DUPLICATOR = "duplicator"


class StrategyViolation(RuntimeError):
    """The k=4 strategy met a position its assumptions do not cover."""


def _rows(graph) -> list[int]:
    if isinstance(graph, PatternGraph):
        return list(graph.rows)
    return [sum(1 << u for u in nbrs) for nbrs in graph.adjacency_sets]


Pairs = frozenset  # of (spoiler vertex, duplicator vertex)


class EhrGame:
    """Exact solver for the existential game on (g, h) with up to ``k`` rounds."""

    def __init__(self, g, h, k: int, *, memo: bool = True):
        if k < 0 or k > MAX_GAME_ROUNDS:
            raise GraphError(f"rounds must be in 0..{MAX_GAME_ROUNDS}")
        self.graphs = (g, h)
        self.rows = (_rows(g), _rows(h))
        for rows in self.rows:
            if len(rows) > MAX_GAME_VERTICES:
                raise GraphError(f"game graphs hold at most {MAX_GAME_VERTICES} vertices")
        self.k = k
        self.memo_enabled = memo
        self._memo: tuple[dict, dict] = ({}, {})
        self.nodes = 0

    def _replies(self, side: int, pairs: Pairs, x: int) -> int:
        """Bitmask of Duplicator vertices that keep the position a partial isomorphism."""
        a_rows, b_rows = self.rows[side], self.rows[1 - side]
        cand = (1 << len(b_rows)) - 1
        for xp, yp in pairs:
            if xp == x:
                return 1 << yp
            cand &= ~(1 << yp)
            if a_rows[x] >> xp & 1:
                cand &= b_rows[yp]
            else:
                cand &= ~b_rows[yp]
        return cand

    def spoiler_wins(self, side: int, pairs: Pairs, rounds: int) -> bool:
        if rounds <= 0:
            return False
        key = (pairs, rounds)
        memo = self._memo[side]
        if self.memo_enabled and key in memo:
            return memo[key]
        self.nodes += 1
        result = self.winning_move(side, pairs, rounds) is not None
        if self.memo_enabled:
            memo[key] = result
        return result

    def winning_move(self, side: int, pairs: Pairs, rounds: int) -> int | None:
        """A Spoiler vertex after which every reply loses, or None."""
        if rounds <= 0:
            return None
        used = {x for x, _ in pairs}
        for x in range(len(self.rows[side])):
            if x in used:
                continue  # repeating a pebble only wastes a round
            replies = self._replies(side, pairs, x)
            if all(self.spoiler_wins(side, pairs | {(x, y)}, rounds - 1) for y in _iter_bits(replies)):
                return x
        return None

    def duplicator_reply(self, side: int, pairs: Pairs, rounds: int, x: int) -> int | None:
        """A reply to ``x`` from which Duplicator still survives ``rounds - 1`` rounds."""
        for y in _iter_bits(self._replies(side, pairs, x)):
            if not self.spoiler_wins(side, pairs | {(x, y)}, rounds - 1):
                return y
        return None

    def spoiler_side(self, rounds: int | None = None) -> int | None:
        rounds = self.k if rounds is None else rounds
        for side in (0, 1):
            if self.spoiler_wins(side, frozenset(), rounds):
                return side
        return None


def _iter_bits(mask: int) -> Iterable[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass
class GameOutcome:
    winner: Winner
    spoiler_side: int | None = None
    first_move: int | None = None
    game: EhrGame | None = field(default=None, repr=False)


def solve_ehr(g, h, k: int, *, memo: bool = True) -> GameOutcome:
    """Who wins the k-round existential game on (g, h), plus Spoiler's opening move when Spoiler wins."""
    game = EhrGame(g, h, k, memo=memo)
    side = game.spoiler_side()
    if side is None:
        return GameOutcome(Winner.DUPLICATOR, game=game)
    return GameOutcome(Winner.SPOILER, side, game.winning_move(side, frozenset(), k), game)


def extract_distinguishing_sentence(g, h, k: int) -> Sentence | None:
    """An existential sentence of depth at most k true in exactly one of g, h.

    Built from Spoiler's winning strategy: each Spoiler move becomes a quantifier
    whose body fixes the new vertex's atomic type and conjoins the sentences for
    every surviving Duplicator reply.  Returns None when Duplicator wins.
    """
    game = EhrGame(g, h, k)
    side = game.spoiler_side()
    if side is None:
        return None

    def build(pairs: tuple[tuple[int, int], ...], rounds: int) -> Sentence:
        frozen = frozenset(pairs)
        need = next(r for r in range(1, rounds + 1) if game.spoiler_wins(side, frozen, r))
        x = game.winning_move(side, frozen, need)
        m = len(pairs)
        z = f"v{m}"
        rows = game.rows[side]
        literals: list[Sentence] = []
        for i, (xp, _) in enumerate(pairs):
            literals.append(Not(Eq(z, f"v{i}")))
            atom = Adj(z, f"v{i}")
            literals.append(atom if rows[x] >> xp & 1 else Not(atom))
        children: list[Sentence] = []
        for y in _iter_bits(game._replies(side, frozen, x)):
            child = build(pairs + ((x, y),), need - 1)
            if child not in children:
                children.append(child)
        parts = literals + children
        return Exists(z, conj(*parts) if parts else Eq(z, z))

    return build((), k)


# --- the k = 4 Duplicator strategy on a host containing G0 -------------------

# Duplicator's answer to a fourth pebble seeing at least two of the first three,
# keyed by the third image and by which of the three it sees.
K4_TABLE: dict[str, dict[tuple[int, int, int], str]] = {
    "a_1_1": {(1, 1, 1): "a_1_1__1_1", (1, 1, 0): "ap_1_1", (1, 0, 1): "a_1_0", (0, 1, 1): "a_0_1"},
    "a_1_0": {(1, 1, 1): "a_1_1", (1, 1, 0): "ap_1_1", (1, 0, 1): "a_1_0__1_0", (0, 1, 1): "a_1_0__0_1"},
    "a_0_1": {(1, 1, 1): "a_1_1", (1, 1, 0): "ap_1_1", (1, 0, 1): "a_0_1__1_0", (0, 1, 1): "a_0_1__0_1"},
    "c": {(1, 1, 1): "a_1_1", (1, 1, 0): "ap_1_1", (1, 0, 1): "c__1_0", (0, 1, 1): "c__0_1"},
    "b_1_1": {(1, 1, 1): "b_1_1__1_1", (1, 1, 0): "bp_1_1", (1, 0, 1): "b_1_0", (0, 1, 1): "b_0_1"},
    "b_1_0": {(1, 1, 1): "b_1_1", (1, 1, 0): "bp_1_1", (1, 0, 1): "b_1_0__1_0", (0, 1, 1): "b_1_0__0_1"},
    "b_0_1": {(1, 1, 1): "b_1_1", (1, 1, 0): "bp_1_1", (1, 0, 1): "b_0_1__1_0", (0, 1, 1): "b_0_1__0_1"},
    "d": {(1, 1, 1): "b_1_1", (1, 1, 0): "bp_1_1", (1, 0, 1): "d__1_0", (0, 1, 1): "d__0_1"},
}

# third pebble: keyed by the second image and the adjacency to the first two
K4_THIRD: dict[str, dict[tuple[int, int], str]] = {
    top: {(1, 1): f"{top}_1_1", (1, 0): f"{top}_1_0", (0, 1): f"{top}_0_1", (0, 0): centre}
    for top, centre in (("a", "c"), ("b", "d"))
}


@dataclass
class K4State:
    """Pebbles placed so far: Spoiler's in ``spoiler_graph``, Duplicator's in ``host``."""

    spoiler_graph: object
    host: PatternGraph
    spoiler_moves: list[int] = field(default_factory=list)
    duplicator_moves: list[int] = field(default_factory=list)


class K4Strategy:
    """Duplicator's four-round strategy on a labelled host containing G0 and the c/d companions."""

    def __init__(self, host: PatternGraph):
        if host.labels is None:
            raise GraphError("the k=4 strategy needs a labelled host")
        self.host = host
        self._cache: dict = {}

    def _at(self, label: str) -> int:
        try:
            return self.host.index(label)
        except GraphError:
            raise StrategyViolation(f"strategy assumption violated: host has no vertex {label!r}") from None

    def respond(self, state: K4State, x: int) -> int:
        sg = state.spoiler_graph.adjacency_sets
        for xp, yp in zip(state.spoiler_moves, state.duplicator_moves):
            if xp == x:
                return yp
        distinct: list[tuple[int, int]] = []
        for xp, yp in zip(state.spoiler_moves, state.duplicator_moves):
            if all(xp != d for d, _ in distinct):
                distinct.append((xp, yp))
        pattern = tuple(int(d in sg[x]) for d, _ in distinct)
        images = tuple(y for _, y in distinct)
        key = (images, pattern)
        if key not in self._cache:
            self._cache[key] = self._choose(images, pattern)
        return self._cache[key]

    def _choose(self, images: tuple[int, ...], pattern: tuple[int, ...]) -> int:
        host = self.host
        d = len(images)
        if d == 0:
            return self._at("x")
        if d == 1:
            return self._at("a" if pattern[0] else "b")
        if d == 2:
            top = host.label(images[1])
            if top not in K4_THIRD:
                raise StrategyViolation(f"strategy assumption violated: second image {top!r}")
            return self._at(K4_THIRD[top][pattern])
        if d == 3:
            if sum(pattern) >= 2:
                third = host.label(images[2])
                if third not in K4_TABLE:
                    raise StrategyViolation(f"strategy assumption violated: third image {third!r}")
                return self._at(K4_TABLE[third][pattern])
            return self._safe_witness(images, pattern)
        raise StrategyViolation("strategy assumption violated: more than four rounds")

    def _safe_witness(self, images: tuple[int, ...], pattern: tuple[int, ...]) -> int:
        """A new vertex seeing exactly the images flagged in ``pattern`` (at most one)."""
        k = len(images)
        rows = [0] * (k + 1)
        for i, bit in enumerate(pattern):
            if bit:
                rows[i] |= 1 << k
                rows[k] |= 1 << i
        pair = RootedPair(PatternGraph(k + 1, tuple(rows)), k)
        threshold = safety_threshold(pair)
        if threshold is not None and threshold < 1:
            raise StrategyViolation("strategy assumption violated: extension is not safe below 1")
        found = find_strict_extension(self.host, pair, list(images))
        if found is None:
            raise StrategyViolation("strategy assumption violated: host lacks a safe-extension witness")
        return found[k]


def duplicator_k4_respond(state: K4State, spoiler_move: int, strategy: K4Strategy | None = None) -> int:
    """Duplicator's answer under the four-round strategy; raises StrategyViolation if stuck."""
    strategy = strategy or K4Strategy(state.host)
    return strategy.respond(state, spoiler_move)


@dataclass
class K4Report:
    games: int = 0
    losses: list[tuple[tuple[int, ...], tuple[int, ...]]] = field(default_factory=list)
    violations: list[tuple[tuple[int, ...], str]] = field(default_factory=list)

    @property
    def duplicator_won_all(self) -> bool:
        return not self.losses and not self.violations


def verify_k4_strategy(spoiler_graph, host: PatternGraph, rounds: int = 4) -> K4Report:
    """Play every Spoiler move sequence in ``spoiler_graph`` against the strategy."""
    strategy = K4Strategy(host)
    s_adj = spoiler_graph.adjacency_sets
    h_adj = host.adjacency_sets
    n = len(s_adj)
    report = K4Report()
    state = K4State(spoiler_graph, host)

    def consistent(x: int, y: int) -> bool:
        for xp, yp in zip(state.spoiler_moves, state.duplicator_moves):
            if (xp == x) != (yp == y) or (xp in s_adj[x]) != (yp in h_adj[y]):
                return False
        return True

    def play(depth: int) -> None:
        if depth == rounds:
            report.games += 1
            return
        for x in range(n):
            try:
                y = strategy.respond(state, x)
            except StrategyViolation as exc:
                report.violations.append((tuple(state.spoiler_moves) + (x,), str(exc)))
                continue
            if not consistent(x, y):
                report.losses.append((tuple(state.spoiler_moves) + (x,), tuple(state.duplicator_moves) + (y,)))
                continue
            state.spoiler_moves.append(x)
            state.duplicator_moves.append(y)
            play(depth + 1)
            state.spoiler_moves.pop()
            state.duplicator_moves.pop()

    play(0)
    return report


# --- simulation ------------------------------------------------------------------

SpoilerPolicy = Callable[["GameState", random.Random], int]
DuplicatorPolicy = Callable[["GameState", int, random.Random], int]


@dataclass
class GameState:
    g1: object
    g2: object
    k: int
    spoiler_side: int
    spoiler_moves: list[int] = field(default_factory=list)
    duplicator_moves: list[int] = field(default_factory=list)

    @property
    def spoiler_graph(self):
        return self.g1 if self.spoiler_side == 1 else self.g2

    @property
    def duplicator_graph(self):
        return self.g2 if self.spoiler_side == 1 else self.g1

    @property
    def round(self) -> int:
        return len(self.spoiler_moves) + 1


@dataclass
class GameResult:
    winner: Winner
    transcript: list[dict]
    reason: str

    def transcript_lines(self) -> str:
        return "\n".join(json.dumps(entry, sort_keys=True) for entry in self.transcript)


def _valid_vertex(graph, v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool) and 0 <= v < len(graph.adjacency_sets)


def simulate_game(
    g1,
    g2,
    k: int,
    spoiler_policy: SpoilerPolicy,
    duplicator_policy: DuplicatorPolicy,
    seed: int,
    *,
    spoiler_side: int = 1,
) -> GameResult:
    """Play one game; a player naming an invalid vertex forfeits.

    ``spoiler_side`` is 1 or 2: the graph Spoiler plays in.
    """
    if spoiler_side not in (1, 2):
        raise GraphError("spoiler_side must be 1 or 2")
    rng = random.Random(seed)
    state = GameState(g1, g2, k, spoiler_side)
    dup_side = 3 - spoiler_side
    transcript: list[dict] = []
    for r in range(1, k + 1):
        x = spoiler_policy(state, rng)
        ok = _valid_vertex(state.spoiler_graph, x)
        transcript.append({"round": r, "side": spoiler_side, "vertex": x, "ok": ok})
        if not ok:
            return GameResult(Winner.DUPLICATOR, transcript, "spoiler named an invalid vertex")
        y = duplicator_policy(state, x, rng)
        ok = _valid_vertex(state.duplicator_graph, y)
        transcript.append({"round": r, "side": dup_side, "vertex": y, "ok": ok})
        if not ok:
            return GameResult(Winner.SPOILER, transcript, "duplicator named an invalid vertex")
        state.spoiler_moves.append(x)
        state.duplicator_moves.append(y)
        if not _partial_iso(state):
            return GameResult(Winner.SPOILER, transcript, f"partial isomorphism broken in round {r}")
    return GameResult(Winner.DUPLICATOR, transcript, "all rounds survived")


def _partial_iso(state: GameState) -> bool:
    a = state.spoiler_graph.adjacency_sets
    b = state.duplicator_graph.adjacency_sets
    moves = list(zip(state.spoiler_moves, state.duplicator_moves))
    for (x1, y1), (x2, y2) in itertools.combinations(moves, 2):
        if (x1 == x2) != (y1 == y2) or (x2 in a[x1]) != (y2 in b[y1]):
            return False
    return True


def random_spoiler(state: GameState, rng: random.Random) -> int:
    return rng.randrange(len(state.spoiler_graph.adjacency_sets))


def random_duplicator(state: GameState, x: int, rng: random.Random) -> int:
    return rng.randrange(len(state.duplicator_graph.adjacency_sets))


def optimal_spoiler(game: EhrGame) -> SpoilerPolicy:
    """Follows a winning strategy from the solver when there is one, else plays randomly."""

    def policy(state: GameState, rng: random.Random) -> int:
        side = state.spoiler_side - 1
        pairs = frozenset(zip(state.spoiler_moves, state.duplicator_moves))
        move = game.winning_move(side, pairs, state.k - len(state.spoiler_moves))
        return move if move is not None else random_spoiler(state, rng)

    return policy


def optimal_duplicator(game: EhrGame) -> DuplicatorPolicy:
    def policy(state: GameState, x: int, rng: random.Random) -> int:
        side = state.spoiler_side - 1
        pairs = frozenset(zip(state.spoiler_moves, state.duplicator_moves))
        y = game.duplicator_reply(side, pairs, state.k - len(state.spoiler_moves), x)
        return y if y is not None else random_duplicator(state, x, rng)

    return policy
