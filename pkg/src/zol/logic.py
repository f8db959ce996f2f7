"""Existential first-order sentences over graphs: AST, text syntax, evaluation, builders.

Text syntax::

    phi  ::= "E" ident ";" phi | phi "&" phi | phi "|" phi | "!" atom | atom | "(" phi ")"
    atom ::= ident "~" ident | ident "=" ident

``&`` binds tighter than ``|`` and a quantifier body extends as far right as
possible.  Negation is allowed only directly above an atom.
"""

from __future__ import annotations

import itertools
import random
import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import Union

# --- AST ---------------------------------------------------------------------

Span = tuple[int, int]


@dataclass(frozen=True)
class Adj:
    left: str
    right: str
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Eq:
    left: str
    right: str
    span: Span | None = field(default=None, compare=False, repr=False)


Atom = Union[Adj, Eq]


@dataclass(frozen=True)
class Not:
    atom: Atom
    span: Span | None = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        if not isinstance(self.atom, (Adj, Eq)):
            raise SentenceError("negation is only allowed directly above an atom")


@dataclass(frozen=True)
class And:
    parts: tuple[Sentence, ...]
    span: Span | None = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        if len(self.parts) < 2:
            raise SentenceError("a conjunction needs at least two parts; use conj()")


@dataclass(frozen=True)
class Or:
    parts: tuple[Sentence, ...]
    span: Span | None = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        if len(self.parts) < 2:
            raise SentenceError("a disjunction needs at least two parts; use disj()")


@dataclass(frozen=True)
class Exists:
    var: str
    body: Sentence
    span: Span | None = field(default=None, compare=False, repr=False)


Sentence = Union[Exists, And, Or, Not, Adj, Eq]
Literal = Union[Adj, Eq, Not]


class SentenceError(ValueError):
    """Structurally invalid sentence (free variable, bad negation, ...)."""


class ParseError(SentenceError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class BudgetExceeded(RuntimeError):
    """The evaluator ran out of its node budget before reaching an answer."""


def conj(*parts: Sentence) -> Sentence:
    flat = tuple(parts)
    if not flat:
        raise SentenceError("empty conjunction")
    return flat[0] if len(flat) == 1 else And(flat)


def disj(*parts: Sentence) -> Sentence:
    flat = tuple(parts)
    if not flat:
        raise SentenceError("empty disjunction")
    return flat[0] if len(flat) == 1 else Or(flat)


def exists(names: Sequence[str] | str, body: Sentence) -> Sentence:
    if isinstance(names, str):
        names = [names]
    for name in reversed(list(names)):
        body = Exists(name, body)
    return body


def adj(u: str, v: str) -> Adj:
    return Adj(u, v)


def nadj(u: str, v: str) -> Not:
    return Not(Adj(u, v))


def literal(u: str, v: str, adjacent: bool) -> Literal:
    return Adj(u, v) if adjacent else Not(Adj(u, v))


# --- structure ---------------------------------------------------------------


def quantifier_depth(s: Sentence) -> int:
    if isinstance(s, Exists):
        return 1 + quantifier_depth(s.body)
    if isinstance(s, (And, Or)):
        return max(quantifier_depth(p) for p in s.parts)
    return 0


def free_variables(s: Sentence) -> set[str]:
    if isinstance(s, (Adj, Eq)):
        return {s.left, s.right}
    if isinstance(s, Not):
        return free_variables(s.atom)
    if isinstance(s, (And, Or)):
        return set().union(*(free_variables(p) for p in s.parts))
    return free_variables(s.body) - {s.var}


def check_closed(s: Sentence) -> None:
    free = free_variables(s)
    if free:
        raise SentenceError(f"sentence has unbound variable(s): {sorted(free)}")


def iter_literals(s: Sentence) -> Iterable[Literal]:
    if isinstance(s, (Adj, Eq, Not)):
        yield s
    elif isinstance(s, (And, Or)):
        for p in s.parts:
            yield from iter_literals(p)
    else:
        yield from iter_literals(s.body)


def bound_variables(s: Sentence) -> list[str]:
    if isinstance(s, Exists):
        return [s.var] + bound_variables(s.body)
    if isinstance(s, (And, Or)):
        return [v for p in s.parts for v in bound_variables(p)]
    return []


# --- text syntax -------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<ident>[A-Za-z_][A-Za-z0-9_']*)|(?P<op>[;&|!()~=]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"lexical error: unexpected character {text[pos]!r}", pos)
        start = m.start("ident") if m.group("ident") else m.start("op")
        if m.group("ident"):
            word = m.group("ident")
            tokens.append(("E" if word == "E" else "ident", word, start))
        else:
            tokens.append((m.group("op"), m.group("op"), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0
        self.scope: list[str] = []

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self, kind: str) -> tuple[str, str, int]:
        tok = self.peek()
        if tok[0] != kind:
            found = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ParseError(f"expected {kind!r}, found {found}", tok[2])
        self.i += 1
        return tok

    def disjunction(self) -> Sentence:
        start = self.peek()[2]
        parts = [self.conjunction()]
        while self.peek()[0] == "|":
            self.i += 1
            parts.append(self.conjunction())
        return parts[0] if len(parts) == 1 else Or(tuple(parts), (start, self.peek()[2]))

    def conjunction(self) -> Sentence:
        start = self.peek()[2]
        parts = [self.unary()]
        while self.peek()[0] == "&":
            self.i += 1
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts), (start, self.peek()[2]))

    def unary(self) -> Sentence:
        kind, _, pos = self.peek()
        if kind == "E":
            self.i += 1
            name = self.take("ident")[1]
            self.take(";")
            self.scope.append(name)
            body = self.disjunction()
            self.scope.pop()
            return Exists(name, body, (pos, self.peek()[2]))
        if kind == "!":
            self.i += 1
            inner_pos = self.peek()[2]
            inner = self.unary()
            if not isinstance(inner, (Adj, Eq)):
                raise ParseError("negation of non-atom", inner_pos)
            return Not(inner, (pos, self.peek()[2]))
        if kind == "(":
            self.i += 1
            inner = self.disjunction()
            self.take(")")
            return inner
        if kind == "ident":
            return self.atom()
        found = "end of input" if kind == "end" else repr(self.peek()[1])
        raise ParseError(f"expected a formula, found {found}", pos)

    def atom(self) -> Atom:
        left = self.var()
        kind, _, pos = self.peek()
        if kind not in ("~", "="):
            raise ParseError("expected '~' or '=' in atom", pos)
        self.i += 1
        right = self.var()
        span = (left[1], self.peek()[2])
        return Adj(left[0], right[0], span) if kind == "~" else Eq(left[0], right[0], span)

    def var(self) -> tuple[str, int]:
        _, name, pos = self.take("ident")
        if name not in self.scope:
            raise ParseError(f"unbound variable {name!r}", pos)
        return name, pos


def parse(text: str) -> Sentence:
    p = _Parser(text)
    s = p.disjunction()
    tok = p.peek()
    if tok[0] != "end":
        raise ParseError(f"unexpected {tok[1]!r}", tok[2])
    return s


def to_text(s: Sentence) -> str:
    """Render in the text syntax; ``parse(to_text(s)) == s``."""
    if isinstance(s, Adj):
        return f"{s.left}~{s.right}"
    if isinstance(s, Eq):
        return f"{s.left}={s.right}"
    if isinstance(s, Not):
        return "!" + to_text(s.atom)
    if isinstance(s, Exists):
        return f"E {s.var}; {to_text(s.body)}"
    if isinstance(s, And):
        return " & ".join(
            f"({to_text(p)})" if isinstance(p, (And, Or, Exists)) else to_text(p) for p in s.parts
        )
    return " | ".join(f"({to_text(p)})" if isinstance(p, (Or, Exists)) else to_text(p) for p in s.parts)


# --- evaluation ----------------------------------------------------------------


def _filter_literals(body: Sentence, var: str, outer: frozenset[str]) -> list[Literal]:
    """Literals implied by ``body`` that mention ``var`` and otherwise only outer variables."""
    out: list[Literal] = []

    def walk(node: Sentence, hidden: frozenset[str]) -> None:
        if isinstance(node, (Adj, Eq, Not)):
            atom = node.atom if isinstance(node, Not) else node
            names = {atom.left, atom.right}
            if var in names and not (names & hidden) and names <= outer | {var}:
                out.append(node)
        elif isinstance(node, And):
            for p in node.parts:
                walk(p, hidden)
        elif isinstance(node, Exists):
            walk(node.body, hidden | {node.var})

    walk(body, frozenset())
    return out


class _Compiled:
    """Sentence annotated with per-quantifier candidate filters."""

    def __init__(self, s: Sentence):
        self.filters: dict[int, list[Literal]] = {}
        self.order: dict[int, tuple[Sentence, ...]] = {}
        self._prepare(s, frozenset())

    def _prepare(self, node: Sentence, outer: frozenset[str]) -> None:
        if isinstance(node, Exists):
            self.filters[id(node)] = _filter_literals(node.body, node.var, outer)
            self._prepare(node.body, outer | {node.var})
        elif isinstance(node, (And, Or)):
            # cheap literal checks first
            self.order[id(node)] = tuple(
                sorted(node.parts, key=lambda p: (quantifier_depth(p), not isinstance(p, (Adj, Eq, Not))))
            )
            for p in node.parts:
                self._prepare(p, outer)


def evaluate(host, s: Sentence, *, budget: int = 10**9) -> bool:
    """Decide ``host |= s`` by backtracking over quantified variables.

    ``host`` is anything with ``adjacency_sets`` (one neighbour set per vertex).
    Raises ``BudgetExceeded`` after ``budget`` candidate bindings.
    """
    check_closed(s)
    adj_sets = host.adjacency_sets
    n = len(adj_sets)
    comp = _Compiled(s)
    env: dict[str, int] = {}
    spent = [0]

    def atom_true(atom: Atom) -> bool:
        if isinstance(atom, Adj):
            return env[atom.right] in adj_sets[env[atom.left]]
        return env[atom.left] == env[atom.right]

    def candidates(node: Exists) -> Iterable[int]:
        var = node.var
        pos_sets = []
        forbid: set[int] = set()
        forbid_sets = []
        for lit in comp.filters[id(node)]:
            atom, positive = (lit.atom, False) if isinstance(lit, Not) else (lit, True)
            other = atom.right if atom.left == var else atom.left
            if other == var:  # x~x is never true, x=x always
                if isinstance(atom, Adj) and positive:
                    return ()
                if isinstance(atom, Eq) and not positive:
                    return ()
                continue
            w = env[other]
            if isinstance(atom, Eq):
                if positive:
                    pos_sets.append({w})
                else:
                    forbid.add(w)
            elif positive:
                pos_sets.append(adj_sets[w])
            else:
                forbid_sets.append(adj_sets[w])
        if pos_sets:
            pos_sets.sort(key=len)
            base = set(pos_sets[0]).intersection(*pos_sets[1:])
        else:
            base = range(n)
        return [c for c in base if c not in forbid and not any(c in fs for fs in forbid_sets)]

    def sat(node: Sentence) -> bool:
        if isinstance(node, Adj) or isinstance(node, Eq):
            return atom_true(node)
        if isinstance(node, Not):
            return not atom_true(node.atom)
        if isinstance(node, And):
            return all(sat(p) for p in comp.order[id(node)])
        if isinstance(node, Or):
            return any(sat(p) for p in comp.order[id(node)])
        var = node.var
        saved = env.get(var)
        try:
            for c in candidates(node):
                spent[0] += 1
                if spent[0] > budget:
                    raise BudgetExceeded(f"budget exhausted after {budget} bindings")
                env[var] = c
                if sat(node.body):
                    return True
            return False
        finally:
            if saved is None:
                env.pop(var, None)
            else:
                env[var] = saved

    return sat(s)


# --- named sentences -----------------------------------------------------------


def psi1(a1: str, a2: str, b1: str, b2: str, b3: str) -> Sentence:
    """b1 sees both; b2 sees only a1; b3 sees only a2."""
    return And((
        adj(b1, a1), adj(b1, a2),
        adj(b2, a1), nadj(b2, a2),
        nadj(b3, a1), adj(b3, a2),
    ))


def psi2(a1: str, a2: str, a3: str, b1: str, b2: str, b3: str, b4: str) -> Sentence:
    """Witnesses for the four ways of seeing at least two of a1, a2, a3 (a1, a2 fixed order)."""
    return And((
        adj(b1, a1), adj(b1, a2), adj(b1, a3),
        adj(b2, a1), adj(b2, a2), nadj(b2, a3),
        adj(b3, a1), nadj(b3, a2), adj(b3, a3),
        nadj(b4, a1), adj(b4, a2), adj(b4, a3),
    ))


_GROUND_LITERALS = {"1_1": (True, True), "1_0": (True, False), "0_1": (False, True)}


def _depth4_block(x: str, top: str) -> Sentence:
    blocks = []
    for sub, (sees_x, sees_top) in _GROUND_LITERALS.items():
        ground = f"{top}_{sub}"
        w11, wp, w10, w01 = f"{ground}__1_1", f"{top}p_{sub}", f"{ground}__1_0", f"{ground}__0_1"
        witness = [
            Exists(w11, conj(adj(w11, x), adj(w11, top), adj(w11, ground))),
            Exists(wp, conj(adj(wp, x), adj(wp, top), nadj(wp, ground))),
            Exists(w10, conj(adj(w10, x), nadj(w10, top), adj(w10, ground))),
            Exists(w01, conj(nadj(w01, x), adj(w01, top), adj(w01, ground))),
        ]
        blocks.append(Exists(ground, conj(literal(ground, x, sees_x), literal(ground, top, sees_top), *witness)))
    return conj(*blocks)


def build_phi4() -> Sentence:
    """Depth-4 sentence asking for an edge xa and a non-edge xb, each with full two-level witnesses."""
    return Exists(
        "x",
        conj(
            Exists("a", conj(adj("x", "a"), _depth4_block("x", "a"))),
            Exists("b", conj(nadj("x", "b"), _depth4_block("x", "b"))),
        ),
    )


def build_phi4_flat() -> Sentence:
    """The same sentence in prenex form (33 variables, depth 33)."""
    names = ["x", "a", "b"]
    matrix: list[Sentence] = []
    for top, edge in (("a", adj("x", "a")), ("b", nadj("x", "b"))):
        g11, g10, g01 = f"{top}_1_1", f"{top}_1_0", f"{top}_0_1"
        names += [g11, g10, g01]
        matrix += [edge, psi1("x", top, g11, g10, g01)]
        for sub in _GROUND_LITERALS:
            ground = f"{top}_{sub}"
            ws = [f"{ground}__1_1", f"{top}p_{sub}", f"{ground}__1_0", f"{ground}__0_1"]
            names += ws
            matrix.append(psi2("x", top, ground, *ws))
    return exists(names, And(tuple(matrix)))


def build_phi_k(k: int) -> Sentence:
    """Depth-k sentence: a (k-3)-clique whose pairs carry ground, first- and second-level witnesses.

    For a root pair {i, j}: a ground vertex seeing every other root; for each root l
    a first-level vertex seeing the ground vertex and all roots but l; below it, for
    each root t a second-level vertex seeing both and all roots but t, and a
    universal vertex seeing both and every root.
    """
    if k < 5:
        raise SentenceError("build_phi_k needs k >= 5; use build_phi4 for depth 4")
    m = k - 3
    roots = [f"r_{i}" for i in range(1, m + 1)]

    def roots_but(v: str, skip: Iterable[int]) -> list[Sentence]:
        skip = set(skip)
        return [literal(v, r, l not in skip) for l, r in enumerate(roots, start=1)]

    pair_blocks = []
    for i, j in itertools.combinations(range(1, m + 1), 2):
        ground = f"g_{i}_{j}"
        first_blocks = []
        for ell in range(1, m + 1):
            first = f"f_{i}_{j}_{ell}"
            inner = []
            for t in range(1, m + 1):
                second = f"s_{i}_{j}_{ell}_{t}"
                inner.append(Exists(second, conj(adj(second, ground), adj(second, first), *roots_but(second, [t]))))
            top = f"u_{i}_{j}_{ell}"
            inner.append(Exists(top, conj(adj(top, ground), adj(top, first), *roots_but(top, []))))
            first_blocks.append(Exists(first, conj(adj(first, ground), *roots_but(first, [ell]), *inner)))
        pair_blocks.append(Exists(ground, conj(*roots_but(ground, [i, j]), *first_blocks)))
    clique = [adj(roots[i], roots[j]) for i in range(m) for j in range(i + 1, m)]
    return exists(roots, conj(*clique, *pair_blocks))


# --- random sentences ------------------------------------------------------------


def random_sentence(
    rng: random.Random, depth: int, *, width: int = 2, allow_or: bool = True, prefix: str = "v"
) -> Sentence:
    """A random closed existential sentence of quantifier depth at most ``depth``.

    Every quantifier binds a fresh variable name.
    """
    counter = itertools.count()

    def fresh() -> str:
        return f"{prefix}{next(counter)}"

    def lit(scope: list[str]) -> Sentence:
        u, v = rng.choice(scope), rng.choice(scope)
        atom: Atom = Adj(u, v) if rng.random() < 0.75 else Eq(u, v)
        return Not(atom) if rng.random() < 0.4 else atom

    def body(scope: list[str], left: int) -> Sentence:
        parts = []
        for _ in range(rng.randint(1, width)):
            if left > 0 and rng.random() < 0.6:
                name = fresh()
                parts.append(Exists(name, body(scope + [name], left - 1)))
            else:
                parts.append(lit(scope))
        if len(parts) == 1:
            return parts[0]
        return Or(tuple(parts)) if allow_or and rng.random() < 0.3 else And(tuple(parts))

    first = fresh()
    return Exists(first, body([first], max(depth - 1, 0)))
