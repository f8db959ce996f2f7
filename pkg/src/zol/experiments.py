"""Monte Carlo experiments on G(n, p): counts, thresholds, extension properties.

Every trial draws from its own generator seeded by ``(master_seed, trial_index)``
through numpy's ``SeedSequence`` and the counter-based Philox bit generator, so
results do not depend on the number of worker processes.
"""

from __future__ import annotations

import csv
import json
import math
import os
from collections import Counter
from collections.abc import Callable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import partial
from itertools import combinations
from pathlib import Path

import numpy as np

from .extensions import RootedPair, count_strict_extensions, has_full_extension_property, is_alpha_safe
from .graphs import (
    BalanceClass,
    GraphError,
    PatternGraph,
    automorphism_count,
    classify_balance,
    iter_embeddings,
    max_density,
)

MAX_HOST_VERTICES = 100_000
SEED_ENV = "ZOL_SEED"


def default_seed() -> int:
    return int(os.environ.get(SEED_ENV, "0"))


def trial_rng(master_seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([master_seed, trial])))


class HostGraph:
    """Large simple graph on ``0..n-1`` with neighbour sets."""

    def __init__(self, n: int, edges: np.ndarray):
        if not 0 <= n <= MAX_HOST_VERTICES:
            raise GraphError(f"host graphs hold at most {MAX_HOST_VERTICES} vertices")
        self.n = n
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        self.edges = edges
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges.tolist():
            nbrs[u].add(v)
            nbrs[v].add(u)
        self.adjacency_sets = nbrs

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency_sets[u]

    @classmethod
    def from_pattern(cls, g: PatternGraph) -> HostGraph:
        return cls(g.n, np.array(g.edges(), dtype=np.int64).reshape(-1, 2))


def _pairs_from_index(idx: np.ndarray) -> np.ndarray:
    """Map linear indices to pairs (i, j), i < j, in the order (0,1), (0,2), (1,2), (0,3), ..."""
    j = np.floor((1 + np.sqrt(1 + 8 * idx.astype(np.float64))) / 2).astype(np.int64)
    # repair rare floating error
    j -= (j * (j - 1) // 2) > idx
    j += ((j + 1) * j // 2) <= idx
    i = idx - j * (j - 1) // 2
    return np.stack([i, j], axis=1)


def sample_gnp(n: int, p: float, rng: np.random.Generator) -> HostGraph:
    """Binomial random graph; sparse draws use geometric skips between present pairs."""
    if not 0 <= p <= 1:
        raise GraphError("p must lie in [0, 1]")
    total = n * (n - 1) // 2
    if p == 0 or total == 0:
        return HostGraph(n, np.empty((0, 2), dtype=np.int64))
    if p == 1:
        return HostGraph(n, _pairs_from_index(np.arange(total, dtype=np.int64)))
    if p > 0.25 and n <= 5000:
        keep = np.flatnonzero(rng.random(total) < p)
        return HostGraph(n, _pairs_from_index(keep.astype(np.int64)))
    chunks = []
    pos = -1
    batch = max(16, int(total * p * 1.1) + 16)
    while True:
        gaps = rng.geometric(p, size=batch)
        idx = pos + np.cumsum(gaps)
        inside = idx[idx < total]
        chunks.append(inside)
        if len(inside) < len(idx):
            break
        pos = int(idx[-1])
    picked = np.concatenate(chunks) if chunks else np.empty(0, dtype=np.int64)
    return HostGraph(n, _pairs_from_index(picked.astype(np.int64)))


def count_copies(host, pattern: PatternGraph) -> int:
    """Induced copies of ``pattern`` in ``host``."""
    emb = sum(1 for _ in iter_embeddings(host.adjacency_sets, pattern))
    return emb // automorphism_count(pattern)


def contains_copy(host, pattern: PatternGraph) -> bool:
    return next(iter_embeddings(host.adjacency_sets, pattern), None) is not None


def expected_induced_copies(n: int, pattern: PatternGraph, p: float) -> float:
    v, e = pattern.n, pattern.edge_count
    if v > n:
        return 0.0
    return math.comb(n, v) * math.factorial(v) / automorphism_count(pattern) * p**e * (1 - p) ** (v * (v - 1) // 2 - e)


def phi_min_expected(n: int, pattern: PatternGraph, p: float) -> float:
    """min over induced subgraphs H with an edge of n^v(H) p^e(H)."""
    best = math.inf
    for size in range(2, pattern.n + 1):
        for vs in combinations(range(pattern.n), size):
            sub = pattern.induced(vs)
            if sub.edge_count:
                best = min(best, n**size * p**sub.edge_count)
    return best


def poisson_pmf(j: int, lam: float) -> float:
    return math.exp(-lam + j * math.log(lam) - math.lgamma(j + 1)) if lam > 0 else float(j == 0)


def tv_to_poisson(counts: Sequence[int], lam: float) -> float:
    hist = Counter(counts)
    total = len(counts)
    top = max(hist)
    dist = sum(abs(hist.get(j, 0) / total - poisson_pmf(j, lam)) for j in range(top + 1))
    tail = max(0.0, 1.0 - sum(poisson_pmf(j, lam) for j in range(top + 1)))
    return 0.5 * (dist + tail)


# --- records -----------------------------------------------------------------


@dataclass
class ExperimentRecord:
    experiment: str
    params: dict
    seed: int
    trials: int
    outcomes: list
    summary: dict
    table: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        data = asdict(self)
        data.pop("table")
        if self.table:
            data["summary"] = dict(self.summary, table=self.table)
        return data

    def write_json(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n")

    def write_csv(self, path: str | Path) -> None:
        rows = self.table or [self.summary]
        keys = sorted({k for row in rows for k in row})
        with open(path, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=keys)
            writer.writeheader()
            writer.writerows(rows)


def _map_trials(fn: Callable[[int], object], trials: int, workers: int) -> list:
    if workers <= 1 or trials < 2:
        return [fn(i) for i in range(trials)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(trials), chunksize=max(1, trials // (4 * workers))))


def _poisson_trial(seed: int, n: int, p: float, g6: str, i: int) -> int:
    from .graphs import graph6_decode

    return count_copies(sample_gnp(n, p, trial_rng(seed, i)), graph6_decode(g6))


def run_poisson_experiment(
    pattern: PatternGraph, c: float, n: int, trials: int, seed: int | None = None, *, workers: int = 1
) -> ExperimentRecord:
    """Copy counts at p = c n^(-1/rho) compared with Poisson(c^e / aut)."""
    from .graphs import graph6_encode

    if classify_balance(pattern) is not BalanceClass.STRICTLY_BALANCED:
        raise GraphError("the Poisson limit needs a strictly balanced pattern")
    seed = default_seed() if seed is None else seed
    v, e = pattern.n, pattern.edge_count
    p = c * n ** (-v / e)
    lam = c**e / automorphism_count(pattern)
    counts = _map_trials(partial(_poisson_trial, seed, n, p, graph6_encode(pattern)), trials, workers)
    mean = float(np.mean(counts))
    summary = {
        "p": p,
        "lambda": lam,
        "expected_finite_n": expected_induced_copies(n, pattern, p),
        "mean": mean,
        "variance": float(np.var(counts)),
        "tv_distance": tv_to_poisson(counts, lam),
        "histogram": {str(k): int(cnt) for k, cnt in sorted(Counter(counts).items())},
    }
    params = {"pattern": graph6_encode(pattern), "c": c, "n": n}
    return ExperimentRecord("poisson", params, seed, trials, list(counts), summary)


def _contains_trial(seed: int, n: int, p: float, g6: str, i: int) -> bool:
    from .graphs import graph6_decode

    return contains_copy(sample_gnp(n, p, trial_rng(seed, i)), graph6_decode(g6))


def run_threshold_experiment(
    pattern: PatternGraph,
    n: int,
    alphas: Sequence[float],
    trials: int,
    seed: int | None = None,
    *,
    workers: int = 1,
) -> ExperimentRecord:
    """Frequency of an induced copy at p = n^(-alpha), either side of alpha* = 1/maxden."""
    from .graphs import graph6_encode

    seed = default_seed() if seed is None else seed
    top, _ = max_density(pattern)
    critical = 1 / top if top else math.inf
    table, outcomes = [], []
    for j, alpha in enumerate(alphas):
        p = n ** (-alpha)
        hits = _map_trials(partial(_contains_trial, seed + 7919 * (j + 1), n, p, graph6_encode(pattern)), trials, workers)
        freq = sum(hits) / trials
        outcomes.append([bool(h) for h in hits])
        table.append(
            {
                "alpha": alpha,
                "p": p,
                "frequency": freq,
                "side": "dense" if alpha < critical else "sparse",
                "expected_copies": expected_induced_copies(n, pattern, p),
            }
        )
    summary = {"critical_alpha": str(critical) if isinstance(critical, Fraction) else critical}
    params = {"pattern": graph6_encode(pattern), "n": n, "alphas": list(alphas)}
    return ExperimentRecord("threshold", params, seed, trials, outcomes, summary, table)


def _extension_trial(seed: int, n: int, p: float, r: int, i: int) -> bool:
    return has_full_extension_property(sample_gnp(n, p, trial_rng(seed, i)), r)[0]


def run_extension_property_experiment(
    n: int, alpha: float, r: int, trials: int, seed: int | None = None, *, workers: int = 1
) -> ExperimentRecord:
    """How often G(n, n^-alpha) has the level-r extension property."""
    seed = default_seed() if seed is None else seed
    p = n ** (-alpha)
    hits = _map_trials(partial(_extension_trial, seed, n, p, r), trials, workers)
    freq = sum(hits) / trials
    summary = {"p": p, "frequency": freq, "expected_common_witnesses": (n - r) * p**r}
    return ExperimentRecord("extension", {"n": n, "alpha": alpha, "r": r}, seed, trials, [bool(h) for h in hits], summary)


def _safe_ext_trial(seed: int, n: int, p: float, pair_json: str, i: int) -> int:
    pair = RootedPair.from_json(pair_json)
    rng = trial_rng(seed, i)
    host = sample_gnp(n, p, rng)
    roots = rng.choice(n, size=pair.root_count, replace=False).tolist()
    return count_strict_extensions(host, pair, roots)


def run_safe_extension_experiment(
    pair: RootedPair,
    alpha: float,
    ns: Sequence[int],
    trials: int,
    seed: int | None = None,
    *,
    workers: int = 1,
) -> ExperimentRecord:
    """Mean number of strict extensions over random roots; log-log slope against n."""
    if not is_alpha_safe(pair, Fraction(alpha).limit_denominator(10**6))[0]:
        raise GraphError(f"pair is not safe at alpha={alpha}")
    seed = default_seed() if seed is None else seed
    pair_json = json.dumps(pair.to_json())
    table, outcomes = [], []
    for j, n in enumerate(ns):
        p = n ** (-alpha)
        counts = _map_trials(partial(_safe_ext_trial, seed + 7919 * (j + 1), n, p, pair_json), trials, workers)
        outcomes.append(list(counts))
        table.append({"n": n, "p": p, "mean_extensions": float(np.mean(counts)), "min_extensions": int(min(counts))})
    means = np.array([row["mean_extensions"] for row in table])
    slope = None
    if len(ns) >= 2 and np.all(means > 0):
        slope = float(np.polyfit(np.log(np.array(ns, dtype=float)), np.log(means), 1)[0])
    predicted = pair.v - alpha * pair.e
    summary = {"fitted_slope": slope, "predicted_slope": predicted}
    params = {"pair": pair.to_json(), "alpha": alpha, "ns": list(ns)}
    return ExperimentRecord("safe-ext", params, seed, trials, outcomes, summary, table)


def run_nonconvergence_demo(
    pattern: PatternGraph | None = None,
    ns: Sequence[int] = (200, 400, 800),
    trials: int = 2000,
    seed: int | None = None,
    *,
    c: float = 1.0,
    workers: int = 1,
) -> ExperimentRecord:
    """Containment frequency at p = c n^(-1/rho): it settles at 1 - exp(-lambda), strictly inside (0, 1)."""
    from .graphs import graph6_encode

    pattern = pattern or PatternGraph.cycle(4)
    if classify_balance(pattern) is not BalanceClass.STRICTLY_BALANCED:
        raise GraphError("the demonstration needs a strictly balanced pattern")
    seed = default_seed() if seed is None else seed
    v, e = pattern.n, pattern.edge_count
    lam = c**e / automorphism_count(pattern)
    limit = 1 - math.exp(-lam)
    table, outcomes = [], []
    for j, n in enumerate(ns):
        p = c * n ** (-v / e)
        hits = _map_trials(partial(_contains_trial, seed + 7919 * (j + 1), n, p, graph6_encode(pattern)), trials, workers)
        outcomes.append([bool(h) for h in hits])
        table.append({"n": n, "p": p, "frequency": sum(hits) / trials, "limit": limit})
    summary = {"lambda": lam, "limit": limit}
    params = {"pattern": graph6_encode(pattern), "ns": list(ns), "c": c}
    return ExperimentRecord("nonconv", params, seed, trials, outcomes, summary, table)
