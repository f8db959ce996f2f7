"""Exact maximum edge-to-vertex ratio over vertex subsets.

Vertices ``0..m-1`` carry an adjacency bitmask (within the universe) and a weight
counting edges to a fixed outside part.  The ratio of a nonempty set ``S`` is
``(weight(S) + e(S)) / |S|``.  The search is a branch-and-bound over subsets driven
by a Dinkelbach loop on the ratio.
"""

from __future__ import annotations

import sys
from collections.abc import Sequence
from fractions import Fraction


def _popcount(x: int) -> int:
    return x.bit_count()


def set_ratio(masks: Sequence[int], weights: Sequence[int], mask: int) -> Fraction:
    size = _popcount(mask)
    if size == 0:
        raise ValueError("ratio of the empty set")
    w = 0
    inner = 0
    m = mask
    while m:
        low = m & -m
        v = low.bit_length() - 1
        w += weights[v]
        inner += _popcount(masks[v] & mask)
        m ^= low
    return Fraction(w + inner // 2, size)


def best_set(
    masks: Sequence[int],
    weights: Sequence[int],
    lam: Fraction,
    *,
    exclude_full: bool = False,
    floor: tuple[int, int] | None = None,
) -> tuple[Fraction, int] | None:
    """Nonempty set maximising ``weight(S) + e(S) - lam*|S|``; larger sets win ties.

    Returns ``(gain, mask)`` or ``None`` if no feasible set beats ``floor``, an
    optional ``(scaled_gain, size)`` pair in the internal integer scale.
    With ``exclude_full`` the whole universe is not allowed.
    """
    m = len(masks)
    if m == 0 or (exclude_full and m == 1):
        return None
    lam = Fraction(lam)
    p, q = lam.numerator, lam.denominator
    full = (1 << m) - 1
    # everything doubled so that half-edge bounds stay integral
    base = [2 * q * weights[v] - 2 * p for v in range(m)]
    scale = m + 1
    best_key = [-sys.maxsize if floor is None else floor[0] * scale + floor[1]]
    best_mask = [0]

    def consider(inc: int, gain: int) -> None:
        if inc == 0 or (exclude_full and inc == full):
            return
        key = gain * scale + _popcount(inc)
        if key > best_key[0]:
            best_key[0] = key
            best_mask[0] = inc

    def search(inc: int, und: int, gain: int) -> None:
        # reductions: drop vertices that can only hurt, take vertices that only help
        changed = True
        while changed and und:
            changed = False
            u_bits = und
            while u_bits:
                low = u_bits & -u_bits
                u = low.bit_length() - 1
                u_bits ^= low
                lo = base[u] + 2 * q * _popcount(masks[u] & inc)
                if inc and lo + 2 * q * _popcount(masks[u] & und) < 0:
                    und ^= low
                    changed = True
                elif not exclude_full and lo >= 0:
                    und ^= low
                    inc |= low
                    gain += lo
                    changed = True
        consider(inc, gain)
        if not und:
            return
        bound = gain
        pick, pick_score = -1, None
        u_bits = und
        while u_bits:
            low = u_bits & -u_bits
            u = low.bit_length() - 1
            u_bits ^= low
            term = base[u] + 2 * q * _popcount(masks[u] & inc) + q * _popcount(masks[u] & und)
            if term > 0:
                bound += term
            if pick_score is None or term > pick_score:
                pick, pick_score = u, term
        if bound * scale + _popcount(inc | und) <= best_key[0]:
            return
        low = 1 << pick
        lo = base[pick] + 2 * q * _popcount(masks[pick] & inc)
        search(inc | low, und ^ low, gain + lo)
        search(inc, und ^ low, gain)

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 10 * m + 1000))
    try:
        search(0, full, 0)
    finally:
        sys.setrecursionlimit(old_limit)
    if best_mask[0] == 0:
        return None
    key_gain = (best_key[0] - _popcount(best_mask[0])) // scale
    return Fraction(key_gain, 2 * q), best_mask[0]


def _peel_start(masks: Sequence[int], weights: Sequence[int]) -> int:
    """Greedy peeling: the best set seen while removing minimum-degree vertices."""
    m = len(masks)
    alive = (1 << m) - 1
    best, best_val = alive, set_ratio(masks, weights, alive)
    while _popcount(alive) > 1:
        v = min(
            (u for u in range(m) if alive >> u & 1),
            key=lambda u: weights[u] + _popcount(masks[u] & alive),
        )
        alive &= ~(1 << v)
        val = set_ratio(masks, weights, alive)
        if val > best_val or (val == best_val and _popcount(alive) > _popcount(best)):
            best, best_val = alive, val
    return best


def max_ratio(masks: Sequence[int], weights: Sequence[int]) -> tuple[Fraction, int]:
    """Maximum ratio over nonempty subsets and the largest maximising set."""
    if not masks:
        raise ValueError("empty universe")
    current = _peel_start(masks, weights)
    lam = set_ratio(masks, weights, current)
    while True:
        hit = best_set(masks, weights, lam, floor=(0, _popcount(current)))
        if hit is None:
            return lam, current
        gain, mask = hit
        current = mask
        if gain <= 0:
            return lam, current
        lam = set_ratio(masks, weights, mask)
