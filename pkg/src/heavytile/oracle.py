"""Exact small-n ground truth by bitmask dynamic programming.

Each query anchors on the lowest set bit of the remaining vertex mask, so a
heavy 4-set is only ever tried from its smallest vertex.  Candidate 4-sets
are precomputed per lowest vertex.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

import numpy as np

from .errors import CapabilityError
from .graph import WeightedCompleteGraph, _vertex_set

DEFAULT_CAP = 18
HARD_CAP = 20


@dataclass
class OracleResult:
    kind: str
    answer: bool | int
    witness: list[tuple[int, ...]] | None = None
    states: int = 0
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"kind": f"oracle-{self.kind}", "answer": self.answer, "states": self.states}
        if self.witness is not None:
            out["witness"] = [list(q) for q in self.witness]
        out.update(self.extra)
        return out


def _check_cap(n: int, cap: int) -> None:
    if cap > HARD_CAP:
        raise CapabilityError(f"cap {cap} exceeds the hard limit {HARD_CAP}")
    if n > cap:
        raise CapabilityError(f"n={n} exceeds the exact oracle cap {cap}")


def heavy_quads(W: np.ndarray, t: int, verts: list[int]) -> list[tuple[int, int, int, int]]:
    """All heavy 4-subsets of ``verts`` (local indices into ``verts``), lexicographic."""
    k = len(verts)
    if k < 4:
        return []
    combos = np.array(list(combinations(range(k), 4)), dtype=np.intp)
    V = np.asarray(verts, dtype=np.intp)[combos]
    a, b, c, d = V.T
    tot = W[a, b] + W[a, c] + W[a, d] + W[b, c] + W[b, d] + W[c, d]
    return [tuple(int(x) for x in row) for row in combos[tot > 6 * t]]


def _by_low(quads, k: int) -> list[list[int]]:
    out: list[list[int]] = [[] for _ in range(k)]
    for q in quads:
        out[q[0]].append((1 << q[0]) | (1 << q[1]) | (1 << q[2]) | (1 << q[3]))
    return out


def _decode(mask: int, verts: list[int]) -> tuple[int, ...]:
    return tuple(verts[i] for i in range(len(verts)) if mask >> i & 1)


def _factor_dp(W: np.ndarray, t: int, verts: list[int]) -> tuple[list[tuple[int, ...]] | None, int]:
    """Heavy K4-factor of ``verts`` or ``None``, plus the memo size."""
    k = len(verts)
    if k % 4:
        return None, 0
    if k == 0:
        return [], 1
    cand = _by_low(heavy_quads(W, t, verts), k)
    memo: dict[int, int] = {}  # mask -> chosen 4-set mask, 0 for failure

    def solve(mask: int) -> bool:
        if mask == 0:
            return True
        hit = memo.get(mask)
        if hit is not None:
            return hit != 0
        low = (mask & -mask).bit_length() - 1
        memo[mask] = 0
        for q in cand[low]:
            if q & mask == q and solve(mask ^ q):
                memo[mask] = q
                return True
        return False

    full = (1 << k) - 1
    if not solve(full):
        return None, len(memo)
    out = []
    mask = full
    while mask:
        q = memo[mask]
        out.append(_decode(q, verts))
        mask ^= q
    return out, len(memo)


def exact_factor_exists(g: WeightedCompleteGraph, *, cap: int = DEFAULT_CAP) -> OracleResult:
    if g.n % 4:
        raise ValueError(f"a K4-factor needs 4 | n (n={g.n})")
    _check_cap(g.n, cap)
    wit, states = _factor_dp(g.matrix, g.t_num, list(range(g.n)))
    return OracleResult("factor", wit is not None, wit, states)


def factor_of(g: WeightedCompleteGraph, vertices: Iterable[int]) -> list[tuple[int, ...]] | None:
    """Exact heavy K4-factor of an induced subgraph (no cap beyond the DP's cost)."""
    verts = sorted(_vertex_set(g, vertices))
    wit, _ = _factor_dp(g.matrix, g.t_num, verts)
    return wit


def exact_max_tiling(g: WeightedCompleteGraph, *, cap: int = DEFAULT_CAP) -> OracleResult:
    _check_cap(g.n, cap)
    n = g.n
    cand = _by_low(heavy_quads(g.matrix, g.t_num, list(range(n))), n)
    memo: dict[int, int] = {}
    choice: dict[int, int] = {}

    def solve(mask: int) -> int:
        if mask == 0:
            return 0
        hit = memo.get(mask)
        if hit is not None:
            return hit
        bound = mask.bit_count() // 4
        low_bit = mask & -mask
        low = low_bit.bit_length() - 1
        best = 0
        pick = 0
        for q in cand[low]:
            if q & mask == q:
                val = 1 + solve(mask ^ q)
                if val > best:
                    best, pick = val, q
                    if best == bound:
                        break
        if best < bound:
            skip = solve(mask ^ low_bit)
            if skip > best:
                best, pick = skip, 0
        memo[mask] = best
        choice[mask] = pick
        return best

    full = (1 << n) - 1
    best = solve(full)
    wit = []
    mask = full
    while mask and memo.get(mask, 0) > 0:
        q = choice[mask]
        if q:
            wit.append(_decode(q, list(range(n))))
            mask ^= q
        else:
            mask ^= mask & -mask
    return OracleResult("maxtile", best, wit, len(memo))


def exact_connector_exists(
    g: WeightedCompleteGraph,
    u: int,
    v: int,
    W: Iterable[int] = (),
    s: int = 1,
    *,
    cap: int = DEFAULT_CAP,
) -> OracleResult:
    """Search every S of size 3, 7, ..., 4s-1 outside ``W + {u, v}``."""
    if s < 1:
        raise ValueError("s must be >= 1")
    _check_cap(g.n, cap)
    if s > 2 and g.n > 12:
        raise CapabilityError(f"connector search with s={s} is capped at n <= 12")
    u, v = g._check_vertex(u), g._check_vertex(v)
    if u == v:
        raise ValueError("u and v must differ")
    Wset = set(_vertex_set(g, W))
    if u in Wset or v in Wset:
        raise ValueError("u and v must lie outside W")
    pool = [x for x in range(g.n) if x not in Wset and x not in (u, v)]
    Wm, t = g.matrix, g.t_num
    checked = 0
    for size in range(3, 4 * s, 4):
        for S in combinations(pool, size):
            checked += 1
            fu, _ = _factor_dp(Wm, t, sorted(S + (u,)))
            if fu is None:
                continue
            fv, _ = _factor_dp(Wm, t, sorted(S + (v,)))
            if fv is None:
                continue
            return OracleResult(
                "connector",
                True,
                [tuple(S)],
                checked,
                {"S": list(S), "factor_u": [list(q) for q in fu], "factor_v": [list(q) for q in fv]},
            )
    return OracleResult("connector", False, None, checked)


def layered_max_tiling(g: WeightedCompleteGraph) -> int:
    """Second route to the maximum tiling size: grow unions of disjoint heavy 4-sets layer by layer."""
    n = g.n
    quads = heavy_quads(g.matrix, g.t_num, list(range(n)))
    if not quads:
        return 0
    Q = np.array([sum(1 << x for x in q) for q in quads], dtype=np.int64)
    layer = np.array([0], dtype=np.int64)
    k = 0
    while True:
        comb = layer[:, None] | Q[None, :]
        ok = (layer[:, None] & Q[None, :]) == 0
        nxt = np.unique(comb[ok])
        if nxt.size == 0:
            return k
        layer, k = nxt, k + 1
