"""Connectors, absorbers, absorbing sets and the two-part reachability partition.

Reachability is only ever certified: a pair gets ``m + 1`` pairwise
vertex-disjoint connectors, so every forbidden set of at most ``m``
vertices misses one of them.  Failing to find them is inconclusive.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Iterable, Sequence

import networkx as nx
import numpy as np

from . import _kernels as K
from .certificates import validate_absorber, validate_connector, validate_factor
from .errors import AbsorberError, BudgetError, ConnectorError, ConstructionFailed
from .graph import WeightedCompleteGraph, _vertex_set, as_fraction
from .oracle import factor_of

log = logging.getLogger(__name__)

Block = tuple[int, ...]


@dataclass(frozen=True)
class ReachParams:
    m: int = 0
    s: int = 1

    def __post_init__(self):
        if self.m < 0:
            raise ValueError("m must be >= 0")
        if self.s < 1:
            raise ValueError("s must be >= 1")

    @classmethod
    def from_beta(cls, n: int, beta, s: int = 1) -> "ReachParams":
        return cls(math.ceil(as_fraction(beta) * n), s)

    @property
    def max_size(self) -> int:
        return 4 * self.s - 1


@dataclass(frozen=True)
class Connector:
    u: int
    v: int
    S: tuple[int, ...]
    factor_u: tuple[Block, ...]
    factor_v: tuple[Block, ...]

    @property
    def size(self) -> int:
        return len(self.S)

    @property
    def scale(self) -> int:
        return (len(self.S) + 1) // 4

    def to_dict(self) -> dict:
        return {
            "kind": "connector",
            "u": self.u,
            "v": self.v,
            "S": list(self.S),
            "factor_u": [list(b) for b in self.factor_u],
            "factor_v": [list(b) for b in self.factor_v],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Connector":
        return cls(
            int(d["u"]),
            int(d["v"]),
            tuple(int(x) for x in d["S"]),
            tuple(tuple(int(x) for x in b) for b in d["factor_u"]),
            tuple(tuple(int(x) for x in b) for b in d["factor_v"]),
        )


@dataclass(frozen=True)
class Absorber:
    target: tuple[int, ...]
    vertices: tuple[int, ...]
    T: tuple[int, ...]
    connectors: tuple[Connector, ...]
    factor_without: tuple[Block, ...]
    factor_with: tuple[Block, ...]

    @property
    def size(self) -> int:
        return len(self.vertices)

    def to_dict(self) -> dict:
        return {
            "kind": "absorber",
            "target": list(self.target),
            "vertices": list(self.vertices),
            "T": list(self.T),
            "connectors": [c.to_dict() for c in self.connectors],
            "factor_without": [list(b) for b in self.factor_without],
            "factor_with": [list(b) for b in self.factor_with],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Absorber":
        return cls(
            tuple(int(x) for x in d["target"]),
            tuple(int(x) for x in d["vertices"]),
            tuple(int(x) for x in d["T"]),
            tuple(Connector.from_dict(c) for c in d["connectors"]),
            tuple(tuple(int(x) for x in b) for b in d["factor_without"]),
            tuple(tuple(int(x) for x in b) for b in d["factor_with"]),
        )


def _block(S, x) -> Block:
    return tuple(sorted(tuple(S) + (x,)))


def _single(g: WeightedCompleteGraph, u: int, v: int, S: Sequence[int]) -> Connector:
    S = tuple(sorted(int(x) for x in S))
    return Connector(u, v, S, (_block(S, u),), (_block(S, v),))


def _pool_without(g: WeightedCompleteGraph, blocked) -> np.ndarray:
    mask = np.ones(g.n, dtype=bool)
    if blocked:
        mask[list(blocked)] = False
    return np.flatnonzero(mask)


def find_connector_s1(g: WeightedCompleteGraph, u: int, v: int, W: Iterable[int] = ()) -> Connector | None:
    """Lowest-lexicographic 3-set S outside ``W + {u, v}`` with S+u and S+v both heavy."""
    u, v = g._check_vertex(u), g._check_vertex(v)
    if u == v:
        raise ValueError("u and v must differ")
    Wset = set(_vertex_set(g, W))
    if u in Wset or v in Wset:
        raise ValueError("u and v must lie outside W")
    P = _pool_without(g, Wset | {u, v})
    if P.size < 3:
        return None
    Wm, t6 = g.matrix, 6 * g.t_num
    Wp = Wm[np.ix_(P, P)]
    wu, wv = Wm[u, P], Wm[v, P]
    for ia in range(P.size - 2):
        base = Wp[ia, ia + 1 :]
        tri = base[:, None] + base[None, :] + Wp[ia + 1 :, ia + 1 :]
        ru, rv = wu[ia + 1 :], wv[ia + 1 :]
        ok = tri + (wu[ia] + ru[:, None] + ru[None, :]) > t6
        ok &= tri + (wv[ia] + rv[:, None] + rv[None, :]) > t6
        ok = np.triu(ok, 1)
        hits = np.flatnonzero(ok)
        if hits.size:
            b, c = divmod(int(hits[0]), ok.shape[1])
            return _single(g, u, v, (P[ia], P[ia + 1 + b], P[ia + 1 + c]))
    return None


@dataclass(frozen=True)
class TwoFromThree:
    pair: tuple[int, int]
    connector: Connector
    v4: int
    v5: int
    v6: int
    heavy_triangles: tuple[int, ...]
    X_size: int

    def __iter__(self):
        return iter((self.pair, self.connector))


def two_from_three(g: WeightedCompleteGraph, v1: int, v2: int, v3: int, W: Iterable[int] = (), mu=None) -> TwoFromThree:
    """Constructive pair selection among three vertices.

    v4 maximises ``w(v, v1v2v3)`` over X, v5 and v6 come from the strong
    extension sets, and the pair is read off the two heavy triangles
    through v4 v5.  Every choice takes the lowest index.
    """
    vs = [g._check_vertex(x) for x in (v1, v2, v3)]
    if len(set(vs)) != 3:
        raise ValueError("v1, v2, v3 must be distinct")
    Wset = set(_vertex_set(g, W))
    if Wset & set(vs):
        raise ValueError("v1, v2, v3 must lie outside W")
    Wm, t, D = g.matrix, g.t_num, g.D
    free = np.ones(g.n, dtype=bool)
    free[vs] = False
    if Wset:
        free[list(Wset)] = False
    att = Wm[vs].sum(axis=0)
    X = np.flatnonzero(free & (att > 3 * t))
    if X.size == 0:
        raise ConstructionFailed("X", "no vertex v with w(v, v1v2v3) > 3t")
    v4 = int(X[np.argmax(att[X])])
    att5 = att + Wm[v4]
    cand = free & (att5 > D + 3 * t)
    cand[v4] = False
    hits = np.flatnonzero(cand)
    if hits.size == 0:
        raise ConstructionFailed("v5", "no vertex v with w(v1v2v3v4, v) > 1+3t")
    v5 = int(hits[0])
    heavy = [i for i, x in enumerate(vs) if Wm[x, v4] + Wm[x, v5] + Wm[v4, v5] > 3 * t]
    if len(heavy) < 2:
        raise ConstructionFailed("two-heavy-triangles", f"only {len(heavy)} heavy triangle(s) through v4 v5")
    i, j = heavy[0], heavy[1]
    a, b = vs[i], vs[j]
    att6 = Wm[[a, b, v4, v5]].sum(axis=0)
    cand = free & (att6 > D + 3 * t)
    cand[[v4, v5]] = False
    hits = np.flatnonzero(cand)
    if hits.size == 0:
        raise ConstructionFailed("v6", "no vertex v with w(vi vj v4 v5, v) > 1+3t")
    v6 = int(hits[0])
    pair = (min(a, b), max(a, b))
    conn = _single(g, pair[0], pair[1], (v4, v5, v6))
    return TwoFromThree(pair, conn, v4, v5, v6, tuple(heavy), int(X.size))


def _midpoints(g: WeightedCompleteGraph, blocked: set[int], limit: int) -> list[int]:
    return [x for x in range(g.n) if x not in blocked][:limit]


def find_connector(
    g: WeightedCompleteGraph, u: int, v: int, W: Iterable[int] = (), s: int = 1, *, max_mid: int = 8
) -> Connector | None:
    """A connector of size at most ``4s - 1``: exhaustive 3-sets first, then composition."""
    W = set(int(x) for x in W)
    c = find_connector_s1(g, u, v, W)
    if c is not None or s < 2:
        return c
    half = ReachParams(0, s // 2)
    for x in _midpoints(g, W | {u, v}, max_mid):
        try:
            c = compose_connectors(g, u, v, x, half, forbidden=W)
        except ConnectorError:
            continue
        if c is not None:
            return c
    return None


def compose_connectors(
    g: WeightedCompleteGraph, u: int, w: int, x: int, params: ReachParams, *, forbidden: Iterable[int] = ()
) -> Connector | None:
    """Connector for (u, w) through a common reachable vertex x.

    S = S1 + {x} + S2 where S1 connects (u, x) and S2 connects (x, w).  The
    factor of S+u joins those of S1+u and S2+x; the factor of S+w joins
    those of S1+x and S2+w.  Returns ``None`` when no (u, x)-connector
    exists and raises when no disjoint (x, w)-connector does.
    """
    u, w, x = (g._check_vertex(a) for a in (u, w, x))
    forbidden = set(int(a) for a in forbidden)
    if len({u, w, x}) != 3:
        raise ValueError("u, w and x must be distinct")
    if x in forbidden:
        raise ConnectorError((u, w), f"midpoint {x} is forbidden")
    s = params.s
    c1 = find_connector(g, u, x, forbidden | {w}, s)
    if c1 is None:
        return None
    c2 = find_connector(g, x, w, forbidden | set(c1.S) | {u}, s)
    if c2 is None:
        raise ConnectorError((x, w), f"no connector disjoint from the ({u}, {x}) connector")
    S = tuple(sorted(c1.S + (x,) + c2.S))
    conn = Connector(u, w, S, c1.factor_u + c2.factor_u, c1.factor_v + c2.factor_v)
    bad = validate_connector(g, conn, s=2 * s)
    if bad:  # pragma: no cover - composition is exact by construction
        raise AssertionError("; ".join(bad))
    return conn


def certify_reachable(
    g: WeightedCompleteGraph, u: int, v: int, params: ReachParams, *, W: Iterable[int] = ()
) -> list[Connector] | None:
    """``m + 1`` pairwise disjoint connectors for (u, v), or ``None`` (inconclusive)."""
    u, v = g._check_vertex(u), g._check_vertex(v)
    if u == v:
        raise ValueError("u and v must differ")
    used = set(int(x) for x in W)
    out: list[Connector] = []
    for _ in range(params.m + 1):
        c = None
        third = _midpoints(g, used | {u, v}, 1)
        if third:
            try:
                res = two_from_three(g, u, v, third[0], used)
                if res.pair == (min(u, v), max(u, v)):
                    c = _single(g, u, v, res.connector.S)
            except ConstructionFailed:
                pass
        if c is None:
            c = find_connector_s1(g, u, v, used)
        if c is None and params.s >= 2:
            c = find_connector(g, u, v, used, params.s)
        if c is None:
            return None
        out.append(c)
        used.update(c.S)
    return out


# --- absorbers ------------------------------------------------------------


def build_absorber(
    g: WeightedCompleteGraph,
    S: Iterable[int],
    params: ReachParams = ReachParams(),
    forbidden: Iterable[int] = (),
    *,
    max_T: int = 8,
) -> Absorber:
    """Heavy K4 T = u1..u4 plus disjoint connectors S_i for (u_i, v_i).

    The factor of A_S is the union of the factors of S_i + u_i; the factor
    of A_S + S is T together with the factors of S_i + v_i.
    """
    S = tuple(sorted(_vertex_set(g, S)))
    if len(S) != 4:
        raise ValueError("target must be a 4-set")
    blocked = set(S) | set(int(x) for x in forbidden)
    pool = _pool_without(g, blocked)
    Wm, t = g.matrix, g.t_num
    tried: set[Block] = set()
    failed_pair = None
    for _ in range(max_T):
        T = K.k4_search(Wm, t, [pool] * 4, predicate=lambda q: tuple(q) not in tried)
        if T is None:
            if not tried:
                raise AbsorberError("no heavy K4 disjoint from the target and the forbidden set")
            break
        tried.add(tuple(T))
        for perm in permutations(S):
            used = blocked | set(T)
            conns = []
            for ui, vi in zip(T, perm):
                c = find_connector(g, ui, vi, used - {ui, vi}, params.s)
                if c is None:
                    failed_pair = (ui, vi)
                    break
                conns.append(c)
                used |= set(c.S)
            if len(conns) == 4:
                verts = tuple(sorted(set(T).union(*(c.S for c in conns))))
                without = tuple(b for c in conns for b in c.factor_u)
                with_s = (tuple(T),) + tuple(b for c in conns for b in c.factor_v)
                ab = Absorber(S, verts, tuple(T), tuple(conns), without, with_s)
                bad = validate_absorber(g, ab, s=params.s)
                if bad:  # pragma: no cover
                    raise AssertionError("; ".join(bad))
                return ab
    raise ConnectorError(failed_pair or S, "connector search failed for every tried heavy K4")


@dataclass
class AbsorbingSet:
    vertices: tuple[int, ...]
    gadgets: list[Absorber]
    index: dict[tuple[int, ...], int]
    budget: int
    s: int = 1
    stats: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.vertices)

    def to_dict(self) -> dict:
        return {
            "kind": "absorbing-set",
            "vertices": list(self.vertices),
            "budget": self.budget,
            "s": self.s,
            "gadgets": [a.to_dict() for a in self.gadgets],
            "stats": self.stats,
        }


def _slot_accepts(g: WeightedCompleteGraph, c: Connector, v: int) -> Sequence[Block] | None:
    if v in c.S:
        return None
    if len(c.S) == 3:
        a, b, d = c.S
        Wm = g.matrix
        tot = Wm[a, b] + Wm[a, d] + Wm[b, d] + Wm[v, a] + Wm[v, b] + Wm[v, d]
        return (_block(c.S, v),) if tot > 6 * g.t_num else None
    return factor_of(g, list(c.S) + [v])


def absorb(g: WeightedCompleteGraph, aset: AbsorbingSet, R: Iterable[int], *, max_combos: int = 5000) -> list[Block]:
    """Heavy K4-factor of ``A + R`` using the gadgets' slots.

    Gadget ``j`` absorbs any four vertices that can fill its four slots,
    slot ``i`` accepting ``v`` when ``S_{j,i} + v`` has a heavy factor.
    Chosen gadgets contribute T plus the filled slots, the rest their
    own factor.
    """
    R = sorted(_vertex_set(g, R))
    A = set(aset.vertices)
    if A & set(R):
        raise ValueError("leftover set meets the absorbing set")
    if len(R) % 4:
        raise AbsorberError(f"|R| = {len(R)} is not divisible by 4")
    k = len(R) // 4
    gad = aset.gadgets
    if k > len(gad):
        raise AbsorberError(f"need {k} gadgets, only {len(gad)} available")
    if k == 0:
        return [b for a in gad for b in a.factor_without]
    acc = {}
    for j, ab in enumerate(gad):
        for i, c in enumerate(ab.connectors):
            for v in R:
                f = _slot_accepts(g, c, v)
                if f is not None:
                    acc[(j, i, v)] = f
    # most accommodating gadgets first
    score = [min(sum((j, i, v) in acc for v in R) for i in range(4)) for j in range(len(gad))]
    order = sorted(range(len(gad)), key=lambda j: (-score[j], j))
    order = [j for j in order if score[j] > 0]
    for count, J in enumerate(combinations(order, k)):
        if count >= max_combos:
            break
        B = nx.Graph()
        slots = [("s", j, i) for j in J for i in range(4)]
        B.add_nodes_from(slots, bipartite=0)
        B.add_nodes_from((("r", v) for v in R), bipartite=1)
        for j in J:
            for i in range(4):
                for v in R:
                    if (j, i, v) in acc:
                        B.add_edge(("s", j, i), ("r", v))
        match = nx.bipartite.hopcroft_karp_matching(B, top_nodes=slots)
        if all(sl in match for sl in slots):
            out: list[Block] = []
            for j, ab in enumerate(gad):
                if j in J:
                    out.append(ab.T)
                    for i in range(4):
                        v = match[("s", j, i)][1]
                        out.extend(acc[(j, i, v)])
                else:
                    out.extend(ab.factor_without)
            bad = validate_factor(g, sorted(A | set(R)), out)
            if bad:  # pragma: no cover
                raise AssertionError("; ".join(bad))
            return out
    raise AbsorberError(f"no gadget choice absorbs the {len(R)} leftover vertices")


def build_absorbing_set(
    g: WeightedCompleteGraph,
    gamma,
    xi,
    params: ReachParams = ReachParams(),
    *,
    seed: int = 0,
    spot_checks: int = 20,
    within: Iterable[int] | None = None,
    forbidden: Iterable[int] = (),
    max_gadgets: int | None = None,
) -> AbsorbingSet:
    """Aggregate disjoint absorbers for sampled 4-sets up to the budget ``gamma n``.

    The absorbing property is spot-checked on random leftover sets of size
    at most ``xi n``.
    """
    n = g.n
    budget = math.floor(as_fraction(gamma) * n)
    per = 16 * params.s
    if budget < per:
        raise BudgetError(f"budget gamma*n = {budget} is below one absorber ({per} vertices)")
    rng = np.random.default_rng(seed)
    universe = set(range(n)) if within is None else set(int(v) for v in within)
    blocked = set(int(v) for v in forbidden) | (set(range(n)) - universe)
    A: set[int] = set()
    gadgets: list[Absorber] = []
    index: dict[tuple[int, ...], int] = {}
    failures = 0
    attempts = 0
    cap = max_gadgets if max_gadgets is not None else budget // per
    while len(gadgets) < cap and len(A) + per <= budget and attempts < 4 * cap + 8:
        attempts += 1
        cand = sorted(universe - A - blocked)
        if len(cand) < 4:
            break
        S = tuple(sorted(int(x) for x in rng.choice(cand, 4, replace=False)))
        try:
            ab = build_absorber(g, S, params, forbidden=A | blocked)
        except (AbsorberError, ConnectorError):
            failures += 1
            continue
        if len(A) + ab.size > budget:
            break
        index[S] = len(gadgets)
        gadgets.append(ab)
        A |= set(ab.vertices)
    if not gadgets:
        raise BudgetError(f"no absorber could be placed (attempts={attempts}, failures={failures})")
    aset = AbsorbingSet(tuple(sorted(A)), gadgets, index, budget, params.s)
    limit = min(math.floor(as_fraction(xi) * n), 4 * len(gadgets))
    limit -= limit % 4
    passed = 0
    failed = 0
    rest = sorted(universe - A - blocked)
    for _ in range(spot_checks):
        size = 4 * int(rng.integers(0, limit // 4 + 1)) if limit >= 4 else 0
        size = min(size, len(rest) - len(rest) % 4)
        R = [int(x) for x in rng.choice(rest, size, replace=False)] if size else []
        try:
            absorb(g, aset, R)
            passed += 1
        except AbsorberError:
            failed += 1
    aset.stats = {
        "attempts": attempts,
        "absorber_failures": failures,
        "gadgets": len(gadgets),
        "spot_checks": spot_checks,
        "spot_passed": passed,
        "spot_failed": failed,
        "max_leftover": limit,
    }
    return aset


# --- partition and main-lemma driver ---------------------------------------


@dataclass
class ReachabilityPartition:
    verdict: str  # CLOSED, PARTITION, MERGED, B-SPLIT
    branch: str
    parts: tuple[tuple[int, ...], ...]
    B: tuple[int, ...] = ()
    U: tuple[int, ...] = ()
    witness: tuple[int, int] | None = None
    unresolved: tuple[int, ...] = ()
    size_ok: bool = True
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "kind": "reachability-partition",
            "verdict": self.verdict,
            "branch": self.branch,
            "parts": [list(p) for p in self.parts],
            "B": list(self.B),
            "U": list(self.U),
            "witness": list(self.witness) if self.witness else None,
            "unresolved": list(self.unresolved),
            "size_ok": self.size_ok,
            "details": self.details,
        }


class _ReachCache:
    def __init__(self, g: WeightedCompleteGraph, params: ReachParams):
        self.g, self.params = g, params
        self.memo: dict[tuple[int, int], bool] = {}

    def __call__(self, a: int, b: int) -> bool:
        key = (min(a, b), max(a, b))
        hit = self.memo.get(key)
        if hit is None:
            hit = certify_reachable(self.g, key[0], key[1], self.params) is not None
            self.memo[key] = hit
        return hit


def reachability_partition(
    g: WeightedCompleteGraph,
    params: ReachParams,
    gamma,
    *,
    seed: int = 0,
    pair_samples: int = 40,
    threshold: int = 1,
    neighbourhood_samples: int | None = None,
    _reach: _ReachCache | None = None,
) -> ReachabilityPartition:
    n = g.n
    rng = np.random.default_rng(seed)
    reach = _reach or _ReachCache(g, params)
    witness = None
    for _ in range(pair_samples):
        a, b = (int(x) for x in rng.choice(n, 2, replace=False))
        if not reach(a, b):
            witness = (min(a, b), max(a, b))
            break
    everyone = tuple(range(n))
    if witness is None:
        return ReachabilityPartition("CLOSED", "partition", (everyone,), U=everyone, details={"pairs_sampled": pair_samples})
    v1, v2 = witness
    others = [x for x in range(n) if x not in witness]
    if neighbourhood_samples is not None and neighbourhood_samples < len(others):
        probe = sorted(int(x) for x in rng.choice(others, neighbourhood_samples, replace=False))
    else:
        probe = others
    N1 = {x for x in probe if reach(v1, x)}
    N2 = {x for x in probe if reach(v2, x)}
    U1 = (N1 | {v1}) - N2
    U2 = (N2 | {v2}) - N1
    U0 = [x for x in range(n) if x not in U1 and x not in U2]
    R1, R2, unresolved = set(), set(), []
    for x in U0:
        c1 = sum(reach(x, y) for y in sorted(U1) if y != x)
        c2 = sum(reach(x, y) for y in sorted(U2) if y != x)
        if max(c1, c2) >= threshold:
            (R1 if c1 >= c2 else R2).add(x)
        else:
            unresolved.append(x)
            (R1 if len(U1) + len(R1) <= len(U2) + len(R2) else R2).add(x)
            log.warning("vertex %d certifies against neither side; parked in the smaller part", x)
    V1 = tuple(sorted(U1 | R1))
    V2 = tuple(sorted(U2 | R2))
    half = as_fraction(gamma) * n / 2
    size_ok = len(V1) >= half and len(V2) >= half
    if not size_ok:
        log.warning("partition part below gamma n / 2: sizes %d, %d", len(V1), len(V2))
    return ReachabilityPartition(
        "PARTITION",
        "partition",
        (V1, V2),
        U=everyone,
        witness=witness,
        unresolved=tuple(unresolved),
        size_ok=size_ok,
        details={"N1": len(N1), "N2": len(N2), "U0": len(U0)},
    )


def main_lemma_driver(
    g: WeightedCompleteGraph,
    gamma,
    beta,
    params: ReachParams | None = None,
    *,
    seed: int = 0,
    vertex_samples: int = 24,
    pair_samples: int = 6,
    inner_checks: int = 5,
    merge_checks: int = 3,
    partition_pair_samples: int = 40,
) -> ReachabilityPartition:
    """Split off a small poorly-reachable set B, or partition and try to merge."""
    from .lattice import PartitionContext, find_transferral, merge_parts

    n = g.n
    gamma = as_fraction(gamma)
    params = params or ReachParams.from_beta(n, beta)
    rng = np.random.default_rng(seed)
    reach = _ReachCache(g, params)
    verts = list(range(n)) if n <= vertex_samples else sorted(int(x) for x in rng.choice(n, vertex_samples, replace=False))
    estimates = {}
    for v in verts:
        others = [x for x in range(n) if x != v]
        k = min(pair_samples, len(others))
        probe = rng.choice(others, k, replace=False)
        hits = sum(reach(v, int(x)) for x in probe)
        est = hits / k * (n - 1) if k else 0.0
        estimates[v] = est
        if est >= gamma * n:
            continue
        B1 = [x for x in others if reach(v, x)]
        if len(B1) > gamma * n - 1:
            continue
        B = tuple(sorted(B1 + [v]))
        U = tuple(x for x in range(n) if x not in set(B))
        sub, idx = g.subgraph(U)
        ok = 0
        for _ in range(inner_checks):
            if len(U) < 3:
                break
            a, b, c = (int(x) for x in rng.choice(len(U), 3, replace=False))
            try:
                two_from_three(sub, a, b, c)
                ok += 1
            except ConstructionFailed:
                pass
        return ReachabilityPartition(
            "B-SPLIT",
            "B",
            (U,),
            B=B,
            U=U,
            details={"vertex": v, "inner_checks": inner_checks, "inner_passed": ok},
        )
    part = reachability_partition(
        g, params, gamma, seed=seed, pair_samples=partition_pair_samples, _reach=reach
    )
    part.details["reach_estimates_min"] = min(estimates.values()) if estimates else None
    if part.verdict == "CLOSED":
        part.branch = "closed"
        return part
    P = PartitionContext(part.parts)
    # merging must avoid x, y and the four vertices of S when picking T
    tr = find_transferral(g, P, beta, m=params.m + 6)
    part.branch = "partition-merge"
    if tr is None:
        part.details["transferral"] = None
        return part
    i_vec, j_vec, cs, ct = tr
    part.details["transferral"] = [list(i_vec), list(j_vec)]
    merged = 0
    for _ in range(merge_checks):
        x = int(rng.choice(part.parts[0]))
        y = int(rng.choice(part.parts[1]))
        try:
            conn = merge_parts(g, P, 0, 1, cs, ct, x, y, params)
        except Exception as exc:  # recorded, not fatal
            part.details.setdefault("merge_errors", []).append(str(exc))
            continue
        if conn is not None and not validate_connector(g, conn, s=8 * params.s):
            merged += 1
    part.details["merges_validated"] = merged
    if merged == merge_checks:
        part.verdict = "MERGED"
    return part


def two_community_graph(n: int, t="3/4", D: int = 1_000_000, *, bridge: int = 0) -> WeightedCompleteGraph:
    """Two halves with weight 1 inside and ``t/2`` across.

    With ``bridge > 0`` the first ``bridge`` vertices of each half are
    joined by weight-1 edges, and the remaining cross edges drop to 0, so
    mixed heavy K4s exist only through the bridge.
    """
    from .graph import to_numerator

    if n % 2:
        raise ValueError("n must be even")
    t_num = to_numerator(as_fraction(t), D, name="t")
    h = n // 2
    w = np.full((n, n), D, dtype=np.int64)
    cross = t_num // 2 if not bridge else 0
    w[:h, h:] = cross
    w[h:, :h] = cross
    if bridge:
        w[:bridge, h : h + bridge] = D
        w[h : h + bridge, :bridge] = D
    np.fill_diagonal(w, 0)
    return WeightedCompleteGraph(w, D=D, t_num=t_num)
