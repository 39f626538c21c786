"""Index vectors, robust-vector certificates, transferrals and the merge assembly (r = 4)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _kernels as K
from .certificates import validate_connector, validate_robust
from .errors import ConnectorError, DisjointnessError
from .graph import WeightedCompleteGraph, as_fraction
from .reachability import Connector, ReachParams, find_connector

R_CLIQUE = 4


class PartitionContext:
    """Ordered vertex partition with a per-vertex part label."""

    def __init__(self, parts: Sequence[Iterable[int]], n: int | None = None):
        parts = [tuple(sorted(int(v) for v in p)) for p in parts]
        if not parts or any(not p for p in parts):
            raise ValueError("parts must be non-empty")
        if len(parts) > 8:
            raise ValueError("at most 8 parts are supported")
        allv = [v for p in parts for v in p]
        if len(allv) != len(set(allv)):
            raise ValueError("parts overlap")
        size = n if n is not None else max(allv) + 1
        if sorted(allv) != list(range(size)):
            raise ValueError("parts must cover 0..n-1 exactly")
        self.parts = tuple(parts)
        self.n = size
        self.label = np.empty(size, dtype=np.intp)
        for i, p in enumerate(parts):
            self.label[list(p)] = i

    @property
    def C(self) -> int:
        return len(self.parts)

    def __repr__(self):
        return f"PartitionContext(sizes={[len(p) for p in self.parts]})"


def index_vector(P: PartitionContext, S: Iterable[int]) -> tuple[int, ...]:
    out = [0] * P.C
    for v in S:
        out[int(P.label[int(v)])] += 1
    return tuple(out)


@dataclass(frozen=True)
class RobustCertificate:
    vector: tuple[int, ...]
    members: tuple[tuple[int, int, int, int], ...]
    m: int

    def to_dict(self) -> dict:
        return {"kind": "robust", "vector": list(self.vector), "m": self.m, "members": [list(q) for q in self.members]}

    @classmethod
    def from_dict(cls, d: dict) -> "RobustCertificate":
        return cls(tuple(d["vector"]), tuple(tuple(q) for q in d["members"]), int(d["m"]))


def certify_robust(
    g: WeightedCompleteGraph, P: PartitionContext, i: Sequence[int], beta, *, m: int | None = None
) -> RobustCertificate | None:
    """Greedy packing of ``ceil(beta n) + 1`` disjoint heavy K4s with index vector ``i``."""
    i = tuple(int(x) for x in i)
    if len(i) != P.C or any(x < 0 for x in i) or sum(i) != R_CLIQUE:
        raise ValueError(f"index vector {i} must have {P.C} non-negative entries summing to 4")
    if m is None:
        m = math.ceil(as_fraction(beta) * g.n)
    need = m + 1
    if any(i[k] * need > len(P.parts[k]) for k in range(P.C)):
        return None
    W, t = g.matrix, g.t_num
    free = np.ones(g.n, dtype=bool)
    members = []
    slots = [k for k in range(P.C) for _ in range(i[k])]
    for _ in range(need):
        pools = [np.asarray([v for v in P.parts[k] if free[v]], dtype=np.intp) for k in slots]
        q = K.k4_search(W, t, pools)
        if q is None:
            return None
        q = tuple(sorted(q))
        members.append(q)
        free[list(q)] = False
    return RobustCertificate(i, tuple(members), m)


def _transferral_pairs(C: int) -> list[tuple[tuple[int, ...], tuple[int, ...], int, int]]:
    """Candidate (s, t, i, j) with s - t = u_i - u_j, in scan order."""
    if C == 2:
        seq = [(4, 0), (3, 1), (2, 2), (1, 3), (0, 4)]
        return [(seq[k], seq[k + 1], 0, 1) for k in range(4)]
    out = []
    vecs = []

    def rec(prefix, left):
        if len(prefix) == C - 1:
            vecs.append(tuple(prefix + [left]))
            return
        for x in range(left, -1, -1):
            rec(prefix + [x], left - x)

    rec([], R_CLIQUE)
    for s in vecs:
        for i in range(C):
            for j in range(C):
                if i != j and s[i] >= 1:
                    tv = list(s)
                    tv[i] -= 1
                    tv[j] += 1
                    out.append((s, tuple(tv), i, j))
    return out


def find_transferral(g: WeightedCompleteGraph, P: PartitionContext, beta, *, m: int | None = None):
    """First pair of robust vectors differing by a transferral, with both certificates.

    Returns ``(s, t, cert_s, cert_t)`` or ``None``; ``s - t = u_i - u_j``.
    """
    cache: dict[tuple[int, ...], RobustCertificate | None] = {}

    def cert(v):
        if v not in cache:
            cache[v] = certify_robust(g, P, v, beta, m=m)
        return cache[v]

    for s, tv, _i, _j in _transferral_pairs(P.C):
        cs = cert(s)
        if cs is None:
            continue
        ct = cert(tv)
        if ct is None:
            continue
        return s, tv, cs, ct
    return None


def _diff_parts(s: Sequence[int], tv: Sequence[int]) -> tuple[int, int]:
    d = [a - b for a, b in zip(s, tv)]
    pos = [k for k, x in enumerate(d) if x == 1]
    neg = [k for k, x in enumerate(d) if x == -1]
    if len(pos) != 1 or len(neg) != 1 or sum(abs(x) for x in d) != 2:
        raise ValueError(f"{tuple(s)} - {tuple(tv)} is not a transferral")
    return pos[0], neg[0]


def merge_parts(
    g: WeightedCompleteGraph,
    P: PartitionContext,
    i: int,
    j: int,
    certS: RobustCertificate,
    certT: RobustCertificate,
    x: int,
    y: int,
    params: ReachParams = ReachParams(),
    *,
    W: Iterable[int] = (),
) -> Connector:
    """Connector for x in V_i and y in V_j assembled from a transferral.

    Picks disjoint realisations S and T, splits off x' in S and y' in T,
    pairs the remaining vertices part by part and joins every pair, as
    well as (x, x') and (y, y'), by disjoint connectors.
    """
    ii, jj = _diff_parts(certS.vector, certT.vector)
    if (ii, jj) != (i, j):
        raise ValueError(f"certificates realise u_{ii} - u_{jj}, not u_{i} - u_{j}")
    x, y = g._check_vertex(x), g._check_vertex(y)
    if P.label[x] != i or P.label[y] != j:
        raise ValueError(f"x must lie in part {i} and y in part {j}")
    Wset = set(int(v) for v in W)
    avoid = Wset | {x, y}
    Sset = next((q for q in certS.members if not avoid.intersection(q)), None)
    if Sset is None:
        raise DisjointnessError("every realisation of s meets x, y or W")
    Tset = next((q for q in certT.members if not (avoid | set(Sset)).intersection(q)), None)
    if Tset is None:
        raise DisjointnessError("no realisation of t is disjoint from S, x, y and W")
    xp = min(v for v in Sset if P.label[v] == i)
    yp = min(v for v in Tset if P.label[v] == j)
    us = sorted((v for v in Sset if v != xp), key=lambda v: (P.label[v], v))
    vs = sorted((v for v in Tset if v != yp), key=lambda v: (P.label[v], v))
    if [P.label[a] for a in us] != [P.label[b] for b in vs]:  # pragma: no cover - guaranteed by the vectors
        raise AssertionError("remaining vertices do not pair up by part")
    used = avoid | set(Sset) | set(Tset)
    pairs = list(zip(us, vs)) + [(x, xp), (y, yp)]
    conns: list[Connector] = []
    for a, b in pairs:
        c = find_connector(g, a, b, used - {a, b}, params.s)
        if c is None:
            raise ConnectorError((a, b), "no disjoint connector within the merge")
        conns.append(c)
        used |= set(c.S)
    *ck, cx, cy = conns
    S_hat = set(Sset) | set(Tset)
    for c in conns:
        S_hat |= set(c.S)
    S_hat = tuple(sorted(S_hat))
    fx = cx.factor_u + cy.factor_v + tuple(b for c in ck for b in c.factor_v) + (tuple(Sset),)
    fy = cy.factor_u + cx.factor_v + tuple(b for c in ck for b in c.factor_u) + (tuple(Tset),)
    conn = Connector(x, y, S_hat, fx, fy)
    bound = 2 * R_CLIQUE**2 * params.s - 1
    if len(S_hat) > bound:  # pragma: no cover - each piece respects its own bound
        raise AssertionError(f"merged connector has {len(S_hat)} > {bound} vertices")
    bad = validate_connector(g, conn, W=Wset)
    if bad:  # pragma: no cover
        raise AssertionError("; ".join(bad))
    return conn


def robust_report(g: WeightedCompleteGraph, P: PartitionContext, cert: RobustCertificate) -> dict:
    d = cert.to_dict()
    d["violations"] = validate_robust(g, P, cert)
    return d
