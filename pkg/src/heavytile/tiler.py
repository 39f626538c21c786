"""Almost-cover local search over the tuple (|R|, |T|, |M|, rho).

R holds vertex-disjoint heavy K4s with at least two heavy triangles and two
heavy edges, T heavy triangles, M a matching of heavy edges and I the rest.
Every move below replaces a few members and is accepted only when the tuple
grows lexicographically, so the loop terminates.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterator, Sequence

import networkx as nx
import numpy as np

from . import _kernels as K
from .geometry import qualifies_num
from .graph import WeightedCompleteGraph, as_fraction, meets_degree_condition

log = logging.getLogger(__name__)

MOVE_KINDS = (
    "promote-triangle-plus-vertex",
    "promote-two-edges",
    "promote-free-k4",
    "claim1-swap",
    "claim2-swap",
    "claim3-swap",
    "repack-T",
    "repack-M",
    "rho-improve",
)


@dataclass
class TilingState:
    R: list[tuple[int, int, int, int]]
    T: list[tuple[int, int, int]]
    M: list[tuple[int, int]]
    I: list[int]
    rho_num: int
    D: int
    move_log: list[tuple[str, tuple[int, ...]]] = field(default_factory=list)

    @property
    def rho(self) -> Fraction:
        return Fraction(self.rho_num, self.D)

    def key(self) -> tuple[int, int, int, int]:
        return (len(self.R), len(self.T), len(self.M), self.rho_num)

    @property
    def covered(self) -> list[int]:
        return sorted(v for q in self.R for v in q)

    @property
    def uncovered(self) -> list[int]:
        cov = set(self.covered)
        verts = [v for tri in self.T for v in tri] + [v for e in self.M for v in e] + list(self.I)
        return sorted(v for v in verts if v not in cov)

    def copy(self) -> "TilingState":
        return TilingState(list(self.R), list(self.T), list(self.M), list(self.I), self.rho_num, self.D, list(self.move_log))


@dataclass(frozen=True)
class Move:
    kind: str
    removed: tuple[tuple[int, ...], ...]
    added: tuple[tuple[int, ...], ...]
    result: TilingState = field(compare=False, repr=False)

    @property
    def touched(self) -> tuple[int, ...]:
        return tuple(sorted({v for m in self.removed + self.added for v in m}))


def _rho(W: np.ndarray, R) -> int:
    total = 0
    for a, b, c, d in R:
        total += int(W[a, b] + W[a, c] + W[a, d] + W[b, c] + W[b, d] + W[c, d])
    return total


def _fill(W: np.ndarray, t: int, R, T, M, n: int):
    used = {v for m in R for v in m} | {v for m in T for v in m} | {v for m in M for v in m}
    free = [v for v in range(n) if v not in used]
    T = list(T) + K.greedy_triangles(W, t, free)
    used |= {v for m in T for v in m}
    free = [v for v in free if v not in used]
    M = list(M) + K.greedy_matching(W, t, free)
    used |= {v for m in M for v in m}
    I = [v for v in free if v not in used]
    return T, M, I


def greedy_init(g: WeightedCompleteGraph) -> TilingState:
    """Greedy R (maximal among qualifying K4s), then greedy T, then greedy M."""
    W, t = g.matrix, g.t_num
    R = K.greedy_qualifying(W, t, range(g.n))
    T, M, I = _fill(W, t, R, [], [], g.n)
    return TilingState(R, T, M, I, _rho(W, R), g.D)


# --- vectorised face tests ------------------------------------------------


def _qual_vec(W, t, a, b, c, d) -> np.ndarray:
    """Qualifying test broadcast over array arguments."""
    ab, ac, ad = W[a, b], W[a, c], W[a, d]
    bc, bd, cd = W[b, c], W[b, d], W[c, d]
    total = ab + ac + ad + bc + bd + cd
    edges = (
        (ab > t).astype(np.int8) + (ac > t) + (ad > t) + (bc > t) + (bd > t) + (cd > t)
    )
    t3 = 3 * t
    tris = (
        (ab + ac + bc > t3).astype(np.int8)
        + (ab + ad + bd > t3)
        + (ac + ad + cd > t3)
        + (bc + bd + cd > t3)
    )
    return (total > 6 * t) & (edges >= 2) & (tris >= 2)


def _weight4(W, q) -> int:
    return _rho(W, [q])


class _Ctx:
    """Per-state cached views used by the move generators."""

    def __init__(self, g: WeightedCompleteGraph, st: TilingState):
        self.g, self.st = g, st
        self.W, self.t = g.matrix, g.t_num
        in_r = np.zeros(g.n, dtype=bool)
        for q in st.R:
            in_r[list(q)] = True
        self.F = np.flatnonzero(~in_r)
        self.Z = K.as_pool([v for e in st.M for v in e] + list(st.I))
        self.I = K.as_pool(st.I)
        self.ZA, self.ZB = K.heavy_edges_in(self.W, self.t, self.Z) if self.Z.size >= 2 else (
            np.empty(0, dtype=np.intp),
            np.empty(0, dtype=np.intp),
        )


# each candidate: (kind, rem_R, rem_T, rem_M, add_R, add_T, add_M)
_Cand = tuple


def _gen_promote_triangle(c: _Ctx) -> Iterator[_Cand]:
    W, t, F = c.W, c.t, c.F
    kind = "promote-triangle-plus-vertex"

    def attach(tri):
        att = W[list(tri)][:, F].sum(axis=0)
        ok = (att > 3 * t) & ~np.isin(F, tri)
        hits = np.flatnonzero(ok)
        return int(F[hits[0]]) if hits.size else None

    for tri in c.st.T:
        u = attach(tri)
        if u is not None:
            yield (kind, (), (tri,), (), (tuple(sorted(tri + (u,))),), (), ())
    Z = c.Z
    for idx in range(Z.size - 2):
        a = int(Z[idx])
        rest = Z[idx + 1 :]
        I, J, _ = K.heavy_pairs_with(W, t, a, rest)
        for i, j in zip(I, J):
            tri = (a, int(rest[i]), int(rest[j]))
            u = attach(tri)
            if u is not None:
                yield (kind, (), (), (), (tuple(sorted(tri + (u,))),), (), ())


def _gen_promote_edges(c: _Ctx) -> Iterator[_Cand]:
    W, t, A, B = c.W, c.t, c.ZA, c.ZB
    for k in range(A.size):
        a, b = int(A[k]), int(B[k])
        cross = W[a, A] + W[a, B] + W[b, A] + W[b, B]
        ok = (cross > 4 * t) & (A != a) & (A != b) & (B != a) & (B != b)
        ok[: k + 1] = False
        hits = np.flatnonzero(ok)
        if hits.size:
            j = hits[0]
            quad = tuple(sorted((a, b, int(A[j]), int(B[j]))))
            yield ("promote-two-edges", (), (), (), (quad,), (), ())


def _gen_free_k4(c: _Ctx) -> Iterator[_Cand]:
    hit = K.first_qualifying_in(c.W, c.t, c.F)
    if hit is not None:
        yield ("promote-free-k4", (), (), (), (hit,), (), ())


def _gen_claim1(c: _Ctx) -> Iterator[_Cand]:
    T = c.st.T
    if len(T) < 2:
        return
    W, t = c.W, c.t
    tarr = np.asarray(T, dtype=np.intp)
    for q in c.st.R:
        att = W[np.asarray(q)[:, None, None], tarr[None]].sum(axis=2) > 3 * t  # 4 x |T|
        rows, cols = np.nonzero(att)
        pairs = list(zip(rows.tolist(), cols.tolist()))
        for (v, j), (v2, j2) in combinations(pairs, 2):
            if v != v2 and j != j2:
                k1 = tuple(sorted(T[j] + (q[v],)))
                k2 = tuple(sorted(T[j2] + (q[v2],)))
                yield ("claim1-swap", (q,), (T[j], T[j2]), (), (k1, k2), (), ())
                break


def _first_disjoint(us, edges_a, edges_b):
    for u in us:
        ok = (edges_a != u) & (edges_b != u)
        hits = np.flatnonzero(ok)
        if hits.size:
            return int(u), hits[0]
    return None


def _gen_claim2(c: _Ctx) -> Iterator[_Cand]:
    W, t, Z, A, B = c.W, c.t, c.Z, c.ZA, c.ZB
    if Z.size < 3 or A.size == 0:
        return
    kind = "claim2-swap"
    for q in c.st.R:
        # vertex x leaves its K4 to form a triangle with a heavy edge of Z,
        # while some u of Z completes the remaining face
        for x in q:
            face = [v for v in q if v != x]
            qual_u = _qual_vec(W, t, face[0], face[1], face[2], Z)
            if not qual_u.any():
                continue
            tri_ok = W[x, A] + W[x, B] > 2 * t
            if not tri_ok.any():
                continue
            hit = _first_disjoint(Z[qual_u], A[tri_ok], B[tri_ok])
            if hit is not None:
                u, k = hit
                e = (int(A[tri_ok][k]), int(B[tri_ok][k]))
                yield (
                    kind,
                    (q,),
                    (),
                    (),
                    (tuple(sorted(face + [u])),),
                    (tuple(sorted((x,) + e)),),
                    (),
                )
        wq = _weight4(W, q)
        for a, b in combinations(q, 2):
            rest = [v for v in q if v not in (a, b)]
            e1_ok = _qual_vec(W, t, a, b, A, B)
            if not e1_ok.any():
                continue
            e1_idx = np.flatnonzero(e1_ok)
            # pair ab plus e1 forms a K4; one leftover joins another heavy edge
            for cv in rest:
                tri_ok = W[cv, A] + W[cv, B] > 2 * t
                if not tri_ok.any():
                    continue
                for k1 in e1_idx:
                    a1, b1 = A[k1], B[k1]
                    ok = tri_ok & (A != a1) & (A != b1) & (B != a1) & (B != b1)
                    hits = np.flatnonzero(ok)
                    if hits.size:
                        k2 = hits[0]
                        yield (
                            kind,
                            (q,),
                            (),
                            (),
                            (tuple(sorted((a, b, int(a1), int(b1)))),),
                            (tuple(sorted((cv, int(A[k2]), int(B[k2])))),),
                            (),
                        )
                        break
            # heavier K4 on ab plus e1 while the complement is a heavy edge
            cv, dv = rest
            if W[cv, dv] > t:
                for k1 in e1_idx:
                    quad = tuple(sorted((a, b, int(A[k1]), int(B[k1]))))
                    if _weight4(W, quad) > wq:
                        yield (kind, (q,), (), (), (quad,), (), ((min(cv, dv), max(cv, dv)),))
                        break


def _gen_claim3(c: _Ctx) -> Iterator[_Cand]:
    W, t, I = c.W, c.t, c.I
    if I.size < 2:
        return
    for q in c.st.R:
        for x in q:
            face = [v for v in q if v != x]
            qual_u = _qual_vec(W, t, face[0], face[1], face[2], I)
            if not qual_u.any():
                continue
            mate = W[x, I] > t
            for u in I[qual_u]:
                ok = mate & (I != u)
                hits = np.flatnonzero(ok)
                if hits.size:
                    u2 = int(I[hits[0]])
                    yield (
                        "claim3-swap",
                        (q,),
                        (),
                        (),
                        (tuple(sorted(face + [int(u)])),),
                        (),
                        ((min(x, u2), max(x, u2)),),
                    )
                    break


def _gen_repack(c: _Ctx) -> Iterator[_Cand]:
    W, t, Z = c.W, c.t, c.Z
    tri = K.heavy_triangle_with(W, t, int(Z[0]), Z[1:]) if Z.size >= 3 else None
    if tri is None and Z.size >= 3:
        for idx in range(1, Z.size - 2):
            tri = K.heavy_triangle_with(W, t, int(Z[idx]), Z[idx + 1 :])
            if tri is not None:
                break
    if tri is not None:
        yield ("repack-T", (), (), (), (), (tri,), ())
    for tau in c.st.T:
        pool = list(tau) + Z.tolist()
        fam = K.greedy_triangles(W, t, pool)
        if len(fam) >= 2:
            yield ("repack-T", (), (tau,), (), (), tuple(fam[:2]), ())
    if c.ZA.size > len(c.st.M):
        G = nx.Graph()
        G.add_edges_from(zip(c.ZA.tolist(), c.ZB.tolist()))
        mate = nx.max_weight_matching(G, maxcardinality=True)
        if len(mate) > len(c.st.M):
            new_m = tuple(sorted((min(a, b), max(a, b)) for a, b in mate))
            yield ("repack-M", (), (), tuple(c.st.M), (), (), new_m)


def _gen_rho(c: _Ctx) -> Iterator[_Cand]:
    W, t, Z = c.W, c.t, c.Z
    if Z.size == 0:
        return
    for q in c.st.R:
        for x in q:
            face = [v for v in q if v != x]
            gain = W[face][:, Z].sum(axis=0) - int(W[x, face].sum())
            ok = (gain > 0) & _qual_vec(W, t, face[0], face[1], face[2], Z)
            hits = np.flatnonzero(ok)
            if hits.size:
                u = int(Z[hits[np.argmax(gain[hits])]])
                yield ("rho-improve", (q,), (), (), (tuple(sorted(face + [u])),), (), ())


_GENERATORS = (
    _gen_promote_triangle,
    _gen_promote_edges,
    _gen_free_k4,
    _gen_claim1,
    _gen_claim2,
    _gen_claim3,
    _gen_repack,
    _gen_rho,
)


def _realize(g: WeightedCompleteGraph, st: TilingState, cand: _Cand) -> Move | None:
    kind, rem_r, rem_t, rem_m, add_r, add_t, add_m = cand
    W, t = g.matrix, g.t_num
    added = list(add_r) + list(add_t) + list(add_m)
    new_v = [v for m in added for v in m]
    if len(new_v) != len(set(new_v)):
        return None
    if any(not qualifies_num(W, q, t) for q in add_r):
        return None
    new_set = set(new_v)
    rem_r, rem_t, rem_m = set(rem_r), set(rem_t), set(rem_m)
    R = [q for q in st.R if q not in rem_r]
    if any(new_set.intersection(q) for q in R):
        return None
    dropped_t = [m for m in st.T if m in rem_t or new_set.intersection(m)]
    dropped_m = [m for m in st.M if m in rem_m or new_set.intersection(m)]
    T = [m for m in st.T if m not in dropped_t] + list(add_t)
    M = [m for m in st.M if m not in dropped_m] + list(add_m)
    R = R + list(add_r)
    T, M, I = _fill(W, t, R, T, M, g.n)
    new = TilingState(R, T, M, I, _rho(W, R), g.D, st.move_log)
    if new.key() <= st.key():
        return None
    removed = tuple(q for q in st.R if q in rem_r) + tuple(dropped_t) + tuple(dropped_m)
    mv = Move(kind, removed, tuple(added), new)
    new.move_log = st.move_log + [(kind, mv.touched)]
    return mv


def find_move(g: WeightedCompleteGraph, state: TilingState, mu=None) -> Move | None:
    """First applicable move in the fixed priority order, or ``None``.

    ``mu`` is accepted for interface symmetry; the search never uses it.
    """
    ctx = _Ctx(g, state)
    for gen in _GENERATORS:
        for cand in gen(ctx):
            mv = _realize(g, state, cand)
            if mv is not None:
                return mv
    return None


def almost_cover(g: WeightedCompleteGraph, mu=None, *, max_moves: int | None = None) -> TilingState:
    """Greedy start followed by moves until the catalog is exhausted."""
    state = greedy_init(g)
    limit = max_moves if max_moves is not None else 20 * g.n + 100
    for _ in range(limit):
        mv = find_move(g, state, mu)
        if mv is None:
            break
        if not mv.result.key() > state.key():  # pragma: no cover - guarded in _realize
            raise AssertionError("move did not increase the tuple")
        state = mv.result
    else:
        log.warning("almost_cover stopped after %d moves without reaching a local maximum", limit)
    return state


def validate_state(g: WeightedCompleteGraph, state: TilingState) -> list[str]:
    W, t = g.matrix, g.t_num
    problems: list[str] = []
    seen: dict[int, str] = {}

    def claim(v, owner):
        if not 0 <= v < g.n:
            problems.append(f"vertex {v} out of range in {owner}")
            return
        if v in seen:
            problems.append(f"vertex {v} used by both {seen[v]} and {owner}")
        else:
            seen[v] = owner

    for name, members, size in (("R", state.R, 4), ("T", state.T, 3), ("M", state.M, 2)):
        for m in members:
            owner = f"{name}{tuple(m)}"
            if len(m) != size:
                problems.append(f"{owner} has {len(m)} vertices, expected {size}")
            for v in m:
                claim(int(v), owner)
    for v in state.I:
        claim(int(v), "I")
    missing = sorted(set(range(g.n)) - set(seen))
    if missing:
        problems.append(f"vertices not accounted for: {missing}")
    for q in state.R:
        if len(q) == 4 and len(set(q)) == 4 and all(0 <= v < g.n for v in q) and not qualifies_num(W, q, t):
            problems.append(f"R member {tuple(q)} is not a heavy K4 with two heavy triangles and two heavy edges")
    for tri in state.T:
        if len(set(tri)) == 3 and all(0 <= v < g.n for v in tri):
            a, b, c = tri
            if W[a, b] + W[a, c] + W[b, c] <= 3 * t:
                problems.append(f"T member {tuple(tri)} is not heavy")
    for e in state.M:
        if len(set(e)) == 2 and all(0 <= v < g.n for v in e) and W[e[0], e[1]] <= t:
            problems.append(f"M member {tuple(e)} is not heavy")
    if not problems:
        rho = _rho(W, state.R)
        if rho != state.rho_num:
            problems.append(f"rho mismatch: stored {Fraction(state.rho_num, g.D)}, recomputed {Fraction(rho, g.D)}")
    return problems


def tiling_report(g: WeightedCompleteGraph, state: TilingState, mu=None) -> dict:
    """JSON-ready summary, with the size bounds checked when the degree condition holds."""
    unc = state.uncovered
    rep = {
        "kind": "tiling",
        "n": g.n,
        "t": str(g.t),
        "D": g.D,
        "sizes": {"R": len(state.R), "T": len(state.T), "M": len(state.M), "I": len(state.I)},
        "rho": str(state.rho),
        "rho_num": state.rho_num,
        "R": [list(q) for q in state.R],
        "T": [list(x) for x in state.T],
        "M": [list(e) for e in state.M],
        "I": list(state.I),
        "uncovered": unc,
        "move_log": [{"kind": k, "touched": list(v)} for k, v in state.move_log],
    }
    if mu is not None:
        mu = as_fraction(mu)
        cond = meets_degree_condition(g, mu)
        inv = 1 / mu
        bounds = {
            "degree_condition": cond,
            "T_le_3": len(state.T) <= 3,
            "M_le_inv_mu": len(state.M) <= math.ceil(inv),
            "I_le_inv_mu": len(state.I) <= math.ceil(inv),
            "uncovered_le_9_plus_3_over_mu": len(unc) <= 9 + 3 * inv,
            "uncovered_le_9_plus_6_over_mu": len(unc) <= 9 + 6 * inv,
        }
        rep["mu"] = str(mu)
        rep["bounds"] = bounds
        if cond:
            bad = [k for k, v in bounds.items() if k != "degree_condition" and not v]
            if bad:
                log.warning("counterexample candidate: bounds %s violated (n=%d)", bad, g.n)
    return rep


def state_from_report(rep: dict, D: int, W: np.ndarray | None = None) -> TilingState:
    R = [tuple(int(v) for v in q) for q in rep["R"]]
    rho = _rho(W, R) if W is not None else int(rep["rho_num"])
    return TilingState(
        R,
        [tuple(int(v) for v in x) for x in rep["T"]],
        [tuple(int(v) for v in e) for e in rep["M"]],
        [int(v) for v in rep["I"]],
        int(rep.get("rho_num", rho)),
        D,
    )


def tiling_size(state: TilingState) -> int:
    return len(state.R)


def make_state(g: WeightedCompleteGraph, R: Sequence, T: Sequence = (), M: Sequence = (), I: Sequence | None = None) -> TilingState:
    """Build a state from explicit members; I defaults to the uncovered rest."""
    R = [tuple(int(v) for v in q) for q in R]
    T = [tuple(int(v) for v in x) for x in T]
    M = [tuple(int(v) for v in e) for e in M]
    if I is None:
        used = {v for m in R + T + M for v in m}
        I = [v for v in range(g.n) if v not in used]
    return TilingState(R, T, M, list(I), _rho(g.matrix, R), g.D)
