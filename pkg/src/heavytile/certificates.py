"""Exact validators for factors, connectors, absorbers and robust certificates.

Every validator returns a list of human-readable violations; an empty list
means the object checks out.  JSON round-trips carry a ``kind`` field so
that the CLI can replay any emitted structure.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Sequence

from .graph import WeightedCompleteGraph


def _pair_total(W, verts) -> int:
    return sum(int(W[a, b]) for a, b in combinations(verts, 2))


def validate_factor(g: WeightedCompleteGraph, vertices: Iterable[int], factor: Sequence[Sequence[int]], *, label: str = "factor") -> list[str]:
    """Check that ``factor`` is a set of disjoint heavy 4-sets covering ``vertices`` exactly."""
    W, t = g.matrix, g.t_num
    target = set(int(v) for v in vertices)
    seen: set[int] = set()
    out = []
    for q in factor:
        q = [int(v) for v in q]
        if len(q) != 4 or len(set(q)) != 4:
            out.append(f"{label}: block {q} is not a 4-set")
            continue
        if any(not 0 <= v < g.n for v in q):
            out.append(f"{label}: block {q} has a vertex out of range")
            continue
        dup = seen.intersection(q)
        if dup:
            out.append(f"{label}: vertex {min(dup)} covered twice")
        seen.update(q)
        if _pair_total(W, q) <= 6 * t:
            out.append(f"{label}: block {q} is not t-heavy")
    if seen - target:
        out.append(f"{label}: covers vertices outside the target set: {sorted(seen - target)}")
    if target - seen:
        out.append(f"{label}: leaves vertices uncovered: {sorted(target - seen)}")
    return out


def validate_connector(g: WeightedCompleteGraph, conn, *, s: int | None = None, W: Iterable[int] = ()) -> list[str]:
    u, v, S = int(conn.u), int(conn.v), [int(x) for x in conn.S]
    out = []
    if u == v:
        out.append("connector endpoints coincide")
    if len(set(S)) != len(S):
        out.append("connector set has repeated vertices")
    if u in S or v in S:
        out.append("connector set contains an endpoint")
    if (len(S) + 1) % 4:
        out.append(f"connector size {len(S)} is not 3 mod 4")
    if s is not None and len(S) > 4 * s - 1:
        out.append(f"connector size {len(S)} exceeds 4s-1 = {4 * s - 1}")
    hit = set(S) & set(int(x) for x in W)
    if hit:
        out.append(f"connector meets forbidden vertex {min(hit)}")
    out += validate_factor(g, S + [u], conn.factor_u, label=f"factor of S+{u}")
    out += validate_factor(g, S + [v], conn.factor_v, label=f"factor of S+{v}")
    return out


def validate_absorber(g: WeightedCompleteGraph, ab, *, s: int = 1) -> list[str]:
    S = [int(x) for x in ab.target]
    A = [int(x) for x in ab.vertices]
    out = []
    if len(set(S)) != 4:
        out.append("absorber target is not a 4-set")
    if set(A) & set(S):
        out.append(f"absorber meets its target at {min(set(A) & set(S))}")
    if len(set(A)) != len(A):
        out.append("absorber has repeated vertices")
    if len(A) > 16 * s:
        out.append(f"absorber size {len(A)} exceeds 16s = {16 * s}")
    out += validate_factor(g, A, ab.factor_without, label="factor of A")
    out += validate_factor(g, A + S, ab.factor_with, label="factor of A+S")
    return out


def validate_robust(g: WeightedCompleteGraph, P, cert) -> list[str]:
    from .lattice import index_vector

    out = []
    W, t = g.matrix, g.t_num
    seen: set[int] = set()
    need = cert.m + 1
    if len(cert.members) < need:
        out.append(f"only {len(cert.members)} members, need {need}")
    for q in cert.members:
        q = [int(v) for v in q]
        dup = seen.intersection(q)
        if dup:
            out.append(f"members overlap at vertex {min(dup)}")
        seen.update(q)
        if len(set(q)) != 4 or _pair_total(W, q) <= 6 * t:
            out.append(f"member {q} is not a heavy K4")
        if tuple(index_vector(P, q)) != tuple(cert.vector):
            out.append(f"member {q} has index vector {tuple(index_vector(P, q))}, expected {tuple(cert.vector)}")
    return out
