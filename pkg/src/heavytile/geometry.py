"""Heavy faces of cliques: profiles, extension guards and counting sets.

A heavy K4 built by extending a heavy triangle with a vertex of attachment
weight above 3t, or by joining two heavy edges whose crossing weight exceeds
4t, always contains at least two heavy triangles and two heavy edges.  The
tiler only ever keeps K4s with that profile.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .errors import NotHeavyError
from .graph import (
    WeightedCompleteGraph,
    _vertex_set,
    as_fraction,
    clique_weight_num,
    meets_degree_condition,
)


@dataclass(frozen=True)
class HeavyProfile:
    vertices: tuple[int, ...]
    weight: Fraction
    heavy: bool
    heavy_edges: tuple[tuple[int, int], ...]
    heavy_triangles: tuple[tuple[int, int, int], ...]

    @property
    def has_two_heavy_triangles(self) -> bool:
        return len(self.heavy_triangles) >= 2

    @property
    def has_two_heavy_edges(self) -> bool:
        return len(self.heavy_edges) >= 2

    @property
    def qualifies(self) -> bool:
        """Heavy with at least two heavy triangles and two heavy edges."""
        return self.heavy and self.has_two_heavy_triangles and self.has_two_heavy_edges


@dataclass(frozen=True)
class CliqueEvidence:
    """Heavy r-clique together with its heavy (r-1)-subcliques and heavy edges."""

    vertices: tuple[int, ...]
    weight: Fraction
    heavy_subcliques: tuple[tuple[int, ...], ...]
    heavy_edges: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class ExtensionReport:
    vertices: tuple[int, ...]
    bound: Fraction | None = None
    degree_condition: bool | None = None

    @property
    def size(self) -> int:
        return len(self.vertices)

    @property
    def meets_bound(self) -> bool | None:
        """``None`` unless the degree hypothesis was supplied and holds."""
        if self.bound is None or not self.degree_condition:
            return None
        return self.size >= self.bound


def _heavy_subsets(g: WeightedCompleteGraph, verts: Sequence[int], k: int) -> tuple[tuple[int, ...], ...]:
    thr = g.heavy_threshold(k)
    return tuple(c for c in combinations(sorted(verts), k) if clique_weight_num(g, c) > thr)


def profile_k4(g: WeightedCompleteGraph, S: Iterable[int]) -> HeavyProfile:
    verts = _vertex_set(g, S)
    if len(verts) != 4:
        raise ValueError(f"a K4 profile needs 4 vertices, got {len(verts)}")
    total = clique_weight_num(g, verts)
    return HeavyProfile(
        vertices=tuple(sorted(verts)),
        weight=Fraction(total, g.D),
        heavy=total > g.heavy_threshold(4),
        heavy_edges=_heavy_subsets(g, verts, 2),
        heavy_triangles=_heavy_subsets(g, verts, 3),
    )


def qualifies_num(W: np.ndarray, quad: Sequence[int], t_num: int) -> bool:
    """Integer-only check that ``quad`` is a heavy K4 with the required faces."""
    a, b, c, d = quad
    ab, ac, ad = int(W[a, b]), int(W[a, c]), int(W[a, d])
    bc, bd, cd = int(W[b, c]), int(W[b, d]), int(W[c, d])
    if ab + ac + ad + bc + bd + cd <= 6 * t_num:
        return False
    edges = (ab > t_num) + (ac > t_num) + (ad > t_num) + (bc > t_num) + (bd > t_num) + (cd > t_num)
    if edges < 2:
        return False
    thr = 3 * t_num
    tris = (ab + ac + bc > thr) + (ab + ad + bd > thr) + (ac + ad + cd > thr) + (bc + bd + cd > thr)
    return tris >= 2


def _require_heavy(g: WeightedCompleteGraph, verts: Sequence[int], what: str) -> None:
    if clique_weight_num(g, verts) <= g.heavy_threshold(len(verts)):
        raise NotHeavyError(f"{what} {tuple(verts)} is not t-heavy")


def _attachment(g: WeightedCompleteGraph, u: int, verts: Sequence[int]) -> int:
    return int(g.matrix[u, list(verts)].sum())


def extend_triangle(g: WeightedCompleteGraph, T: Iterable[int], u: int) -> HeavyProfile | None:
    """Profile of ``T + u`` when ``w(u, T) > 3t``, else ``None``."""
    tri = _vertex_set(g, T)
    if len(tri) != 3:
        raise ValueError("T must be a triangle")
    u = g._check_vertex(u)
    if u in tri:
        raise ValueError(f"vertex {u} already in T")
    _require_heavy(g, tri, "triangle")
    if _attachment(g, u, tri) <= 3 * g.t_num:
        return None
    return profile_k4(g, tri + [u])


def merge_heavy_edges(g: WeightedCompleteGraph, e1: Iterable[int], e2: Iterable[int]) -> HeavyProfile | None:
    """Profile of ``e1 + e2`` when their crossing weight exceeds 4t, else ``None``."""
    e1, e2 = _vertex_set(g, e1), _vertex_set(g, e2)
    if len(e1) != 2 or len(e2) != 2:
        raise ValueError("edges need exactly two vertices")
    shared = set(e1) & set(e2)
    if shared:
        raise ValueError(f"edges share vertex {min(shared)}")
    _require_heavy(g, e1, "edge")
    _require_heavy(g, e2, "edge")
    cross = int(g.matrix[np.ix_(e1, e2)].sum())
    if cross <= 4 * g.t_num:
        return None
    return profile_k4(g, e1 + e2)


def extend_heavy_clique(g: WeightedCompleteGraph, K: Iterable[int], u: int) -> CliqueEvidence | None:
    """Extend a heavy (r-1)-clique by ``u`` when ``w(u, K) > (r-1)t``.

    The result is a heavy r-clique with at least two heavy (r-1)-subcliques
    and at least two heavy edges.  Supported for ``r - 1`` in {2, 3, 4}.
    """
    K = _vertex_set(g, K)
    k = len(K)
    if k not in (2, 3, 4):
        raise ValueError(f"clique size {k} not supported (need 2, 3 or 4)")
    u = g._check_vertex(u)
    if u in K:
        raise ValueError(f"vertex {u} already in K")
    _require_heavy(g, K, "clique")
    if _attachment(g, u, K) <= k * g.t_num:
        return None
    verts = sorted(K + [u])
    return CliqueEvidence(
        vertices=tuple(verts),
        weight=Fraction(clique_weight_num(g, verts), g.D),
        heavy_subcliques=_heavy_subsets(g, verts, k),
        heavy_edges=_heavy_subsets(g, verts, 2),
    )


def heavy_extension_set(g: WeightedCompleteGraph, K: Iterable[int], mu=None) -> ExtensionReport:
    """Vertices ``u`` outside the heavy clique ``K`` with ``w(K, u) > |K| t``.

    With ``mu`` supplied, the report also records whether the graph meets
    ``delta^w >= (1/4 + 3t/4 + mu) n`` and, if so, whether the set reaches
    ``n/4 - |K|``.
    """
    K = _vertex_set(g, K, min_size=2)
    _require_heavy(g, K, "clique")
    att = g.matrix[K].sum(axis=0)
    mask = att > len(K) * g.t_num
    mask[K] = False
    verts = tuple(int(v) for v in np.flatnonzero(mask))
    if mu is None:
        return ExtensionReport(verts)
    return ExtensionReport(
        verts,
        bound=Fraction(g.n, 4) - len(K),
        degree_condition=meets_degree_condition(g, as_fraction(mu)),
    )


def strong_extension_set(g: WeightedCompleteGraph, S: Iterable[int], mu=None) -> ExtensionReport:
    """Vertices ``u`` outside the 4-set ``S`` with ``w(S, u) > 1 + 3t``."""
    S = _vertex_set(g, S)
    if len(S) != 4:
        raise ValueError("S must have exactly 4 vertices")
    att = g.matrix[S].sum(axis=0)
    mask = att > g.D + 3 * g.t_num
    mask[S] = False
    verts = tuple(int(v) for v in np.flatnonzero(mask))
    if mu is None:
        return ExtensionReport(verts)
    mu = as_fraction(mu)
    return ExtensionReport(
        verts,
        bound=mu * g.n - 4,
        degree_condition=meets_degree_condition(g, mu),
    )

