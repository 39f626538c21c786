"""Vectorised integer search kernels shared by the tiler, reachability and lattice code.

All functions take the raw numerator matrix ``W`` and the threshold
numerator ``t`` and work on sorted ``np.intp`` candidate arrays.  Results are
deterministic: the first hit in lexicographic scan order wins.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

_CHUNK = 512


def as_pool(vertices) -> np.ndarray:
    return np.asarray(sorted(set(int(v) for v in vertices)), dtype=np.intp)


def heavy_pairs_with(W: np.ndarray, t: int, a: int, pool: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Index pairs ``i < j`` into ``pool`` such that ``a, pool[i], pool[j]`` is heavy.

    Returns ``(I, J, tri)`` with the triangle weights, in lexicographic order.
    """
    wa = W[a, pool]
    Wp = W[np.ix_(pool, pool)]
    tri = wa[:, None] + wa[None, :] + Wp
    heavy = np.triu(tri > 3 * t, 1)
    I, J = np.nonzero(heavy)
    return I, J, tri[I, J]


def qualifying_with(W: np.ndarray, t: int, a: int, pool: np.ndarray) -> tuple[int, int, int, int] | None:
    """First heavy K4 ``{a, b, c, u}`` (others from ``pool``) with >= 2 heavy triangles and edges.

    Any such K4 contains a heavy triangle through ``a``, so scanning heavy
    triangles ``a b c`` and testing every fourth vertex is exhaustive.
    """
    pool = pool[pool != a]
    if pool.size < 3:
        return None
    I, J, tri = heavy_pairs_with(W, t, a, pool)
    if I.size == 0:
        return None
    wa = W[a, pool]
    Wp = W[np.ix_(pool, pool)]
    k = np.arange(pool.size)
    t3, t6 = 3 * t, 6 * t
    wa_gt = wa > t
    for lo in range(0, I.size, _CHUNK):
        i, j, tr = I[lo : lo + _CHUNK], J[lo : lo + _CHUNK], tri[lo : lo + _CHUNK]
        wb, wc = Wp[i], Wp[j]  # rows: weights from b / c to every pool vertex
        wab, wac, wbc = wa[i][:, None], wa[j][:, None], Wp[i, j][:, None]
        heavy4 = tr[:, None] + wa[None, :] + wb + wc > t6
        tris = (
            1
            + (wab + wa[None, :] + wb > t3).astype(np.int8)
            + (wac + wa[None, :] + wc > t3)
            + (wbc + wb + wc > t3)
        )
        edges = (
            (wab > t).astype(np.int8)
            + (wac > t)
            + (wbc > t)
            + wa_gt[None, :]
            + (wb > t)
            + (wc > t)
        )
        ok = heavy4 & (tris >= 2) & (edges >= 2)
        ok &= (k[None, :] != i[:, None]) & (k[None, :] != j[:, None])
        rows = np.flatnonzero(ok.any(axis=1))
        if rows.size:
            r = rows[0]
            u = int(np.flatnonzero(ok[r])[0])
            return tuple(sorted((a, int(pool[i[r]]), int(pool[j[r]]), int(pool[u]))))
    return None


def first_qualifying_in(W: np.ndarray, t: int, pool: np.ndarray) -> tuple[int, int, int, int] | None:
    """First qualifying K4 inside ``pool`` ordered by its lowest vertex."""
    for idx in range(pool.size - 3):
        hit = qualifying_with(W, t, int(pool[idx]), pool[idx + 1 :])
        if hit is not None:
            return hit
    return None


def heavy_triangle_with(W: np.ndarray, t: int, a: int, pool: np.ndarray) -> tuple[int, int, int] | None:
    pool = pool[pool != a]
    if pool.size < 2:
        return None
    I, J, _ = heavy_pairs_with(W, t, a, pool)
    if I.size == 0:
        return None
    return tuple(sorted((a, int(pool[I[0]]), int(pool[J[0]]))))


def heavy_triangles_in(W: np.ndarray, t: int, pool: np.ndarray) -> list[tuple[int, int, int]]:
    out = []
    for idx in range(pool.size - 2):
        a = int(pool[idx])
        rest = pool[idx + 1 :]
        I, J, _ = heavy_pairs_with(W, t, a, rest)
        out.extend((a, int(rest[i]), int(rest[j])) for i, j in zip(I, J))
    return out


def heavy_edges_in(W: np.ndarray, t: int, pool: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Arrays ``(A, B)`` of heavy edges ``A[k] < B[k]`` inside ``pool``, lexicographic."""
    Wp = W[np.ix_(pool, pool)]
    I, J = np.nonzero(np.triu(Wp > t, 1))
    return pool[I], pool[J]


def greedy_triangles(W: np.ndarray, t: int, pool: Sequence[int]) -> list[tuple[int, int, int]]:
    """Greedy maximal family of disjoint heavy triangles, lowest index first."""
    free = as_pool(pool)
    out = []
    idx = 0
    while idx < free.size - 2:
        a = int(free[idx])
        hit = heavy_triangle_with(W, t, a, free[idx + 1 :])
        if hit is None:
            idx += 1
            continue
        out.append(hit)
        free = free[~np.isin(free, hit)]
        # ``a`` was removed, so the next candidate now sits at ``idx``
    return out


def greedy_matching(W: np.ndarray, t: int, pool: Sequence[int]) -> list[tuple[int, int]]:
    free = as_pool(pool)
    used = np.zeros(free.size, dtype=bool)
    out = []
    for i in range(free.size):
        if used[i]:
            continue
        row = W[free[i], free] > t
        row &= ~used
        row[: i + 1] = False
        hits = np.flatnonzero(row)
        if hits.size:
            j = hits[0]
            used[i] = used[j] = True
            out.append((int(free[i]), int(free[j])))
    return out


def greedy_qualifying(W: np.ndarray, t: int, pool: Sequence[int]) -> list[tuple[int, int, int, int]]:
    """Greedy maximal family of disjoint qualifying K4s, lowest index first.

    A vertex skipped once can never join a qualifying K4 later because the
    free set only shrinks, so each vertex is examined a single time.
    """
    free = as_pool(pool)
    out = []
    idx = 0
    while idx < free.size - 3:
        a = int(free[idx])
        hit = qualifying_with(W, t, a, free[idx + 1 :])
        if hit is None:
            idx += 1
            continue
        out.append(hit)
        free = free[~np.isin(free, hit)]
    return out


def k4_search(
    W: np.ndarray,
    t: int,
    pools: Sequence[np.ndarray],
    *,
    predicate=None,
    max_outer: int | None = None,
) -> tuple[int, int, int, int] | None:
    """First heavy K4 taking its i-th vertex from ``pools[i]``.

    Identical consecutive pools are scanned in increasing order so each set
    is visited once.  ``predicate(quad)`` can impose an extra exact check.
    """
    p0, p1, p2, p3 = (np.asarray(p, dtype=np.intp) for p in pools)
    same01 = np.array_equal(p0, p1)
    same12 = np.array_equal(p1, p2)
    same23 = np.array_equal(p2, p3)
    thr = 6 * t
    outer = 0
    for a in p0:
        a = int(a)
        cand1 = p1[p1 > a] if same01 else p1[p1 != a]
        for b in cand1:
            b = int(b)
            outer += 1
            if max_outer is not None and outer > max_outer:
                return None
            c_pool = p2[p2 > b] if same12 else p2
            c_pool = c_pool[(c_pool != a) & (c_pool != b)]
            if c_pool.size == 0:
                continue
            d_pool = p3[(p3 != a) & (p3 != b)]
            if d_pool.size == 0:
                continue
            base = W[a, b]
            wc = W[a, c_pool] + W[b, c_pool]
            wd = W[a, d_pool] + W[b, d_pool]
            tot = base + wc[:, None] + wd[None, :] + W[np.ix_(c_pool, d_pool)]
            ok = tot > thr
            ok &= c_pool[:, None] != d_pool[None, :]
            if same23:
                ok &= d_pool[None, :] > c_pool[:, None]
            ci, di = np.nonzero(ok)
            for x, y in zip(ci, di):
                quad = (a, b, int(c_pool[x]), int(d_pool[y]))
                if predicate is None or predicate(quad):
                    return quad
    return None
