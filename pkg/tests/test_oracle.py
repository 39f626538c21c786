from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import pytest
from conftest import small_graph
from hypothesis import given
from hypothesis import strategies as st

from heavytile.certificates import validate_factor
from heavytile.errors import CapabilityError
from heavytile.graph import WeightedCompleteGraph, make_extremal
from heavytile.oracle import (
    HARD_CAP,
    exact_connector_exists,
    exact_factor_exists,
    exact_max_tiling,
    factor_of,
    layered_max_tiling,
)


def heavy4(g, q) -> bool:
    return sum(Fraction(int(g.matrix[a, b]), g.D) for a, b in combinations(q, 2)) > 6 * g.t


def brute_partitions(g, verts):
    """Yield every heavy 4-block partition of ``verts`` (pure recursion)."""
    verts = list(verts)
    if not verts:
        yield []
        return
    first, rest = verts[0], verts[1:]
    for trio in combinations(rest, 3):
        q = (first,) + trio
        if heavy4(g, q):
            left = [v for v in rest if v not in trio]
            for tail in brute_partitions(g, left):
                yield [q] + tail


def brute_max_tiling(g, verts) -> int:
    verts = list(verts)
    if len(verts) < 4:
        return 0
    first, rest = verts[0], verts[1:]
    best = brute_max_tiling(g, rest)
    for trio in combinations(rest, 3):
        q = (first,) + trio
        if heavy4(g, q):
            best = max(best, 1 + brute_max_tiling(g, [v for v in rest if v not in trio]))
    return best


@given(st.sampled_from([4, 8]), st.integers(0, 10**6), st.sampled_from([None, 4, 10]), st.integers(1, 9))
def test_factor_matches_brute_force(n, seed, levels, tk):
    g = small_graph(n, seed, t=Fraction(tk, 10), D=20, levels=levels)
    r = exact_factor_exists(g)
    expected = next(brute_partitions(g, range(n)), None) is not None
    assert r.answer == expected
    if r.answer:
        assert validate_factor(g, range(n), r.witness) == []


@pytest.mark.parametrize("seed", range(12))
def test_factor_matches_brute_force_n12(seed):
    g = small_graph(12, seed, t=Fraction(1 + seed % 4, 5), D=20, levels=[None, 4, 5][seed % 3])
    expected = next(brute_partitions(g, range(12)), None) is not None
    assert exact_factor_exists(g).answer == expected


@given(st.integers(5, 10), st.integers(0, 10**6), st.integers(1, 9))
def test_max_tiling_three_routes_agree(n, seed, tk):
    g = small_graph(n, seed, t=Fraction(tk, 10), D=20)
    r = exact_max_tiling(g)
    assert r.answer == brute_max_tiling(g, range(n)) == layered_max_tiling(g)
    assert len(r.witness) == r.answer
    used = [v for q in r.witness for v in q]
    assert validate_factor(g, used, r.witness) == []


def test_extremal_frozen_values():
    g = make_extremal(16, 4, "1/2")
    r = exact_factor_exists(g)
    assert r.answer is False
    assert r.states == 1601
    assert exact_max_tiling(g).answer == 3


def test_all_ones_has_factor():
    for n in (4, 8, 12, 16):
        r = exact_factor_exists(WeightedCompleteGraph.constant(n, 1))
        assert r.answer and len(r.witness) == n // 4


def test_caps_and_divisibility():
    with pytest.raises(ValueError):
        exact_factor_exists(WeightedCompleteGraph.constant(6, 1))
    with pytest.raises(CapabilityError):
        exact_factor_exists(WeightedCompleteGraph.constant(20, 1))
    with pytest.raises(CapabilityError):
        exact_max_tiling(WeightedCompleteGraph.constant(8, 1), cap=HARD_CAP + 1)


def test_factor_of_subset():
    g = make_extremal(16, 4, "1/2")
    # three light vertices with one heavy vertex of W form a heavy K4
    assert factor_of(g, [0, 1, 2, 13]) == [(0, 1, 2, 13)]
    assert factor_of(g, [0, 1, 2, 3]) is None


def brute_connector(g, u, v, W, s):
    pool = [x for x in range(g.n) if x not in W and x not in (u, v)]
    for size in range(3, 4 * s, 4):
        for S in combinations(pool, size):
            if next(brute_partitions(g, sorted(S + (u,))), None) is not None and next(
                brute_partitions(g, sorted(S + (v,))), None
            ) is not None:
                return S
    return None


@given(st.integers(0, 10**6), st.integers(1, 9), st.sampled_from([1, 2]))
def test_connector_oracle_matches_brute(seed, tk, s):
    g = small_graph(9, seed, t=Fraction(tk, 10), D=20)
    r = exact_connector_exists(g, 0, 1, [2], s)
    ref = brute_connector(g, 0, 1, {2}, s)
    assert r.answer == (ref is not None)
    if r.answer:
        assert tuple(r.extra["S"]) == ref


def test_connector_oracle_errors():
    g = WeightedCompleteGraph.constant(16, 1)
    with pytest.raises(CapabilityError):
        exact_connector_exists(g, 0, 1, (), 3)
    with pytest.raises(ValueError):
        exact_connector_exists(g, 0, 0)
    with pytest.raises(ValueError):
        exact_connector_exists(g, 0, 1, [0])
    r = exact_connector_exists(g, 0, 1)
    assert r.answer and r.extra["S"] == [2, 3, 4]
