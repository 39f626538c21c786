from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from conftest import dist_for, small_graph
from hypothesis import given
from hypothesis import strategies as st

from heavytile.graph import WeightedCompleteGraph, make_extremal, make_random, make_random_with_min_degree
from heavytile.oracle import exact_max_tiling
from heavytile.tiler import (
    MOVE_KINDS,
    TilingState,
    almost_cover,
    find_move,
    greedy_init,
    make_state,
    state_from_report,
    tiling_report,
    validate_state,
)


def test_all_ones_full_cover():
    g = WeightedCompleteGraph.constant(100, 1)
    st_ = almost_cover(g)
    assert len(st_.R) == 25 and st_.uncovered == []


@pytest.mark.parametrize("n, R", [(16, 3), (100, 24)])
def test_extremal_frozen(n, R):
    g = make_extremal(n, 4, "1/2")
    st_ = almost_cover(g, Fraction(1, 10))
    assert validate_state(g, st_) == []
    assert len(st_.R) == R and len(st_.uncovered) == 4


def test_promote_triangle_plus_vertex():
    w = np.full((6, 6), 20)
    w[np.ix_([0, 1, 2], [0, 1, 2])] = 90
    w[3, [0, 1, 2]] = w[[0, 1, 2], 3] = 70
    g = WeightedCompleteGraph(w, D=100, t_num=50)
    st_ = make_state(g, [], [(0, 1, 2)], [], [3, 4, 5])
    mv = find_move(g, st_)
    assert mv.kind == "promote-triangle-plus-vertex"
    assert mv.added == ((0, 1, 2, 3),)
    assert mv.result.key() == (1, 0, 0, 480)
    assert mv.result.move_log == [("promote-triangle-plus-vertex", (0, 1, 2, 3))]


def test_promote_two_edges():
    w = np.full((6, 6), 10)
    w[0, 1] = w[1, 0] = w[2, 3] = w[3, 2] = 100
    w[np.ix_([0, 1], [2, 3])] = 45
    w[np.ix_([2, 3], [0, 1])] = 45
    g = WeightedCompleteGraph(w, D=100, t_num=40)
    # joining two heavy edges always creates heavy triangles, so either
    # promotion may claim the 4-set first
    st_ = make_state(g, [], [], [(0, 1), (2, 3)], [4, 5])
    mv = find_move(g, st_)
    assert mv.kind in ("promote-two-edges", "promote-triangle-plus-vertex")
    assert mv.added == ((0, 1, 2, 3),)


def test_no_move_at_local_maximum():
    g = make_extremal(16, 4, "1/2")
    st_ = almost_cover(g)
    assert find_move(g, st_) is None


@given(st.integers(4, 13), st.integers(0, 10**6), st.sampled_from([1, 2, 3]))
def test_state_valid_and_improves_greedy(n, seed, tq):
    g = small_graph(n, seed, t=Fraction(tq, 4), D=1000)
    start = greedy_init(g)
    end = almost_cover(g)
    assert validate_state(g, end) == []
    assert end.key() >= start.key()
    assert all(k in MOVE_KINDS for k, _ in end.move_log)
    assert find_move(g, end) is None


@given(st.integers(0, 10**6), st.sampled_from([Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)]))
def test_R_never_exceeds_exact_maximum(seed, t):
    g = small_graph(12, seed, t=t, D=1000, levels=[None, 4][seed % 2])
    assert len(almost_cover(g).R) <= exact_max_tiling(g).answer


@pytest.mark.parametrize("seed", range(3))
def test_degree_condition_bounds(seed):
    mu = Fraction(1, 10)
    g = make_random_with_min_degree(200, mu=mu, seed=seed, distribution=dist_for(seed))
    st_ = almost_cover(g, mu)
    rep = tiling_report(g, st_, mu)
    assert rep["bounds"]["degree_condition"]
    assert all(rep["bounds"].values())


def test_validate_state_names_violations():
    g = WeightedCompleteGraph.constant(8, 1)
    good = almost_cover(g)
    assert validate_state(g, good) == []
    bad = TilingState([(0, 1, 2, 3), (3, 4, 5, 6)], [], [], [7], good.rho_num, g.D)
    assert any("vertex 3 used by both" in p for p in validate_state(g, bad))
    wrong_rho = TilingState(list(good.R), [], [], [], good.rho_num + 1, g.D)
    assert any("rho mismatch" in p for p in validate_state(g, wrong_rho))
    missing = TilingState([(0, 1, 2, 3)], [], [], [], 6 * g.D, g.D)
    assert any("not accounted" in p for p in validate_state(g, missing))


def test_validate_state_rejects_light_members():
    g = WeightedCompleteGraph.constant(8, "1/2", t="1/2")
    st_ = make_state(g, [(0, 1, 2, 3)], [(4, 5, 6)], [], [7])
    probs = validate_state(g, st_)
    assert any("R member" in p for p in probs) and any("T member" in p for p in probs)


def test_report_roundtrip():
    g = make_random(40, seed=2, distribution="bimodal")
    st_ = almost_cover(g, Fraction(1, 10))
    rep = tiling_report(g, st_, Fraction(1, 10))
    for key in ("n", "t", "D", "sizes", "rho", "uncovered", "move_log"):
        assert key in rep
    back = state_from_report(rep, g.D, g.matrix)
    assert back.key() == st_.key()
    assert validate_state(g, back) == []


def test_move_limit_logs(caplog):
    g = make_random(40, seed=3)
    st_ = almost_cover(g, max_moves=0)
    assert validate_state(g, st_) == []
    assert "without reaching a local maximum" in caplog.text
