from __future__ import annotations

import json
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from conftest import small_graph
from hypothesis import given
from hypothesis import strategies as st

from heavytile.errors import GraphFormatError
from heavytile.graph import (
    DISTRIBUTIONS,
    WeightedCompleteGraph,
    as_fraction,
    clique_weight,
    crossing_weight,
    extremal_parts,
    format_graph_text,
    graph_from_dict,
    graph_to_dict,
    is_heavy,
    load_graph,
    make_extremal,
    make_random,
    make_random_with_min_degree,
    meets_degree_condition,
    min_degree_target_num,
    min_weighted_degree,
    parse_graph_text,
    repair_min_degree,
    save_graph,
    to_numerator,
    weighted_degree,
)


def test_as_fraction_forms():
    assert as_fraction("3/4") == Fraction(3, 4)
    assert as_fraction(0.6) == Fraction(3, 5)
    assert as_fraction(2) == Fraction(2)
    with pytest.raises(ValueError):
        as_fraction("abc")
    with pytest.raises(TypeError):
        as_fraction(True)


def test_to_numerator_rejects_off_grid():
    assert to_numerator("1/4", 1000) == 250
    with pytest.raises(ValueError, match="not representable"):
        to_numerator("1/3", 1000)


def test_constructor_validation():
    with pytest.raises(ValueError, match="square"):
        WeightedCompleteGraph(np.zeros((2, 3)))
    with pytest.raises(ValueError, match="symmetric"):
        WeightedCompleteGraph(np.array([[0, 1], [2, 0]]), D=4)
    with pytest.raises(ValueError, match="outside"):
        WeightedCompleteGraph(np.array([[0, 5], [5, 0]]), D=4)
    g = WeightedCompleteGraph(np.array([[9, 1], [1, 9]]), D=4)
    assert g.matrix[0, 0] == 0
    with pytest.raises(ValueError):
        g.matrix[0, 1] = 2


def test_weight_access_and_vertex_checks():
    g = WeightedCompleteGraph.constant(5, "1/2", D=10)
    assert g.weight(0, 1) == Fraction(1, 2)
    with pytest.raises(ValueError):
        g.weight(1, 1)
    with pytest.raises(IndexError):
        g.weight(0, 5)
    with pytest.raises(TypeError):
        g.weight(0, True)


def test_degree_and_clique_weights_match_double_loop():
    g = small_graph(9, 4, D=100)
    for v in range(g.n):
        ref = sum(Fraction(int(g.matrix[v, u]), 100) for u in range(g.n) if u != v)
        assert weighted_degree(g, v) == ref
    S = [0, 3, 5, 7]
    assert clique_weight(g, S) == sum(Fraction(int(g.matrix[a, b]), 100) for a, b in combinations(S, 2))
    assert crossing_weight(g, [0, 1], [2, 3]) == sum(Fraction(int(g.matrix[a, b]), 100) for a in (0, 1) for b in (2, 3))
    with pytest.raises(ValueError, match="overlap"):
        crossing_weight(g, [0, 1], [1, 2])


def test_min_degree_lowest_index_tie():
    g = WeightedCompleteGraph.constant(6, 1)
    s = min_weighted_degree(g)
    assert s.argmin == 0 and s.minimum == 5


def test_is_heavy_is_strict():
    g = WeightedCompleteGraph.constant(4, "1/2", D=10, t="1/2")
    assert not is_heavy(g, [0, 1, 2, 3])
    g2 = WeightedCompleteGraph.constant(4, "3/5", D=10, t="1/2")
    assert is_heavy(g2, [0, 1, 2, 3], r=4)


@pytest.mark.parametrize("t", ["1/4", "1/2", "3/4"])
@pytest.mark.parametrize("n", [8, 12, 16, 20])
def test_extremal_degree_formula(n, t):
    g = make_extremal(n, 4, t)
    U, W = extremal_parts(n)
    t = Fraction(t)
    # vertices of U see |U|-1 edges of weight t and |W| edges of weight 1
    assert min_weighted_degree(g).minimum == (len(U) - 1) * t + len(W)
    assert min_weighted_degree(g).minimum == (Fraction(1, 4) + 3 * t / 4) * n - 1


def test_extremal_small_frozen():
    g = make_extremal(8, 4, "1/2", D=10)
    # U = {0..6}, W = {7}
    assert g.weight(0, 1) == Fraction(1, 2) and g.weight(0, 7) == 1
    assert min_weighted_degree(g).minimum == 4


def test_extremal_rejects_bad_n():
    with pytest.raises(ValueError):
        make_extremal(10, 4)


def test_random_is_deterministic_per_seed():
    for d in DISTRIBUTIONS:
        assert make_random(20, distribution=d, seed=5) == make_random(20, distribution=d, seed=5)
    assert make_random(20, seed=5) != make_random(20, seed=6)
    with pytest.raises(ValueError):
        make_random(5, distribution="nope")


@pytest.mark.parametrize("seed", range(6))
def test_min_degree_generator_meets_target(seed):
    mu = Fraction(1, 20)
    g = make_random_with_min_degree(80, mu=mu, seed=seed, distribution=DISTRIBUTIONS[seed % 3])
    assert meets_degree_condition(g, mu)
    target = (Fraction(1, 4) + Fraction(3, 8) + mu) * 80
    assert min_weighted_degree(g).minimum >= target


def test_min_degree_target_is_ceiling():
    assert min_degree_target_num(10, Fraction(1, 2), 0, 1000) == 6250
    assert min_degree_target_num(3, Fraction(1, 3), Fraction(0), 7) == 11  # 3/2 * 7 = 10.5


def test_infeasible_target_rejected():
    with pytest.raises(ValueError, match="infeasible"):
        make_random_with_min_degree(8, mu=Fraction(1))


@given(st.integers(4, 25), st.integers(0, 10**6), st.integers(0, 3))
def test_repair_only_raises_weights(n, seed, k):
    g = small_graph(n, seed, D=60)
    target = (n - 1) * 60 * k // 4
    h = repair_min_degree(g, target)
    assert (h.matrix >= g.matrix).all()
    assert h.degree_numerators().min() >= target


def test_text_and_json_roundtrip(tmp_path):
    g = small_graph(7, 3, D=50)
    for fmt in ("text", "json"):
        p = tmp_path / f"g.{fmt}"
        save_graph(g, p, fmt)
        assert load_graph(p) == g
    assert parse_graph_text(format_graph_text(g)) == g
    assert graph_from_dict(json.loads(json.dumps(graph_to_dict(g)))) == g


@pytest.mark.parametrize(
    "text, msg",
    [
        ("", "empty"),
        ("HWG1 3 10\n1 2 3\n", "header"),
        ("HWG1 3 10 5\n1 2\n", "missing edge entry index 2"),
        ("HWG1 3 10 5\n1 2 3 4\n", "too many"),
        ("HWG1 3 10 5\n1 x 3\n", "index 1"),
        ("HWG1 3 10 5\n1 11 3\n", "outside"),
        ('{"format": "HWG1", "n": 2}', "malformed"),
    ],
)
def test_parse_errors(text, msg):
    with pytest.raises(GraphFormatError, match=msg):
        parse_graph_text(text)


def test_subgraph_and_with_t():
    g = small_graph(8, 1, D=20)
    sub, idx = g.subgraph([6, 2, 4])
    assert idx == [2, 4, 6]
    assert sub.weight(0, 2) == g.weight(2, 6)
    assert g.with_t("3/4").t == Fraction(3, 4)
