from __future__ import annotations

from fractions import Fraction

import pytest
from conftest import small_graph
from hypothesis import given
from hypothesis import strategies as st

from heavytile.coloring import (
    color_of,
    format_partition,
    load_partition,
    parse_partition_text,
    quantize,
    reduced_degree_report,
    reduced_weights,
)
from heavytile.errors import GraphFormatError
from heavytile.graph import WeightedCompleteGraph

D = 1_000_000


@given(st.sampled_from([2, 4, 5, 10, 100]), st.integers(0, D))
def test_colour_interval(p, w):
    c = color_of(w, p, D)
    x = Fraction(w, D)
    assert 1 <= c <= p
    assert Fraction(c - 1, p) <= x
    if c < p:
        assert x < Fraction(c, p)


@pytest.mark.parametrize("p", [4, 10, 100])
def test_boundaries(p):
    assert color_of(0, p, D) == 1
    assert color_of(D, p, D) == p
    for l in range(1, p + 1):
        assert color_of(D * (l - 1) // p, p, D) == l


def test_quantize_checks():
    g = WeightedCompleteGraph.constant(4, 1)
    with pytest.raises(ValueError):
        quantize(g, 1)
    with pytest.raises(ValueError, match="divide"):
        quantize(g, 7)
    view = quantize(g, 4)
    assert view.class_sizes() == {1: 0, 2: 0, 3: 0, 4: 6}
    with pytest.raises(ValueError):
        view.color(2, 2)


def test_reduced_weights_examples():
    g = WeightedCompleteGraph.constant(8, 1)
    rw = reduced_weights(g, quantize(g, 4), [[0, 1, 2, 3], [4, 5, 6, 7]])
    assert rw.weight(0, 1) == Fraction(3, 4)
    g = WeightedCompleteGraph.constant(8, Fraction(3, 10))
    view = quantize(g, 10)
    assert view.color(0, 1) == 4
    rw = reduced_weights(g, view, [[0, 1, 2, 3], [4, 5, 6, 7]])
    assert rw.weight(1, 0) == Fraction(3, 10)
    assert rw.degrees() == [Fraction(3, 10), Fraction(3, 10)]


@given(st.integers(0, 10**6), st.sampled_from([4, 10, 100]), st.integers(2, 4))
def test_reduced_weight_sandwich(seed, p, k):
    g = small_graph(12, seed, D=D)
    parts = [list(range(i, 12, k)) for i in range(k)]
    rw = reduced_weights(g, quantize(g, p), parts)
    for (i, j), w in rw.w_R.items():
        # w_R sits within 1/p below the true cross density
        true = Fraction(sum(int(g.matrix[a, b]) for a in parts[i] for b in parts[j]), D * len(parts[i]) * len(parts[j]))
        assert w <= true < w + Fraction(1, p) or true == 1
        assert rw.w_upper[(i, j)] == w + Fraction(1, p)
        assert sum(rw.densities[(i, j)]) == 1


def test_partition_checks():
    g = WeightedCompleteGraph.constant(6, 1)
    view = quantize(g, 4)
    with pytest.raises(ValueError, match="two parts"):
        reduced_weights(g, view, [[0, 1], [1, 2]])
    with pytest.raises(ValueError, match="range"):
        reduced_weights(g, view, [[0, 9]])
    with pytest.raises(ValueError, match="empty"):
        reduced_weights(g, view, [[0], []])


def test_degree_report_is_informational():
    g = WeightedCompleteGraph.constant(8, 1)
    rep = reduced_degree_report(g, quantize(g, 4), [[0, 1], [2, 3], [4, 5], [6, 7]], "5/8", "1/10", [0] * 4, 0)
    assert rep["hypothesis_verified"] is False
    assert rep["min_reduced_degree"] == "9/4"
    # (5/8 + 1/10 - 1/4) * 4 = 19/10
    assert rep["lower_bound"] == "19/10" and rep["meets_bound"]
    with pytest.raises(ValueError):
        reduced_degree_report(g, quantize(g, 4), [[0, 1]], 0, 0, [0], 0)


def test_partition_file_roundtrip(tmp_path):
    parts = [[0, 2, 4], [1, 3], [5]]
    p = tmp_path / "p.txt"
    p.write_text("# comment\n" + format_partition(parts) + "\n")
    assert load_partition(p) == parts
    with pytest.raises(GraphFormatError, match="line 1"):
        parse_partition_text("0 a 2\n")
