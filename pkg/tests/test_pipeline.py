from __future__ import annotations

import csv
import io
from fractions import Fraction

import pytest

import heavytile.pipeline as pl
from heavytile.certificates import validate_factor
from heavytile.graph import WeightedCompleteGraph, make_extremal, make_random_with_min_degree
from heavytile.oracle import exact_factor_exists
from heavytile.pipeline import SCAN_COLUMNS, rows_to_csv, run_pipeline, scan_instance, scan_summary, threshold_scan
from heavytile.tiler import TilingState


def test_all_ones_needs_no_absorption():
    g = WeightedCompleteGraph.constant(100, 1)
    rep = run_pipeline(g, seed=1)
    assert rep.success and rep.uncovered == 0
    assert rep.phases["absorption"] == "not needed"
    assert validate_factor(g, range(100), rep.factor) == []
    d = rep.to_dict()
    assert d["kind"] == "pipeline" and d["success"] and len(d["factor"]) == 25


def test_extremal_fails_and_reports():
    rep = run_pipeline(make_extremal(16, 4, "1/2"))
    assert not rep.success and rep.factor is None
    assert rep.uncovered == 4
    assert "budget" in rep.phases["absorbing_set"]["error"]
    rep = run_pipeline(make_extremal(100, 4, "1/2"), gamma=Fraction(1, 2), xi=Fraction(1, 10))
    assert not rep.success
    assert rep.phases["absorption"].startswith("failed")


def test_rejects_bad_n():
    with pytest.raises(ValueError):
        run_pipeline(WeightedCompleteGraph.constant(10, 1))


def _strand_one_tile(real):
    def wrapped(g, mu=None, **kw):
        st = real(g, mu, **kw)
        q = st.R[-1]
        return TilingState(st.R[:-1], st.T, st.M, st.I + list(q), st.rho_num, st.D)

    return wrapped


def test_leftover_goes_through_absorbing_set(monkeypatch):
    monkeypatch.setattr(pl, "almost_cover", _strand_one_tile(pl.almost_cover))
    g = make_random_with_min_degree(200, mu=Fraction(1, 10), seed=4)
    rep = run_pipeline(g, gamma=Fraction(1, 4), xi=Fraction(1, 20), seed=4)
    assert rep.phases["almost_cover"]["uncovered"] == 4
    assert rep.phases["absorption"] == "absorbed"
    assert rep.success and validate_factor(g, range(200), rep.factor) == []


def test_local_repair_without_absorbing_set(monkeypatch):
    monkeypatch.setattr(pl, "almost_cover", _strand_one_tile(pl.almost_cover))
    g = WeightedCompleteGraph.constant(16, 1)
    rep = run_pipeline(g)
    assert rep.success and "local exact repair" in rep.phases["absorption"]
    off = run_pipeline(g, repair=False)
    assert not off.success and off.uncovered == 4


@pytest.mark.parametrize("seed", range(20))
def test_small_claims_confirmed_by_oracle(seed):
    g = make_random_with_min_degree(12, mu=Fraction(-1, 5), seed=seed, distribution=("uniform", "bimodal", "planted")[seed % 3])
    rep = run_pipeline(g, seed=seed)
    if rep.success:
        assert exact_factor_exists(g).answer


def test_scan_instances():
    g = scan_instance(8, "1/2", "-1/4", 0, "extremal")
    assert g == make_extremal(8, 4, "1/2")
    assert scan_instance(8, "1/2", 0, 0, "ones") == WeightedCompleteGraph.constant(8, 1)
    with pytest.raises(ValueError):
        scan_instance(8, "1/2", 0, 0, "nope")


def test_extremal_scan_threshold():
    rows = threshold_scan(8, "1/2", ["-1/4", "-1/8", "0", "1/8"], range(2), family="extremal")
    summ = scan_summary(rows)
    assert summ == {"-1/4": 0.0, "-1/8": 0.0, "0": 1.0, "1/8": 1.0}
    assert all(r["mode"] == "exact" for r in rows)


def test_scan_csv_columns():
    rows = threshold_scan(12, "1/2", ["0"], range(2), family="random", mode="pipeline")
    text = rows_to_csv(rows)
    parsed = list(csv.DictReader(io.StringIO(text)))
    assert tuple(parsed[0].keys()) == SCAN_COLUMNS
    assert len(parsed) == 2
    with pytest.raises(ValueError):
        threshold_scan(8, "1/2", ["0"], [0], mode="bogus")
