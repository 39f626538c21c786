from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from heavytile.certificates import validate_connector, validate_robust
from heavytile.errors import DisjointnessError
from heavytile.graph import WeightedCompleteGraph, make_random_with_min_degree
from heavytile.lattice import (
    PartitionContext,
    RobustCertificate,
    _transferral_pairs,
    certify_robust,
    find_transferral,
    index_vector,
    merge_parts,
    robust_report,
)
from heavytile.reachability import ReachParams, two_community_graph


def halves(n):
    return PartitionContext([range(n // 2), range(n // 2, n)], n)


def test_partition_context_checks():
    P = PartitionContext([[2, 0], [1, 3]])
    assert P.C == 2 and list(P.label) == [0, 1, 0, 1]
    with pytest.raises(ValueError, match="overlap"):
        PartitionContext([[0, 1], [1, 2]])
    with pytest.raises(ValueError, match="cover"):
        PartitionContext([[0, 1], [3]])
    with pytest.raises(ValueError, match="non-empty"):
        PartitionContext([[0, 1], []])
    with pytest.raises(ValueError, match="8 parts"):
        PartitionContext([[i] for i in range(9)])


def test_index_vector():
    P = PartitionContext([[0, 1, 2], [3, 4], [5]])
    assert index_vector(P, [0, 3, 4, 5]) == (1, 2, 1)
    assert index_vector(P, []) == (0, 0, 0)


def test_transferral_pairs_are_unit_differences():
    for C in (2, 3, 4):
        pairs = _transferral_pairs(C)
        assert pairs
        for s, t, i, j in pairs:
            d = [a - b for a, b in zip(s, t)]
            assert d[i] == 1 and d[j] == -1 and sum(map(abs, d)) == 2
            assert sum(s) == sum(t) == 4 and min(s) >= 0 and min(t) >= 0
    assert [p[:2] for p in _transferral_pairs(2)] == [((4, 0), (3, 1)), ((3, 1), (2, 2)), ((2, 2), (1, 3)), ((1, 3), (0, 4))]


def test_certify_robust_counts():
    g = WeightedCompleteGraph.constant(20, 1)
    P = halves(20)
    cert = certify_robust(g, P, (4, 0), None, m=1)
    assert len(cert.members) == 2 and validate_robust(g, P, cert) == []
    assert certify_robust(g, P, (4, 0), None, m=2) is None
    cert = certify_robust(g, P, (2, 2), Fraction(1, 10))
    assert cert.m == 2 and len(cert.members) == 3
    with pytest.raises(ValueError):
        certify_robust(g, P, (3, 0), None, m=0)


def test_transferral_order_all_ones():
    # with m + 1 = 3, (4, 0) needs 12 vertices of a 10-vertex part and fails
    g = WeightedCompleteGraph.constant(20, 1)
    s, t, cs, ct = find_transferral(g, halves(20), None, m=2)
    assert (s, t) == ((3, 1), (2, 2))
    assert cs.vector == s and ct.vector == t


def test_no_transferral_without_mixed_k4s():
    g = two_community_graph(40, "3/4")
    assert find_transferral(g, halves(40), Fraction(1, 40)) is None


def test_robust_validation_reports_tampering():
    g = WeightedCompleteGraph.constant(20, 1)
    P = halves(20)
    cert = certify_robust(g, P, (3, 1), None, m=1)
    assert RobustCertificate.from_dict(cert.to_dict()) == cert
    bad = RobustCertificate(cert.vector, (cert.members[0], cert.members[0]), 1)
    assert any("overlap" in p for p in validate_robust(g, P, bad))
    wrong = RobustCertificate((2, 2), cert.members, 1)
    assert any("index vector" in p for p in validate_robust(g, P, wrong))
    short = RobustCertificate(cert.vector, cert.members[:1], 1)
    assert any("need 2" in p for p in validate_robust(g, P, short))
    assert robust_report(g, P, cert)["violations"] == []


@pytest.mark.parametrize("n, bridge, m", [(64, 20, 0), (96, 26, 1)])
def test_merge_on_bridged_communities(n, bridge, m):
    g = two_community_graph(n, "3/4", bridge=bridge)
    P = halves(n)
    params = ReachParams(m, 1)
    s, t, cs, ct = find_transferral(g, P, None, m=params.m + 6)
    d = [a - b for a, b in zip(s, t)]
    i, j = d.index(1), d.index(-1)
    x = P.parts[i][-1]
    y = P.parts[j][-1]
    conn = merge_parts(g, P, i, j, cs, ct, x, y, params, W=[P.parts[i][-2]])
    assert validate_connector(g, conn, W=[P.parts[i][-2]]) == []
    assert conn.size <= 31


@pytest.mark.parametrize("seed", range(3))
def test_merge_on_degree_graph(seed):
    g = make_random_with_min_degree(200, mu=Fraction(1, 20), seed=seed)
    rng = np.random.default_rng(seed)
    perm = rng.permutation(200)
    P = PartitionContext([perm[:100], perm[100:]], 200)
    s, t, cs, ct = find_transferral(g, P, None, m=8)
    d = [a - b for a, b in zip(s, t)]
    i, j = d.index(1), d.index(-1)
    conn = merge_parts(g, P, i, j, cs, ct, P.parts[i][0], P.parts[j][0], ReachParams(2, 1))
    assert validate_connector(g, conn) == [] and conn.size <= 31


def test_merge_argument_errors():
    g = WeightedCompleteGraph.constant(20, 1)
    P = halves(20)
    cs = certify_robust(g, P, (4, 0), None, m=0)
    ct = certify_robust(g, P, (3, 1), None, m=0)
    with pytest.raises(ValueError, match="not u_1"):
        merge_parts(g, P, 1, 0, cs, ct, 12, 3)
    with pytest.raises(ValueError, match="part"):
        merge_parts(g, P, 0, 1, cs, ct, 12, 3)
    with pytest.raises(ValueError, match="transferral"):
        merge_parts(g, P, 0, 1, cs, cs, 1, 12)
    with pytest.raises(DisjointnessError):
        merge_parts(g, P, 0, 1, cs, ct, 9, 19, W=list(cs.members[0]))
