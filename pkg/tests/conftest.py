from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from heavytile.graph import DISTRIBUTIONS, WeightedCompleteGraph

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")

# criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record(k: int, passed: bool, detail: str) -> None:
    ACCEPTANCE[k] = (passed, detail)
    print(f"criterion {k:2d}: {'PASS' if passed else 'FAIL'}  {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


def dist_for(seed: int) -> str:
    return DISTRIBUTIONS[seed % len(DISTRIBUTIONS)]


def small_graph(n: int, seed: int, t=Fraction(1, 2), D: int = 1000, levels: int | None = None) -> WeightedCompleteGraph:
    """Random small graph; ``levels`` restricts weights to multiples of D/levels."""
    rng = np.random.default_rng(seed)
    m = n * (n - 1) // 2
    if levels:
        up = rng.integers(0, levels + 1, m) * (D // levels)
    else:
        up = rng.integers(0, D + 1, m)
    return WeightedCompleteGraph.from_upper(n, up, D=D, t_num=int(Fraction(t) * D))


@pytest.fixture
def ones16():
    return WeightedCompleteGraph.constant(16, 1)
