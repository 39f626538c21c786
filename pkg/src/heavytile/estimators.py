"""Thin scikit-learn style wrappers around the functional core.

Each estimator takes one graph per call, either a ``WeightedCompleteGraph``
or a square symmetric weight array with entries in [0, 1].  Float arrays
are snapped to the nearest numerator over ``D``.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .coloring import quantize
from .graph import DEFAULT_DENOMINATOR, WeightedCompleteGraph, as_fraction, to_numerator
from .oracle import DEFAULT_CAP, exact_max_tiling
from .pipeline import DEFAULTS, run_pipeline
from .tiler import almost_cover, tiling_report


def check_graph(X, t=Fraction(1, 2), D: int = DEFAULT_DENOMINATOR) -> WeightedCompleteGraph:
    """Coerce ``X`` to a graph; an explicit ``t`` overrides the graph's own."""
    if isinstance(X, WeightedCompleteGraph):
        return X if t is None or as_fraction(t) == X.t else X.with_t(t)
    t = Fraction(1, 2) if t is None else t
    arr = check_array(X, dtype=None, ensure_min_samples=2, ensure_min_features=2)
    if arr.shape[0] != arr.shape[1]:
        raise ValueError(f"weight matrix must be square, got shape {arr.shape}")
    if np.issubdtype(arr.dtype, np.integer):
        num = arr.astype(np.int64) * D
    else:
        arr = arr.astype(float)
        np.fill_diagonal(arr, 0.0)
        if arr.min() < 0 or arr.max() > 1:
            raise ValueError("weights must lie in [0, 1]")
        num = np.rint(arr * D).astype(np.int64)
    return WeightedCompleteGraph(num, D=D, t_num=to_numerator(t, D, name="t"))


def _labels(n: int, blocks) -> np.ndarray:
    out = np.full(n, -1, dtype=np.intp)
    for k, q in enumerate(blocks):
        out[list(q)] = k
    return out


class HeavyK4Tiler(BaseEstimator):
    """Almost-perfect tiling; ``transform`` gives each vertex its tile index or -1."""

    def __init__(self, t=Fraction(1, 2), mu=None, D: int = DEFAULT_DENOMINATOR, max_moves=None):
        self.t = t
        self.mu = mu
        self.D = D
        self.max_moves = max_moves

    def fit(self, X, y=None):
        g = check_graph(X, self.t, self.D)
        self.graph_ = g
        self.state_ = almost_cover(g, self.mu, max_moves=self.max_moves)
        self.report_ = tiling_report(g, self.state_, self.mu)
        self.n_uncovered_ = len(self.state_.uncovered)
        return self

    def transform(self, X=None):
        check_is_fitted(self, "state_")
        if X is not None and check_graph(X, self.t, self.D) != self.graph_:
            self.fit(X)
        return _labels(self.graph_.n, self.state_.R)

    def fit_transform(self, X, y=None):
        return self.fit(X).transform()


class HeavyK4FactorFinder(BaseEstimator):
    """Full absorbing pipeline; ``predict`` labels vertices by factor block."""

    def __init__(
        self,
        t=Fraction(1, 2),
        mu=DEFAULTS["mu"],
        gamma=DEFAULTS["gamma"],
        xi=DEFAULTS["xi"],
        beta=DEFAULTS["beta"],
        seed: int = 0,
        repair: bool = True,
        D: int = DEFAULT_DENOMINATOR,
    ):
        self.t = t
        self.mu = mu
        self.gamma = gamma
        self.xi = xi
        self.beta = beta
        self.seed = seed
        self.repair = repair
        self.D = D

    def fit(self, X, y=None):
        g = check_graph(X, self.t, self.D)
        self.graph_ = g
        self.report_ = run_pipeline(g, self.mu, self.gamma, self.xi, self.beta, self.seed, repair=self.repair)
        self.factor_ = self.report_.factor
        self.success_ = self.report_.success
        return self

    def predict(self, X=None):
        check_is_fitted(self, "report_")
        if X is not None and check_graph(X, self.t, self.D) != self.graph_:
            self.fit(X)
        return _labels(self.graph_.n, self.factor_ or ())

    def fit_predict(self, X, y=None):
        return self.fit(X).predict()


class ExactTilingOracle(BaseEstimator):
    """Exact maximum tiling by subset DP; ``predict`` answers whether a factor exists."""

    def __init__(self, t=Fraction(1, 2), cap: int = DEFAULT_CAP, D: int = DEFAULT_DENOMINATOR):
        self.t = t
        self.cap = cap
        self.D = D

    def fit(self, X, y=None):
        g = check_graph(X, self.t, self.D)
        self.graph_ = g
        self.result_ = exact_max_tiling(g, cap=self.cap)
        self.max_tiling_ = self.result_.answer
        return self

    def predict(self, X=None) -> bool:
        if X is not None:
            self.fit(X)
        check_is_fitted(self, "result_")
        return self.graph_.n % 4 == 0 and self.max_tiling_ == self.graph_.n // 4


class WeightQuantizer(TransformerMixin, BaseEstimator):
    """Map weights to colour classes ``1..p`` (0 on the diagonal)."""

    def __init__(self, p: int = 4, t=Fraction(1, 2), D: int = DEFAULT_DENOMINATOR):
        self.p = p
        self.t = t
        self.D = D

    def fit(self, X, y=None):
        g = check_graph(X, self.t, self.D)
        if g.D % self.p:
            raise ValueError(f"p={self.p} does not divide D={g.D}")
        self.n_features_in_ = g.n
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        g = check_graph(X, self.t, self.D)
        return np.array(quantize(g, self.p).colors)
