"""Edge-weighted complete graphs with exact fixed-point weights.

Every weight is stored as an integer numerator over a per-graph denominator
``D``; the heaviness threshold ``t`` lives on the same grid.  All predicates
compare integers, so boundary cases (a clique of total weight exactly
``C(r,2)*t``) are decided deterministically.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import GraphFormatError

DEFAULT_DENOMINATOR = 1_000_000
MAX_VERTICES = 20_000
FORMAT_TAG = "HWG1"


def as_fraction(value) -> Fraction:
    """Parse ``value`` (Fraction, int, ``"a/b"`` string or float) exactly.

    Floats go through their shortest repr, so ``0.6`` means 3/5 rather than
    the binary approximation.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not weights")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse {value!r} as a fraction") from exc
    raise TypeError(f"unsupported numeric type {type(value).__name__}")


def to_numerator(value, D: int, *, name: str = "value") -> int:
    """Exact numerator of ``value`` over ``D``; rejects anything off the grid."""
    frac = as_fraction(value)
    scaled = frac * D
    if scaled.denominator != 1:
        raise ValueError(f"{name}={frac} is not representable at denominator D={D}")
    return int(scaled)


class WeightedCompleteGraph:
    """Complete graph on ``0..n-1`` with weights ``w(uv) = num/D`` in [0, 1].

    The weights are held as a symmetric ``n x n`` int64 matrix with a zero
    diagonal; the matrix is read-only, so instances can be shared freely.
    """

    __slots__ = ("n", "D", "t_num", "_w")

    def __init__(self, matrix, D: int = DEFAULT_DENOMINATOR, t_num: int = 0):
        w = np.array(matrix, dtype=np.int64, copy=True)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValueError("weight matrix must be square")
        n = w.shape[0]
        if n > MAX_VERTICES:
            raise ValueError(f"n={n} exceeds the supported maximum {MAX_VERTICES}")
        D = int(D)
        if D < 1:
            raise ValueError("denominator D must be >= 1")
        t_num = int(t_num)
        if not 0 <= t_num <= D:
            raise ValueError(f"t numerator {t_num} outside [0, {D}]")
        np.fill_diagonal(w, 0)
        if not np.array_equal(w, w.T):
            raise ValueError("weight matrix must be symmetric")
        if n and (w.min() < 0 or w.max() > D):
            bad = np.argwhere((w < 0) | (w > D))[0]
            raise ValueError(
                f"weight numerator {int(w[bad[0], bad[1]])} at {tuple(int(x) for x in bad)} outside [0, {D}]"
            )
        w.flags.writeable = False
        self.n = n
        self.D = D
        self.t_num = t_num
        self._w = w

    @classmethod
    def from_upper(cls, n: int, upper: Sequence[int], D: int = DEFAULT_DENOMINATOR, t_num: int = 0):
        """Build from the row-major upper triangle ``(0,1),(0,2),...,(n-2,n-1)``."""
        upper = np.asarray(upper, dtype=np.int64)
        expected = n * (n - 1) // 2
        if upper.shape != (expected,):
            raise ValueError(f"expected {expected} upper-triangle entries, got {upper.size}")
        w = np.zeros((n, n), dtype=np.int64)
        iu = np.triu_indices(n, k=1)
        w[iu] = upper
        w.T[iu] = upper
        return cls(w, D=D, t_num=t_num)

    @classmethod
    def constant(cls, n: int, weight, D: int = DEFAULT_DENOMINATOR, t=Fraction(1, 2)):
        num = to_numerator(weight, D, name="weight")
        w = np.full((n, n), num, dtype=np.int64)
        return cls(w, D=D, t_num=to_numerator(t, D, name="t"))

    @property
    def matrix(self) -> np.ndarray:
        """Read-only numerator matrix (diagonal is zero and meaningless)."""
        return self._w

    @property
    def t(self) -> Fraction:
        return Fraction(self.t_num, self.D)

    def upper(self) -> np.ndarray:
        return self._w[np.triu_indices(self.n, k=1)].copy()

    def _check_vertex(self, v) -> int:
        if isinstance(v, (bool, np.bool_)) or not isinstance(v, (int, np.integer)):
            raise TypeError(f"vertex must be an integer, got {v!r}")
        v = int(v)
        if not 0 <= v < self.n:
            raise IndexError(f"vertex {v} out of range 0..{self.n - 1}")
        return v

    def weight_num(self, u, v) -> int:
        u, v = self._check_vertex(u), self._check_vertex(v)
        if u == v:
            raise ValueError(f"w({u},{u}) is undefined")
        return int(self._w[u, v])

    def weight(self, u, v) -> Fraction:
        return Fraction(self.weight_num(u, v), self.D)

    def degree_numerators(self) -> np.ndarray:
        return self._w.sum(axis=1)

    def heavy_threshold(self, r: int) -> int:
        """Numerator that an r-clique's total weight must strictly exceed."""
        return math.comb(r, 2) * self.t_num

    def with_t(self, t) -> "WeightedCompleteGraph":
        return WeightedCompleteGraph(self._w, D=self.D, t_num=to_numerator(t, self.D, name="t"))

    def subgraph(self, vertices: Iterable[int]) -> tuple["WeightedCompleteGraph", list[int]]:
        """Induced subgraph plus the list mapping new indices to old ones."""
        idx = sorted({self._check_vertex(v) for v in vertices})
        sub = self._w[np.ix_(idx, idx)]
        return WeightedCompleteGraph(sub, D=self.D, t_num=self.t_num), idx

    def __eq__(self, other):
        if not isinstance(other, WeightedCompleteGraph):
            return NotImplemented
        return (
            self.n == other.n
            and self.D == other.D
            and self.t_num == other.t_num
            and np.array_equal(self._w, other._w)
        )

    def __hash__(self):
        return hash((self.n, self.D, self.t_num, self._w.tobytes()))

    def __repr__(self):
        return f"WeightedCompleteGraph(n={self.n}, D={self.D}, t={self.t})"


@dataclass(frozen=True)
class DegreeSummary:
    degree_nums: tuple[int, ...]
    D: int
    argmin: int

    @property
    def minimum(self) -> Fraction:
        return Fraction(self.degree_nums[self.argmin], self.D)

    @property
    def degrees(self) -> list[Fraction]:
        return [Fraction(d, self.D) for d in self.degree_nums]


def _vertex_set(g: WeightedCompleteGraph, S: Iterable[int], *, min_size: int = 0) -> list[int]:
    verts = [g._check_vertex(v) for v in S]
    if len(set(verts)) != len(verts):
        raise ValueError(f"duplicate vertices in {verts}")
    if len(verts) < min_size:
        raise ValueError(f"need at least {min_size} vertices, got {len(verts)}")
    return verts


def weighted_degree(g: WeightedCompleteGraph, v: int) -> Fraction:
    v = g._check_vertex(v)
    return Fraction(int(g.matrix[v].sum()), g.D)


def min_weighted_degree(g: WeightedCompleteGraph) -> DegreeSummary:
    if g.n == 0:
        raise ValueError("empty graph has no minimum degree")
    deg = g.degree_numerators()
    # np.argmin returns the first minimiser, i.e. the lowest index.
    return DegreeSummary(tuple(int(d) for d in deg), g.D, int(np.argmin(deg)))


def clique_weight_num(g: WeightedCompleteGraph, S: Sequence[int]) -> int:
    idx = np.asarray(S, dtype=np.intp)
    return int(g.matrix[np.ix_(idx, idx)].sum()) // 2


def clique_weight(g: WeightedCompleteGraph, S: Iterable[int]) -> Fraction:
    verts = _vertex_set(g, S, min_size=2)
    return Fraction(clique_weight_num(g, verts), g.D)


def is_heavy(g: WeightedCompleteGraph, S: Iterable[int], r: int | None = None) -> bool:
    """True iff the clique on ``S`` weighs strictly more than ``C(r,2)*t``."""
    verts = _vertex_set(g, S, min_size=2)
    if r is not None and r != len(verts):
        raise ValueError(f"|S|={len(verts)} but r={r}")
    return clique_weight_num(g, verts) > g.heavy_threshold(len(verts))


def crossing_weight_num(g: WeightedCompleteGraph, A: Sequence[int], B: Sequence[int]) -> int:
    return int(g.matrix[np.ix_(np.asarray(A, dtype=np.intp), np.asarray(B, dtype=np.intp))].sum())


def crossing_weight(g: WeightedCompleteGraph, A: Iterable[int], B: Iterable[int]) -> Fraction:
    A = _vertex_set(g, A)
    B = _vertex_set(g, B)
    common = set(A) & set(B)
    if common:
        raise ValueError(f"A and B overlap in {sorted(common)}")
    return Fraction(crossing_weight_num(g, A, B), g.D)


def min_degree_target_num(n: int, t, mu, D: int) -> int:
    """Smallest numerator d with d/D >= (1/4 + 3t/4 + mu) * n."""
    bound = (Fraction(1, 4) + Fraction(3, 4) * as_fraction(t) + as_fraction(mu)) * n * D
    return math.ceil(bound)


def meets_degree_condition(g: WeightedCompleteGraph, mu) -> bool:
    target = min_degree_target_num(g.n, g.t, mu, g.D)
    return int(g.degree_numerators().min()) >= target


# --- generators -----------------------------------------------------------


def make_extremal(n: int, r: int = 4, t=Fraction(1, 2), D: int = DEFAULT_DENOMINATOR) -> WeightedCompleteGraph:
    """Weight ``t`` inside U (the first ``(r-1)n/r + 1`` vertices), 1 elsewhere.

    Every t-heavy r-clique must meet the complement W, which has only
    ``n/r - 1`` vertices, so no t-heavy K_r-factor exists.
    """
    if r < 2:
        raise ValueError("r must be >= 2")
    if n <= r or n % r:
        raise ValueError(f"need r | n and n > r (got n={n}, r={r})")
    t_num = to_numerator(t, D, name="t")
    u_size = (r - 1) * n // r + 1
    w = np.full((n, n), D, dtype=np.int64)
    w[:u_size, :u_size] = t_num
    return WeightedCompleteGraph(w, D=D, t_num=t_num)


def extremal_parts(n: int, r: int = 4) -> tuple[list[int], list[int]]:
    u_size = (r - 1) * n // r + 1
    return list(range(u_size)), list(range(u_size, n))


DISTRIBUTIONS = ("uniform", "bimodal", "planted")


def _random_upper(n: int, D: int, t_num: int, distribution: str, rng: np.random.Generator) -> np.ndarray:
    m = n * (n - 1) // 2
    if distribution == "uniform":
        return rng.integers(0, D, size=m, endpoint=True)
    if distribution == "bimodal":
        # weight 1 with probability 1/2, otherwise uniform in [0, t]
        ones = rng.random(m) < 0.5
        low = rng.integers(0, t_num, size=m, endpoint=True)
        return np.where(ones, D, low)
    if distribution == "planted":
        # extremal-like: light block on 3n/4 + 1 vertices, uniform elsewhere
        w = np.zeros((n, n), dtype=np.int64)
        iu = np.triu_indices(n, k=1)
        w[iu] = rng.integers(D // 2, D, size=m, endpoint=True)
        u_size = min(n, 3 * n // 4 + 1)
        block = np.triu_indices(u_size, k=1)
        w[block] = rng.integers(0, min(D, 2 * t_num), size=block[0].size, endpoint=True)
        perm = rng.permutation(n)
        w = w + w.T
        w = w[np.ix_(perm, perm)]
        return w[iu]
    raise ValueError(f"unknown distribution {distribution!r}; choose from {DISTRIBUTIONS}")


def make_random(
    n: int,
    D: int = DEFAULT_DENOMINATOR,
    distribution: str = "uniform",
    seed: int = 0,
    t=Fraction(1, 2),
) -> WeightedCompleteGraph:
    if n < 1:
        raise ValueError("n must be positive")
    t_num = to_numerator(t, D, name="t")
    rng = np.random.default_rng(seed)
    upper = _random_upper(n, D, t_num, distribution, rng)
    return WeightedCompleteGraph.from_upper(n, upper, D=D, t_num=t_num)


def repair_min_degree(g: WeightedCompleteGraph, target_num: int) -> WeightedCompleteGraph:
    """Raise weights at deficient vertices until every degree reaches ``target_num``.

    Vertices are processed in index order.  A deficient vertex spreads its
    deficit over its incident edges in proportion to each edge's headroom
    ``D - w``; raising weights never lowers another degree, so one pass
    suffices.
    """
    n, D = g.n, g.D
    if target_num > (n - 1) * D:
        raise ValueError(
            f"infeasible: target degree {Fraction(target_num, D)} exceeds n-1={n - 1}"
        )
    w = np.array(g.matrix, dtype=np.int64)
    for v in range(n):
        deficit = target_num - int(w[v].sum())
        if deficit <= 0:
            continue
        headroom = D - w[v]
        headroom[v] = 0
        total = int(headroom.sum())
        # ceil(deficit * h / total) per edge; sums to >= deficit and stays <= h
        raise_by = -((-deficit * headroom) // total)
        w[v] += raise_by
        w[:, v] += raise_by
        w[v, v] = 0
    return WeightedCompleteGraph(w, D=D, t_num=g.t_num)


def make_random_with_min_degree(
    n: int,
    D: int = DEFAULT_DENOMINATOR,
    t=Fraction(1, 2),
    mu=Fraction(1, 20),
    seed: int = 0,
    distribution: str = "uniform",
) -> WeightedCompleteGraph:
    """Random graph repaired so that ``delta^w >= (1/4 + 3t/4 + mu) n``."""
    target = min_degree_target_num(n, t, mu, D)
    if target > (n - 1) * D:
        raise ValueError(
            f"infeasible: required minimum degree {Fraction(target, D)} exceeds n-1={n - 1}"
        )
    g = make_random(n, D=D, distribution=distribution, seed=seed, t=t)
    return repair_min_degree(g, target)


# --- file I/O -------------------------------------------------------------


def graph_to_dict(g: WeightedCompleteGraph) -> dict:
    return {
        "format": FORMAT_TAG,
        "n": g.n,
        "D": g.D,
        "t_num": g.t_num,
        "weights": [int(x) for x in g.upper()],
    }


def graph_from_dict(data: dict) -> WeightedCompleteGraph:
    try:
        if data.get("format", FORMAT_TAG) != FORMAT_TAG:
            raise GraphFormatError(f"unknown format tag {data.get('format')!r}")
        n, D, t_num = int(data["n"]), int(data["D"]), int(data["t_num"])
        weights = list(data["weights"])
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphFormatError(f"malformed graph JSON: {exc}") from exc
    return _build_checked(n, D, t_num, weights)


def _build_checked(n: int, D: int, t_num: int, weights: list) -> WeightedCompleteGraph:
    if n < 0 or D < 1:
        raise GraphFormatError(f"invalid header values n={n}, D={D}")
    if not 0 <= t_num <= D:
        raise GraphFormatError(f"t numerator {t_num} outside [0, {D}]")
    expected = n * (n - 1) // 2
    if len(weights) < expected:
        raise GraphFormatError(
            f"missing edge entry index {len(weights)} (expected {expected} entries, got {len(weights)})"
        )
    if len(weights) > expected:
        raise GraphFormatError(f"too many edge entries: expected {expected}, got {len(weights)}")
    nums = []
    for k, x in enumerate(weights):
        try:
            val = int(x)
        except (TypeError, ValueError) as exc:
            raise GraphFormatError(f"edge entry index {k} is not an integer: {x!r}") from exc
        if not 0 <= val <= D:
            raise GraphFormatError(f"edge entry index {k}: numerator {val} outside [0, {D}]")
        nums.append(val)
    return WeightedCompleteGraph.from_upper(n, nums, D=D, t_num=t_num)


def parse_graph_text(text: str) -> WeightedCompleteGraph:
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            data = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise GraphFormatError(f"invalid JSON: {exc}") from exc
        return graph_from_dict(data)
    lines = stripped.splitlines()
    if not lines:
        raise GraphFormatError("empty graph file")
    header = lines[0].split()
    if len(header) != 4 or header[0] != FORMAT_TAG:
        raise GraphFormatError(f"malformed header {lines[0]!r}; expected '{FORMAT_TAG} n D t_num'")
    try:
        n, D, t_num = (int(x) for x in header[1:])
    except ValueError as exc:
        raise GraphFormatError(f"malformed header {lines[0]!r}") from exc
    body = " ".join(lines[1:]).split()
    return _build_checked(n, D, t_num, body)


def format_graph_text(g: WeightedCompleteGraph) -> str:
    out = [f"{FORMAT_TAG} {g.n} {g.D} {g.t_num}"]
    w = g.matrix
    for u in range(g.n - 1):
        out.append(" ".join(str(int(x)) for x in w[u, u + 1 :]))
    return "\n".join(out) + "\n"


def save_graph(g: WeightedCompleteGraph, path, fmt: str = "text") -> None:
    path = Path(path)
    if fmt == "json":
        path.write_text(json.dumps(graph_to_dict(g)) + "\n")
    elif fmt == "text":
        path.write_text(format_graph_text(g))
    else:
        raise ValueError(f"unknown format {fmt!r}")


def load_graph(path) -> WeightedCompleteGraph:
    return parse_graph_text(Path(path).read_text())


