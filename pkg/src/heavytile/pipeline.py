"""Absorb, almost-cover, absorb the leftover; plus the threshold-scan harness.

Each phase is fallible and its outcome is recorded in the report.  A factor
is only ever reported after exact validation.
"""

from __future__ import annotations

import csv
import io
import logging
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import _kernels as K
from .certificates import validate_factor
from .errors import HeavyTileError
from .graph import (
    DEFAULT_DENOMINATOR,
    WeightedCompleteGraph,
    as_fraction,
    make_extremal,
    make_random_with_min_degree,
    min_degree_target_num,
    repair_min_degree,
)
from .oracle import exact_max_tiling, factor_of
from .reachability import ReachParams, absorb, build_absorbing_set, main_lemma_driver
from .tiler import almost_cover

log = logging.getLogger(__name__)

DEFAULTS = {"mu": Fraction(1, 10), "gamma": Fraction(15, 100), "xi": Fraction(1, 100), "beta": Fraction(1, 100)}
REPAIR_CAP = 16


@dataclass
class PipelineReport:
    n: int
    params: dict
    phases: dict = field(default_factory=dict)
    factor: list[tuple[int, ...]] | None = None
    wall_ms: dict = field(default_factory=dict)

    @property
    def success(self) -> bool:
        return self.factor is not None

    @property
    def uncovered(self) -> int:
        return self.phases.get("final_uncovered", self.n)

    def to_dict(self) -> dict:
        return {
            "kind": "pipeline",
            "n": self.n,
            "params": {k: str(v) for k, v in self.params.items()},
            "success": self.success,
            "uncovered": self.uncovered,
            "phases": self.phases,
            "factor": [list(q) for q in self.factor] if self.factor is not None else None,
            "wall_ms": self.wall_ms,
        }


def _cover_vertex(W, t, b: int, free: np.ndarray) -> tuple[int, ...] | None:
    pool = free[free != b]
    return K.k4_search(W, t, [np.array([b]), pool, pool, pool])


def _local_repair(
    g: WeightedCompleteGraph, R: list[tuple[int, ...]], L: list[int], *, cap: int = REPAIR_CAP, tries: int = 6, seed: int = 0
) -> tuple[list[tuple[int, ...]], list[int], int]:
    """Exact re-tiling of small windows: leftover vertices plus nearby tiles.

    Returns the new tile list, the vertices still uncovered and the number
    of successful windows.
    """
    W = g.matrix
    R = list(R)
    L = list(L)
    rng = np.random.default_rng(seed)
    fixed = 0
    while L:
        progress = False
        for chunk_size in (4, 8):
            if len(L) < chunk_size:
                break
            chunk = L[:chunk_size]
            room = (cap - chunk_size) // 4
            if room < 0 or not R:
                continue
            score = [int(W[np.ix_(chunk, list(q))].sum()) for q in R]
            order = sorted(range(len(R)), key=lambda k: -score[k])
            picks = [order[:room]]
            for _ in range(tries - 1):
                picks.append(sorted(int(x) for x in rng.choice(len(R), min(room, len(R)), replace=False)))
            for pick in picks:
                verts = sorted(set(chunk).union(*(R[k] for k in pick)))
                fac = factor_of(g, verts)
                if fac is not None:
                    R = [q for k, q in enumerate(R) if k not in set(pick)] + [tuple(q) for q in fac]
                    L = [v for v in L if v not in set(chunk)]
                    fixed += 1
                    progress = True
                    break
            if progress:
                break
        if not progress:
            break
    return R, L, fixed


def run_pipeline(
    g: WeightedCompleteGraph,
    mu=DEFAULTS["mu"],
    gamma=DEFAULTS["gamma"],
    xi=DEFAULTS["xi"],
    beta=DEFAULTS["beta"],
    seed: int = 0,
    *,
    repair: bool = True,
    s: int = 1,
) -> PipelineReport:
    n = g.n
    if n % 4:
        raise ValueError(f"a K4-factor needs 4 | n (n={n})")
    mu, gamma, xi, beta = (as_fraction(x) for x in (mu, gamma, xi, beta))
    rep = PipelineReport(n, {"mu": mu, "gamma": gamma, "xi": xi, "beta": beta, "seed": seed, "s": s, "t": g.t, "D": g.D})
    W, t = g.matrix, g.t_num
    params = ReachParams.from_beta(n, beta, s)

    # phase 1: partition, absorbing set in U, cover B greedily
    t0 = time.perf_counter()
    B: tuple[int, ...] = ()
    try:
        drv = main_lemma_driver(g, gamma, beta, params, seed=seed)
        B = drv.B
        rep.phases["driver"] = {"verdict": drv.verdict, "branch": drv.branch, "B": list(B)}
    except HeavyTileError as exc:
        rep.phases["driver"] = {"error": str(exc)}
    U = [v for v in range(n) if v not in set(B)]
    aset = None
    try:
        aset = build_absorbing_set(g, gamma, xi, params, seed=seed, within=U)
        rep.phases["absorbing_set"] = {"size": aset.size, "gadgets": len(aset.gadgets), "stats": aset.stats}
    except HeavyTileError as exc:
        rep.phases["absorbing_set"] = {"error": str(exc), "size": 0}
    A = set(aset.vertices) if aset else set()
    free = np.array([v for v in range(n) if v not in A], dtype=np.intp)
    b_tiles: list[tuple[int, ...]] = []
    b_missed = []
    for b in B:
        if b not in set(free.tolist()):
            continue
        q = _cover_vertex(W, t, b, free)
        if q is None:
            b_missed.append(b)
            continue
        b_tiles.append(tuple(sorted(q)))
        free = free[~np.isin(free, q)]
    rep.phases["B_cover"] = {"tiles": len(b_tiles), "missed": b_missed}
    rep.wall_ms["phase1"] = round(1000 * (time.perf_counter() - t0), 3)

    # phase 2: almost cover on the rest
    t0 = time.perf_counter()
    sub, idx = g.subgraph(free.tolist())
    st = almost_cover(sub, mu / 2)
    R = [tuple(sorted(idx[v] for v in q)) for q in st.R]
    L = sorted(idx[v] for v in st.uncovered)
    rep.phases["almost_cover"] = {
        "vertices": sub.n,
        "R": len(R),
        "T": len(st.T),
        "M": len(st.M),
        "I": len(st.I),
        "uncovered": len(L),
        "moves": len(st.move_log),
    }
    rep.wall_ms["phase2"] = round(1000 * (time.perf_counter() - t0), 3)

    # phase 3: absorb the leftover
    t0 = time.perf_counter()
    xi_n = xi * n
    rep.phases["leftover_le_xi_n"] = len(L) <= xi_n
    tiles: list[tuple[int, ...]] | None = None
    a_tiles: list[tuple[int, ...]] = []
    if aset is not None:
        a_tiles = [tuple(q) for q in (b for a in aset.gadgets for b in a.factor_without)]
    if not L:
        tiles = b_tiles + R + a_tiles
        rep.phases["absorption"] = "not needed"
    elif aset is not None and len(L) <= xi_n:
        try:
            absorbed = absorb(g, aset, L)
            tiles = b_tiles + R + [tuple(q) for q in absorbed]
            rep.phases["absorption"] = "absorbed"
        except HeavyTileError as exc:
            rep.phases["absorption"] = f"failed: {exc}"
    else:
        rep.phases["absorption"] = "skipped: leftover exceeds xi n" if aset is not None else "skipped: no absorbing set"
    if tiles is None and repair:
        R2, L2, fixed = _local_repair(g, R + b_tiles, L, seed=seed)
        rep.phases["repair"] = {"windows_fixed": fixed, "still_uncovered": len(L2)}
        if not L2:
            tiles = R2 + a_tiles
            rep.phases["absorption"] += "; local exact repair succeeded"
            L = []
        else:
            L = L2
    rep.wall_ms["phase3"] = round(1000 * (time.perf_counter() - t0), 3)

    if tiles is not None:
        bad = validate_factor(g, range(n), tiles)
        if bad:
            rep.phases["validation"] = bad
            log.error("pipeline produced an invalid factor: %s", bad[:3])
            tiles = None
        else:
            rep.phases["validation"] = "ok"
    rep.factor = sorted(tiles) if tiles is not None else None
    rep.phases["final_uncovered"] = 0 if tiles is not None else len(L) + len(b_missed)
    return rep


# --- threshold scan -------------------------------------------------------

FAMILIES = ("random", "extremal", "ones")
SCAN_COLUMNS = ("n", "t", "mu", "seed", "mode", "success", "uncovered", "wall_ms")


def scan_instance(n: int, t, mu, seed: int, family: str, D: int = DEFAULT_DENOMINATOR) -> WeightedCompleteGraph:
    t, mu = as_fraction(t), as_fraction(mu)
    if family == "ones":
        return WeightedCompleteGraph.constant(n, 1, D=D, t=t)
    if family == "extremal":
        g = make_extremal(n, 4, t, D)
        target = min_degree_target_num(n, t, mu, D)
        return repair_min_degree(g, target) if target > 0 else g
    if family == "random":
        if min_degree_target_num(n, t, mu, D) <= 0:
            mu = -(Fraction(1, 4) + 3 * t / 4)
        return make_random_with_min_degree(n, D, t, mu, seed)
    raise ValueError(f"unknown family {family!r}; choose from {FAMILIES}")


def threshold_scan(
    n: int,
    t,
    mu_grid: Sequence,
    seeds: Iterable[int],
    *,
    family: str = "random",
    mode: str = "auto",
    D: int = DEFAULT_DENOMINATOR,
) -> list[dict]:
    """One row per (mu, seed): exact oracle at small n, pipeline otherwise."""
    from .oracle import DEFAULT_CAP

    if mode == "auto":
        mode = "exact" if n <= DEFAULT_CAP else "pipeline"
    if mode not in ("exact", "pipeline"):
        raise ValueError("mode must be exact, pipeline or auto")
    seeds = list(seeds)
    rows = []
    for mu in mu_grid:
        mu = as_fraction(mu)
        for seed in seeds:
            g = scan_instance(n, t, mu, seed, family, D)
            t0 = time.perf_counter()
            if mode == "exact":
                res = exact_max_tiling(g)
                success = res.answer == n // 4 and n % 4 == 0
                unc = n - 4 * res.answer
            else:
                rep = run_pipeline(g, mu=max(mu, Fraction(1, 100)), seed=seed)
                success, unc = rep.success, rep.uncovered
            rows.append(
                {
                    "n": n,
                    "t": str(as_fraction(t)),
                    "mu": str(mu),
                    "seed": seed,
                    "mode": mode,
                    "success": int(success),
                    "uncovered": unc,
                    "wall_ms": round(1000 * (time.perf_counter() - t0), 3),
                }
            )
    return rows


def scan_summary(rows: Sequence[dict]) -> dict[str, float]:
    out: dict[str, list[int]] = {}
    for r in rows:
        out.setdefault(r["mu"], []).append(r["success"])
    return {mu: sum(v) / len(v) for mu, v in out.items()}


def rows_to_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=SCAN_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: r[k] for k in SCAN_COLUMNS})
    return buf.getvalue()
