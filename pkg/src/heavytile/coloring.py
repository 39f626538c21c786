"""Weight quantisation into p colours and reduced-graph weights on a given partition.

Colour ``l < p`` holds weights in ``[(l-1)/p, l/p)``; colour ``p`` holds
``[(p-1)/p, 1]``.  With ``p | D`` the class of a numerator ``w`` is
``min(p, w * p // D + 1)``, an exact integer test.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import GraphFormatError
from .graph import WeightedCompleteGraph, as_fraction


@dataclass(frozen=True)
class ColorClassView:
    p: int
    D: int
    colors: np.ndarray  # n x n, zero on the diagonal

    def color(self, u: int, v: int) -> int:
        if u == v:
            raise ValueError("no colour on the diagonal")
        return int(self.colors[u, v])

    def class_sizes(self) -> dict[int, int]:
        iu = np.triu_indices(self.colors.shape[0], k=1)
        counts = np.bincount(self.colors[iu], minlength=self.p + 1)
        return {l: int(counts[l]) for l in range(1, self.p + 1)}


def color_of(w_num: int, p: int, D: int) -> int:
    return min(p, w_num * p // D + 1)


def quantize(g: WeightedCompleteGraph, p: int) -> ColorClassView:
    if p < 2:
        raise ValueError("p must be >= 2")
    if g.D % p:
        raise ValueError(f"p={p} does not divide D={g.D}")
    c = np.minimum(p, g.matrix * p // g.D + 1)
    np.fill_diagonal(c, 0)
    c.setflags(write=False)
    return ColorClassView(p, g.D, c)


@dataclass(frozen=True)
class ReducedWeights:
    parts: tuple[tuple[int, ...], ...]
    p: int
    densities: dict[tuple[int, int], tuple[Fraction, ...]]  # index l-1 holds d_l
    w_R: dict[tuple[int, int], Fraction]
    w_upper: dict[tuple[int, int], Fraction]

    @property
    def k(self) -> int:
        return len(self.parts)

    def weight(self, i: int, j: int) -> Fraction:
        if i == j:
            raise ValueError("no reduced weight on the diagonal")
        return self.w_R[(min(i, j), max(i, j))]

    def degrees(self) -> list[Fraction]:
        return [sum((self.weight(i, j) for j in range(self.k) if j != i), Fraction(0)) for i in range(self.k)]

    def to_dict(self) -> dict:
        return {
            "kind": "reduced-weights",
            "p": self.p,
            "parts": [list(x) for x in self.parts],
            "pairs": [
                {
                    "i": i,
                    "j": j,
                    "densities": [str(d) for d in self.densities[(i, j)]],
                    "w_R": str(self.w_R[(i, j)]),
                    "w_upper": str(self.w_upper[(i, j)]),
                }
                for (i, j) in sorted(self.w_R)
            ],
        }


def _check_parts(n: int, partition: Sequence[Iterable[int]]) -> tuple[tuple[int, ...], ...]:
    parts = tuple(tuple(sorted(int(v) for v in p)) for p in partition)
    if not parts:
        raise ValueError("partition is empty")
    seen: set[int] = set()
    for k, p in enumerate(parts):
        if not p:
            raise ValueError(f"part {k} is empty")
        for v in p:
            if not 0 <= v < n:
                raise ValueError(f"vertex {v} out of range")
            if v in seen:
                raise ValueError(f"vertex {v} appears in two parts")
            seen.add(v)
    return parts


def reduced_weights(g: WeightedCompleteGraph, view: ColorClassView, partition: Sequence[Iterable[int]]) -> ReducedWeights:
    parts = _check_parts(g.n, partition)
    p = view.p
    dens, wr, wu = {}, {}, {}
    for i in range(len(parts)):
        for j in range(i + 1, len(parts)):
            block = view.colors[np.ix_(parts[i], parts[j])]
            counts = np.bincount(block.ravel(), minlength=p + 1)
            total = block.size
            d = tuple(Fraction(int(counts[l]), total) for l in range(1, p + 1))
            dens[(i, j)] = d
            wr[(i, j)] = sum((Fraction(l - 1, p) * d[l - 1] for l in range(1, p + 1)), Fraction(0))
            wu[(i, j)] = sum((Fraction(l, p) * d[l - 1] for l in range(1, p + 1)), Fraction(0))
    return ReducedWeights(parts, p, dens, wr, wu)


def reduced_degree_report(
    g: WeightedCompleteGraph,
    view: ColorClassView,
    partition: Sequence[Iterable[int]],
    c,
    mu,
    d_vec: Sequence,
    eps,
) -> dict:
    """Minimum reduced degree against ``(c + mu - sum d - 2 p eps - 1/p) k``.

    Informational only: the partition is not certified to be regular.
    """
    rw = reduced_weights(g, view, partition)
    c, mu, eps = as_fraction(c), as_fraction(mu), as_fraction(eps)
    d_vec = [as_fraction(x) for x in d_vec]
    if len(d_vec) != view.p:
        raise ValueError(f"d_vec needs {view.p} entries")
    k = rw.k
    degs = rw.degrees()
    delta = min(degs) if degs else Fraction(0)
    bound = (c + mu - sum(d_vec, Fraction(0)) - 2 * view.p * eps - Fraction(1, view.p)) * k
    return {
        "kind": "reduced-degree-report",
        "k": k,
        "p": view.p,
        "min_reduced_degree": str(delta),
        "lower_bound": str(bound),
        "meets_bound": delta >= bound,
        "hypothesis_verified": False,
        "degrees": [str(x) for x in degs],
    }


def parse_partition_text(text: str) -> list[list[int]]:
    parts = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            parts.append([int(x) for x in line.split()])
        except ValueError as exc:
            raise GraphFormatError(f"partition line {lineno}: {exc}") from exc
    return parts


def load_partition(path) -> list[list[int]]:
    return parse_partition_text(Path(path).read_text())


def format_partition(parts: Sequence[Iterable[int]]) -> str:
    return "".join(" ".join(str(v) for v in p) + "\n" for p in parts)
