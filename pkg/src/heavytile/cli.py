"""Command-line front end.

Exit codes: 0 success, 1 domain failure (no factor, no connector, invalid
certificate, ...), 2 usage or IO error.  Structures are emitted as JSON
with a ``kind`` field so that ``validate`` can replay them.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

import numpy as np

from .certificates import validate_absorber, validate_connector, validate_factor, validate_robust
from .coloring import load_partition, quantize, reduced_degree_report, reduced_weights
from .errors import CapabilityError, GraphFormatError, HeavyTileError
from .graph import (
    DEFAULT_DENOMINATOR,
    DISTRIBUTIONS,
    WeightedCompleteGraph,
    as_fraction,
    format_graph_text,
    graph_to_dict,
    make_extremal,
    make_random,
    make_random_with_min_degree,
    meets_degree_condition,
    min_weighted_degree,
    parse_graph_text,
)
from .lattice import PartitionContext, RobustCertificate, certify_robust, find_transferral, merge_parts
from .oracle import DEFAULT_CAP, exact_connector_exists, exact_factor_exists, exact_max_tiling
from .pipeline import DEFAULTS, FAMILIES, rows_to_csv, run_pipeline, scan_summary, threshold_scan
from .reachability import (
    Absorber,
    Connector,
    ReachParams,
    build_absorber,
    build_absorbing_set,
    certify_reachable,
    main_lemma_driver,
    two_from_three,
)
from .tiler import almost_cover, state_from_report, tiling_report, validate_state

log = logging.getLogger("heavytile")


class UsageError(Exception):
    pass


class _SubParser(argparse.ArgumentParser):
    """Lets an optional graph path follow the options of a subcommand."""

    _nested = False

    def parse_known_args(self, args=None, namespace=None):
        if self._nested:
            return super().parse_known_args(args, namespace)
        self._nested = True
        try:
            return self.parse_known_intermixed_args(args, namespace)
        finally:
            self._nested = False


# --- argument helpers -----------------------------------------------------


def fraction_arg(text: str) -> Fraction:
    try:
        return as_fraction(text)
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def int_list(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(x) for x in text.replace(",", " ").split()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def fraction_list(text: str) -> list[Fraction]:
    return [fraction_arg(x) for x in text.replace(",", " ").split()]


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _load_graph(args) -> WeightedCompleteGraph:
    g = parse_graph_text(_read_text(args.graph))
    if getattr(args, "t", None) is not None:
        try:
            g = g.with_t(args.t)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    return g


def _load_json(path: str) -> dict:
    try:
        data = json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError(f"{path} does not hold a JSON object")
    return data


def _partition(args, n: int) -> PartitionContext:
    try:
        return PartitionContext(load_partition(args.partition), n)
    except OSError as exc:
        raise UsageError(f"cannot read {args.partition}: {exc.strerror or exc}") from exc
    except ValueError as exc:
        raise UsageError(f"bad partition: {exc}") from exc


def _params(args, n: int) -> ReachParams:
    if getattr(args, "m", None) is not None:
        return ReachParams(args.m, args.s)
    return ReachParams.from_beta(n, args.beta, args.s)


def _emit(args, payload) -> None:
    if isinstance(payload, str):
        text = payload
    elif getattr(args, "format", "json") == "text" and isinstance(payload, dict):
        text = "".join(f"{k}: {v if not isinstance(v, (list, dict)) else json.dumps(v)}\n" for k, v in payload.items())
    else:
        text = json.dumps(payload, indent=None, default=str) + "\n"
    out = getattr(args, "out", None)
    if out and out != "-":
        try:
            Path(out).write_text(text)
        except OSError as exc:
            raise UsageError(f"cannot write {out}: {exc.strerror or exc}") from exc
    else:
        sys.stdout.write(text)


# --- subcommands ----------------------------------------------------------


def cmd_gen(args):
    D = args.D
    t = args.t if args.t is not None else Fraction(1, 2)
    if args.family == "extremal":
        g = make_extremal(args.n, args.r, t, D)
    else:
        if args.seed is None:
            raise UsageError("--seed is required for random generators")
        if args.family == "random":
            g = make_random(args.n, D, args.distribution, args.seed, t)
        else:
            g = make_random_with_min_degree(args.n, D, t, args.mu, args.seed, args.distribution)
    _emit(args, json.dumps(graph_to_dict(g)) + "\n" if args.format == "json" else format_graph_text(g))
    return 0


def cmd_degree(args):
    g = _load_graph(args)
    s = min_weighted_degree(g)
    rep = {
        "kind": "degree",
        "n": g.n,
        "t": str(g.t),
        "min_degree": str(s.minimum),
        "argmin": s.argmin,
        "degrees": [str(d) for d in s.degrees],
    }
    if args.mu is not None:
        rep["mu"] = str(args.mu)
        rep["meets_degree_condition"] = meets_degree_condition(g, args.mu)
    _emit(args, rep)
    return 0


def cmd_tile(args):
    g = _load_graph(args)
    st = almost_cover(g, args.mu, max_moves=args.max_moves)
    rep = tiling_report(g, st, args.mu)
    _emit(args, rep)
    return 0


def cmd_oracle(args):
    g = _load_graph(args)
    if args.what == "factor":
        if g.n % 4:
            res = {"kind": "oracle-factor", "answer": False, "states": 0, "message": "no factor (n not divisible by 4)"}
            _emit(args, res)
            return 1
        r = exact_factor_exists(g, cap=args.cap)
        d = r.to_dict()
        d["message"] = "factor found" if r.answer else "no factor"
        _emit(args, d)
        if not r.answer:
            print("no factor", file=sys.stderr)
            return 1
        return 0
    if args.what == "maxtile":
        r = exact_max_tiling(g, cap=args.cap)
        _emit(args, r.to_dict())
        return 0
    if args.u is None or args.v is None:
        raise UsageError("oracle connector needs --u and --v")
    r = exact_connector_exists(g, args.u, args.v, args.W, args.s, cap=args.cap)
    d = r.to_dict()
    d.update({"u": args.u, "v": args.v, "W": args.W, "s": args.s})
    if r.answer:
        d["connector"] = Connector(args.u, args.v, tuple(r.extra["S"]),
                                   tuple(tuple(q) for q in r.extra["factor_u"]),
                                   tuple(tuple(q) for q in r.extra["factor_v"])).to_dict()
    _emit(args, d)
    return 0 if r.answer else 1


def cmd_reach(args):
    g = _load_graph(args)
    if args.what == "certify":
        if args.u is None or args.v is None:
            raise UsageError("reach certify needs --u and --v")
        params = _params(args, g.n)
        conns = certify_reachable(g, args.u, args.v, params, W=args.W)
        d = {
            "kind": "reach-certificate",
            "u": args.u,
            "v": args.v,
            "m": params.m,
            "s": params.s,
            "W": args.W,
            "verdict": "reachable" if conns else "inconclusive",
            "connectors": [c.to_dict() for c in conns or []],
        }
        _emit(args, d)
        return 0 if conns else 1
    if args.what == "two-from-three":
        if args.triple is None or len(args.triple) != 3:
            raise UsageError("two-from-three needs --triple a,b,c")
        res = two_from_three(g, *args.triple, W=args.W)
        d = {
            "kind": "two-from-three",
            "triple": args.triple,
            "W": args.W,
            "pair": list(res.pair),
            "v4": res.v4,
            "v5": res.v5,
            "v6": res.v6,
            "X_size": res.X_size,
            "connector": res.connector.to_dict(),
        }
        _emit(args, d)
        return 0
    if args.seed is None:
        raise UsageError("--seed is required for reach partition")
    params = _params(args, g.n)
    res = main_lemma_driver(g, args.gamma, args.beta, params, seed=args.seed)
    _emit(args, res.to_dict())
    return 0


def cmd_absorb(args):
    g = _load_graph(args)
    params = _params(args, g.n)
    if args.what == "build":
        if args.S is None or len(args.S) != 4:
            raise UsageError("absorb build needs --S with four vertices")
        ab = build_absorber(g, args.S, params, forbidden=args.W)
        d = ab.to_dict()
        d["s"] = params.s
        _emit(args, d)
        return 0
    if args.seed is None:
        raise UsageError("--seed is required for absorb build-set")
    aset = build_absorbing_set(g, args.gamma, args.xi, params, seed=args.seed, forbidden=args.W)
    _emit(args, aset.to_dict())
    return 0


def cmd_lattice(args):
    g = _load_graph(args)
    P = _partition(args, g.n)
    parts = [list(p) for p in P.parts]
    m = args.m
    if args.what == "robust":
        if args.vector is None:
            raise UsageError("lattice robust needs --vector")
        cert = certify_robust(g, P, args.vector, args.beta, m=m)
        if cert is None:
            _emit(args, {"kind": "robust-search", "vector": args.vector, "found": False})
            return 1
        d = cert.to_dict()
        d["parts"] = parts
        _emit(args, d)
        return 0
    tr = find_transferral(g, P, args.beta, m=m)
    if tr is None:
        _emit(args, {"kind": "transferral-search", "found": False})
        return 1
    s, tv, cs, ct = tr
    if args.what == "transferral":
        _emit(args, {"kind": "transferral", "s": list(s), "t": list(tv), "cert_s": cs.to_dict(), "cert_t": ct.to_dict(), "parts": parts})
        return 0
    if args.x is None or args.y is None:
        raise UsageError("lattice merge needs --x and --y")
    i = [a - b for a, b in zip(s, tv)].index(1)
    j = [a - b for a, b in zip(s, tv)].index(-1)
    x, y = args.x, args.y
    if P.label[x] == j and P.label[y] == i:
        x, y = y, x
    conn = merge_parts(g, P, i, j, cs, ct, x, y, ReachParams(cs.m, args.s), W=args.W)
    d = conn.to_dict()
    d["W"] = args.W
    _emit(args, d)
    return 0


def cmd_reduce(args):
    g = _load_graph(args)
    if args.p < 2 or g.D % args.p:
        raise UsageError(f"p={args.p} must be >= 2 and divide D={g.D}")
    view = quantize(g, args.p)
    if args.what == "quantize":
        iu = np.triu_indices(g.n, k=1)
        _emit(args, {"kind": "colors", "p": args.p, "n": g.n, "upper": [int(c) for c in view.colors[iu]], "class_sizes": view.class_sizes()})
        return 0
    if args.partition is None:
        raise UsageError(f"reduce {args.what} needs --partition")
    try:
        parts = load_partition(args.partition)
    except OSError as exc:
        raise UsageError(f"cannot read {args.partition}: {exc.strerror or exc}") from exc
    if args.what == "weights":
        _emit(args, reduced_weights(g, view, parts).to_dict())
        return 0
    d_vec = args.d if args.d is not None else [Fraction(0)] * args.p
    rep = reduced_degree_report(g, view, parts, args.c, args.mu, d_vec, args.eps)
    rep.update({"c": str(args.c), "mu": str(args.mu), "eps": str(args.eps), "d": [str(x) for x in d_vec], "parts": parts})
    _emit(args, rep)
    return 0


def cmd_pipeline(args):
    g = _load_graph(args)
    if args.seed is None:
        raise UsageError("--seed is required for pipeline")
    rep = run_pipeline(g, args.mu, args.gamma, args.xi, args.beta, args.seed, repair=not args.no_repair)
    _emit(args, rep.to_dict())
    return 0 if rep.success else 1


def _scan_task(task):
    n, t, mu, seed, family, mode, D = task
    return threshold_scan(n, t, [mu], [seed], family=family, mode=mode, D=D)


def cmd_scan(args):
    if args.seed is None:
        raise UsageError("--seed is required for scan")
    seeds = range(args.seed, args.seed + args.samples)
    tasks = [(args.n, args.t or Fraction(1, 2), mu, s, args.family, args.mode, args.D) for mu in args.mu_grid for s in seeds]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            chunks = list(ex.map(_scan_task, tasks))
    else:
        chunks = [_scan_task(tk) for tk in tasks]
    rows = [r for c in chunks for r in c]
    if args.format == "json":
        _emit(args, {"kind": "scan", "rows": rows, "summary": scan_summary(rows)})
    else:
        _emit(args, rows_to_csv(rows))
    return 0


# --- validate -------------------------------------------------------------


def _check_partition_doc(g, d, args) -> PartitionContext:
    if "parts" in d:
        try:
            return PartitionContext(d["parts"], g.n)
        except ValueError as exc:
            raise UsageError(f"bad partition in certificate: {exc}") from exc
    if args.partition is None:
        raise UsageError("this certificate needs --partition")
    return _partition(args, g.n)


def _v_connector(g, d, args):
    return validate_connector(g, Connector.from_dict(d), s=d.get("s"), W=d.get("W", ()))


def _v_reach(g, d, args):
    out = []
    conns = [Connector.from_dict(c) for c in d["connectors"]]
    if d.get("verdict") == "reachable" and len(conns) < d["m"] + 1:
        out.append(f"only {len(conns)} connectors, need m+1 = {d['m'] + 1}")
    seen = set(d.get("W", ()))
    for k, c in enumerate(conns):
        if (c.u, c.v) != (d["u"], d["v"]):
            out.append(f"connector {k} joins {c.u},{c.v} instead of {d['u']},{d['v']}")
        hit = seen & set(c.S)
        if hit:
            out.append(f"connector {k} is not disjoint from W and earlier connectors at vertex {min(hit)}")
        seen |= set(c.S)
        out += [f"connector {k}: {m}" for m in validate_connector(g, c, s=d["s"])]
    return out


def _v_two(g, d, args):
    c = Connector.from_dict(d["connector"])
    out = validate_connector(g, c, s=1, W=d.get("W", ()))
    if not set(d["pair"]) <= set(d["triple"]) or {c.u, c.v} != set(d["pair"]):
        out.append("pair is not drawn from the triple")
    return out


def _v_absorber(g, d, args):
    return validate_absorber(g, Absorber.from_dict(d), s=d.get("s", 1))


def _v_absorbing_set(g, d, args):
    out = []
    seen: set[int] = set()
    for k, a in enumerate(d["gadgets"]):
        ab = Absorber.from_dict(a)
        hit = seen & set(ab.vertices)
        if hit:
            out.append(f"gadgets overlap at vertex {min(hit)}")
        seen |= set(ab.vertices)
        out += [f"gadget {k}: {m}" for m in validate_absorber(g, ab, s=d.get("s", 1))]
    if seen != set(d["vertices"]):
        out.append("absorbing set vertices differ from the union of its gadgets")
    if len(seen) > d["budget"]:
        out.append(f"absorbing set size {len(seen)} exceeds budget {d['budget']}")
    return out


def _v_robust(g, d, args):
    P = _check_partition_doc(g, d, args)
    return validate_robust(g, P, RobustCertificate.from_dict(d))


def _v_transferral(g, d, args):
    P = _check_partition_doc(g, d, args)
    cs, ct = RobustCertificate.from_dict(d["cert_s"]), RobustCertificate.from_dict(d["cert_t"])
    out = [f"s: {m}" for m in validate_robust(g, P, cs)] + [f"t: {m}" for m in validate_robust(g, P, ct)]
    diff = [a - b for a, b in zip(cs.vector, ct.vector)]
    if sorted(diff) != [-1] + [0] * (len(diff) - 2) + [1]:
        out.append(f"vectors {cs.vector} and {ct.vector} do not differ by a transferral")
    if list(cs.vector) != list(d["s"]) or list(ct.vector) != list(d["t"]):
        out.append("stated vectors do not match the certificates")
    return out


def _witness_ok(g, d, label):
    wit = d.get("witness") or []
    out = []
    used = [v for q in wit for v in q]
    out += validate_factor(g, used, wit, label=label)
    return out, len(wit)


def _v_oracle_factor(g, d, args):
    if d["answer"]:
        return validate_factor(g, range(g.n), d.get("witness") or [], label="witness")
    if g.n % 4:
        return []
    r = exact_factor_exists(g, cap=max(args.cap, g.n))
    return ["recomputation finds a factor"] if r.answer else []


def _v_oracle_maxtile(g, d, args):
    out, k = _witness_ok(g, d, "witness")
    if k != d["answer"]:
        out.append(f"witness has {k} blocks, answer says {d['answer']}")
    r = exact_max_tiling(g, cap=max(args.cap, g.n))
    if r.answer != d["answer"]:
        out.append(f"recomputed maximum tiling is {r.answer}, not {d['answer']}")
    return out


def _v_oracle_connector(g, d, args):
    if d["answer"]:
        return validate_connector(g, Connector.from_dict(d["connector"]), s=d["s"], W=d.get("W", ()))
    r = exact_connector_exists(g, d["u"], d["v"], d.get("W", ()), d["s"], cap=max(args.cap, g.n))
    return ["recomputation finds a connector"] if r.answer else []


def _v_tiling(g, d, args):
    st = state_from_report(d, g.D)
    out = validate_state(g, st)
    if sorted(d["uncovered"]) != sorted(st.uncovered):
        out.append("uncovered list does not match R, T, M, I")
    sizes = {"R": len(st.R), "T": len(st.T), "M": len(st.M), "I": len(st.I)}
    if d.get("sizes") and d["sizes"] != sizes:
        out.append(f"stated sizes {d['sizes']} differ from {sizes}")
    if "rho" in d and as_fraction(d["rho"]) != Fraction(st.rho_num, g.D):
        out.append(f"stated rho {d['rho']} differs from rho_num/D")
    return out


def _v_pipeline(g, d, args):
    if d["success"]:
        return validate_factor(g, range(g.n), d["factor"] or [], label="factor")
    return [] if d.get("factor") is None else ["failed run carries a factor"]


def _v_partition(g, d, args):
    out = []
    allv = [v for p in d["parts"] for v in p] + list(d.get("B", []))
    if sorted(allv) != list(range(g.n)):
        out.append("parts and B do not partition the vertex set")
    return out


def _v_colors(g, d, args):
    view = quantize(g, d["p"])
    iu = np.triu_indices(g.n, k=1)
    bad = np.flatnonzero(view.colors[iu] != np.asarray(d["upper"]))
    if bad.size:
        k = int(bad[0])
        return [f"edge {int(iu[0][k])},{int(iu[1][k])} has colour {d['upper'][k]}, expected {int(view.colors[iu][k])}"]
    return []


def _v_reduced(g, d, args):
    rw = reduced_weights(g, quantize(g, d["p"]), d["parts"])
    exp = rw.to_dict()
    out = []
    for a, b in zip(exp["pairs"], d["pairs"]):
        if a != b:
            out.append(f"pair ({b['i']},{b['j']}) differs from recomputation")
    if len(exp["pairs"]) != len(d["pairs"]):
        out.append("pair count differs from recomputation")
    return out


def _v_reduced_degree(g, d, args):
    rep = reduced_degree_report(g, quantize(g, d["p"]), d["parts"], d["c"], d["mu"], d["d"], d["eps"])
    return [f"{k} differs from recomputation" for k in ("min_reduced_degree", "lower_bound", "meets_bound") if rep[k] != d[k]]


def _v_degree(g, d, args):
    s = min_weighted_degree(g)
    return [] if str(s.minimum) == d["min_degree"] else [f"minimum degree is {s.minimum}, not {d['min_degree']}"]


VALIDATORS = {
    "connector": _v_connector,
    "reach-certificate": _v_reach,
    "two-from-three": _v_two,
    "absorber": _v_absorber,
    "absorbing-set": _v_absorbing_set,
    "robust": _v_robust,
    "transferral": _v_transferral,
    "oracle-factor": _v_oracle_factor,
    "oracle-maxtile": _v_oracle_maxtile,
    "oracle-connector": _v_oracle_connector,
    "tiling": _v_tiling,
    "pipeline": _v_pipeline,
    "reachability-partition": _v_partition,
    "colors": _v_colors,
    "reduced-weights": _v_reduced,
    "reduced-degree-report": _v_reduced_degree,
    "degree": _v_degree,
}


def cmd_validate(args):
    g = _load_graph(args)
    d = _load_json(args.cert)
    kind = d.get("kind")
    if kind not in VALIDATORS:
        raise UsageError(f"cannot validate kind {kind!r}; known kinds: {', '.join(sorted(VALIDATORS))}")
    try:
        problems = VALIDATORS[kind](g, d, args)
    except (KeyError, TypeError, IndexError) as exc:
        problems = [f"malformed {kind} certificate: missing or bad field {exc}"]
    except ValueError as exc:
        problems = [f"malformed {kind} certificate: {exc}"]
    _emit(args, {"kind": "validation", "of": kind, "valid": not problems, "violations": problems})
    for p in problems:
        print(f"invalid: {p}", file=sys.stderr)
    return 1 if problems else 0


# --- parser ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="heavytile", description="Heavy K4 tilings of weighted complete graphs.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_SubParser)

    def common(sp, graph=True, fmt=True):
        if graph:
            sp.add_argument("graph", nargs="?", default="-", help="graph file ('-' for stdin)")
            sp.add_argument("--t", type=fraction_arg, help="override the graph's threshold t (a/b)")
        sp.add_argument("--out", "-o", help="output file (default stdout)")
        if fmt:
            sp.add_argument("--format", choices=("json", "text"), default="json")
        sp.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")

    def reach_opts(sp):
        sp.add_argument("--beta", type=fraction_arg, default=DEFAULTS["beta"])
        sp.add_argument("--m", type=int, help="forbidden-set budget (overrides ceil(beta n))")
        sp.add_argument("--s", type=int, default=1)
        sp.add_argument("--W", type=int_list, default=[], help="forbidden vertices, comma separated")

    sp = sub.add_parser("gen", help="generate a graph")
    sp.add_argument("family", choices=("extremal", "random", "random-mindeg"))
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--r", type=int, default=4)
    sp.add_argument("--t", type=fraction_arg)
    sp.add_argument("--D", type=int, default=DEFAULT_DENOMINATOR)
    sp.add_argument("--mu", type=fraction_arg, default=DEFAULTS["mu"])
    sp.add_argument("--distribution", choices=DISTRIBUTIONS, default="uniform")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--out", "-o")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("degree", help="weighted degree summary")
    common(sp)
    sp.add_argument("--mu", type=fraction_arg)
    sp.set_defaults(func=cmd_degree)

    sp = sub.add_parser("tile", help="almost-perfect heavy K4 tiling")
    common(sp)
    sp.add_argument("--mu", type=fraction_arg)
    sp.add_argument("--max-moves", type=int)
    sp.set_defaults(func=cmd_tile)

    sp = sub.add_parser("oracle", help="exact small-n oracles")
    sp.add_argument("what", choices=("factor", "maxtile", "connector"))
    common(sp)
    sp.add_argument("--cap", type=int, default=DEFAULT_CAP)
    sp.add_argument("--u", type=int)
    sp.add_argument("--v", type=int)
    sp.add_argument("--s", type=int, default=1)
    sp.add_argument("--W", type=int_list, default=[])
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("reach", help="connectors and reachability")
    sp.add_argument("what", choices=("certify", "two-from-three", "partition"))
    common(sp)
    reach_opts(sp)
    sp.add_argument("--u", type=int)
    sp.add_argument("--v", type=int)
    sp.add_argument("--triple", type=int_list)
    sp.add_argument("--gamma", type=fraction_arg, default=DEFAULTS["gamma"])
    sp.add_argument("--seed", type=int)
    sp.set_defaults(func=cmd_reach)

    sp = sub.add_parser("absorb", help="absorbers")
    sp.add_argument("what", choices=("build", "build-set"))
    common(sp)
    reach_opts(sp)
    sp.add_argument("--S", type=int_list)
    sp.add_argument("--gamma", type=fraction_arg, default=DEFAULTS["gamma"])
    sp.add_argument("--xi", type=fraction_arg, default=DEFAULTS["xi"])
    sp.add_argument("--seed", type=int)
    sp.set_defaults(func=cmd_absorb)

    sp = sub.add_parser("lattice", help="robust vectors, transferrals, merging")
    sp.add_argument("what", choices=("robust", "transferral", "merge"))
    common(sp)
    reach_opts(sp)
    sp.add_argument("--partition", required=True)
    sp.add_argument("--vector", type=int_list)
    sp.add_argument("--x", type=int)
    sp.add_argument("--y", type=int)
    sp.set_defaults(func=cmd_lattice)

    sp = sub.add_parser("reduce", help="quantisation and reduced weights")
    sp.add_argument("what", choices=("quantize", "weights", "degree-report"))
    common(sp)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--partition")
    sp.add_argument("--c", type=fraction_arg, default=Fraction(5, 8))
    sp.add_argument("--mu", type=fraction_arg, default=DEFAULTS["mu"])
    sp.add_argument("--eps", type=fraction_arg, default=Fraction(0))
    sp.add_argument("--d", type=fraction_list)
    sp.set_defaults(func=cmd_reduce)

    sp = sub.add_parser("pipeline", help="full absorbing pipeline")
    common(sp)
    sp.add_argument("--mu", type=fraction_arg, default=DEFAULTS["mu"])
    sp.add_argument("--gamma", type=fraction_arg, default=DEFAULTS["gamma"])
    sp.add_argument("--xi", type=fraction_arg, default=DEFAULTS["xi"])
    sp.add_argument("--beta", type=fraction_arg, default=DEFAULTS["beta"])
    sp.add_argument("--seed", type=int)
    sp.add_argument("--no-repair", action="store_true", help="disable the local exact repair fallback")
    sp.set_defaults(func=cmd_pipeline)

    sp = sub.add_parser("scan", help="threshold scan over mu")
    common(sp, graph=False, fmt=False)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--t", type=fraction_arg)
    sp.add_argument("--D", type=int, default=DEFAULT_DENOMINATOR)
    sp.add_argument("--mu-grid", type=fraction_list, required=True)
    sp.add_argument("--family", choices=FAMILIES, default="random")
    sp.add_argument("--mode", choices=("auto", "exact", "pipeline"), default="auto")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--samples", type=int, default=1)
    sp.set_defaults(func=cmd_scan)

    sp = sub.add_parser("validate", help="replay a JSON certificate or report against its graph")
    common(sp)
    sp.add_argument("cert", help="JSON certificate file")
    sp.add_argument("--partition")
    sp.add_argument("--cap", type=int, default=DEFAULT_CAP)
    sp.set_defaults(func=cmd_validate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "jobs", 1) < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (UsageError, GraphFormatError, CapabilityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except HeavyTileError as exc:
        print(f"failed: {exc}", file=sys.stderr)
        return 1
    except (ValueError, IndexError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
