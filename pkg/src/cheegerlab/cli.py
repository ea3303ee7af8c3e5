"""Command-line interface: every analysis as a subcommand with reproducible,
machine-readable reports.

Reports are canonical JSON (sorted keys, trailing newline) printed to stdout
and optionally written to ``--report``; given the same inputs and seed they
are byte-identical across runs and worker counts.  Timing and human-readable
notes go to stderr only.  Exit codes: 0 success, 2 invalid input, 3 budget
exceeded, 4 falsified invariant or failed check (a finding, with its witness
in the report).
"""

from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import io
from .approximation import (
    build_truncated,
    level_certificate,
    relevel,
    structural_checks,
)
from .decomposition import converse_scan, decomposition_bound, graft, graft_decomposition, validate
from .errors import (
    BudgetExceededError,
    CheegerLabError,
    ConstructionError,
    EmptyWindowError,
    InvalidHorizonError,
    InvalidInputError,
    InvalidSupportError,
)
from .graphs import (
    DEFAULT_SUBSET_BUDGET,
    CheegerBound,
    admissible_vertices,
    auto_max_size,
    certificate_lower_bound,
    interior_cheeger_bruteforce,
)
from .hyperbolicity import DEFAULT_DELTA_BUDGET, delta_four_point
from .metric import (
    cantor_sample,
    epsilon_net,
    interval_sample,
    two_point,
    two_point_perfectness_check,
    uniformly_perfect_check,
)
from .trees import end_space, tree_cheeger_bounds

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_BUDGET = 3
EXIT_FALSIFIED = 4


def _jsonable(x: Any) -> Any:
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (frozenset, set)):
        return sorted(_jsonable(v) for v in x)
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    return x


def _bound_payload(bound: CheegerBound) -> dict:
    def endpoint(e):
        if e is None:
            return None
        return {
            "value": str(e.value),
            "provenance": e.kind,
            "horizon_certified": e.horizon_certified,
            "witness": _jsonable(e.witness),
        }

    return {"lower": endpoint(bound.lower), "upper": endpoint(bound.upper)}


def _load_metric_input(token: str) -> tuple[Any, dict]:
    """A metric input is either a file path or a generator spec name:params."""
    kind, _, rest = token.partition(":")
    if kind == "cantor" and rest:
        return cantor_sample(int(rest)), {"generator": token}
    if kind == "interval" and rest:
        return interval_sample(int(rest)), {"generator": token}
    if kind == "two_point" and rest:
        return two_point(float(rest)), {"generator": token}
    return io.load_metric(token), {"path": token, "sha256": io.sha256_file(token)}


def _graph_input(token: str) -> tuple[Any, dict]:
    return io.load_graph(token), {"path": token, "sha256": io.sha256_file(token)}


def _emit(report: dict, args, started: float) -> None:
    blob = io.canonical_json_bytes(report)
    sys.stdout.write(blob.decode())
    if args.report:
        Path(args.report).write_bytes(blob)
    print(f"[{report['command']}] wall-time {time.time() - started:.3f}s", file=sys.stderr)


def _base_report(command: str, inputs: dict, params: dict, seed: int | None = None) -> dict:
    report = {"command": command, "inputs": inputs, "parameters": _jsonable(params)}
    if seed is not None:
        report["seed"] = seed
    return report


# -- subcommand handlers -----------------------------------------------------


def _cmd_cheeger(args) -> tuple[dict, int]:
    g, src = _graph_input(args.infile)
    adm = admissible_vertices(g)
    max_size = args.max_size if args.max_size else auto_max_size(len(adm), args.budget)
    bound = interior_cheeger_bruteforce(g, max_size, args.budget)
    report = _base_report(
        "cheeger", {"graph": src},
        {"max_size": max_size, "budget": args.budget},
    )
    report["results"] = {
        "interior_cheeger_upper": str(bound.upper.value),
        "bound": _bound_payload(bound),
    }
    report["disclosures"] = {
        "admissible_vertices": len(adm),
        "frontier_size": len(g.frontier),
        "window_only": bool(g.frontier),
    }
    return report, EXIT_OK


def _cmd_certify(args) -> tuple[dict, int]:
    g, src = _graph_input(args.infile)
    raw = io.read_json(args.function)
    f = {str(v): io.parse_fraction(x) for v, x in raw.items()}
    res = certificate_lower_bound(g, f)
    report = _base_report(
        "certify",
        {"graph": src, "function": {"path": args.function, "sha256": io.sha256_file(args.function)}},
        {},
    )
    report["results"] = {
        "certified": res.certified,
        "c1": str(res.c1),
        "c2": str(res.c2) if res.c2 is not None else None,
        "violating_vertex": res.violating_vertex,
        "bound": _bound_payload(res.bound) if res.bound else None,
    }
    report["disclosures"] = {"verified_region_size": len(res.verified_region)}
    return report, EXIT_OK if res.certified else EXIT_FALSIFIED


def _cmd_delta(args) -> tuple[dict, int]:
    token = args.infile
    try:
        space, src = _graph_input(token)
    except (InvalidInputError, FileNotFoundError):
        space, src = _load_metric_input(token)
    rep = delta_four_point(
        space, mode=args.mode, budget=args.budget, seed=args.seed, samples=args.samples
    )
    report = _base_report(
        "delta", {"space": src},
        {"mode": args.mode, "budget": args.budget, "samples": args.samples},
        seed=args.seed,
    )
    report["results"] = {
        "delta": str(rep.delta) if isinstance(rep.delta, Fraction) else rep.delta,
        "witness": list(rep.witness),
        "mode": rep.mode,
        "lower_bound_only": rep.lower_bound_only,
    }
    return report, EXIT_OK


def _cmd_tree(args) -> tuple[dict, int]:
    t = io.load_tree(args.infile)
    analysis = tree_cheeger_bounds(t, max_size=args.max_size, budget=args.budget)
    report = _base_report(
        "tree",
        {"tree": {"path": args.infile, "sha256": io.sha256_file(args.infile)}},
        {"max_size": args.max_size, "budget": args.budget},
    )
    results = {
        "K": analysis.k,
        "C": analysis.c,
        "complete_subtree_size": len(analysis.t_infty),
        "bound": _bound_payload(analysis.bounds),
        "sandwich_lower": str(analysis.sandwich_lower) if analysis.sandwich_lower else None,
    }
    if analysis.pseudo and analysis.pseudo.k is None:
        results["defect_vertex"] = analysis.pseudo.defect_vertex
        results["defect_family"] = [
            {"K": w.k, "ratio": str(w.ratio), "set": list(w.vertices)}
            for w in analysis.pseudo.family
        ]
    report["results"] = results
    report["disclosures"] = {"horizon": analysis.horizon}
    return report, EXIT_OK


def _cmd_endspace(args) -> tuple[dict, int]:
    t = io.load_tree(args.infile)
    space = end_space(t)
    if args.out:
        io.save_metric(args.out, space)
    report = _base_report(
        "endspace",
        {"tree": {"path": args.infile, "sha256": io.sha256_file(args.infile)}},
        {"out": args.out},
    )
    report["results"] = {
        "points": len(space.points),
        "diameter": space.diameter,
        "ultrametric": True,
    }
    report["disclosures"] = {"resolution_floor": space.resolution_floor, "horizon": t.horizon}
    return report, EXIT_OK


def _cmd_approx(args) -> tuple[dict, int]:
    space, src = _load_metric_input(args.infile)
    lg = build_truncated(space, args.r, args.k_max, k0=args.k0)
    if args.s and args.s > 1:
        lg = relevel(lg, args.s)
    checks = structural_checks(lg, delta_cap=args.delta_cap)
    cert = level_certificate(lg) if lg.k_max - lg.k0 >= 2 else None
    if args.out:
        io.save_leveled(args.out, lg)
    report = _base_report(
        "approx", {"space": src},
        {"r": args.r, "k_max": args.k_max, "k0": args.k0, "s": args.s, "delta_cap": args.delta_cap},
    )
    report["results"] = {
        "k0": lg.k0,
        "k_max": lg.k_max,
        "vertices": len(lg.graph.vertices),
        "level_sizes": {str(k): len(lg.level_vertices(k)) for k in range(lg.k0, lg.k_max + 1)},
        "structural_ok": checks.structural_ok,
        "delta": str(checks.delta.delta),
        "delta_ok": checks.delta_ok,
        "max_degree": checks.max_degree,
        "degree_cap": checks.degree_cap,
        "violations": list(checks.violations),
        "level_certificate": {
            "certified": cert.certified,
            "c2": str(cert.c2),
            "lower": str(cert.bound.lower.value) if cert.bound else None,
            "pinched_vertex": cert.violating_vertex,
        }
        if cert
        else None,
    }
    report["disclosures"] = {"frontier_level": lg.k_max, "window_only": True}
    return report, EXIT_OK if checks.structural_ok else EXIT_FALSIFIED


def _cmd_net(args) -> tuple[dict, int]:
    space, src = _load_metric_input(args.infile)
    g = epsilon_net(space, args.eps)
    if args.out:
        io.save_graph(args.out, g)
    report = _base_report("net", {"space": src}, {"eps": args.eps, "out": args.out})
    report["results"] = {"vertices": len(g.vertices), "edges": len(g.edges)}
    return report, EXIT_OK


def _cmd_perfect(args) -> tuple[dict, int]:
    space, src = _load_metric_input(args.infile)
    grid = [float(x) for x in args.grid.split(",")] if args.grid else []
    floor = args.floor if args.floor is not None else (space.resolution_floor or 0.0)
    if floor <= 0:
        raise InvalidInputError("no resolution floor known; pass --floor explicitly")
    if args.two_point_r is not None:
        cert = two_point_perfectness_check(space, args.two_point_r, args.eps0, floor, grid)
    else:
        if args.s is None:
            raise InvalidInputError("pass --s (one-point form) or --two-point-r")
        cert = uniformly_perfect_check(space, args.s, args.eps0, floor, grid)
    report = _base_report(
        "perfect", {"space": src},
        {"form": cert.form, "constant": cert.constant, "eps0": args.eps0, "floor": floor},
    )
    report["results"] = {
        "holds": cert.holds,
        "witness": list(cert.witness) if cert.witness else None,
        "checked_eps": cert.checked_eps,
    }
    report["disclosures"] = {
        "resolution_floor": floor,
        "claim_range": [floor, args.eps0],
    }
    return report, EXIT_OK if cert.holds else EXIT_FALSIFIED


def _cmd_decomp(args) -> tuple[dict, int]:
    spec = io.load_decomposition(args.spec)
    result = validate(spec)
    report = _base_report(
        "decomp",
        {"spec": {"path": args.spec, "sha256": io.sha256_file(args.spec)}},
        {"R": spec.radius, "r": str(spec.rate)},
    )
    results: dict[str, Any] = {
        "valid": result.valid,
        "strong": result.strong,
        "violations": list(result.violations),
        "unverified_components": list(result.unverified),
        "verified_lower": {k: str(v) for k, v in sorted(result.verified_lower.items())},
    }
    if result.valid:
        bound = decomposition_bound(spec)
        results["bound"] = _bound_payload(bound)
    report["results"] = results
    report["disclosures"] = {"ambient_mu": spec.ambient.mu, "pieces": len(spec.pieces)}
    return report, EXIT_OK if result.valid else EXIT_FALSIFIED


def _cmd_graft(args) -> tuple[dict, int]:
    base, bsrc = _graph_input(args.base)
    att, asrc = _graph_input(args.attachment)
    result = graft(base, att, args.port)
    if args.out:
        io.save_graph(args.out, result.graph)
    if args.decomposition:
        io.save_decomposition(args.decomposition, graft_decomposition(base, att, args.port))
    report = _base_report(
        "graft", {"base": bsrc, "attachment": asrc},
        {"port": args.port, "out": args.out, "decomposition": args.decomposition},
    )
    report["results"] = {
        "vertices": len(result.graph.vertices),
        "edges": len(result.graph.edges),
        "max_degree": result.graph.mu,
        "pieces": len(result.pieces),
    }
    return report, EXIT_OK


def _cmd_scan(args) -> tuple[dict, int]:
    windows = []
    inputs = {}
    for i, token in enumerate(args.infile):
        g, src = _graph_input(token)
        windows.append(g)
        inputs[f"window{i}"] = src
    lower = io.parse_fraction(args.lower) if args.lower else None
    rep = converse_scan(windows, max_size=args.max_size, budget=args.budget, ambient_lower=lower)
    report = _base_report(
        "scan", inputs,
        {"max_size": args.max_size, "budget": args.budget, "ambient_lower": args.lower},
    )
    report["results"] = {
        "values": [str(v) for v in rep.values],
        "nonincreasing": rep.nonincreasing,
        "decay": rep.decay,
        "floor": str(rep.floor),
        "lower_respected": rep.lower_respected,
        "witnesses": [list(w) for w in rep.witnesses],
    }
    return report, EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cheegerlab",
        description="Certified Cheeger bounds on graphs, trees and hyperbolic approximations.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--report", help="write the canonical JSON report to this path")
    common.add_argument("--seed", type=int, default=0, help="seed for any sampling (default 0)")
    common.add_argument(
        "--threads", type=int, default=1,
        help="worker count; results are independent of it",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_parser(name: str, help_text: str):
        return sub.add_parser(name, help=help_text, parents=[common])

    p = add_parser("cheeger", "brute-force interior Cheeger window minimum")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--max-size", type=int, default=None)
    p.add_argument("--budget", type=int, default=DEFAULT_SUBSET_BUDGET)
    p.set_defaults(handler=_cmd_cheeger)

    p = add_parser("certify", "function-based lower-bound certificate")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--function", required=True, help="JSON map vertex -> rational")
    p.set_defaults(handler=_cmd_certify)

    p = add_parser("delta", "sharp four-point hyperbolicity constant")
    p.add_argument("--in", dest="infile", required=True, help="graph/metric file or generator")
    p.add_argument("--mode", choices=["exhaustive", "sampled"], default="exhaustive")
    p.add_argument("--budget", type=int, default=DEFAULT_DELTA_BUDGET)
    p.add_argument("--samples", type=int, default=100_000)
    p.set_defaults(handler=_cmd_delta)

    p = add_parser("tree", "rooted-tree Cheeger analysis (K, C, bounds)")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--max-size", type=int, default=None)
    p.add_argument("--budget", type=int, default=DEFAULT_SUBSET_BUDGET)
    p.set_defaults(handler=_cmd_tree)

    p = add_parser("endspace", "export the end space of a rooted tree")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(handler=_cmd_endspace)

    p = add_parser("approx", "truncated hyperbolic approximation")
    p.add_argument("--in", dest="infile", required=True, help="metric file or generator")
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--k-max", dest="k_max", type=int, required=True)
    p.add_argument("--k0", type=int, default=None)
    p.add_argument("--s", type=int, default=1, help="relevel coarsening exponent")
    p.add_argument("--delta-cap", type=float, default=3.0)
    p.add_argument("--out", default=None)
    p.set_defaults(handler=_cmd_approx)

    p = add_parser("net", "epsilon-net graph of a metric space")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(handler=_cmd_net)

    p = add_parser("perfect", "uniform-perfectness check over a scale range")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--s", type=float, default=None, help="one-point constant S > 1")
    p.add_argument("--two-point-r", type=float, default=None, help="two-point constant R > 1")
    p.add_argument("--eps0", type=float, required=True)
    p.add_argument("--floor", type=float, default=None)
    p.add_argument("--grid", default=None, help="comma-separated extra scales")
    p.set_defaults(handler=_cmd_perfect)

    p = add_parser("decomp", "validate a decomposition and emit its bound")
    p.add_argument("--spec", required=True)
    p.set_defaults(handler=_cmd_decomp)

    p = add_parser("graft", "attach a copy of a graph to every base vertex")
    p.add_argument("--base", required=True)
    p.add_argument("--attachment", required=True)
    p.add_argument("--port", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--decomposition", default=None, help="also write a decomposition spec")
    p.set_defaults(handler=_cmd_graft)

    p = add_parser("scan", "interior-Cheeger scan across window families")
    p.add_argument("--in", dest="infile", action="append", required=True)
    p.add_argument("--max-size", type=int, default=None)
    p.add_argument("--budget", type=int, default=DEFAULT_SUBSET_BUDGET)
    p.add_argument("--lower", default=None, help="certified ambient lower bound (rational)")
    p.set_defaults(handler=_cmd_scan)

    return parser


def main(argv: list[str] | None = None) -> int:
    started = time.time()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report, code = args.handler(args)
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ConstructionError as exc:
        print(f"construction invariant falsified: {exc} (witness: {exc.witness})", file=sys.stderr)
        return EXIT_FALSIFIED
    except (
        InvalidInputError,
        InvalidSupportError,
        InvalidHorizonError,
        EmptyWindowError,
        FileNotFoundError,
        CheegerLabError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    _emit(report, args, started)
    return code


if __name__ == "__main__":
    sys.exit(main())
