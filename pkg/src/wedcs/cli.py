"""Command-line front end: gen / build / stream / verify.

Exit codes: 0 success, 1 guarantee-check failure, 2 input error.
Verbosity comes from the EDCS_LOG environment variable (debug/info/...).
All randomness flows from explicit --seeds values; `stream` refuses to run
without them so results always replay.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import csv
import json
import logging
import os
import sys
from fractions import Fraction

from .edcs import EdcsParams, build_wb_edcs, parameters_for, validate
from .generators import GenSpec, multicopy_instance, random_instance, tight_instance
from .graph import Capacities, MultiGraph, Subgraph
from .graph_io import GraphFormatError, match_subgraph_edges, read_graph, write_graph
from .matching import (
    DEFAULT_ORACLE_BUDGET,
    OracleBudgetExceeded,
    max_weight_b_matching_exact,
)
from .streaming import file_order_stream, make_stream, run_with_fallbacks

log = logging.getLogger("wedcs")

EXIT_OK = 0
EXIT_GUARANTEE = 1
EXIT_INPUT = 2


class InputError(Exception):
    pass


def _configure_logging() -> None:
    level = os.environ.get("EDCS_LOG", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")


def _params_from_args(args, graph_W: int) -> EdcsParams:
    W = graph_W
    if getattr(args, "W", None) is not None:
        if args.W < graph_W:
            raise InputError(f"--W {args.W} is below the graph's weight cap {graph_W}")
        W = args.W
    if getattr(args, "theorem_params", False):
        if args.epsilon is None:
            raise InputError("--theorem-params requires --epsilon")
        return parameters_for(args.epsilon, W, mode="theorem")
    if args.beta is None:
        raise InputError("give --beta (with optional --beta-minus) or --theorem-params")
    beta_minus = args.beta_minus if args.beta_minus is not None else args.beta - 2
    epsilon = Fraction(args.epsilon) if args.epsilon is not None else None
    try:
        return EdcsParams(W=W, beta=args.beta, beta_minus=beta_minus, epsilon=epsilon)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _load_graph(path: str) -> tuple[MultiGraph, Capacities]:
    try:
        return read_graph(path)
    except (OSError, GraphFormatError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _add_param_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--epsilon", help="approximation slack, e.g. 0.1 or 1/10")
    p.add_argument("--W", type=int,
                   help="weight cap for parameter derivation (defaults to the graph's)")
    p.add_argument("--beta", type=int, help="practical-mode beta")
    p.add_argument("--beta-minus", type=int, help="defaults to beta - 2")
    p.add_argument("--theorem-params", action="store_true",
                   help="derive (beta, beta_minus) from --epsilon and the weight cap")


def cmd_gen(args) -> int:
    try:
        with open(args.spec, "r", encoding="utf-8") as fh:
            spec = GenSpec.from_json_dict(json.load(fh))
    except (OSError, ValueError, TypeError) as exc:
        raise InputError(f"{args.spec}: {exc}") from exc

    reference = None
    if spec.kind == "random":
        graph, caps = random_instance(spec)
    elif spec.kind == "tight":
        inst = tight_instance(k=spec.k, W=spec.W, beta_minus=spec.beta_minus)
        graph, caps, reference = inst.graph, inst.capacities, inst.edcs
    else:
        inst = multicopy_instance(k=spec.k or 1, W=spec.W)
        graph, caps, reference = inst.graph, inst.capacities, inst.union_edcs
    write_graph(args.out, graph, caps)
    log.info("wrote %s (%s)", args.out, graph)
    if args.ref_out:
        if reference is None:
            raise InputError("--ref-out only applies to tight/multicopy specs")
        restricted, _ = graph.restrict(reference.members)
        write_graph(args.ref_out, restricted, caps)
    return EXIT_OK


def cmd_build(args) -> int:
    graph, caps = _load_graph(args.graph)
    params = _params_from_args(args, graph.W)
    try:
        H, trace = build_wb_edcs(graph, caps, params)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    report = validate(graph, caps, H, params)
    if args.out:
        restricted, _ = graph.restrict(H.members)
        write_graph(args.out, restricted, caps)
    payload = {
        "params": {"W": params.W, "beta": params.beta, "beta_minus": params.beta_minus},
        "edges_kept": len(H),
        "build": trace.to_json_dict(),
        "validator": report.to_json_dict(),
    }
    _emit_json(payload, args.report)
    return EXIT_OK if report.is_clean else EXIT_GUARANTEE


def cmd_verify(args) -> int:
    graph, caps = _load_graph(args.graph)
    try:
        sub_graph, _ = read_graph(args.subgraph)
    except (OSError, GraphFormatError) as exc:
        raise InputError(f"{args.subgraph}: {exc}") from exc
    try:
        member_ids = match_subgraph_edges(graph, sub_graph)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    params = _params_from_args(args, graph.W)
    report = validate(graph, caps, Subgraph(graph, member_ids), params)
    _emit_json(report.to_json_dict(), args.report)
    return EXIT_OK if report.is_clean else EXIT_GUARANTEE


def _stream_one(graph: MultiGraph, caps: Capacities, params: EdcsParams,
                epsilon: str, seed, variant: int, budget: int) -> dict:
    stream = file_order_stream(graph) if seed == "as-is" else make_stream(graph, int(seed))
    result = run_with_fallbacks(stream, caps, params, epsilon,
                                variant=variant, oracle_budget=budget)
    record = result.stats.to_json_dict()
    record["matching"] = result.matching.to_json_dict(graph)
    return record


def _worker(job) -> dict:
    graph_path, params_fields, epsilon, seed, variant, budget = job
    graph, caps = read_graph(graph_path)
    params = EdcsParams(**params_fields)
    return _stream_one(graph, caps, params, epsilon, seed, variant, budget)


def cmd_stream(args) -> int:
    graph, caps = _load_graph(args.graph)
    params = _params_from_args(args, graph.W)
    if args.epsilon is None:
        raise InputError("stream requires --epsilon")
    seeds = _parse_seeds(args.seeds)

    try:
        oracle = max_weight_b_matching_exact(graph, caps, args.oracle_budget)
        oracle_weight = oracle.weight
    except OracleBudgetExceeded:
        oracle_weight = None
        log.info("exact oracle infeasible for %s; ratios omitted", args.graph)

    jobs = [(args.graph, _params_fields(params), args.epsilon, s, args.variant,
             args.oracle_budget) for s in seeds]
    if args.jobs > 1 and len(jobs) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=args.jobs) as pool:
            runs = list(pool.map(_worker, jobs))
    else:
        runs = [_stream_one(graph, caps, params, args.epsilon, s, args.variant,
                            args.oracle_budget) for s in seeds]

    eps = Fraction(args.epsilon)
    threshold = 1.0 / float(2 - Fraction(1, 2 * params.W) + eps)
    ratios = []
    for run in runs:
        if oracle_weight is None:
            run["ratio"] = None
        elif oracle_weight == 0:
            run["ratio"] = 1.0
        else:
            run["ratio"] = run["result_weight"] / oracle_weight
        if run["ratio"] is not None:
            ratios.append(run["ratio"])
    report = {
        "graph": args.graph,
        "params": {"W": params.W, "beta": params.beta, "beta_minus": params.beta_minus},
        "epsilon": args.epsilon,
        "variant": args.variant,
        "oracle_weight": oracle_weight,
        "ratio_threshold": threshold,
        "runs": runs,
        "aggregate": {
            "ratio_min": min(ratios) if ratios else None,
            "ratio_mean": sum(ratios) / len(ratios) if ratios else None,
            "below_threshold": sum(1 for r in ratios if r < threshold),
            "peak_stored_edges": [run["peak_stored_edges"] for run in runs],
        },
    }
    if args.out:
        with open(args.out + ".json", "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
        with open(args.out + ".csv", "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["seed", "ratio", "peak_memory", "phase1_edges",
                             "underfull_collected", "fallback", "extraction"])
            for seed, run in zip(seeds, runs):
                writer.writerow([
                    seed,
                    "" if run["ratio"] is None else repr(run["ratio"]),
                    run["peak_stored_edges"],
                    run["phase1_edges_consumed"],
                    run["underfull_collected"],
                    run["fallback_used"],
                    run["extraction"],
                ])
    else:
        _emit_json(report, None)
    if args.fail_below is not None and any(r < args.fail_below for r in ratios):
        return EXIT_GUARANTEE
    return EXIT_OK


def _params_fields(params: EdcsParams) -> dict:
    return {"W": params.W, "beta": params.beta, "beta_minus": params.beta_minus}


def _parse_seeds(spec: str) -> list:
    if spec == "as-is":
        return ["as-is"]
    seeds: list[int] = []
    for chunk in spec.split(","):
        chunk = chunk.strip()
        if "-" in chunk and not chunk.startswith("-"):
            lo, hi = chunk.split("-", 1)
            seeds.extend(range(int(lo), int(hi) + 1))
        else:
            seeds.append(int(chunk))
    if not seeds:
        raise InputError("empty seed list")
    return seeds


def _emit_json(payload: dict, path: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wedcs",
        description="Degree-constrained sparsifiers and streaming for weighted b-matching")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate an instance from a JSON spec")
    p.add_argument("--spec", required=True, help="JSON GenSpec file")
    p.add_argument("--out", required=True, help="graph file to write")
    p.add_argument("--ref-out", help="write the reference sparsifier (tight/multicopy)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("build", help="build a sparsifier offline")
    p.add_argument("graph")
    _add_param_flags(p)
    p.add_argument("--out", help="write the sparsifier as a graph file")
    p.add_argument("--report", help="write the JSON report here instead of stdout")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify", help="validate a sparsifier against its graph")
    p.add_argument("graph")
    p.add_argument("subgraph")
    _add_param_flags(p)
    p.add_argument("--report", help="write the JSON report here instead of stdout")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("stream", help="run seeded random-order stream trials")
    p.add_argument("graph")
    _add_param_flags(p)
    p.add_argument("--seeds", required=True,
                   help="e.g. '7', '0-99', '1,5,9', or 'as-is' for file order")
    p.add_argument("--variant", type=int, choices=(1, 3), default=1,
                   help="3 = replacement rule for raw-multiplicity streams")
    p.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    p.add_argument("--oracle-budget", type=int, default=DEFAULT_ORACLE_BUDGET)
    p.add_argument("--out", help="prefix for <out>.json and <out>.csv")
    p.add_argument("--fail-below", type=float,
                   help="exit 1 when any ratio falls below this value")
    p.set_defaults(func=cmd_stream)
    return parser


def main(argv: list[str] | None = None) -> int:
    _configure_logging()
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
