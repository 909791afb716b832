"""Command-line interface: ``mopath <command> ...``.

Exit codes: 0 success, 1 usage error, 2 input/parse error, 3 infeasible
(unreachable) instance, 4 enumeration budget exhausted.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .enumeration import export_front, true_front
from .errors import BenchmarkError, GraphFormatError, InvalidConfig, MalformedName, Unreachable
from .evolve import AlgoConfig, run
from .evolve.algorithm import experiment
from .graph import (
    RoutingGraph,
    count_paths,
    graph_from_name,
    is_reachable,
    lattice_graph,
    load_graph,
)
from .instance import ELEVATION_KINDS, NEIGHBOURHOODS, OBSTACLE_KINDS, all_specs, build_world, parse_name
from .metrics import significance_table, table_csv, table_text
from .pareto import read_front_csv, write_front

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_UNREACHABLE, EXIT_BUDGET = 0, 1, 2, 3, 4

log = logging.getLogger("mopath")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _default_workers() -> int:
    return os.cpu_count() or 1


def _load_target(target: str, radius_ratio: float) -> RoutingGraph:
    """Instance name or path to a graph JSON file."""
    if os.path.isfile(target):
        try:
            return load_graph(target)
        except OSError as exc:
            raise GraphFormatError(str(exc)) from None
    return graph_from_name(target, radius_ratio)


def _load_reference(path: str | None, required: bool):
    if path is None:
        if required:
            raise UsageError("--reference is required")
        return None
    csv_path = path if os.path.isfile(path) else f"{path}.front.csv"
    try:
        rows = read_front_csv(csv_path)
    except (OSError, ValueError) as exc:
        raise GraphFormatError(f"cannot read reference front: {exc}") from None
    if not rows:
        raise GraphFormatError(f"reference front {csv_path} is empty")
    return rows


def _load_config(path: str | None) -> AlgoConfig:
    if path is None:
        return AlgoConfig()
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InvalidConfig(f"cannot read config: {exc}") from None
    cfg = AlgoConfig.from_json(text)
    if cfg.name is None:
        cfg = cfg.replace(name=Path(path).stem)
    return cfg


def _ensure_parent(basename: str) -> None:
    parent = os.path.dirname(basename)
    if parent:
        os.makedirs(parent, exist_ok=True)


# ---------------------------------------------------------------- commands


def cmd_info(args) -> int:
    spec = parse_name(args.name, args.radius_ratio)
    world = build_world(spec)
    graph = lattice_graph(world)
    print(f"instance: {spec.name}")
    print(f"obstacles: {spec.obstacle_kind}")
    print(f"size: {spec.size_x}x{spec.size_y}")
    print(f"elevation: {spec.elevation_kind}")
    print(f"neighbourhood: K{spec.neighbourhood_k}")
    print(f"backtracking: {'yes' if spec.backtracking else 'no'}")
    if spec.obstacle_kind == "LA":
        print(f"lake_radius_ratio: {spec.lake_radius_ratio}")
    print(f"nodes: {graph.node_count}")
    print(f"edges: {graph.edge_count}")
    if args.out:
        _ensure_parent(args.out)
        Path(args.out).write_text(world.to_json() + "\n", encoding="utf-8")
    if not is_reachable(graph):
        print("reachable: no (unreachable)")
        return EXIT_UNREACHABLE
    print("reachable: yes")
    if not spec.backtracking:
        print(f"path_count: {count_paths(graph)}")
    return EXIT_OK


def cmd_enumerate(args) -> int:
    out = args.out_basename or args.out
    if not out:
        raise UsageError("an output basename is required")
    graph = graph_from_name(args.name, args.radius_ratio)
    if not graph.directed and args.budget is None:
        raise UsageError("backtracking instances need an explicit --budget")
    report = true_front(graph, budget=args.budget, workers=args.workers)
    _ensure_parent(out)
    export_front(report, out, radius_ratio=args.radius_ratio)
    print(f"{report.name}: {report.paths_visited} paths, front size {len(report.archive)}")
    if report.aborted:
        print(f"budget of {args.budget} paths exhausted; partial front written", file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK


def _write_history(path: str, history) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["generation", "igd_plus"])
        for gen, value in enumerate(history):
            writer.writerow([gen, repr(float(value))])


def cmd_solve(args) -> int:
    cfg = _load_config(args.config)
    if args.seed is not None:
        cfg = cfg.replace(rng_seed=args.seed)
    graph = _load_target(args.target, args.radius_ratio)
    reference = _load_reference(args.reference, required=False)
    result = run(graph, cfg, reference, workers=args.workers)
    if not args.out:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(["f1", "f2", "f3", "f4", "f5"])
        for vec in result.final_nondominated.vectors:
            writer.writerow([repr(v) for v in vec])
        return EXIT_OK
    _ensure_parent(args.out)
    write_front(result.final_nondominated, args.out, labels=graph.labels)
    write_front(result.best_archive, f"{args.out}.archive", labels=graph.labels)
    if reference is not None:
        _write_history(f"{args.out}.igd_history.csv", result.igd_plus_history)
    meta = {
        "instance": graph.name,
        "config": cfg.to_dict(),
        "evaluations": result.evaluations,
        "final_front_size": len(result.final_nondominated),
        "archive_size": len(result.best_archive),
    }
    if reference is not None:
        meta["final_igd_plus"] = result.final_igd_plus
    with open(f"{args.out}.meta.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(meta, fh, indent=2)
        fh.write("\n")
    summary = f"{len(result.best_archive)} archive points, {result.evaluations} evaluations"
    if reference is not None:
        summary += f", IGD+ {result.final_igd_plus:.6g}"
    print(summary)
    return EXIT_OK


def cmd_compare(args) -> int:
    reference = _load_reference(args.reference, required=True)
    configs = [_load_config(p) for p in args.configs]
    if len(configs) < 2:
        raise UsageError("compare needs at least two config files")
    if args.seed is not None:
        configs = [c.replace(rng_seed=args.seed) for c in configs]
    graph = _load_target(args.target, args.radius_ratio)
    samples = experiment(graph, configs, runs=args.runs, reference_front=reference,
                         workers=args.workers)
    rows = significance_table(samples, alpha=args.alpha)
    label = (graph.name or "graph").replace("ASLETISMAC_", "")
    sys.stdout.write(table_text(rows, label))
    if args.out:
        _ensure_parent(args.out)
        Path(args.out).write_text(table_csv(rows, label), encoding="utf-8")
    return EXIT_OK


_OBJ_TOKENS = ("f1", "f2", "f3", "f4", "f5")


def cmd_plotdata(args) -> int:
    try:
        rows = read_front_csv(args.front)
    except (OSError, ValueError) as exc:
        raise GraphFormatError(f"cannot read front: {exc}") from None
    writer = csv.writer(sys.stdout, lineterminator="\n")
    F = np.asarray(rows, dtype=float).reshape(len(rows), -1)
    if args.mode == "parallel":
        lo = F.min(axis=0) if len(rows) else np.zeros(F.shape[1])
        span = (F.max(axis=0) - lo) if len(rows) else np.ones(F.shape[1])
        norm = np.divide(F - lo, span, out=np.zeros_like(F), where=span > 0)
        writer.writerow(["kind", *_OBJ_TOKENS[:F.shape[1]]])
        for row in norm:
            writer.writerow(["front", *(repr(float(v)) for v in row)])
        for k in range(F.shape[1] if len(rows) else 0):
            best = int(np.argmin(F[:, k]))
            writer.writerow([f"best_{_OBJ_TOKENS[k]}", *(repr(float(v)) for v in norm[best])])
        return EXIT_OK
    tokens = [t.strip() for t in args.mode.split(",")]
    if len(tokens) != 2 or any(t not in _OBJ_TOKENS[:F.shape[1]] for t in tokens):
        raise GraphFormatError(f"pair must look like 'f3,f2', got {args.mode!r}")
    cols = [_OBJ_TOKENS.index(t) for t in tokens]
    writer.writerow(tokens)
    for row in F:
        writer.writerow([repr(float(row[c])) for c in cols])
    return EXIT_OK


def _parse_sizes(text: str) -> list[int]:
    sizes: list[int] = []
    for part in text.split(","):
        part = part.strip()
        for sep in ("..", "-"):
            if sep in part:
                lo, hi = part.split(sep, 1)
                sizes.extend(range(int(lo), int(hi) + 1))
                break
        else:
            sizes.append(int(part))
    if not sizes or min(sizes) < 2:
        raise UsageError(f"bad size range {text!r}")
    return sizes


def _csv_choice(text: str, allowed) -> list:
    items = [t.strip() for t in text.split(",") if t.strip()]
    for t in items:
        if t not in [str(a) for a in allowed]:
            raise UsageError(f"unknown value {t!r}; choose from {','.join(map(str, allowed))}")
    return items


def _sweep_one(task):
    spec, out_dir, force = task
    base = os.path.join(out_dir, spec.name)
    if not force and os.path.exists(f"{base}.meta.json"):
        return spec.name, "exists", None
    graph = lattice_graph(build_world(spec))
    if not is_reachable(graph):
        return spec.name, "unreachable", None
    try:
        report = true_front(graph)
        export_front(report, base, radius_ratio=spec.lake_radius_ratio)
    except Exception as exc:  # noqa: BLE001 - reported per instance, batch continues
        return spec.name, "failed", repr(exc)
    return spec.name, "done", report.paths_visited


def cmd_sweep(args) -> int:
    sizes = _parse_sizes(args.sizes)
    obstacles = _csv_choice(args.obstacles, OBSTACLE_KINDS)
    elevations = _csv_choice(args.elevations, ELEVATION_KINDS)
    ks = [int(k) for k in _csv_choice(args.k, NEIGHBOURHOODS)]
    specs = list(all_specs(sizes, obstacles, elevations, ks, False, args.radius_ratio))
    os.makedirs(args.out, exist_ok=True)
    tasks = [(s, args.out, args.force) for s in specs]
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            results = list(pool.map(_sweep_one, tasks))
    else:
        results = [_sweep_one(t) for t in tasks]
    tally = {"done": 0, "exists": 0, "unreachable": 0, "failed": 0}
    for name, status, detail in results:
        tally[status] += 1
        if status == "unreachable":
            log.warning("skipped (unreachable): %s", name)
        elif status == "failed":
            log.error("failed: %s: %s", name, detail)
    print(f"attempted {len(results)}: {tally['done']} enumerated, {tally['exists']} already present, "
          f"{tally['unreachable']} skipped as unreachable, {tally['failed']} failed")
    if results and tally["failed"] == len(results):
        return EXIT_INPUT
    return EXIT_OK


# ---------------------------------------------------------------- wiring


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mopath", description="Many-objective grid pathfinding benchmark")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, workers=True):
        p.add_argument("--radius-ratio", type=float, default=0.25,
                       help="lake radius as a fraction of the x size (default 0.25)")
        if workers:
            p.add_argument("--workers", type=int, default=_default_workers(),
                           help="parallel workers (default: all cores)")

    p = sub.add_parser("info", help="describe an instance")
    p.add_argument("name")
    p.add_argument("--out", help="write the lattice world as JSON to this file")
    common(p, workers=False)
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("enumerate", help="exhaustive true front of an instance")
    p.add_argument("name")
    p.add_argument("out_basename", nargs="?")
    p.add_argument("--out", help="output basename (alternative to the positional)")
    p.add_argument("--budget", type=int, help="stop after this many complete paths")
    common(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("solve", help="one seeded solver run")
    p.add_argument("target", help="instance name or graph JSON file")
    p.add_argument("--config", help="AlgoConfig JSON file")
    p.add_argument("--out", help="output basename")
    p.add_argument("--reference", help="reference front CSV (enables IGD+ history)")
    p.add_argument("--seed", type=int, help="override the config's rng_seed")
    common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("compare", help="repeated runs of several configs with significance tests")
    p.add_argument("target", help="instance name or graph JSON file")
    p.add_argument("configs", nargs="+", help="AlgoConfig JSON files")
    p.add_argument("--runs", type=int, default=31)
    p.add_argument("--reference", help="reference front CSV")
    p.add_argument("--seed", type=int, help="base seed for every config")
    p.add_argument("--alpha", type=float, default=0.01)
    p.add_argument("--out", help="write the table as CSV here")
    common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("plot-data", help="plot-ready CSV from a front file")
    p.add_argument("front", help="front CSV")
    p.add_argument("mode", help="objective pair such as 'f3,f2', or 'parallel'")
    p.set_defaults(func=cmd_plotdata)

    p = sub.add_parser("sweep", help="true fronts over a grid of instances (no backtracking)")
    p.add_argument("--sizes", required=True, help="e.g. 4-6 or 4,6,8")
    p.add_argument("--obstacles", default=",".join(OBSTACLE_KINDS))
    p.add_argument("--elevations", default=",".join(ELEVATION_KINDS))
    p.add_argument("--k", default="2,3")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--force", action="store_true", help="recompute existing fronts")
    common(p)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"mopath: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Unreachable as exc:
        print(f"mopath: unreachable: {exc}", file=sys.stderr)
        return EXIT_UNREACHABLE
    except (MalformedName, GraphFormatError, InvalidConfig) as exc:
        print(f"mopath: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BenchmarkError as exc:
        print(f"mopath: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
