"""Command-line experiment runner.

Subcommands: run (grid sweep to metrics CSV), lvc (viable-cluster pruning),
spectrum (coupling sweep of supra-Laplacian lambda2), compare (group
statistics over a metrics CSV), stream (all-shortest-paths subgraph export).
All CSV output uses comma delimiters, UTF-8, LF line endings, and 12
significant digits for reals; reruns on identical inputs are byte-identical.
Warnings and dropped items go to a sidecar .report.json next to the output.
"""

import argparse
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import experiment as exp
from .metrics import format_real, write_trace_csv
from .network import (
    NetworkFormatError,
    largest_viable_cluster,
    load_network,
    mindset_stream,
    write_network,
)
from .spectral import dx_sweep

logger = logging.getLogger(__name__)


class _WarningCollector(logging.Handler):
    def __init__(self):
        super().__init__(level=logging.WARNING)
        self.messages: list[str] = []

    def emit(self, record):
        self.messages.append(record.getMessage())


def _parse_layer_args(pairs: list[str]) -> list[tuple[str, str]]:
    layers = []
    for pair in pairs:
        if "=" not in pair:
            raise ValueError(f"--layer expects NAME=PATH, got {pair!r}")
        name, path = pair.split("=", 1)
        layers.append((name, path))
    return layers


def _float_list(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _str_list(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def cmd_run(args, warnings: list[str]) -> int:
    overrides = {
        "horizon": args.horizon,
        "retention": _float_list(args.retention) if args.retention else None,
        "coupling": _float_list(args.coupling) if args.coupling else None,
        "seed_modes": _str_list(args.seed_modes) if args.seed_modes else None,
        "decay": args.decay,
        "suppress": args.suppress,
    }
    spec = exp.load_experiment(args.config, overrides)
    result = exp.run_experiment(spec, jobs=args.jobs, keep_traces=args.traces)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    exp.write_run_csv(result.rows, out_dir / "metrics.csv")
    if args.traces:
        trace_dir = out_dir / "traces"
        trace_dir.mkdir(exist_ok=True)
        for key in sorted(result.traces):
            write_trace_csv(result.traces[key], trace_dir / f"{key}.csv")
    for item_id, missing in result.dropped:
        logger.warning("item %r dropped: missing %s", item_id, ", ".join(missing))
    exp.write_report({
        "items_total": result.items_total,
        "items_run": result.items_total - len(result.dropped),
        "dropped": [
            {"id": item_id, "missing": list(missing)} for item_id, missing in result.dropped
        ],
        "cells": result.cells,
        "rows": len(result.rows),
        "warnings": warnings,
    }, out_dir / "report.json")
    return 0


def cmd_lvc(args, warnings: list[str]) -> int:
    net = load_network(_parse_layer_args(args.layer), args.attributes)
    pruned = largest_viable_cluster(net)
    out_dir = Path(args.out_dir)
    write_network(pruned, out_dir)
    report = {
        "nodes": pruned.n_nodes,
        "edges_per_layer": {layer.name: layer.edge_count for layer in pruned.layers},
        "warnings": warnings,
    }
    exp.write_report(report, out_dir / "report.json")
    print(json.dumps({"nodes": report["nodes"], "edges_per_layer": report["edges_per_layer"]},
                     sort_keys=True))
    return 0


def cmd_spectrum(args, warnings: list[str]) -> int:
    net = load_network(_parse_layer_args(args.layer))
    if args.dx_grid:
        grid = _float_list(args.dx_grid)
    elif args.dx_log:
        lo, hi, count = args.dx_log.split(",")
        grid = list(np.logspace(math.log10(float(lo)), math.log10(float(hi)), int(count)))
    else:
        raise ValueError("one of --dx-grid or --dx-log is required")
    reports = dx_sweep(net, grid, p1=args.p1, p2=args.p2)
    name1, name2 = net.layer_names
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("dx,lambda2_layer1,lambda2_layer2,lambda2_supra,lambda2_superposition,regime\n")
        for rep in reports:
            fh.write(
                f"{format_real(rep.dx)},{format_real(rep.lambda2_per_layer[name1])},"
                f"{format_real(rep.lambda2_per_layer[name2])},{format_real(rep.lambda2_supra)},"
                f"{format_real(rep.lambda2_superposition)},{rep.regime.value}\n"
            )
    return 0


def cmd_compare(args, warnings: list[str]) -> int:
    tables, notes = exp.compare_metrics_csv(
        args.metrics,
        group_col=args.group_col,
        measures=tuple(_str_list(args.measures)),
        kendall_col=args.kendall_col,
    )
    stem = Path(args.out)
    stem.parent.mkdir(parents=True, exist_ok=True)
    written = []
    for (mode, layer), rows in sorted(tables.items()):
        if mode == "" and layer == "":
            path = stem.with_suffix(".csv")
        else:
            path = stem.parent / f"{stem.name}__{mode or 'any'}__{layer or 'any'}.csv"
        exp.write_compare_csv(rows, path)
        written.append(str(path))
    exp.write_report(
        {"outputs": written, "degenerate_cells": notes, "warnings": warnings},
        stem.parent / f"{stem.name}.report.json",
    )
    return 0


def cmd_stream(args, warnings: list[str]) -> int:
    net = load_network(_parse_layer_args(args.layer), args.attributes)
    stream = mindset_stream(net, args.in_layer, args.source, args.target)
    prefix = Path(args.out)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    layer = net.layer(args.in_layer)
    with open(f"{prefix}.edges.tsv", "w", encoding="utf-8", newline="\n") as fh:
        for a, b in stream.edges:
            i, j = net.index(a), net.index(b)
            w = layer.weights[i][layer.neighbors[i].index(j)]
            fh.write(f"{a}\t{b}\t{w!r}\n")
    with open(f"{prefix}.nodes.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("node,valence\n")
        for node in stream.nodes:
            valence = stream.valence.get(node) or ""
            fh.write(f"{node},{valence}\n")
    if stream.connected:
        print(f"path_length={stream.path_length}")
    else:
        print("no_path")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plexspread",
        description="Spreading activation and diffusion-regime analysis on multiplex networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment grid and write metrics CSV")
    p_run.add_argument("--config", required=True, help="experiment TOML file")
    p_run.add_argument("--out-dir", required=True)
    p_run.add_argument("--traces", action="store_true", help="also write per-cell trace CSVs")
    p_run.add_argument("--jobs", type=int, default=1, help="concurrent grid cells")
    p_run.add_argument("--horizon", type=int, default=None)
    p_run.add_argument("--retention", default=None, help="comma-separated retention grid")
    p_run.add_argument("--coupling", default=None, help="comma-separated coupling grid")
    p_run.add_argument("--seed-modes", default=None, help="comma-separated seed layers / ALL")
    p_run.add_argument("--decay", type=float, default=None)
    p_run.add_argument("--suppress", type=float, default=None)
    p_run.set_defaults(func=cmd_run)

    p_lvc = sub.add_parser("lvc", help="extract the largest viable cluster")
    p_lvc.add_argument("--layer", action="append", required=True, metavar="NAME=PATH")
    p_lvc.add_argument("--attributes", default=None)
    p_lvc.add_argument("--out-dir", required=True)
    p_lvc.set_defaults(func=cmd_lvc)

    p_spec = sub.add_parser("spectrum", help="lambda2 sweep over the coupling grid")
    p_spec.add_argument("--layer", action="append", required=True, metavar="NAME=PATH")
    p_spec.add_argument("--dx-grid", default=None, help="comma-separated coupling values")
    p_spec.add_argument("--dx-log", default=None, metavar="LO,HI,N", help="log-spaced grid")
    p_spec.add_argument("--p1", type=float, default=1.0, help="layer-1 diffusion rate")
    p_spec.add_argument("--p2", type=float, default=1.0, help="layer-2 diffusion rate")
    p_spec.add_argument("--out", required=True)
    p_spec.set_defaults(func=cmd_spectrum)

    p_cmp = sub.add_parser("compare", help="group statistics over a metrics CSV")
    p_cmp.add_argument("--metrics", required=True, help="metrics CSV from the run command")
    p_cmp.add_argument("--group-col", default="group")
    p_cmp.add_argument("--measures", default="alpha_m,t_m")
    p_cmp.add_argument("--kendall-col", default=None)
    p_cmp.add_argument("--out", required=True, help="output stem; one CSV per (seed_mode, layer)")
    p_cmp.set_defaults(func=cmd_compare)

    p_str = sub.add_parser("stream", help="all-shortest-paths subgraph between two words")
    p_str.add_argument("--layer", action="append", required=True, metavar="NAME=PATH")
    p_str.add_argument("--attributes", default=None)
    p_str.add_argument("--in-layer", required=True, help="layer to search in")
    p_str.add_argument("--source", required=True)
    p_str.add_argument("--target", required=True)
    p_str.add_argument("--out", required=True, help="output prefix")
    p_str.set_defaults(func=cmd_stream)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    collector = _WarningCollector()
    pkg_logger = logging.getLogger("plexspread")
    pkg_logger.addHandler(collector)
    pkg_logger.setLevel(logging.WARNING)
    try:
        return args.func(args, collector.messages)
    except (ValueError, KeyError, OSError, NetworkFormatError) as exc:
        json.dump(
            {"error": type(exc).__name__, "message": str(exc)},
            sys.stderr,
        )
        sys.stderr.write("\n")
        return 1
    finally:
        pkg_logger.removeHandler(collector)


if __name__ == "__main__":
    sys.exit(main())
