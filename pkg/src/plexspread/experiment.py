"""Declarative experiment specs and the sweep runner behind the CLI.

An experiment is a TOML file with a [network] section, a [simulation] section
holding the parameter grid, and [[items]] tables defining seed/target word
sets with a group label. Items whose words are missing from the (optionally
LVC-pruned) network are dropped with a report, not an error. Grid cells are
independent immutable runs; output ordering follows grid index, never
completion order.
"""

import csv
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .dynamics import ALL_LAYERS, Seed, SimulationConfig, run
from .metrics import AGGREGATE, ActivationTrace, extract_trace, format_real
from .network import MultiplexNetwork, largest_viable_cluster, load_network
from .stats import DegenerateSamplesError, compare_groups, kendall_tau


@dataclass(frozen=True)
class ItemSpec:
    """One stimulus: labels to seed, one label to monitor, and a group tag."""

    item_id: str
    seeds: tuple[str, ...]
    target: str
    group: str
    frequency: float | None = None


@dataclass(frozen=True)
class ExperimentSpec:
    layer_files: tuple[tuple[str, str], ...]
    attribute_file: str | None
    use_lvc: bool
    horizon: int
    retentions: tuple[float, ...]
    couplings: tuple[float, ...]
    seed_modes: tuple[str, ...]
    items: tuple[ItemSpec, ...]
    decay: float = 0.0
    suppress: float = 0.0
    seed_amount: float = 1.0
    seed_split: bool = False
    weighted_split: bool = False
    measure_layers: tuple[str, ...] = ()


class SpecError(ValueError):
    """Raised when an experiment file cannot be resolved into a runnable spec."""


def _require(table: dict, key: str, where: str):
    if key not in table:
        raise SpecError(f"missing required key {key!r} in [{where}]")
    return table[key]


def load_experiment(path: str | Path, overrides: dict | None = None) -> ExperimentSpec:
    """Parse a TOML experiment file; override values win over file values."""
    path = Path(path)
    with open(path, "rb") as fh:
        doc = tomllib.load(fh)
    overrides = overrides or {}
    base = path.parent

    network = doc.get("network", {})
    raw_layers = _require(network, "layers", "network")
    layer_files = tuple((str(name), str(base / p)) for name, p in raw_layers)
    attribute_file = network.get("attributes")
    if attribute_file is not None:
        attribute_file = str(base / attribute_file)

    sim = doc.get("simulation", {})

    def pick(key, default=None, required=False):
        if key in overrides and overrides[key] is not None:
            return overrides[key]
        if key in sim:
            return sim[key]
        if required:
            raise SpecError(f"missing required key {key!r} in [simulation]")
        return default

    retentions = tuple(float(x) for x in pick("retention", required=True))
    couplings = tuple(float(x) for x in pick("coupling", default=()))
    seed_modes = tuple(str(x) for x in pick("seed_modes", required=True))
    if len(layer_files) >= 2 and not couplings:
        raise SpecError("coupling grid is required for multiplex networks")
    measure_layers = pick("measure_layers")
    if measure_layers is None:
        names = [name for name, _ in layer_files]
        measure_layers = tuple(names) + ((AGGREGATE,) if len(names) > 1 else ())
    else:
        measure_layers = tuple(str(x) for x in measure_layers)

    items = []
    for i, raw in enumerate(doc.get("items", [])):
        items.append(ItemSpec(
            item_id=str(raw.get("id", f"item{i}")),
            seeds=tuple(str(s) for s in _require(raw, "seeds", "items")),
            target=str(_require(raw, "target", "items")),
            group=str(raw.get("group", "all")),
            frequency=float(raw["frequency"]) if "frequency" in raw else None,
        ))
    if not items:
        raise SpecError("at least one [[items]] table is required")
    if not retentions or not seed_modes:
        raise SpecError("retention and seed_modes grids must be non-empty")

    return ExperimentSpec(
        layer_files=layer_files,
        attribute_file=attribute_file,
        use_lvc=bool(pick("lvc", default=network.get("lvc", False))),
        horizon=int(pick("horizon", required=True)),
        retentions=retentions,
        couplings=couplings,
        seed_modes=seed_modes,
        items=tuple(items),
        decay=float(pick("decay", default=0.0)),
        suppress=float(pick("suppress", default=0.0)),
        seed_amount=float(pick("seed_amount", default=1.0)),
        seed_split=bool(pick("seed_split", default=False)),
        weighted_split=bool(pick("weighted_split", default=False)),
        measure_layers=measure_layers,
    )


@dataclass(frozen=True)
class MetricsRow:
    item_id: str
    group: str
    seed_mode: str
    dx: float | None
    retention: float
    target: str
    layer: str
    alpha_m: float
    t_m: int
    frequency: float | None


@dataclass
class ExperimentRun:
    rows: list[MetricsRow]
    dropped: list[tuple[str, tuple[str, ...]]]
    items_total: int
    cells: int
    traces: dict[str, list[ActivationTrace]] = field(default_factory=dict)


def _cell_key(mode: str, dx: float | None, r: float, item_id: str) -> str:
    dx_part = "" if dx is None else f"_dx{format_real(dx)}"
    return f"{mode}{dx_part}_r{format_real(r)}__{item_id}"


def run_experiment(
    spec: ExperimentSpec,
    net: MultiplexNetwork | None = None,
    jobs: int = 1,
    keep_traces: bool = False,
) -> ExperimentRun:
    """Run every (seed-mode, coupling, retention) cell for every resolvable item."""
    if net is None:
        net = load_network(spec.layer_files, spec.attribute_file)
        if spec.use_lvc:
            net = largest_viable_cluster(net)

    layer_names = set(net.layer_names)
    for mode in spec.seed_modes:
        if mode != ALL_LAYERS and mode not in layer_names:
            raise SpecError(f"seed mode {mode!r} is not a layer of the network")
    for ml in spec.measure_layers:
        if ml != AGGREGATE and ml not in layer_names:
            raise SpecError(f"measure layer {ml!r} is not a layer of the network")

    resolvable = []
    dropped = []
    for item in spec.items:
        missing = tuple(
            lb for lb in (*item.seeds, item.target) if not net.has_label(lb)
        )
        if missing:
            dropped.append((item.item_id, missing))
        else:
            resolvable.append(item)

    couplings: tuple[float | None, ...]
    couplings = spec.couplings if len(net.layers) >= 2 else (None,)
    cells = [
        (mode, dx, r)
        for mode in spec.seed_modes
        for dx in couplings
        for r in spec.retentions
    ]

    def run_cell(task):
        mode, dx, r, item = task
        config = SimulationConfig(
            retention=r,
            horizon=spec.horizon,
            seeds=tuple(Seed(label=lb, layer=mode, amount=spec.seed_amount) for lb in item.seeds),
            coupling=dx,
            decay=spec.decay,
            suppress=spec.suppress,
            weighted_split=spec.weighted_split,
            seed_split=spec.seed_split,
        )
        result = run(net, config, record=[item.target])
        rows = []
        traces = []
        for ml in spec.measure_layers:
            trace = extract_trace(result, item.target, ml)
            traces.append(trace)
            rows.append(MetricsRow(
                item_id=item.item_id, group=item.group, seed_mode=mode,
                dx=dx, retention=r, target=item.target, layer=ml,
                alpha_m=trace.alpha_m, t_m=trace.t_m, frequency=item.frequency,
            ))
        return rows, traces

    tasks = [(mode, dx, r, item) for (mode, dx, r) in cells for item in resolvable]
    if jobs > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(run_cell, tasks))
    else:
        outcomes = [run_cell(t) for t in tasks]

    out = ExperimentRun(rows=[], dropped=dropped, items_total=len(spec.items), cells=len(cells))
    for task, (rows, traces) in zip(tasks, outcomes):
        out.rows.extend(rows)
        if keep_traces:
            mode, dx, r, item = task
            out.traces[_cell_key(mode, dx, r, item.item_id)] = traces
    return out


def write_run_csv(rows: Sequence[MetricsRow], path: str | Path) -> None:
    """Metrics CSV, one row per (item, cell, measure layer), grid order."""
    with_freq = any(row.frequency is not None for row in rows)
    header = "item,group,seed_mode,dx,r,target,layer,alpha_m,t_m"
    if with_freq:
        header += ",frequency"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(header + "\n")
        for row in rows:
            dx = "" if row.dx is None else format_real(row.dx)
            line = (
                f"{row.item_id},{row.group},{row.seed_mode},{dx},{format_real(row.retention)},"
                f"{row.target},{row.layer},{format_real(row.alpha_m)},{row.t_m}"
            )
            if with_freq:
                freq = "" if row.frequency is None else format_real(row.frequency)
                line += f",{freq}"
            fh.write(line + "\n")


def write_report(report: dict, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps(report, sort_keys=True, indent=2) + "\n")


@dataclass(frozen=True)
class CompareRow:
    dx: str
    groups: str
    measure: str
    retention: str
    value: float
    significant: bool | None  # None renders as an empty field


def compare_metrics_csv(
    path: str | Path,
    group_col: str = "group",
    measures: Sequence[str] = ("alpha_m", "t_m"),
    kendall_col: str | None = None,
) -> tuple[dict[tuple[str, str], list[CompareRow]], list[str]]:
    """Pairwise Cohen's d + Kruskal-Wallis per cell, split per (seed_mode, layer).

    Returns {(seed_mode, layer): rows} plus a list of degenerate-cell notes.
    Cells are keyed by the dx and retention columns; group pairs compare all
    level combinations. With kendall_col, per-group tau rows between each
    measure and that column are appended.
    """
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        records = list(reader)
        fields = reader.fieldnames or []
    if group_col not in fields:
        raise SpecError(f"grouping column {group_col!r} not in {path}")
    for m in measures:
        if m not in fields:
            raise SpecError(f"measure column {m!r} not in {path}")
    if kendall_col is not None and kendall_col not in fields:
        raise SpecError(f"kendall column {kendall_col!r} not in {path}")

    split_cols = [c for c in ("seed_mode", "layer") if c in fields]
    notes: list[str] = []
    tables: dict[tuple[str, str], list[CompareRow]] = {}

    def split_key(rec) -> tuple[str, str]:
        mode = rec.get("seed_mode", "") if "seed_mode" in fields else ""
        layer = rec.get("layer", "") if "layer" in fields else ""
        return (mode, layer)

    def cell_key(rec) -> tuple[str, str]:
        return (rec.get("dx", ""), rec.get("r", ""))

    partitions: dict[tuple[str, str], dict[tuple[str, str], list[dict]]] = {}
    for rec in records:
        partitions.setdefault(split_key(rec), {}).setdefault(cell_key(rec), []).append(rec)

    def numeric_sort(values: set[str]) -> list[str]:
        def key(v: str):
            try:
                return (0, float(v), v)
            except ValueError:
                return (1, 0.0, v)
        return sorted(values, key=key)

    for part in sorted(partitions):
        rows: list[CompareRow] = []
        cells = partitions[part]
        dx_values = numeric_sort({dx for dx, _ in cells})
        r_values = numeric_sort({r for _, r in cells})
        for dx in dx_values:
            for measure in measures:
                group_levels = sorted({
                    rec[group_col]
                    for (cdx, _), recs in cells.items() if cdx == dx for rec in recs
                })
                if len(group_levels) < 2:
                    notes.append(f"{part}: dx={dx}: fewer than 2 group levels")
                    continue
                pairs = [
                    (a, b)
                    for i, a in enumerate(group_levels)
                    for b in group_levels[i + 1:]
                ]
                for a, b in pairs:
                    for r in r_values:
                        recs = cells.get((dx, r), [])
                        sample_a = [float(rec[measure]) for rec in recs if rec[group_col] == a]
                        sample_b = [float(rec[measure]) for rec in recs if rec[group_col] == b]
                        if len(sample_a) < 2 or len(sample_b) < 2:
                            notes.append(
                                f"{part}: dx={dx} r={r} {measure} {a} vs {b}: group too small"
                            )
                            continue
                        try:
                            cmp = compare_groups(a, sample_a, b, sample_b)
                        except DegenerateSamplesError as exc:
                            notes.append(f"{part}: dx={dx} r={r} {measure} {a} vs {b}: {exc}")
                            continue
                        rows.append(CompareRow(
                            dx=dx, groups=f"{a} vs {b}", measure=measure,
                            retention=r, value=cmp.cohens_d, significant=cmp.significant,
                        ))
        if kendall_col is not None:
            for dx in dx_values:
                for measure in measures:
                    group_levels = sorted({
                        rec[group_col]
                        for (cdx, _), recs in cells.items() if cdx == dx for rec in recs
                    })
                    for g in group_levels:
                        for r in r_values:
                            recs = [
                                rec for rec in cells.get((dx, r), [])
                                if rec[group_col] == g and rec[kendall_col] != ""
                            ]
                            if len(recs) < 2:
                                notes.append(
                                    f"{part}: dx={dx} r={r} tau {measure} group {g}: too few rows"
                                )
                                continue
                            xs = [float(rec[measure]) for rec in recs]
                            ys = [float(rec[kendall_col]) for rec in recs]
                            try:
                                tau = kendall_tau(xs, ys)
                            except DegenerateSamplesError as exc:
                                notes.append(
                                    f"{part}: dx={dx} r={r} tau {measure} group {g}: {exc}"
                                )
                                continue
                            rows.append(CompareRow(
                                dx=dx, groups=g, measure=f"{measure}~{kendall_col}",
                                retention=r, value=tau, significant=None,
                            ))
        tables[part] = rows
    return tables, notes


def write_compare_csv(rows: Sequence[CompareRow], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("dx,groups,measure,R,value,significant\n")
        for row in rows:
            sig = "" if row.significant is None else ("true" if row.significant else "false")
            fh.write(
                f"{row.dx},{row.groups},{row.measure},{row.retention},"
                f"{format_real(row.value)},{sig}\n"
            )
