"""Peak-activation measures over recorded runs: maximum activation and its time.

A trace is one node's energy series over t = 0..horizon, read either from a
single named layer or from the AGGREGATE view (replica energies summed per
step before peak extraction). The peak time is the earliest index attaining
the maximum; the seed state at t = 0 is part of the series.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .dynamics import RunResult

AGGREGATE = "AGGREGATE"


class MissingTargetsError(KeyError):
    """Raised with the full list of requested labels that were not recorded."""

    def __init__(self, missing: Sequence[str]):
        self.missing = tuple(missing)
        super().__init__(f"targets not recorded: {', '.join(self.missing)}")


@dataclass(frozen=True)
class ActivationTrace:
    """One node's series with its peak: alpha_m = max, t_m = earliest argmax."""

    node: str
    layer: str
    series: np.ndarray
    alpha_m: float
    t_m: int


def _series(result: RunResult, node: str, layer_selector: str) -> np.ndarray:
    if node not in result.label_index:
        raise MissingTargetsError([node])
    if layer_selector == AGGREGATE:
        return result.data[:, :, result.label_index[node]].sum(axis=1)
    if layer_selector not in result.layer_names:
        raise KeyError(f"unknown layer {layer_selector!r}")
    return result.replica_series(node, layer_selector)


def extract_trace(result: RunResult, node: str, layer_selector: str = AGGREGATE) -> ActivationTrace:
    """Build the trace for one recorded node under the given layer selector."""
    series = _series(result, node, layer_selector)
    t_m = int(np.argmax(series))  # argmax returns the first index on ties
    return ActivationTrace(
        node=node,
        layer=layer_selector,
        series=series,
        alpha_m=float(series[t_m]),
        t_m=t_m,
    )


def batch_metrics(
    result: RunResult, targets: Sequence[str], layer_selector: str = AGGREGATE
) -> list[ActivationTrace]:
    """One trace per target, in input order; missing targets reported together."""
    if not targets:
        raise ValueError("targets must be non-empty")
    missing = [t for t in targets if t not in result.label_index]
    if missing:
        raise MissingTargetsError(missing)
    return [extract_trace(result, t, layer_selector) for t in targets]


def format_real(x: float) -> str:
    """Canonical decimal output with 12 significant digits."""
    return f"{x:.12g}"


def write_trace_csv(traces: Sequence[ActivationTrace], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("node,layer,t,energy\n")
        for trace in traces:
            for t, value in enumerate(trace.series):
                fh.write(f"{trace.node},{trace.layer},{t},{format_real(float(value))}\n")


def write_metrics_csv(traces: Sequence[ActivationTrace], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("node,layer,alpha_m,t_m\n")
        for trace in traces:
            fh.write(f"{trace.node},{trace.layer},{format_real(trace.alpha_m)},{trace.t_m}\n")
