"""Deterministic discrete-time spreading activation on single-layer and multiplex networks.

Each step a node keeps a retention fraction R of its energy and distributes
the rest: within its own layer, and (on multiplex networks) across layers
through its replicas, balanced by the coupling parameter via
p_par = 1/(1+coupling) and p_perp = coupling/(1+coupling). Inter-layer energy
passes through the replica in the same step and is immediately forwarded to
the replica's neighbors; the replica keeps none of it. After all transfers,
every entry is multiplied by (1-decay), then entries below the suppress
threshold are zeroed.

Updates are synchronous and bit-deterministic: senders are processed in
ascending node index, then ascending layer index; receivers accumulate in
that order.
"""

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .network import MultiplexNetwork

ALL_LAYERS = "ALL"


@dataclass(frozen=True)
class Seed:
    """Initial energy placed on one replica, or on every replica with ALL_LAYERS."""

    label: str
    layer: str = ALL_LAYERS
    amount: float = 1.0


@dataclass(frozen=True)
class SimulationConfig:
    """All free parameters of one run.

    coupling is required for multiplex networks and ignored on single-layer
    ones. With seed_split, an ALL_LAYERS seed divides its amount across the
    replicas instead of placing the full amount on each. With weighted_split,
    shares are proportional to edge weight / sender strength instead of
    1 / neighbor count.
    """

    retention: float
    horizon: int
    seeds: tuple[Seed, ...]
    coupling: float | None = None
    decay: float = 0.0
    suppress: float = 0.0
    weighted_split: bool = False
    seed_split: bool = False

    def __post_init__(self):
        object.__setattr__(self, "seeds", tuple(self.seeds))

    def validate(self, net: MultiplexNetwork) -> None:
        problems = []
        if not 0.0 <= self.retention <= 1.0:
            problems.append(f"retention must be in [0, 1], got {self.retention}")
        if not (isinstance(self.horizon, int) and self.horizon >= 1):
            problems.append(f"horizon must be an integer >= 1, got {self.horizon}")
        if not 0.0 <= self.decay <= 1.0:
            problems.append(f"decay must be in [0, 1], got {self.decay}")
        if not self.suppress >= 0.0:
            problems.append(f"suppress must be >= 0, got {self.suppress}")
        if len(net.layers) >= 2:
            if self.coupling is None:
                problems.append("coupling is required for multiplex networks")
            elif not (self.coupling > 0.0 and math.isfinite(self.coupling)):
                problems.append(f"coupling must be finite and > 0, got {self.coupling}")
        if not self.seeds:
            problems.append("at least one seed is required")
        layer_names = set(net.layer_names)
        for seed in self.seeds:
            if not net.has_label(seed.label):
                problems.append(f"seed label {seed.label!r} not in network")
            if seed.layer != ALL_LAYERS and seed.layer not in layer_names:
                problems.append(f"seed layer {seed.layer!r} not in network")
            if not (seed.amount > 0.0 and math.isfinite(seed.amount)):
                problems.append(f"seed amount must be finite and > 0, got {seed.amount}")
        if problems:
            raise ValueError("; ".join(problems))


@dataclass
class ActivationState:
    """Per-replica energy at one time step: energies[layer][node], all >= 0."""

    energies: list[list[float]]
    time: int

    def total(self) -> float:
        """Total energy, summed in ascending node index then layer index."""
        tot = 0.0
        n = len(self.energies[0])
        for u in range(n):
            for row in self.energies:
                tot += row[u]
        return tot


def seed_state(net: MultiplexNetwork, config: SimulationConfig) -> ActivationState:
    """State at t=0 with seed amounts placed; multiple seeds on a replica add."""
    config.validate(net)
    n = net.n_nodes
    n_layers = len(net.layers)
    energies = [[0.0] * n for _ in range(n_layers)]
    names = net.layer_names
    for seed in config.seeds:
        u = net.index(seed.label)
        if seed.layer == ALL_LAYERS:
            amount = seed.amount / n_layers if config.seed_split else seed.amount
            for row in energies:
                row[u] += amount
        else:
            energies[names.index(seed.layer)][u] += seed.amount
    return ActivationState(energies=energies, time=0)


def _apply_decay_suppress(rows: list[list[float]], decay: float, suppress: float) -> None:
    if decay != 0.0:
        keep = 1.0 - decay
        for row in rows:
            for i, x in enumerate(row):
                row[i] = x * keep
    if suppress != 0.0:
        for row in rows:
            for i, x in enumerate(row):
                if x < suppress:
                    row[i] = 0.0


def _step_single(net: MultiplexNetwork, energies: list[list[float]], config: SimulationConfig) -> list[list[float]]:
    layer = net.layers[0]
    nbrs = layer.neighbors
    wts = layer.weights
    R = config.retention
    weighted = config.weighted_split
    e = energies[0]
    n = len(e)
    new = [0.0] * n
    for u in range(n):
        eu = e[u]
        if eu == 0.0:
            continue
        sink = len(nbrs[u]) == 0 or (weighted and layer.strength(u) == 0.0)
        if sink:
            new[u] += eu  # nodes with nowhere to send keep everything
            continue
        new[u] += R * eu
        if weighted:
            st = layer.strength(u)
            for v, w in zip(nbrs[u], wts[u]):
                new[v] += eu * (1.0 - R) * (w / st)
        else:
            deg = len(nbrs[u])
            for v in nbrs[u]:
                new[v] += eu * (1.0 - R) / deg
    return [new]


def _step_multiplex(net: MultiplexNetwork, energies: list[list[float]], config: SimulationConfig) -> list[list[float]]:
    layers = net.layers
    n_layers = len(layers)
    n = net.n_nodes
    R = config.retention
    dx = config.coupling
    p_par = 1.0 / (1.0 + dx)
    p_perp = dx / (1.0 + dx)
    weighted = config.weighted_split
    new = [[0.0] * n for _ in range(n_layers)]
    for u in range(n):
        for li in range(n_layers):
            eu = energies[li][u]
            if eu == 0.0:
                continue
            layer = layers[li]
            new[li][u] += R * eu
            # intra-layer share, kept on the replica when it has no outlet
            nbrs = layer.neighbors[u]
            if weighted:
                st = layer.strength(u)
                if st == 0.0:
                    new[li][u] += eu * (1.0 - R) * p_par
                else:
                    for v, w in zip(nbrs, layer.weights[u]):
                        new[li][v] += eu * (1.0 - R) * p_par * (w / st)
            else:
                deg = len(nbrs)
                if deg == 0:
                    new[li][u] += eu * (1.0 - R) * p_par
                else:
                    for v in nbrs:
                        new[li][v] += eu * (1.0 - R) / deg * p_par
            # inter-layer share routes through each replica and is forwarded
            # within the same step; a replica with no outlet absorbs it
            for lj in range(n_layers):
                if lj == li:
                    continue
                routed = eu * (1.0 - R) * p_perp
                if n_layers > 2:
                    routed = routed / (n_layers - 1)
                other = layers[lj]
                onbrs = other.neighbors[u]
                if weighted:
                    ost = other.strength(u)
                    if ost == 0.0:
                        new[lj][u] += routed
                    else:
                        for v, w in zip(onbrs, other.weights[u]):
                            new[lj][v] += routed * (w / ost)
                else:
                    odeg = len(onbrs)
                    if odeg == 0:
                        new[lj][u] += routed
                    else:
                        for v in onbrs:
                            new[lj][v] += routed / odeg
    return new


def step_single_layer(net: MultiplexNetwork, state: ActivationState, config: SimulationConfig) -> ActivationState:
    """One synchronous update on a single-layer network."""
    if len(net.layers) != 1:
        raise ValueError("step_single_layer requires exactly one layer")
    new = _step_single(net, state.energies, config)
    _apply_decay_suppress(new, config.decay, config.suppress)
    return ActivationState(energies=new, time=state.time + 1)


def step_multiplex(net: MultiplexNetwork, state: ActivationState, config: SimulationConfig) -> ActivationState:
    """One synchronous update on a multiplex network (two or more layers)."""
    if len(net.layers) < 2:
        raise ValueError("step_multiplex requires at least 2 layers")
    new = _step_multiplex(net, state.energies, config)
    _apply_decay_suppress(new, config.decay, config.suppress)
    return ActivationState(energies=new, time=state.time + 1)


def advance(net: MultiplexNetwork, state: ActivationState, config: SimulationConfig) -> ActivationState:
    if len(net.layers) == 1:
        return step_single_layer(net, state, config)
    return step_multiplex(net, state, config)


@dataclass
class RunResult:
    """Recorded (time, layer, node) energy tensor for a completed run.

    data has shape (horizon+1, n_layers, n_recorded); labels holds the
    recorded labels in recording order.
    """

    layer_names: tuple[str, ...]
    labels: tuple[str, ...]
    data: np.ndarray
    config: SimulationConfig
    label_index: dict[str, int] = field(init=False)

    def __post_init__(self):
        self.label_index = {lb: i for i, lb in enumerate(self.labels)}

    @property
    def horizon(self) -> int:
        return self.data.shape[0] - 1

    def replica_series(self, label: str, layer_name: str) -> np.ndarray:
        if label not in self.label_index:
            raise KeyError(f"label {label!r} was not recorded")
        return self.data[:, self.layer_names.index(layer_name), self.label_index[label]]


def run(
    net: MultiplexNetwork,
    config: SimulationConfig,
    record: Sequence[str] | None = None,
) -> RunResult:
    """Iterate the appropriate step horizon times from the seeded state.

    record selects the labels whose series are kept (default: all, in registry
    order). The result is bit-identical across reruns on equal inputs.
    """
    config.validate(net)
    if record is None:
        rec_labels = net.labels
        rec_idx = list(range(net.n_nodes))
    else:
        rec_labels = tuple(record)
        rec_idx = [net.index(lb) for lb in rec_labels]
    n_layers = len(net.layers)
    data = np.zeros((config.horizon + 1, n_layers, len(rec_idx)), dtype=np.float64)
    state = seed_state(net, config)
    for li in range(n_layers):
        row = state.energies[li]
        data[0, li, :] = [row[i] for i in rec_idx]
    for _ in range(config.horizon):
        state = advance(net, state, config)
        for li in range(n_layers):
            row = state.energies[li]
            data[state.time, li, :] = [row[i] for i in rec_idx]
    return RunResult(layer_names=net.layer_names, labels=rec_labels, data=data, config=config)
