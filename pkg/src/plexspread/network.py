"""Immutable multiplex network model: ingestion, viability pruning, path subgraphs.

A multiplex network is a set of undirected edge layers over one shared node
registry. Every label exists in every layer (possibly with no edges there),
so each node has one replica per layer.
"""

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

logger = logging.getLogger(__name__)

VALENCE_VALUES = ("positive", "negative", "neutral")


class NetworkFormatError(ValueError):
    """Raised for malformed layer or attribute files (message carries file:line)."""


@dataclass(frozen=True)
class Layer:
    """One undirected edge layer over the shared node registry.

    Neighbor lists are index-sorted tuples; ``weights[u][k]`` is the weight of
    the edge to ``neighbors[u][k]``. No self-loops, no duplicates, weights >= 0.
    """

    name: str
    neighbors: tuple[tuple[int, ...], ...]
    weights: tuple[tuple[float, ...], ...]

    @property
    def edge_count(self) -> int:
        return sum(len(nb) for nb in self.neighbors) // 2

    def degree(self, index: int) -> int:
        return len(self.neighbors[index])

    def strength(self, index: int) -> float:
        return sum(self.weights[index])

    def edges(self) -> Iterable[tuple[int, int, float]]:
        """Yield (i, j, weight) with i < j, ascending."""
        for i, nbrs in enumerate(self.neighbors):
            for j, w in zip(nbrs, self.weights[i]):
                if i < j:
                    yield i, j, w


@dataclass(frozen=True)
class MultiplexNetwork:
    """Shared node registry plus an ordered tuple of layers.

    Immutable after construction; safe to share across concurrent runs.
    Labels are lexicographically sorted, so index order == label order.
    """

    labels: tuple[str, ...]
    layers: tuple[Layer, ...]
    attributes: Mapping[str, Mapping[str, object]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "_index", {lb: i for i, lb in enumerate(self.labels)})

    @property
    def n_nodes(self) -> int:
        return len(self.labels)

    @property
    def layer_names(self) -> tuple[str, ...]:
        return tuple(layer.name for layer in self.layers)

    def index(self, label: str) -> int:
        return self._index[label]

    def has_label(self, label: str) -> bool:
        return label in self._index

    def layer(self, name: str) -> Layer:
        for layer in self.layers:
            if layer.name == name:
                return layer
        raise KeyError(f"unknown layer {name!r}")

    def degree(self, layer_name: str, label: str, weighted: bool = False) -> float:
        """Neighbor count in the layer, or strength (sum of weights) if weighted."""
        layer = self.layer(layer_name)
        idx = self.index(label)
        return layer.strength(idx) if weighted else layer.degree(idx)

    def neighbors(self, layer_name: str, label: str) -> frozenset[str]:
        layer = self.layer(layer_name)
        idx = self.index(label)
        return frozenset(self.labels[j] for j in layer.neighbors[idx])


def build_network(
    layer_edges: Sequence[tuple[str, Iterable[tuple[str, str, float]]]],
    attributes: Mapping[str, Mapping[str, object]] | None = None,
) -> MultiplexNetwork:
    """Assemble a network from in-memory per-layer edge lists.

    The node registry is the union of endpoint labels across all layers.
    Duplicate edges with equal weight collapse; contradictory weights raise.
    """
    if not layer_edges:
        raise ValueError("at least one layer is required")
    names = [name for name, _ in layer_edges]
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate layer names in {names}")

    per_layer: list[dict[tuple[str, str], float]] = []
    label_set: set[str] = set()
    for name, edges in layer_edges:
        seen: dict[tuple[str, str], float] = {}
        for a, b, w in edges:
            if a == b:
                raise ValueError(f"layer {name!r}: self-loop on {a!r}")
            if not (w >= 0.0 and math.isfinite(w)):
                raise ValueError(f"layer {name!r}: bad weight {w!r} on {a!r}--{b!r}")
            key = (a, b) if a < b else (b, a)
            if key in seen and seen[key] != w:
                raise ValueError(
                    f"layer {name!r}: contradictory weights {seen[key]!r} vs {w!r} for edge {key}"
                )
            seen[key] = w
            label_set.add(a)
            label_set.add(b)
        per_layer.append(seen)

    # the registry is derived from edge endpoints; attribute-only labels warn below
    labels = tuple(sorted(label_set))
    index = {lb: i for i, lb in enumerate(labels)}

    layers = []
    for (name, _), edge_map in zip(layer_edges, per_layer):
        adj: list[list[tuple[int, float]]] = [[] for _ in labels]
        for (a, b), w in edge_map.items():
            i, j = index[a], index[b]
            adj[i].append((j, w))
            adj[j].append((i, w))
        nbrs = tuple(tuple(j for j, _ in sorted(pairs)) for pairs in adj)
        wts = tuple(tuple(w for _, w in sorted(pairs)) for pairs in adj)
        layers.append(Layer(name=name, neighbors=nbrs, weights=wts))

    attrs: dict[str, dict[str, object]] = {}
    if attributes:
        for label, kv in attributes.items():
            if label not in index:
                logger.warning("attributes for unknown label %r ignored", label)
                continue
            attrs[label] = dict(kv)
    return MultiplexNetwork(labels=labels, layers=tuple(layers), attributes=attrs)


def _parse_layer_file(name: str, path: Path) -> list[tuple[str, str, float]]:
    edges = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n").rstrip("\r")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) not in (2, 3):
                raise NetworkFormatError(
                    f"{path}:{lineno}: expected 'source<TAB>target[<TAB>weight]', got {len(fields)} fields"
                )
            a, b = fields[0], fields[1]
            if not a or not b:
                raise NetworkFormatError(f"{path}:{lineno}: empty node label")
            if a == b:
                raise NetworkFormatError(f"{path}:{lineno}: self-loop on {a!r}")
            w = 1.0
            if len(fields) == 3:
                try:
                    w = float(fields[2])
                except ValueError:
                    raise NetworkFormatError(f"{path}:{lineno}: bad weight {fields[2]!r}") from None
                if not math.isfinite(w) or w < 0.0:
                    raise NetworkFormatError(f"{path}:{lineno}: weight must be finite and >= 0")
            edges.append((a, b, w))
    return edges


def _parse_attribute_file(path: Path, known: set[str]) -> dict[str, dict[str, object]]:
    attrs: dict[str, dict[str, object]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n").rstrip("\r")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise NetworkFormatError(
                    f"{path}:{lineno}: expected 'label<TAB>key<TAB>value', got {len(fields)} fields"
                )
            label, key, value = fields
            if label not in known:
                logger.warning("%s:%d: attribute row for unknown label %r skipped", path, lineno, label)
                continue
            parsed: object = value
            if key == "valence":
                if value not in VALENCE_VALUES:
                    raise NetworkFormatError(
                        f"{path}:{lineno}: valence must be one of {VALENCE_VALUES}, got {value!r}"
                    )
            elif key == "frequency":
                try:
                    parsed = float(value)
                except ValueError:
                    raise NetworkFormatError(f"{path}:{lineno}: bad frequency {value!r}") from None
                if not math.isfinite(parsed) or parsed < 0.0:
                    raise NetworkFormatError(f"{path}:{lineno}: frequency must be finite and >= 0")
            attrs.setdefault(label, {})[key] = parsed
    return attrs


def load_network(
    layer_files: Sequence[tuple[str, str | Path]],
    attribute_file: str | Path | None = None,
) -> MultiplexNetwork:
    """Load a multiplex network from per-layer TSV edge lists.

    Layer file format: one edge per line, ``source<TAB>target[<TAB>weight]``;
    lines starting with ``#`` and blank lines are ignored. The node registry is
    the union of labels across layers. Attribute file rows are
    ``label<TAB>key<TAB>value``; rows for unknown labels log a warning.
    """
    try:
        parsed = [(name, _parse_layer_file(name, Path(p))) for name, p in layer_files]
    except NetworkFormatError:
        raise
    net = build_network(parsed)
    if attribute_file is not None:
        attrs = _parse_attribute_file(Path(attribute_file), set(net.labels))
        net = MultiplexNetwork(labels=net.labels, layers=net.layers, attributes=attrs)
    return net


def write_network(net: MultiplexNetwork, out_dir: str | Path) -> dict[str, object]:
    """Write one TSV per layer (and attributes.tsv when present) into out_dir.

    Weights are serialized with repr() so load(write(net)) reproduces them
    exactly. Nodes isolated in every layer are not representable in the edge
    list format and would be lost.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    layer_paths: list[tuple[str, str]] = []
    for layer in net.layers:
        path = out / f"{layer.name}.tsv"
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for i, j, w in layer.edges():
                fh.write(f"{net.labels[i]}\t{net.labels[j]}\t{w!r}\n")
        layer_paths.append((layer.name, str(path)))
    result: dict[str, object] = {"layers": layer_paths, "attributes": None}
    if net.attributes:
        apath = out / "attributes.tsv"
        with open(apath, "w", encoding="utf-8", newline="\n") as fh:
            for label in sorted(net.attributes):
                for key in sorted(net.attributes[label]):
                    value = net.attributes[label][key]
                    text = repr(value) if isinstance(value, float) else str(value)
                    fh.write(f"{label}\t{key}\t{text}\n")
        result["attributes"] = str(apath)
    return result


def induced_subnetwork(net: MultiplexNetwork, keep_labels: Iterable[str]) -> MultiplexNetwork:
    """Restrict the network to the given labels, re-indexing the registry."""
    keep = sorted(set(keep_labels))
    for label in keep:
        net.index(label)  # KeyError on unknown labels
    layer_edges = []
    keep_set = set(keep)
    for layer in net.layers:
        edges = [
            (net.labels[i], net.labels[j], w)
            for i, j, w in layer.edges()
            if net.labels[i] in keep_set and net.labels[j] in keep_set
        ]
        layer_edges.append((layer.name, edges))
    # build_network derives the registry from edges; re-add edge-free kept nodes
    labels = tuple(keep)
    index = {lb: i for i, lb in enumerate(labels)}
    layers = []
    for name, edges in layer_edges:
        adj: list[list[tuple[int, float]]] = [[] for _ in labels]
        for a, b, w in edges:
            i, j = index[a], index[b]
            adj[i].append((j, w))
            adj[j].append((i, w))
        nbrs = tuple(tuple(j for j, _ in sorted(pairs)) for pairs in adj)
        wts = tuple(tuple(w for _, w in sorted(pairs)) for pairs in adj)
        layers.append(Layer(name=name, neighbors=nbrs, weights=wts))
    attrs = {lb: dict(kv) for lb, kv in net.attributes.items() if lb in keep_set}
    return MultiplexNetwork(labels=labels, layers=tuple(layers), attributes=attrs)


def _component_within(layer: Layer, start: int, allowed: set[int]) -> set[int]:
    """Connected component of start in the layer restricted to allowed nodes."""
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for u in frontier:
            for v in layer.neighbors[u]:
                if v in allowed and v not in seen:
                    seen.add(v)
                    nxt.append(v)
        frontier = nxt
    return seen


def _viable_cluster_containing(net: MultiplexNetwork, seed: int, start: set[int]) -> set[int]:
    """Maximal node set containing seed that is connected within every layer.

    Iterated pruning: repeatedly replace the candidate set by the component of
    the seed within each layer restricted to it. The fixed point contains every
    viable cluster through the seed, so it is the unique maximal one.
    """
    current = set(start)
    changed = True
    while changed:
        changed = False
        for layer in net.layers:
            comp = _component_within(layer, seed, current)
            if len(comp) != len(current):
                current = comp
                changed = True
    return current


def largest_viable_cluster(net: MultiplexNetwork) -> MultiplexNetwork:
    """Largest node set mutually connected within every layer restricted to it.

    Ties on size break by lexicographically smallest label set. Clusters must
    have at least two nodes; when none exists the empty network is returned.
    """
    if len(net.layers) < 2:
        raise ValueError("viable-cluster pruning needs at least 2 layers")
    n = net.n_nodes
    # nodes lacking an edge in some layer can never sit in a >=2 viable cluster
    eligible = {
        u for u in range(n) if all(layer.degree(u) > 0 for layer in net.layers)
    }
    # per-layer components over the eligible set; any viable cluster through u
    # lies inside the intersection of u's components, so seeding the pruning
    # from that intersection is sound and keeps island nodes cheap
    comp_of: list[dict[int, int]] = []
    comp_members: list[list[list[int]]] = []
    for layer in net.layers:
        ids: dict[int, int] = {}
        members: list[list[int]] = []
        for u in sorted(eligible):
            if u in ids:
                continue
            comp = _component_within(layer, u, eligible)
            for v in comp:
                ids[v] = len(members)
            members.append(sorted(comp))
        comp_of.append(ids)
        comp_members.append(members)

    best: tuple[str, ...] = ()
    assigned: set[int] = set()
    for u in range(n):
        if u not in eligible or u in assigned:
            continue
        smallest = min(range(len(net.layers)), key=lambda k: len(comp_members[k][comp_of[k][u]]))
        start = {
            v for v in comp_members[smallest][comp_of[smallest][u]]
            if all(comp_of[k][v] == comp_of[k][u] for k in range(len(net.layers)))
        }
        cluster = _viable_cluster_containing(net, u, start)
        assigned.update(cluster)
        if len(cluster) < 2:
            continue
        labels = tuple(sorted(net.labels[i] for i in cluster))
        if len(labels) > len(best) or (len(labels) == len(best) and labels < best):
            best = labels
    return induced_subnetwork(net, best)


@dataclass(frozen=True)
class MindsetStream:
    """Union of all shortest paths between two labels within one layer.

    path_length is the hop count, or math.inf when source and target are
    disconnected (then nodes and edges are empty).
    """

    source: str
    target: str
    layer: str
    path_length: int | float
    nodes: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]
    valence: Mapping[str, str | None] = field(default_factory=dict)

    @property
    def connected(self) -> bool:
        return self.path_length != math.inf


def _bfs_distances(layer: Layer, start: int) -> dict[int, int]:
    dist = {start: 0}
    frontier = [start]
    d = 0
    while frontier:
        d += 1
        nxt = []
        for u in frontier:
            for v in layer.neighbors[u]:
                if v not in dist:
                    dist[v] = d
                    nxt.append(v)
        frontier = nxt
    return dist


def mindset_stream(net: MultiplexNetwork, layer_name: str, source: str, target: str) -> MindsetStream:
    """Extract the subgraph spanned by all shortest source-target paths.

    A node u belongs iff dist(source,u) + dist(u,target) equals the shortest
    path length; an edge (u,v) belongs iff it advances some shortest path.
    Node valence attributes are carried along when present.
    """
    if source == target:
        raise ValueError("source and target must differ")
    layer = net.layer(layer_name)
    s, t = net.index(source), net.index(target)
    dist_s = _bfs_distances(layer, s)
    if t not in dist_s:
        return MindsetStream(
            source=source, target=target, layer=layer_name,
            path_length=math.inf, nodes=(), edges=(), valence={},
        )
    dist_t = _bfs_distances(layer, t)
    length = dist_s[t]
    member = {
        u for u in dist_s
        if u in dist_t and dist_s[u] + dist_t[u] == length
    }
    edges = []
    for u in sorted(member):
        for v in layer.neighbors[u]:
            if v in member and u < v:
                # an edge lies on a shortest path iff, oriented away from the
                # source, its distance splits sum to the path length
                lo, hi = (u, v) if dist_s[u] < dist_s[v] else (v, u)
                if dist_s[lo] + 1 + dist_t[hi] == length:
                    edges.append((net.labels[u], net.labels[v]))
    nodes = tuple(net.labels[u] for u in sorted(member))
    valence = {
        lb: net.attributes.get(lb, {}).get("valence") for lb in nodes
    }
    return MindsetStream(
        source=source, target=target, layer=layer_name,
        path_length=length, nodes=nodes, edges=tuple(edges), valence=valence,
    )
