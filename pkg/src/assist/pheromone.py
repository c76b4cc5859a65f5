"""Pheromone fields and their dynamics.

Four scalar families live in a :class:`PheromoneState`: node and edge fields
on each graph, a peer field on (pattern node, data node) correspondences,
and a quorum field on nodes.  The environment acts on them in three ways:
agents deposit (:func:`deposit`), everything evaporates once per wave
(:func:`evaporate`), and quorum is re-propagated along reinforced edges
(:func:`propagate_quorum`).  Static label vectors (:func:`propagate_labels`)
let agents sense which labels lie nearby.
"""
from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field, fields
from typing import Iterable, NamedTuple

from .graph import DATA, PATTERN, Edge, LabeledGraph

__all__ = [
    "Params",
    "PheromoneState",
    "CycleRecord",
    "CycleError",
    "Totals",
    "CLAMP",
    "init_fields",
    "deposit",
    "deposit_amount",
    "fold_wave",
    "evaporate",
    "propagate_labels",
    "propagate_quorum",
    "field_totals",
]

CLAMP = 1e-12


@dataclass(frozen=True)
class Params:
    """Tuning knobs for a run.

    ``propagation_radius`` and ``agents_per_wave`` default to ``None``, meaning
    "derive from context": radius 1 (2 in missing mode) and ten agents per
    peered pattern node.
    """

    evaporation_rate: float = 0.1
    deposit_constant: float = 1.0
    initial_node_pheromone: float = 0.1
    propagation_decay: float = 0.5
    propagation_radius: int | None = None
    termination_epsilon: float = 1e-6
    agents_per_wave: int | None = None
    max_waves: int = 10000
    imprecise_quality: float = 0.5
    extraction_threshold: float = 0.2
    quorum_sweeps: int = 3
    quorum_modulation: bool = True
    normalize_wave_deposits: bool = True

    def __post_init__(self):
        def need(ok, name, what):
            if not ok:
                raise ValueError(f"{name}: must be {what}, got {getattr(self, name)!r}")

        for name in ("evaporation_rate", "propagation_decay", "imprecise_quality"):
            v = getattr(self, name)
            need(_is_num(v) and 0 < v < 1, name, "in (0, 1)")
        need(_is_num(self.extraction_threshold) and 0 <= self.extraction_threshold <= 1,
             "extraction_threshold", "in [0, 1]")
        for name in ("deposit_constant", "initial_node_pheromone", "termination_epsilon"):
            v = getattr(self, name)
            need(_is_num(v) and v > 0, name, "positive")
        need(self.termination_epsilon < self.initial_node_pheromone,
             "termination_epsilon", "smaller than initial_node_pheromone")
        need(_is_int(self.max_waves) and self.max_waves >= 1, "max_waves", "a positive integer")
        need(_is_int(self.quorum_sweeps) and self.quorum_sweeps >= 1,
             "quorum_sweeps", "a positive integer")
        need(self.propagation_radius is None
             or (_is_int(self.propagation_radius) and self.propagation_radius >= 1),
             "propagation_radius", "an integer >= 1")
        need(self.agents_per_wave is None
             or (_is_int(self.agents_per_wave) and self.agents_per_wave >= 1),
             "agents_per_wave", "a positive integer")

    @classmethod
    def field_names(cls) -> tuple[str, ...]:
        return tuple(f.name for f in fields(cls))


def _is_num(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


@dataclass
class PheromoneState:
    """Sparse scalar fields; a missing key means zero."""

    node_field: dict = field(default_factory=lambda: {PATTERN: {}, DATA: {}})
    edge_field: dict = field(default_factory=lambda: {PATTERN: {}, DATA: {}})
    peer_field: dict = field(default_factory=dict)
    quorum_field: dict = field(default_factory=lambda: {PATTERN: {}, DATA: {}})
    label_vectors: dict = field(default_factory=lambda: {PATTERN: {}, DATA: {}})
    wave_counter: int = 0

    def node(self, graph: str, n: str) -> float:
        return self.node_field[graph].get(n, 0.0)

    def edge(self, graph: str, e: Edge) -> float:
        return self.edge_field[graph].get(e, 0.0)

    def peer(self, u: str, x: str) -> float:
        return self.peer_field.get((u, x), 0.0)

    def quorum(self, graph: str, n: str) -> float:
        return self.quorum_field[graph].get(n, 0.0)

    def copy(self) -> "PheromoneState":
        return PheromoneState(
            node_field={g: dict(v) for g, v in self.node_field.items()},
            edge_field={g: dict(v) for g, v in self.edge_field.items()},
            peer_field=dict(self.peer_field),
            quorum_field={g: dict(v) for g, v in self.quorum_field.items()},
            label_vectors=self.label_vectors,
            wave_counter=self.wave_counter,
        )


class CycleError(ValueError):
    """A cycle record violates its structural invariants."""


class CycleRecord(NamedTuple):
    """A completed agent loop between the two graphs.

    ``pattern_nodes[i]`` was peered with ``data_nodes[i]``; index 0 is the
    start node and its entry peer.  ``data_path`` lists the data edges in
    walk order (a multi-hop bridge contributes all its edges, with the
    intermediate nodes in ``bridge_nodes``).  ``pattern_path`` lists the
    pattern edges walked home, ending at the start node.
    """

    pattern_nodes: tuple[str, ...]
    data_nodes: tuple[str, ...]
    data_path: tuple[Edge, ...]
    pattern_path: tuple[Edge, ...]
    quality: float
    length: int
    bridge_nodes: tuple[str, ...] = ()

    @property
    def pattern_start(self) -> str:
        return self.pattern_nodes[0]

    @property
    def data_entry(self) -> str:
        return self.data_nodes[0]

    @property
    def pattern_return(self) -> str:
        return self.pattern_nodes[-1]

    @property
    def pairs(self) -> tuple[tuple[str, str], ...]:
        return tuple(zip(self.pattern_nodes, self.data_nodes))

    def check(self) -> None:
        if len(self.pattern_nodes) != len(self.data_nodes) or len(self.pattern_nodes) < 2:
            raise CycleError("cycle needs matching pattern/data node lists of length >= 2")
        if not self.data_path or not self.pattern_path:
            raise CycleError("cycle has an empty data or pattern path")
        if self.length < 4 or self.length != 2 + len(self.data_path) + len(self.pattern_path):
            raise CycleError(f"bad cycle length {self.length}")
        if not 0 < self.quality <= 1:
            raise CycleError(f"quality {self.quality} outside (0, 1]")
        last = self.pattern_path[-1]
        if self.pattern_start not in (last.source, last.target):
            raise CycleError("pattern path does not return to the start node")


def deposit_amount(quality: float, length: int, params: Params) -> float:
    """Per-element deposit ``Q * quality / L``."""
    return params.deposit_constant * quality / length


def deposit(state: PheromoneState, cycle: CycleRecord, params: Params) -> PheromoneState:
    """Add one cycle's deposit to `state` in place and return it.

    Every touched node, edge and peer pair gains ``Q * quality / L`` once.
    Bridge intermediates receive nothing.
    """
    cycle.check()
    _add_cycle(state, cycle, deposit_amount(cycle.quality, cycle.length, params))
    return state


def _add_cycle(state: PheromoneState, cycle: CycleRecord, a: float) -> None:
    for graph, nodes, path in ((PATTERN, cycle.pattern_nodes, cycle.pattern_path),
                               (DATA, cycle.data_nodes, cycle.data_path)):
        nf = state.node_field[graph]
        for n in dict.fromkeys(nodes):
            nf[n] = nf.get(n, 0.0) + a
        ef = state.edge_field[graph]
        for e in dict.fromkeys(path):
            ef[e] = ef.get(e, 0.0) + a
    pf = state.peer_field
    for pair in dict.fromkeys(cycle.pairs):
        pf[pair] = pf.get(pair, 0.0) + a


def fold_wave(state: PheromoneState, cycles: Iterable[CycleRecord], params: Params) -> int:
    """Apply a wave's cycles to `state` at the barrier; return how many were applied.

    Deposits are summed over cycles.  With ``normalize_wave_deposits`` each
    channel (pattern fields, data fields, peer field) is then rescaled so the
    wave adds exactly ``Q`` to it, which keeps the per-graph totals independent
    of how many agents happened to complete.
    """
    acc = PheromoneState()
    counts = Counter(cycles)
    for c, k in counts.items():
        c.check()
        _add_cycle(acc, c, k * deposit_amount(c.quality, c.length, params))
    n = sum(counts.values())
    if not n:
        return 0
    scale = {PATTERN: 1.0, DATA: 1.0, "peer": 1.0}
    if params.normalize_wave_deposits:
        q = params.deposit_constant
        for g in (PATTERN, DATA):
            mass = sum(acc.node_field[g].values()) + sum(acc.edge_field[g].values())
            scale[g] = q / mass
        scale["peer"] = q / sum(acc.peer_field.values())
    for g in (PATTERN, DATA):
        s = scale[g]
        for fam_acc, fam in ((acc.node_field[g], state.node_field[g]),
                             (acc.edge_field[g], state.edge_field[g])):
            for k, v in fam_acc.items():
                fam[k] = fam.get(k, 0.0) + v * s
    s = scale["peer"]
    for k, v in acc.peer_field.items():
        state.peer_field[k] = state.peer_field.get(k, 0.0) + v * s
    return n


def _decay(d: dict, factor: float) -> None:
    dead = []
    for k, v in d.items():
        v *= factor
        if v < CLAMP:
            dead.append(k)
        else:
            d[k] = v
    for k in dead:
        del d[k]


def evaporate(state: PheromoneState, params: Params) -> PheromoneState:
    """Multiply node, edge and peer fields by ``1 - rho``; clear quorum."""
    factor = 1.0 - params.evaporation_rate
    for g in (PATTERN, DATA):
        _decay(state.node_field[g], factor)
        _decay(state.edge_field[g], factor)
        state.quorum_field[g] = {}
    _decay(state.peer_field, factor)
    return state


def _bfs_within(graph: LabeledGraph, start: str, radius: int) -> dict[str, int]:
    dist = {start: 0}
    queue = deque([start])
    while queue:
        n = queue.popleft()
        k = dist[n]
        if k == radius:
            continue
        for inc in graph.incident(n):
            if inc.node not in dist:
                dist[inc.node] = k + 1
                queue.append(inc.node)
    return dist


def propagate_labels(graph: LabeledGraph, radius: int = 1, decay: float = 0.5) -> dict:
    """Neighborhood label strengths for every node of `graph`.

    ``vec[n][label]`` sums ``decay**k`` over nodes carrying `label` at hop
    distance ``k <= radius`` (edge direction ignored).  A labeled edge counts
    as if it sat on both endpoints, i.e. at the distance of its nearer one.
    """
    if radius < 1:
        raise ValueError("radius must be >= 1")
    vectors = {}
    for n in graph.node_ids:
        dist = _bfs_within(graph, n, radius)
        vec: dict[str, float] = {}
        seen_edges = set()
        for m, k in dist.items():
            lab = graph.label(m)
            vec[lab] = vec.get(lab, 0.0) + decay ** k
            for inc in graph.incident(m):
                e = inc.edge
                if e.label is None or e in seen_edges:
                    continue
                seen_edges.add(e)
                near = min(dist.get(e.source, radius + 1), dist.get(e.target, radius + 1))
                vec[e.label] = vec.get(e.label, 0.0) + decay ** near
        vectors[n] = vec
    return vectors


def propagate_quorum(state: PheromoneState, pattern: LabeledGraph, data: LabeledGraph,
                     params: Params) -> PheromoneState:
    """Recompute the quorum field from the current node and edge fields.

    Quorum flows only along edges with positive edge pheromone.  Each sweep
    updates the message a node sends to a neighbor as its own node pheromone
    plus ``decay`` times what it received from its *other* reinforced
    neighbors in the previous sweep; a node's quorum is the sum of its incoming
    messages.  Messages never echo straight back, so an isolated matched edge
    gives each endpoint exactly its partner's node pheromone.
    """
    delta = params.propagation_decay
    for g, graph in ((PATTERN, pattern), (DATA, data)):
        ef = state.edge_field[g]
        nf = state.node_field[g]
        nbrs: dict[str, list[str]] = {}
        for e, v in ef.items():
            if v > 0:
                nbrs.setdefault(e.source, []).append(e.target)
                nbrs.setdefault(e.target, []).append(e.source)
        msgs: dict[tuple[str, str], float] = {}
        for _ in range(params.quorum_sweeps):
            inbox = {n: 0.0 for n in nbrs}
            for (m, n), v in msgs.items():
                inbox[n] += v
            new = {}
            for m, ns in nbrs.items():
                own = nf.get(m, 0.0)
                for n in ns:
                    new[(m, n)] = own + delta * (inbox[m] - msgs.get((n, m), 0.0))
            msgs = new
        q: dict[str, float] = {}
        for (m, n), v in msgs.items():
            q[n] = q.get(n, 0.0) + v
        state.quorum_field[g] = {n: v for n, v in q.items() if v > 0}
    return state


class Totals(NamedTuple):
    pattern_sum: float
    data_sum: float


def field_totals(state: PheromoneState) -> Totals:
    """Node plus edge pheromone summed per graph."""
    return Totals(*(sum(state.node_field[g].values()) + sum(state.edge_field[g].values())
                    for g in (PATTERN, DATA)))


def init_fields(pattern: LabeledGraph, data: LabeledGraph, peer_map, params: Params,
                radius: int | None = None) -> PheromoneState:
    """Fresh state: ``tau0`` on every peered node of both graphs, all else zero."""
    tau0 = params.initial_node_pheromone
    state = PheromoneState()
    for u, xs in peer_map.peers.items():
        if xs:
            state.node_field[PATTERN][u] = tau0
            for x in xs:
                state.node_field[DATA][x] = tau0
    r = radius or params.propagation_radius or 1
    state.label_vectors = {
        PATTERN: propagate_labels(pattern, r, params.propagation_decay),
        DATA: propagate_labels(data, r, params.propagation_decay),
    }
    return state
