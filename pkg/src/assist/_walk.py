"""Agent movement primitives shared by the basic and temporal loops."""
from __future__ import annotations

from bisect import bisect_right
from collections import deque
from itertools import accumulate
from typing import NamedTuple, Sequence

import numpy as np

from .graph import DATA, Edge, LabeledGraph
from .pheromone import Params, PheromoneState

__all__ = ["Choice", "weighted_choice", "AgentStream", "Move", "Snapshot",
           "CycleFailure", "bridge_paths"]


class Choice:
    """A frozen discrete distribution; draws consume one uniform each."""

    __slots__ = ("items", "cum", "total", "last")

    def __init__(self, items: Sequence, weights: Sequence[float]):
        if not items:
            raise ValueError("weighted choice over an empty option list")
        if any(w < 0 for w in weights):
            raise ValueError("weights must be non-negative")
        self.items = list(items)
        self.cum = list(accumulate(weights))
        self.total = self.cum[-1]
        self.last = len(self.items) - 1

    def __len__(self) -> int:
        return len(self.items)

    def draw(self, rng):
        r = rng.random()
        if self.total <= 0:
            i = int(r * (self.last + 1))
        else:
            i = bisect_right(self.cum, r * self.total)
        return self.items[i if i < self.last else self.last]


def weighted_choice(options, rng):
    """Draw an item with probability proportional to its weight.

    Parameters
    ----------
    options : sequence of (item, weight)
        Weights must be non-negative.  If they are all zero the draw is
        uniform.
    rng : object with a ``random()`` method
        A :class:`numpy.random.Generator` or an :class:`AgentStream`.
    """
    options = list(options)
    if not options:
        raise ValueError("weighted choice over an empty option list")
    items, weights = zip(*options)
    return Choice(items, weights).draw(rng)


class AgentStream:
    """Uniform draws owned by one agent.

    The first values come from a row pre-drawn for the whole wave; if an agent
    needs more, further values are derived from ``(seed, wave, agent)`` so the
    stream never depends on other agents.
    """

    __slots__ = ("_row", "_i", "_key", "_extra")

    def __init__(self, row: Sequence[float], key: tuple[int, ...]):
        self._row = row
        self._i = 0
        self._key = key
        self._extra = None

    def random(self) -> float:
        i = self._i
        if i < len(self._row):
            self._i = i + 1
            return self._row[i]
        if self._extra is None:
            self._extra = np.random.default_rng(list(self._key))
        return float(self._extra.random())


class CycleFailure(NamedTuple):
    step: int
    reason: str


class Move(NamedTuple):
    target: str
    path: tuple[Edge, ...]
    bridge: tuple[str, ...]

    @property
    def hops(self) -> int:
        return len(self.path)


def bridge_paths(graph: LabeledGraph, start: str, radius: int) -> dict[str, Move]:
    """Shortest traversable paths from `start` to every node within `radius` hops.

    Ties between equal-length paths go to the path discovered first when
    neighbors are visited in sorted order.
    """
    found: dict[str, Move] = {start: Move(start, (), ())}
    queue = deque([start])
    while queue:
        n = queue.popleft()
        here = found[n]
        if here.hops == radius:
            continue
        for inc in graph.outgoing(n):
            m = inc.node
            if m in found:
                continue
            bridge = here.bridge + ((n,) if n != start else ())
            found[m] = Move(m, here.path + (inc.edge,), bridge)
            queue.append(m)
    del found[start]
    return found


class Snapshot:
    """Read-only view of one wave's fields plus per-wave caches.

    Agents launched in the same wave share a snapshot; they never write to
    it, so the order in which they run does not matter.
    """

    def __init__(self, state: PheromoneState, pattern: LabeledGraph, data: LabeledGraph,
                 peer_map, params: Params, mode):
        self.state = state
        self.pattern = pattern
        self.data = data
        self.peer_map = peer_map
        self.params = params
        self.mode = mode
        self.tau0 = params.initial_node_pheromone
        self._entry: dict = {}
        self._moves: dict = {}
        self._wanted: dict = {}
        self._bridges: dict = {}
        self._closures: dict = {}

    # -- label sensing ----------------------------------------------------
    def wanted(self, u: str, hops: int = 1) -> tuple[str, ...]:
        """Labels of pattern nodes exactly `hops` steps from `u`."""
        key = (u, hops)
        if key not in self._wanted:
            frontier = {u}
            seen = {u}
            for _ in range(hops):
                nxt = set()
                for n in frontier:
                    for inc in self.pattern.outgoing(n):
                        if inc.node not in seen:
                            nxt.add(inc.node)
                seen |= nxt
                frontier = nxt
            self._wanted[key] = tuple(sorted({self.pattern.label(n) for n in frontier}))
        return self._wanted[key]

    def gradient(self, wanted: tuple[str, ...], x: str, y: str) -> float:
        """Summed positive change in wanted-label strength moving from x to y."""
        vecs = self.state.label_vectors[DATA]
        vx, vy = vecs.get(x, {}), vecs.get(y, {})
        return sum(max(0.0, vy.get(lab, 0.0) - vx.get(lab, 0.0)) for lab in wanted)

    # -- arrow 1 ------------------------------------------------------------
    def entry(self, u: str) -> Choice:
        ch = self._entry.get(u)
        if ch is None:
            xs = self.peer_map.peers.get(u, ())
            if not xs:
                raise ValueError(f"start node {u!r} has no peers")
            nf = self.state.node_field[DATA]
            ch = Choice(xs, [self.tau0 + nf.get(x, 0.0) for x in xs])
            self._entry[u] = ch
        return ch

    # -- arrow 2 ------------------------------------------------------------
    def edge_weight(self, e: Edge, wanted, x: str, y: str) -> float:
        return ((self.tau0 + self.state.edge_field[DATA].get(e, 0.0))
                * (1.0 + self.gradient(wanted, x, y)))

    def moves(self, u: str, x: str) -> Choice | None:
        """Distribution over data moves out of `x` for an agent started at `u`.

        Direct edges always qualify.  In missing mode, nodes 2..radius hops
        away that carry a wanted label are reachable through a bridge whose
        weight is scaled by ``decay**(h-1)``.
        """
        key = (u, x)
        if key in self._moves:
            return self._moves[key]
        wanted = self.wanted(u)
        items, weights = [], []
        for inc in self.data.outgoing(x):
            items.append(Move(inc.node, (inc.edge,), ()))
            weights.append(self.edge_weight(inc.edge, wanted, x, inc.node))
        if self.mode is not None and self.mode.missing and wanted:
            want = set(wanted)
            ef = self.state.edge_field[DATA]
            decay = self.params.propagation_decay
            for y, mv in self.bridges(x).items():
                if mv.hops < 2 or self.data.label(y) not in want:
                    continue
                base = self.tau0 + min(ef.get(e, 0.0) for e in mv.path)
                items.append(mv)
                weights.append(base * decay ** (mv.hops - 1)
                               * (1.0 + self.gradient(wanted, x, y)))
        ch = Choice(items, weights) if items else None
        self._moves[key] = ch
        return ch

    def bridges(self, x: str) -> dict[str, Move]:
        if x not in self._bridges:
            self._bridges[x] = bridge_paths(self.data, x, self.mode.missing_radius)
        return self._bridges[x]

    # -- arrows 3 and 4 -------------------------------------------------------
    def closures(self, u: str, mv: Move) -> Choice | None:
        """Pattern neighbors v of u peered with the move's target, with the closing edge."""
        y = mv.target
        direct = len(mv.path) == 1
        key = (u, y, direct and mv.path[0].directed, direct)
        if key in self._closures:
            return self._closures[key]
        quality = self.peer_map.quality
        pf = self.state.peer_field
        items, weights = [], []
        for inc in self.pattern.outgoing(u):
            v = inc.node
            if (v, y) not in quality:
                continue
            if direct and inc.edge.directed != mv.path[0].directed:
                continue
            items.append((v, inc.edge))
            weights.append(self.tau0 + pf.get((v, y), 0.0))
        ch = Choice(items, weights) if items else None
        self._closures[key] = ch
        return ch
