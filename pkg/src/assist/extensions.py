"""Imprecise, temporal and missing-data matching.

* **Imprecise** -- an :class:`Ontology` of ``parent > child`` subsumptions
  lets differently labeled nodes peer with reduced quality.
* **Temporal** -- agents cross two time-ordered data edges and must come
  home along two pattern edges in the same order (:func:`temporal_cycle`).
* **Missing** -- agents sense wanted labels several hops away
  (:func:`multi_hop_sense`) and bridge over the gap.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from ._walk import Choice, CycleFailure, Snapshot, bridge_paths
from .graph import LabeledGraph
from .pheromone import CycleRecord, PheromoneState

__all__ = [
    "Ontology",
    "OntologyError",
    "Mode",
    "load_ontology",
    "read_ontology",
    "match_labels",
    "bridge_quality",
    "multi_hop_sense",
    "temporal_cycle",
]


class OntologyError(ValueError):
    pass


class Ontology:
    """A subsumption DAG over labels.

    ``subsumes(a, b)`` is reflexive and transitive: it holds when ``a == b`` or
    `b` is reachable from `a` along parent-to-child links.
    """

    def __init__(self, pairs: Iterable[tuple[str, str]] = ()):
        children: dict[str, set[str]] = {}
        for parent, child in pairs:
            if parent == child:
                raise OntologyError(f"cycle detected at {parent!r}")
            children.setdefault(parent, set()).add(child)
            children.setdefault(child, set())
        self.children = {k: frozenset(v) for k, v in children.items()}
        self._below = self._closure()
        above: dict[str, set[str]] = {k: set() for k in self.children}
        for a, below in self._below.items():
            for b in below:
                above[b].add(a)
        self._above = {k: frozenset(v) for k, v in above.items()}

    def _closure(self) -> dict[str, frozenset[str]]:
        done: dict[str, frozenset[str]] = {}
        active: set[str] = set()

        def visit(n: str) -> frozenset[str]:
            if n in done:
                return done[n]
            if n in active:
                raise OntologyError(f"cycle detected at {n!r}")
            active.add(n)
            acc: set[str] = set()
            for c in sorted(self.children[n]):
                acc.add(c)
                acc |= visit(c)
            active.discard(n)
            done[n] = frozenset(acc)
            return done[n]

        for n in sorted(self.children):
            visit(n)
        return done

    def __len__(self) -> int:
        return len(self.children)

    def descendants(self, label: str) -> frozenset[str]:
        return self._below.get(label, frozenset())

    def ancestors(self, label: str) -> frozenset[str]:
        return self._above.get(label, frozenset())

    def subsumes(self, a: str, b: str) -> bool:
        return a == b or b in self._below.get(a, ())

    def related(self, label: str) -> frozenset[str]:
        """Labels that subsume or are subsumed by `label`, itself included."""
        return self.descendants(label) | self.ancestors(label) | {label}


def load_ontology(document: str | Iterable[tuple[str, str]]) -> Ontology:
    """Parse ``parent > child`` lines (``#`` comments and blanks ignored)."""
    if not isinstance(document, str):
        return Ontology(document)
    pairs = []
    for lineno, raw in enumerate(document.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split(">")]
        if len(parts) != 2 or not all(parts):
            raise OntologyError(f"line {lineno}: expected 'parent > child', got {raw!r}")
        pairs.append((parts[0], parts[1]))
    return Ontology(pairs)


def read_ontology(path: str | Path) -> Ontology:
    return load_ontology(Path(path).read_text(encoding="utf-8"))


def match_labels(a: str, b: str, ontology: Ontology | None = None, gamma: float = 0.5) -> float:
    """1 for equal labels, `gamma` if one subsumes the other, else 0."""
    if a == b:
        return 1.0
    if ontology is not None and (ontology.subsumes(a, b) or ontology.subsumes(b, a)):
        return gamma
    return 0.0


def bridge_quality(hops: int, gamma: float) -> float:
    """Quality factor of a data move: 1 for a direct edge, ``gamma**h`` for an h-hop bridge."""
    return 1.0 if hops <= 1 else gamma ** hops


@dataclass(frozen=True)
class Mode:
    imprecise: bool = False
    temporal: bool = False
    missing: bool = False
    missing_radius: int = 2

    def __post_init__(self):
        if self.missing and self.missing_radius < 2:
            raise ValueError("missing_radius: must be >= 2 in missing mode")

    @classmethod
    def parse(cls, text: str | None, missing_radius: int = 2) -> "Mode":
        """Build a mode from a comma list such as ``"imprecise,missing"``."""
        flags = {f.strip() for f in (text or "").split(",") if f.strip()}
        unknown = flags - {"imprecise", "temporal", "missing"}
        if unknown:
            raise ValueError(f"mode: unknown flag(s) {sorted(unknown)}")
        return cls("imprecise" in flags, "temporal" in flags, "missing" in flags,
                   missing_radius)

    def __str__(self) -> str:
        return ",".join(f for f in ("imprecise", "temporal", "missing") if getattr(self, f))

    def check_graphs(self, pattern: LabeledGraph, data: LabeledGraph) -> None:
        if self.temporal and not (pattern.temporal and data.temporal):
            raise ValueError("temporal mode needs timestamps on every edge of both graphs")


def multi_hop_sense(state: PheromoneState, graph: LabeledGraph, start: str, want: str,
                    radius: int, decay: float = 0.5):
    """Nodes carrying `want` within `radius` traversable hops of `start`.

    Returns a list of ``(node, hops, decay**hops)`` sorted by strength, then id.
    The graph's label vectors are consulted first so an absent label costs no
    search.
    """
    vec = state.label_vectors.get(graph.role, {}).get(start)
    if vec is not None and vec.get(want, 0.0) <= 0.0:
        return []
    hits = [(n, mv.hops, decay ** mv.hops)
            for n, mv in bridge_paths(graph, start, radius).items()
            if graph.label(n) == want]
    hits.sort(key=lambda h: (-h[2], h[0]))
    return hits


def _order(e) -> float:
    return e.t


def temporal_cycle(snap: Snapshot, u: str, rng) -> CycleRecord | CycleFailure:
    """Six-hop loop: jump, two ordered data edges, jump back, two ordered pattern edges home.

    The data walk only takes a second edge strictly later than the first.  The
    agent then needs pattern edges ``u - v`` and ``v - w`` with the same
    orientation and strict order, where ``v`` and ``w`` are peered with the
    data nodes it walked through.
    """
    pattern, data = snap.pattern, snap.data
    if not (pattern.temporal and data.temporal):
        raise ValueError("temporal_cycle needs temporal graphs")
    quality = snap.peer_map.quality
    x = snap.entry(u).draw(rng)

    wanted1 = snap.wanted(u, 1)
    first = [(inc.edge, inc.node) for inc in data.outgoing(x)]
    if not first:
        return CycleFailure(2, "no data edge")
    e1, y = Choice(first, [snap.edge_weight(e, wanted1, x, n) for e, n in first]).draw(rng)

    wanted2 = snap.wanted(u, 2)
    second = [(inc.edge, inc.node) for inc in data.outgoing(y)
              if inc.edge is not e1 and inc.node != x and _order(inc.edge) > _order(e1)]
    if not second:
        return CycleFailure(2, "no later data edge")
    e2, z = Choice(second, [snap.edge_weight(e, wanted2, y, n) for e, n in second]).draw(rng)

    pf = snap.state.peer_field
    items, weights = [], []
    for inc1 in pattern.outgoing(u):
        v, f1 = inc1.node, inc1.edge
        if (v, y) not in quality or f1.directed != e1.directed:
            continue
        for inc2 in pattern.outgoing(v):
            w, f2 = inc2.node, inc2.edge
            if w == u or (w, z) not in quality or f2.directed != e2.directed:
                continue
            if not _order(f2) > _order(f1):
                continue
            items.append((v, w, f1, f2))
            weights.append(snap.tau0 + pf.get((w, z), 0.0))
    if not items:
        return CycleFailure(3, "no ordered pattern path home")
    v, w, f1, f2 = Choice(items, weights).draw(rng)
    q = quality[(u, x)] * quality[(v, y)] * quality[(w, z)]
    return CycleRecord((u, v, w), (x, y, z), (e1, e2), (f2, f1), q, 6)
