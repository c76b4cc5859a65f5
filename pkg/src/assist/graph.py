"""Labeled graphs: representation, validation and document I/O.

A :class:`LabeledGraph` holds one labeled node per id and a list of
:class:`Edge` objects.  Edges may be directed or undirected and may carry a
timestamp; a graph whose edges carry timestamps is *temporal*.  Graphs are
immutable after construction and safe to share between agents.

The on-disk format is a JSON document::

    {"directed": false,
     "nodes": [{"id": "1", "label": "A"}, ...],
     "edges": [{"source": "1", "target": "2", "label": "knows",
                "directed": true, "t": 3}, ...]}
"""
from __future__ import annotations

import json
import numbers
from collections import Counter
from pathlib import Path
from typing import Any, Iterable, Mapping, NamedTuple

__all__ = [
    "PATTERN",
    "DATA",
    "Edge",
    "Incidence",
    "GraphStats",
    "LabeledGraph",
    "GraphFormatError",
    "GraphValidationError",
    "load_graph",
    "read_graph",
    "graph_to_document",
    "write_graph",
    "neighbors",
    "graph_stats",
]

PATTERN = "pattern"
DATA = "data"
ROLES = (PATTERN, DATA)


class GraphFormatError(ValueError):
    """The graph document could not be parsed."""


class GraphValidationError(ValueError):
    """The graph document parsed but violates a structural invariant."""


class Edge(NamedTuple):
    """An edge; equality and hashing are by value, so edges work as dict keys."""

    source: str
    target: str
    label: str | None = None
    directed: bool = False
    t: float | None = None

    @property
    def key(self) -> tuple[str, str]:
        """Identity of the edge: ordered pair if directed, sorted pair if not."""
        if self.directed:
            return (self.source, self.target)
        return tuple(sorted((self.source, self.target)))  # type: ignore[return-value]

    def other(self, node: str) -> str:
        if node == self.source:
            return self.target
        if node == self.target:
            return self.source
        raise KeyError(node)

    def __repr__(self) -> str:
        arrow = "->" if self.directed else "--"
        ts = "" if self.t is None else f"@{self.t:g}"
        return f"({self.source}{arrow}{self.target}{ts})"


class Incidence(NamedTuple):
    """One entry of a neighbor list.

    ``direction`` is ``"out"`` or ``"in"`` for directed edges and ``None``
    for undirected ones.
    """

    edge: Edge
    node: str
    direction: str | None


class GraphStats(NamedTuple):
    node_count: int
    edge_count: int
    label_histogram: dict
    max_degree: int


class LabeledGraph:
    """An immutable node-labeled graph.

    Parameters
    ----------
    nodes : mapping of node id to label
    edges : iterable of Edge
    role : {"pattern", "data"}

    Raises
    ------
    GraphValidationError
        On a dangling endpoint, a self-loop, a duplicate edge, an empty label
        or a mix of timestamped and untimestamped edges.
    """

    __slots__ = ("role", "_nodes", "_edges", "_adj", "_out", "_edge_from",
                 "directed", "temporal", "_order")

    def __init__(self, nodes: Mapping[str, str], edges: Iterable[Edge] = (),
                 role: str = DATA):
        if role not in ROLES:
            raise GraphValidationError(f"unknown role {role!r}")
        self.role = role
        self._nodes: dict[str, str] = {}
        for nid, label in nodes.items():
            if not isinstance(label, str) or not label:
                raise GraphValidationError(f"node {nid!r}: label must be a non-empty string")
            self._nodes[nid] = label
        self._order = tuple(sorted(self._nodes))

        edges = tuple(edges)
        adj: dict[str, list[Incidence]] = {n: [] for n in self._order}
        out: dict[str, list[Incidence]] = {n: [] for n in self._order}
        edge_from: dict[tuple[str, str], Edge] = {}
        seen: set[tuple[str, str]] = set()
        stamped = 0
        for e in edges:
            for end in (e.source, e.target):
                if end not in self._nodes:
                    raise GraphValidationError(f"dangling endpoint {end!r} on edge {e!r}")
            if e.source == e.target:
                raise GraphValidationError(f"self-loop on node {e.source!r}")
            # an undirected a--b clashes with anything between a and b;
            # a directed a->b only with another a->b or an undirected a--b
            pair = tuple(sorted((e.source, e.target)))
            clashes = [("u",) + pair] if not e.directed else [("d", e.source, e.target)]
            if e.directed:
                clashes.append(("u",) + pair)
            else:
                clashes += [("d", e.source, e.target), ("d", e.target, e.source)]
            if any(c in seen for c in clashes):
                raise GraphValidationError(f"duplicate edge {e!r}")
            seen.add(("d", e.source, e.target) if e.directed else ("u",) + pair)
            if e.t is not None:
                stamped += 1
            if e.directed:
                adj[e.source].append(Incidence(e, e.target, "out"))
                adj[e.target].append(Incidence(e, e.source, "in"))
                out[e.source].append(Incidence(e, e.target, "out"))
                edge_from[(e.source, e.target)] = e
            else:
                adj[e.source].append(Incidence(e, e.target, None))
                adj[e.target].append(Incidence(e, e.source, None))
                out[e.source].append(Incidence(e, e.target, None))
                out[e.target].append(Incidence(e, e.source, None))
                edge_from[(e.source, e.target)] = e
                edge_from[(e.target, e.source)] = e
        if 0 < stamped < len(edges):
            raise GraphValidationError("mixed timestamped and untimestamped edges")

        def _sorted(lst):
            return tuple(sorted(lst, key=lambda inc: (inc.node, inc.direction or "")))

        self._edges = edges
        self._adj = {n: _sorted(v) for n, v in adj.items()}
        self._out = {n: _sorted(v) for n, v in out.items()}
        self._edge_from = edge_from
        self.directed = any(e.directed for e in edges)
        self.temporal = bool(edges) and stamped == len(edges)

    # -- read-only views -------------------------------------------------
    @property
    def nodes(self) -> Mapping[str, str]:
        return self._nodes

    @property
    def node_ids(self) -> tuple[str, ...]:
        """Node ids in sorted order."""
        return self._order

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self._edges

    def __len__(self) -> int:
        return len(self._nodes)

    def __contains__(self, node: object) -> bool:
        return node in self._nodes

    def __repr__(self) -> str:
        return (f"LabeledGraph(role={self.role!r}, nodes={len(self._nodes)}, "
                f"edges={len(self._edges)}, directed={self.directed}, "
                f"temporal={self.temporal})")

    def label(self, node: str) -> str:
        return self._nodes[node]

    def incident(self, node: str) -> tuple[Incidence, ...]:
        """All incidences of `node` (in- and out-edges for directed edges)."""
        try:
            return self._adj[node]
        except KeyError:
            raise KeyError(f"unknown node {node!r}") from None

    def outgoing(self, node: str) -> tuple[Incidence, ...]:
        """Incidences traversable from `node`: directed out-edges plus undirected edges."""
        try:
            return self._out[node]
        except KeyError:
            raise KeyError(f"unknown node {node!r}") from None

    def edge_from(self, a: str, b: str) -> Edge | None:
        """The edge an agent can traverse from `a` to `b`, or None."""
        return self._edge_from.get((a, b))

    def degree(self, node: str) -> int:
        return len(self.incident(node))

    def with_role(self, role: str) -> "LabeledGraph":
        return LabeledGraph(self._nodes, self._edges, role=role)


def neighbors(g: LabeledGraph, n: str) -> list[Incidence]:
    """Edges incident to `n` with their opposite endpoints.

    Raises KeyError for an unknown node id.
    """
    return list(g.incident(n))


def graph_stats(g: LabeledGraph) -> GraphStats:
    hist = dict(sorted(Counter(g.nodes.values()).items()))
    max_degree = max((g.degree(n) for n in g.node_ids), default=0)
    return GraphStats(len(g), len(g.edges), hist, max_degree)


# -- documents -------------------------------------------------------------

def _node_id(value: Any, where: str) -> str:
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise GraphFormatError(f"{where}: id must be a string")
    return str(value)


def load_graph(document: Mapping[str, Any] | str | bytes, role: str = DATA) -> LabeledGraph:
    """Build a validated graph from a parsed or raw JSON graph document.

    Raises
    ------
    GraphFormatError
        Malformed JSON or missing/mistyped fields.
    GraphValidationError
        Structural violations (see :class:`LabeledGraph`), including duplicate
        node ids.
    """
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise GraphFormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(document, Mapping):
        raise GraphFormatError("graph document must be an object")
    default_directed = document.get("directed", False)
    if not isinstance(default_directed, bool):
        raise GraphFormatError("'directed' must be a boolean")
    raw_nodes = document.get("nodes", [])
    raw_edges = document.get("edges", [])
    if not isinstance(raw_nodes, list) or not isinstance(raw_edges, list):
        raise GraphFormatError("'nodes' and 'edges' must be arrays")

    nodes: dict[str, str] = {}
    for i, item in enumerate(raw_nodes):
        if not isinstance(item, Mapping) or "id" not in item or "label" not in item:
            raise GraphFormatError(f"nodes[{i}]: expected an object with 'id' and 'label'")
        nid = _node_id(item["id"], f"nodes[{i}]")
        if nid in nodes:
            raise GraphValidationError(f"duplicate node id {nid!r}")
        if not isinstance(item["label"], str):
            raise GraphFormatError(f"nodes[{i}]: label must be a string")
        nodes[nid] = item["label"]

    edges = []
    for i, item in enumerate(raw_edges):
        if not isinstance(item, Mapping) or "source" not in item or "target" not in item:
            raise GraphFormatError(f"edges[{i}]: expected an object with 'source' and 'target'")
        directed = item.get("directed", default_directed)
        if not isinstance(directed, bool):
            raise GraphFormatError(f"edges[{i}]: 'directed' must be a boolean")
        label = item.get("label")
        if label is not None and (not isinstance(label, str) or not label):
            raise GraphFormatError(f"edges[{i}]: label must be a non-empty string")
        t = item.get("t")
        if t is not None:
            if isinstance(t, bool) or not isinstance(t, numbers.Real) or t < 0:
                raise GraphFormatError(f"edges[{i}]: 't' must be a non-negative number")
        edges.append(Edge(_node_id(item["source"], f"edges[{i}]"),
                          _node_id(item["target"], f"edges[{i}]"),
                          label, directed, t))
    return LabeledGraph(nodes, edges, role=role)


def read_graph(path: str | Path, role: str = DATA) -> LabeledGraph:
    text = Path(path).read_text(encoding="utf-8")
    return load_graph(text, role=role)


def graph_to_document(g: LabeledGraph) -> dict:
    """Inverse of :func:`load_graph`."""
    edges = []
    for e in g.edges:
        item: dict[str, Any] = {"source": e.source, "target": e.target}
        if e.label is not None:
            item["label"] = e.label
        item["directed"] = e.directed
        if e.t is not None:
            item["t"] = e.t
        edges.append(item)
    return {
        "directed": g.directed,
        "nodes": [{"id": n, "label": g.label(n)} for n in g.node_ids],
        "edges": edges,
    }


def write_graph(g: LabeledGraph, path: str | Path) -> None:
    Path(path).write_text(json.dumps(graph_to_document(g), indent=2) + "\n", encoding="utf-8")
