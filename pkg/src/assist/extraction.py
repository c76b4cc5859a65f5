"""Reading a converged pheromone state as a match.

The raw product is a ranking of (pattern node, data node) pairs by peer
pheromone.  On top of it :func:`extract_matches` thresholds the node fields
into a common subgraph per graph and, optionally, picks a one-to-one mapping
greedily.  :func:`validate_mapping` checks a mapping against the graphs.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping

from .extensions import Mode, Ontology, match_labels
from .graph import DATA, PATTERN, Edge, LabeledGraph
from .pheromone import Params, PheromoneState

__all__ = ["Subgraph", "MatchResult", "extract_matches", "validate_mapping",
           "Validation", "image_edge"]


@dataclass(frozen=True)
class Subgraph:
    nodes: tuple[str, ...]
    edges: tuple[Edge, ...]

    def to_document(self) -> dict:
        return {"nodes": list(self.nodes),
                "edges": [[e.source, e.target] for e in self.edges]}


@dataclass
class MatchResult:
    """Ranked correspondences plus the thresholded common subgraphs.

    ``pairs`` holds every (pattern node, data node, score) with positive peer
    pheromone, scores normalised so the best pair is 1, sorted descending.
    ``mapping`` is the greedy one-to-one assignment, or None when not
    requested.
    """

    pairs: list[tuple[str, str, float]]
    mapping: dict[str, str] | None
    pattern_subgraph: Subgraph
    data_subgraph: Subgraph
    matched_edges: list[tuple[Edge, Edge | None, float]]
    pattern_size: int

    @property
    def size(self) -> int:
        if self.mapping is not None:
            return len(self.mapping)
        return len({u for u, _, _ in self.pairs})

    @property
    def mean_score(self) -> float:
        if self.mapping is not None:
            scores = {(u, x): s for u, x, s in self.pairs}
            vals = [scores[(u, x)] for u, x in self.mapping.items()]
        else:
            vals = [s for _, _, s in self.pairs]
        return sum(vals) / len(vals) if vals else 0.0

    @property
    def coverage(self) -> float:
        return self.size / self.pattern_size if self.pattern_size else 0.0

    @property
    def empty(self) -> bool:
        return not self.pairs

    def summary(self) -> dict:
        return {"size": self.size, "mean_score": self.mean_score, "coverage": self.coverage}

    def to_document(self) -> dict:
        return {
            "pairs": [{"pattern": u, "data": x, "score": s} for u, x, s in self.pairs],
            "mapping": None if self.mapping is None else dict(sorted(self.mapping.items())),
            "pattern_subgraph": self.pattern_subgraph.to_document(),
            "data_subgraph": self.data_subgraph.to_document(),
            "matched_edges": [
                {"pattern": [f.source, f.target],
                 "data": None if e is None else [e.source, e.target],
                 "score": s}
                for f, e, s in self.matched_edges],
            "summary": self.summary(),
        }


def _hop_distance(g: LabeledGraph, a: str, b: str, radius: int) -> int | None:
    dist = {a: 0}
    queue = deque([a])
    while queue:
        n = queue.popleft()
        if dist[n] == radius:
            continue
        for inc in g.incident(n):
            if inc.node not in dist:
                dist[inc.node] = dist[n] + 1
                if inc.node == b:
                    return dist[inc.node]
                queue.append(inc.node)
    return None


def image_edge(f: Edge, mapping: Mapping[str, str], data: LabeledGraph) -> Edge | None:
    """The data edge a pattern edge maps onto, respecting direction, or None."""
    x, y = mapping[f.source], mapping[f.target]
    e = data.edge_from(x, y)
    if e is None or e.directed != f.directed:
        return None
    if e.directed and e.source != x:
        return None
    return e


def _edge_ok(f: Edge, mapping, data: LabeledGraph, mode: Mode) -> bool:
    if image_edge(f, mapping, data) is not None:
        return True
    if mode.missing:
        x, y = mapping[f.source], mapping[f.target]
        return _hop_distance(data, x, y, mode.missing_radius) is not None
    return False


def _fits(u: str, x: str, mapping: dict, pattern: LabeledGraph, data: LabeledGraph,
          mode: Mode) -> bool:
    trial = {**mapping, u: x}
    return all(_edge_ok(inc.edge, trial, data, mode)
               for inc in pattern.incident(u) if inc.node in mapping)


def _grow(first, ranked, pattern: LabeledGraph, data: LabeledGraph, mode: Mode) -> dict[str, str]:
    """Grow a mapping from `first`, always taking the best-scored pair that fits.

    Pairs touching the current mapping are preferred, so a component is
    finished before a new one is started elsewhere.
    """
    mapping: dict[str, str] = {first[0]: first[1]}
    used = {first[1]}
    while True:
        pick = fallback = None
        for u, x, _ in ranked:
            if u in mapping or x in used or not _fits(u, x, mapping, pattern, data, mode):
                continue
            if any(inc.node in mapping for inc in pattern.incident(u)):
                pick = (u, x)
                break
            if fallback is None:
                fallback = (u, x)
        pick = pick or fallback
        if pick is None:
            break
        mapping[pick[0]] = pick[1]
        used.add(pick[1])
    # a pair with no mapped pattern neighbor is a lone peer, not part of a matched edge
    return {u: x for u, x in mapping.items()
            if any(inc.node in mapping for inc in pattern.incident(u))}


def _greedy(ranked, pattern: LabeledGraph, data: LabeledGraph, mode: Mode,
            starts: int = 8) -> dict[str, str]:
    """Best of a few greedy growths, each seeded from one of the top-ranked pairs.

    Growths are compared by mapped size, then by summed score, then by the
    rank of their seed pair.
    """
    score = {(u, x): s for u, x, s in ranked}
    best, best_key = {}, None
    for rank, (u, x, _) in enumerate(ranked[:starts]):
        m = _grow((u, x), ranked, pattern, data, mode)
        key = (len(m), sum(score[p] for p in m.items()), -rank)
        if best_key is None or key > best_key:
            best, best_key = m, key
    return best


def _threshold(field: dict, theta: float) -> set:
    top = max(field.values(), default=0.0)
    if top <= 0:
        return set()
    cut = theta * top
    return {k for k, v in field.items() if v > 0 and v >= cut}


def _subgraph(g: LabeledGraph, keep: set, ef: dict) -> Subgraph:
    # a node only counts if some reinforced edge touches it; leftover initial
    # pheromone on a node that no cycle ever passed through is not a match
    supported = {n for e, v in ef.items() if v > 0 for n in (e.source, e.target)}
    keep = keep & supported
    edges = tuple(e for e in g.edges
                  if e.source in keep and e.target in keep and ef.get(e, 0.0) > 0)
    return Subgraph(tuple(sorted(keep)), edges)


def extract_matches(state: PheromoneState, pattern: LabeledGraph, data: LabeledGraph,
                    params: Params | None = None, *, mode: Mode | None = None,
                    one_to_one: bool = True) -> MatchResult:
    """Turn pheromone fields into a :class:`MatchResult`.

    Nodes whose pheromone reaches ``extraction_threshold`` times their graph's
    maximum, and that touch at least one reinforced edge, form the common
    subgraphs.  The greedy mapping walks pairs in
    descending score (ties by pattern id, then data id), accepting a pair
    when both nodes are free and every pattern edge to an already-mapped node
    has an image; pairs left without a mapped neighbor are then dropped.
    """
    params = params or Params()
    mode = mode or Mode()
    pf = state.peer_field
    top = max(pf.values(), default=0.0)
    pairs = []
    if top > 0:
        pairs = [(u, x, v / top) for (u, x), v in pf.items() if v > 0]
        pairs.sort(key=lambda p: (-p[2], p[0], p[1]))
    theta = params.extraction_threshold
    p_keep = _threshold(state.node_field[PATTERN], theta)
    d_keep = _threshold(state.node_field[DATA], theta)
    p_sub = _subgraph(pattern, p_keep, state.edge_field[PATTERN])
    d_sub = _subgraph(data, d_keep, state.edge_field[DATA])

    mapping = _greedy(pairs, pattern, data, mode) if pairs else {}
    matched = []
    p_ef, d_ef = state.edge_field[PATTERN], state.edge_field[DATA]
    p_top = max(p_ef.values(), default=0.0) or 1.0
    d_top = max(d_ef.values(), default=0.0) or 1.0
    for f in pattern.edges:
        if f.source in mapping and f.target in mapping:
            e = image_edge(f, mapping, data)
            ps = p_ef.get(f, 0.0) / p_top
            score = ps if e is None else min(ps, d_ef.get(e, 0.0) / d_top)
            matched.append((f, e, score))
    matched.sort(key=lambda m: (-m[2], m[0].source, m[0].target))
    return MatchResult(pairs, mapping if one_to_one else None, p_sub, d_sub, matched,
                       len(pattern))


@dataclass(frozen=True)
class Validation:
    valid: bool
    violations: tuple[str, ...]

    def __bool__(self) -> bool:
        return self.valid


def _as_pairs(pairs) -> list[tuple[str, str]]:
    if isinstance(pairs, Mapping):
        return list(pairs.items())
    return [(p[0], p[1]) for p in pairs]


def validate_mapping(pattern: LabeledGraph, data: LabeledGraph,
                     pairs: Mapping[str, str] | Iterable, mode: Mode | None = None,
                     ontology: Ontology | None = None, gamma: float = 0.5) -> Validation:
    """Check a one-to-one mapping for label compatibility and edge images.

    Every pattern edge between two mapped nodes needs a data edge between
    their images with the same direction.  In missing mode an image path of
    up to ``missing_radius`` hops is accepted; in temporal mode the relative
    order of adjacent mapped edges must be preserved; ontology subsumption
    counts as compatible only in imprecise mode.

    Raises
    ------
    ValueError
        If a pattern or data node appears in more than one pair.
    """
    mode = mode or Mode()
    items = _as_pairs(pairs)
    mapping: dict[str, str] = {}
    used: set[str] = set()
    for u, x in items:
        if u in mapping:
            raise ValueError(f"duplicate pattern node {u!r} in mapping")
        if x in used:
            raise ValueError(f"duplicate data node {x!r} in mapping")
        mapping[u] = x
        used.add(x)
    violations = []
    onto = ontology if mode.imprecise else None
    for u, x in sorted(mapping.items()):
        if u not in pattern or x not in data:
            violations.append(f"unknown node: {u}->{x}")
            continue
        if match_labels(pattern.label(u), data.label(x), onto, gamma) <= 0:
            violations.append(f"label mismatch: {u}({pattern.label(u)})->{x}({data.label(x)})")
    known = {u: x for u, x in mapping.items() if u in pattern and x in data}
    images = {}
    for f in pattern.edges:
        if f.source in known and f.target in known:
            if not _edge_ok(f, known, data, mode):
                violations.append(f"missing image edge: {f.source}-{f.target}")
            else:
                images[f] = image_edge(f, known, data)
    if mode.temporal:
        mapped_edges = sorted(images, key=lambda e: (e.source, e.target))
        for i, f1 in enumerate(mapped_edges):
            for f2 in mapped_edges[i + 1:]:
                if not {f1.source, f1.target} & {f2.source, f2.target}:
                    continue
                g1, g2 = images[f1], images[f2]
                if g1 is None or g2 is None or f1.t is None or g1.t is None:
                    continue
                if (f1.t > f2.t) - (f1.t < f2.t) != (g1.t > g2.t) - (g1.t < g2.t):
                    violations.append(f"order mismatch: {f1!r} vs {f2!r}")
    return Validation(not violations, tuple(violations))
