"""Ground truth for desk-scale experiments.

:func:`generate_pair` plants a seed fragment in two randomly grown graphs and
remembers where it went.  :func:`exact_mcs` solves the matching problem
exactly by branch and bound, for graphs small enough to enumerate.
:func:`load_fixture` serves the hand-built scenarios shipped with the
package.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Mapping, NamedTuple

import numpy as np

from .extensions import Mode, Ontology, load_ontology
from .extraction import MatchResult, image_edge, validate_mapping
from .graph import DATA, PATTERN, Edge, LabeledGraph, load_graph

__all__ = [
    "triangle",
    "PlantSpec",
    "PlantedPair",
    "generate_pair",
    "random_connected_graph",
    "OracleResult",
    "OracleBudgetError",
    "exact_mcs",
    "covered_nodes",
    "OracleComparison",
    "compare_to_oracle",
    "Fixture",
    "FIXTURES",
    "load_fixture",
]


def triangle(labels: str = "ABC", role: str = PATTERN) -> LabeledGraph:
    """Labeled triangle whose node ids equal its labels."""
    a, b, c = labels
    return LabeledGraph({a: a, b: b, c: c}, [Edge(a, b), Edge(b, c), Edge(a, c)], role=role)


def _pair(value) -> tuple[int, int]:
    if isinstance(value, (tuple, list)):
        return int(value[0]), int(value[1])
    return int(value), int(value)


@dataclass(frozen=True)
class PlantSpec:
    """How to grow a pattern/data pair around a shared seed fragment.

    ``extra_nodes`` and ``extra_edges`` take one count for both sides or a
    ``(pattern, data)`` pair.  Each extra node hangs off a uniformly chosen
    existing node; each extra edge joins a uniformly chosen non-adjacent
    pair.  Noise only touches seed nodes on the data side: relabeling, and
    deletion of those listed in ``delete_targets`` (all seed nodes when None).
    """

    seed_subgraph: LabeledGraph = field(default_factory=triangle)
    extra_nodes: int | tuple[int, int] = 0
    extra_edges: int | tuple[int, int] = 0
    alphabet: tuple[str, ...] = tuple("DEFGHIJK")
    relabel_prob: float = 0.0
    delete_prob: float = 0.0
    delete_targets: tuple[str, ...] | None = None
    rng_seed: int = 0

    def __post_init__(self):
        for name in ("relabel_prob", "delete_prob"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name}: must be in [0, 1], got {v!r}")
        for name in ("extra_nodes", "extra_edges"):
            if min(_pair(getattr(self, name))) < 0:
                raise ValueError(f"{name}: counts must be >= 0")
        if not self.alphabet:
            raise ValueError("alphabet: must not be empty")


class PlantedPair(NamedTuple):
    pattern: LabeledGraph
    data: LabeledGraph
    planted_map: dict[str, str]


def _grow(seed: LabeledGraph, spec: PlantSpec, n_extra: int, e_extra: int, noisy: bool,
          prefix: str, rng: np.random.Generator):
    nodes = dict(seed.nodes)
    edges = list(seed.edges)
    if noisy:
        for n in seed.node_ids:
            targeted = spec.delete_targets is None or n in spec.delete_targets
            drop = rng.random() < spec.delete_prob
            relabel = rng.random() < spec.relabel_prob
            if targeted and drop:
                del nodes[n]
                edges = [e for e in edges if n not in (e.source, e.target)]
            elif relabel:
                choices = [lab for lab in spec.alphabet if lab != nodes[n]] or list(spec.alphabet)
                nodes[n] = choices[int(rng.integers(len(choices)))]
    survivors = [n for n in seed.node_ids if n in nodes]
    order = list(survivors)
    adjacent = {tuple(sorted((e.source, e.target))) for e in edges}
    for i in range(n_extra):
        nid = f"_g{i}"
        nodes[nid] = spec.alphabet[int(rng.integers(len(spec.alphabet)))]
        if order:
            host = order[int(rng.integers(len(order)))]
            edges.append(Edge(host, nid))
            adjacent.add(tuple(sorted((host, nid))))
        order.append(nid)
    for _ in range(e_extra):
        for _attempt in range(50):
            if len(order) < 2:
                break
            a, b = (order[int(i)] for i in rng.choice(len(order), size=2, replace=False))
            key = tuple(sorted((a, b)))
            if key not in adjacent:
                adjacent.add(key)
                edges.append(Edge(a, b))
                break
    perm = rng.permutation(len(order))
    rename = {old: f"{prefix}{int(k):02d}" for old, k in zip(order, perm)}
    g = LabeledGraph({rename[n]: nodes[n] for n in order},
                     [Edge(rename[e.source], rename[e.target], e.label, e.directed, e.t)
                      for e in edges],
                     role=PATTERN if prefix == "p" else DATA)
    return g, {n: rename[n] for n in survivors}


def generate_pair(spec: PlantSpec) -> PlantedPair:
    """Grow a pattern and a data graph around ``spec.seed_subgraph``.

    Node ids are shuffled (``p00``, ``p01``, ... and ``d00``, ``d01``, ...) so
    they carry no hint of the planted correspondence, which is returned as
    ``planted_map`` (pattern id -> data id, surviving seed nodes only).
    """
    rng = np.random.default_rng(spec.rng_seed)
    pn, dn = _pair(spec.extra_nodes)
    pe, de = _pair(spec.extra_edges)
    pattern, p_ids = _grow(spec.seed_subgraph, spec, pn, pe, False, "p", rng)
    data, d_ids = _grow(spec.seed_subgraph, spec, dn, de, True, "d", rng)
    planted = {p_ids[n]: d_ids[n] for n in p_ids if n in d_ids}
    return PlantedPair(pattern, data, dict(sorted(planted.items())))


def random_connected_graph(n: int, alphabet, rng: np.random.Generator,
                           extra_edge_prob: float = 0.0, role: str = PATTERN) -> LabeledGraph:
    """Random labeled tree on `n` nodes plus each remaining pair with `extra_edge_prob`."""
    ids = [f"s{i}" for i in range(n)]
    nodes = {i: alphabet[int(rng.integers(len(alphabet)))] for i in ids}
    edges = []
    seen = set()
    for k in range(1, n):
        j = int(rng.integers(k))
        edges.append(Edge(ids[j], ids[k]))
        seen.add((j, k))
    for k in range(n):
        for j in range(k):
            if (j, k) not in seen and rng.random() < extra_edge_prob:
                edges.append(Edge(ids[j], ids[k]))
    return LabeledGraph(nodes, edges, role=role)


# -- exact oracle --------------------------------------------------------------

class OracleBudgetError(ValueError):
    pass


class OracleResult(NamedTuple):
    size: int
    mapping: dict[str, str]
    matched_edges: int


def covered_nodes(pattern: LabeledGraph, data: LabeledGraph,
                  mapping: Mapping[str, str]) -> tuple[set[str], int]:
    """Pattern nodes incident to a mapped edge that has a data image, and that edge count."""
    covered: set[str] = set()
    n_edges = 0
    for f in pattern.edges:
        if f.source in mapping and f.target in mapping and image_edge(f, mapping, data):
            covered.update((f.source, f.target))
            n_edges += 1
    return covered, n_edges


def exact_mcs(g1: LabeledGraph, g2: LabeledGraph, node_budget: int = 12) -> OracleResult:
    """Largest common subgraph of `g1` and `g2` under label equality, by exhaustion.

    A common subgraph is an injective label-preserving node mapping together
    with the edges of `g1` whose images are edges of `g2` (with matching
    direction).  Its size is the number of `g1` nodes touched by such an
    edge; the returned mapping holds exactly those nodes.  Ties on size go
    to more matched edges.

    Raises
    ------
    OracleBudgetError
        If either graph has more than `node_budget` nodes.
    """
    if len(g1) > node_budget or len(g2) > node_budget:
        raise OracleBudgetError(f"graphs of {len(g1)} and {len(g2)} nodes exceed budget {node_budget}")
    # visit high-degree nodes first; their edges settle coverage early
    order = sorted(g1.node_ids, key=lambda n: (-g1.degree(n), n))
    pos = {n: i for i, n in enumerate(order)}
    cands = {u: [x for x in g2.node_ids if g2.label(x) == g1.label(u)] for u in order}
    later_nbr = {u: [inc.node for inc in g1.incident(u) if pos[inc.node] > pos[u]] for u in order}
    earlier = {u: [inc for inc in g1.incident(u) if pos[inc.node] < pos[u]] for u in order}
    active = [u for u in order if g1.degree(u) > 0 and cands[u]]
    remaining_label = {}
    for u in active:
        remaining_label[g1.label(u)] = remaining_label.get(g1.label(u), 0) + 1
    free_label: dict[str, int] = {}
    for x in g2.node_ids:
        free_label[g2.label(x)] = free_label.get(g2.label(x), 0) + 1

    mapping: dict[str, str] = {}
    used: set[str] = set()
    cover = {u: 0 for u in order}
    best = [-1, -1, {}]

    def bound(i: int) -> int:
        b = 0
        for u, x in mapping.items():
            if cover[u] > 0 or any(pos[w] >= i for w in later_nbr[u]):
                b += 1
        b += sum(min(c, free_label.get(lab, 0)) for lab, c in remaining_label.items())
        return b

    def record():
        size = sum(1 for u in mapping if cover[u] > 0)
        n_edges = sum(cover.values()) // 2
        if (size, n_edges) > (best[0], best[1]):
            best[0], best[1] = size, n_edges
            best[2] = {u: x for u, x in mapping.items() if cover[u] > 0}

    def visit(i: int) -> None:
        if i == len(order):
            record()
            return
        if bound(i) < best[0]:
            return
        u = order[i]
        counted = g1.degree(u) > 0 and bool(cands[u])
        if counted:
            remaining_label[g1.label(u)] -= 1
        for x in cands[u]:
            if x in used:
                continue
            mapping[u] = x
            used.add(x)
            free_label[g2.label(x)] -= 1
            hits = []
            for inc in earlier[u]:
                w = inc.node
                if w in mapping and image_edge(inc.edge, mapping, g2) is not None:
                    hits.append(w)
            for w in hits:
                cover[w] += 1
            cover[u] += len(hits)
            visit(i + 1)
            for w in hits:
                cover[w] -= 1
            cover[u] -= len(hits)
            free_label[g2.label(x)] += 1
            used.discard(x)
            del mapping[u]
        visit(i + 1)
        if counted:
            remaining_label[g1.label(u)] += 1

    visit(0)
    return OracleResult(max(best[0], 0), dict(sorted(best[2].items())), max(best[1], 0))


class OracleComparison(NamedTuple):
    valid: bool
    size_ratio: float
    node_recall: float | None


def compare_to_oracle(result: MatchResult, oracle: OracleResult, pattern: LabeledGraph,
                      data: LabeledGraph, planted_map: Mapping[str, str] | None = None,
                      mode: Mode | None = None, ontology: Ontology | None = None) -> OracleComparison:
    """Score a swarm result against the exact optimum and, if known, the planted truth."""
    mapping = result.mapping or {}
    valid = validate_mapping(pattern, data, mapping, mode, ontology).valid
    if oracle.size:
        ratio = len(mapping) / oracle.size
    else:
        ratio = 1.0 if not mapping else float("inf")
    recall = None
    if planted_map:
        hits = sum(1 for u, x in planted_map.items() if mapping.get(u) == x)
        recall = hits / len(planted_map)
    return OracleComparison(valid, ratio, recall)


# -- shipped fixtures -------------------------------------------------------------

class Fixture(NamedTuple):
    name: str
    pattern: LabeledGraph
    data: LabeledGraph
    planted_map: dict[str, str]
    ontology: Ontology | None
    mode: Mode
    description: str


FIXTURES = ("triangle", "planted_edge", "disjoint", "planted_triangle", "temporal",
            "temporal_reversed", "missing", "ontology")


def _read_text(name: str) -> str:
    return resources.files("assist").joinpath("fixtures", name).read_text(encoding="utf-8")


def load_fixture(name: str) -> Fixture:
    """Load a shipped scenario by name (see :data:`FIXTURES`)."""
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; choose from {FIXTURES}")
    meta = json.loads(_read_text(f"{name}.json"))
    pattern = load_graph(_read_text(meta["pattern"]), role=PATTERN)
    data = load_graph(_read_text(meta["data"]), role=DATA)
    ontology = load_ontology(_read_text(meta["ontology"])) if meta.get("ontology") else None
    return Fixture(name, pattern, data, dict(meta.get("planted_map", {})), ontology,
                   Mode.parse(meta.get("mode", "")), meta.get("description", ""))


def fixture_path(filename: str):
    """Filesystem path of a shipped fixture file, for command-line use."""
    return resources.files("assist").joinpath("fixtures", filename)
