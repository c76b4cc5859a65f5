"""Regenerate the JSON fixtures shipped in src/assist/fixtures/.

Run from the repository root:  python tools/make_fixtures.py
"""
import json
from pathlib import Path

from assist.graph import DATA, PATTERN, Edge, LabeledGraph, graph_to_document
from assist.testkit import PlantSpec, generate_pair, triangle

OUT = Path(__file__).resolve().parents[1] / "src" / "assist" / "fixtures"


def save(name, pattern, data, planted=None, mode="", ontology=None, description=""):
    for suffix, g in (("pattern", pattern), ("data", data)):
        (OUT / f"{name}.{suffix}.json").write_text(
            json.dumps(graph_to_document(g), indent=2) + "\n", encoding="utf-8")
    meta = {"pattern": f"{name}.pattern.json", "data": f"{name}.data.json",
            "planted_map": planted or {}, "mode": mode, "description": description}
    if ontology is not None:
        (OUT / f"{name}.ontology.txt").write_text(ontology, encoding="utf-8")
        meta["ontology"] = f"{name}.ontology.txt"
    (OUT / f"{name}.json").write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")


def g(nodes, edges, role, **kw):
    return LabeledGraph(nodes, [Edge(a, b, **kw) for a, b in edges], role=role)


def main():
    OUT.mkdir(parents=True, exist_ok=True)

    save("triangle",
         triangle("ABC", PATTERN),
         g({"x1": "A", "x2": "B", "x3": "C"}, [("x1", "x2"), ("x2", "x3"), ("x1", "x3")], DATA),
         {"A": "x1", "B": "x2", "C": "x3"},
         description="identical labeled triangles")

    save("planted_edge",
         g({"p1": "A", "p2": "B", "p3": "C", "p4": "D"},
           [("p1", "p2"), ("p2", "p3"), ("p1", "p4")], PATTERN),
         g({"d1": "A", "d2": "B", "d3": "D", "d4": "C"},
           [("d1", "d2"), ("d2", "d3"), ("d1", "d4")], DATA),
         {"p1": "d1", "p2": "d2"},
         description="every label peers but only the A-B edge is shared")

    save("disjoint",
         g({"p1": "P", "p2": "Q"}, [("p1", "p2")], PATTERN),
         g({"d1": "X", "d2": "Y", "d3": "Z"}, [("d1", "d2"), ("d2", "d3")], DATA),
         description="no label in common, so nothing peers")

    # planted triangle grown to 15 nodes a side, with an S leaf on A in both graphs
    pair = generate_pair(PlantSpec(triangle("ABC", PATTERN), extra_nodes=11, rng_seed=4))
    inv = {v: k for k, v in pair.planted_map.items()}
    pa = next(u for u in pair.pattern.node_ids if pair.pattern.label(u) == "A")
    da = pair.planted_map[pa]
    pattern = LabeledGraph({**pair.pattern.nodes, "p15": "S"},
                           list(pair.pattern.edges) + [Edge(pa, "p15")], role=PATTERN)
    data = LabeledGraph({**pair.data.nodes, "d15": "S"},
                        list(pair.data.edges) + [Edge(da, "d15")], role=DATA)
    assert len(pattern) == len(data) == 15 and inv
    save("planted_triangle", pattern, data, {**pair.planted_map, "p15": "d15"},
         description="triangle ABC planted in two random 15-node graphs; "
                     "both growths attach an S leaf to A")

    tp = LabeledGraph({"a": "A", "b": "B", "c": "C"},
                      [Edge("a", "b", directed=True, t=1), Edge("b", "c", directed=True, t=2)],
                      role=PATTERN)
    td = LabeledGraph({"x": "A", "y": "B", "z": "C", "w": "D"},
                      [Edge("x", "y", directed=True, t=1), Edge("y", "z", directed=True, t=2),
                       Edge("z", "w", directed=True, t=3)], role=DATA)
    save("temporal", tp, td, {"a": "x", "b": "y", "c": "z"}, mode="temporal",
         description="ordered path A->B->C in both graphs, edge times agree")
    tr = LabeledGraph({"x": "A", "y": "B", "z": "C", "w": "D"},
                      [Edge("x", "y", directed=True, t=2), Edge("y", "z", directed=True, t=1),
                       Edge("z", "w", directed=True, t=3)], role=DATA)
    save("temporal_reversed", tp, tr, {"a": "x", "b": "y", "c": "z"}, mode="temporal",
         description="same path, data edge times reversed")

    # pattern: triangle ABC plus D on A.  Data lost B, and A reaches C only via M.
    mp = g({"a": "A", "b": "B", "c": "C", "d": "D"},
           [("a", "b"), ("b", "c"), ("a", "c"), ("a", "d")], PATTERN)
    md = g({"dA": "A", "dC": "C", "dD": "D", "dM": "M", "dE": "E", "dF": "F", "dG": "G",
            "dH": "H"},
           [("dA", "dD"), ("dA", "dM"), ("dM", "dC"), ("dC", "dE"), ("dD", "dF"),
            ("dF", "dG"), ("dG", "dH"), ("dE", "dH")], DATA)
    save("missing", mp, md, {"a": "dA", "c": "dC", "d": "dD"}, mode="missing",
         description="planted node B deleted from the data; A and C joined only through M")

    op = g({"p": "person", "c": "city", "o": "org"}, [("p", "c"), ("c", "o")], PATTERN)
    od = g({"alice": "Alice", "bob": "Bob", "c1": "city", "o1": "org", "o2": "org"},
           [("alice", "c1"), ("c1", "o1"), ("bob", "o2")], DATA)
    save("ontology", op, od, {"p": "alice", "c": "c1", "o": "o1"}, mode="imprecise",
         ontology="# subsumption: parent > child\nagent > person\n"
                  "person > Alice\nperson > Bob\n",
         description="person-city matched through person > Alice; city-org matched exactly")


if __name__ == "__main__":
    main()
