import json

import pytest
from hypothesis import given

from assist.graph import (DATA, PATTERN, Edge, GraphFormatError, GraphValidationError,
                          LabeledGraph, graph_stats, graph_to_document, load_graph,
                          neighbors, read_graph, write_graph)

from strategies import labeled_graphs


def test_load_two_node_document():
    g = load_graph({"nodes": [{"id": "1", "label": "A"}, {"id": "2", "label": "B"}],
                    "edges": [{"source": "1", "target": "2"}]})
    assert len(g) == 2 and len(g.edges) == 1
    assert g.label("1") == "A" and g.role == DATA


def test_empty_document_is_an_empty_graph():
    g = load_graph('{"nodes": [], "edges": []}', role=PATTERN)
    assert len(g) == 0 and g.edges == () and g.role == PATTERN


def test_integer_ids_become_strings():
    g = load_graph({"nodes": [{"id": 1, "label": "A"}, {"id": 2, "label": "A"}],
                    "edges": [{"source": 1, "target": 2}]})
    assert g.node_ids == ("1", "2")


@pytest.mark.parametrize("doc, exc", [
    ("{not json", GraphFormatError),
    ([], GraphFormatError),
    ({"nodes": {}}, GraphFormatError),
    ({"nodes": [{"id": "1"}]}, GraphFormatError),
    ({"nodes": [{"id": "1", "label": 3}]}, GraphFormatError),
    ({"nodes": [{"id": "1", "label": "A"}], "edges": [{"source": "1"}]}, GraphFormatError),
    ({"nodes": [{"id": "1", "label": "A"}, {"id": "2", "label": "A"}],
      "edges": [{"source": "1", "target": "2", "t": -1}]}, GraphFormatError),
    ({"nodes": [{"id": "1", "label": "A"}, {"id": "1", "label": "B"}]}, GraphValidationError),
    ({"nodes": [{"id": "1", "label": "A"}], "edges": [{"source": "1", "target": "9"}]},
     GraphValidationError),
    ({"nodes": [{"id": "1", "label": "A"}], "edges": [{"source": "1", "target": "1"}]},
     GraphValidationError),
    ({"nodes": [{"id": "1", "label": ""}]}, GraphValidationError),
])
def test_bad_documents_are_rejected(doc, exc):
    with pytest.raises(exc):
        load_graph(doc)


def test_dangling_edge_names_the_endpoint():
    with pytest.raises(GraphValidationError, match="'9'"):
        load_graph({"nodes": [{"id": "1", "label": "A"}],
                    "edges": [{"source": "1", "target": "9"}]})


def test_duplicate_edges():
    nodes = {"a": "A", "b": "B"}
    with pytest.raises(GraphValidationError):
        LabeledGraph(nodes, [Edge("a", "b"), Edge("b", "a")])
    with pytest.raises(GraphValidationError):
        LabeledGraph(nodes, [Edge("a", "b", directed=True), Edge("a", "b")])
    # opposite directed edges are distinct
    g = LabeledGraph(nodes, [Edge("a", "b", directed=True), Edge("b", "a", directed=True)])
    assert len(g.edges) == 2 and g.directed


def test_mixed_timestamps_rejected():
    with pytest.raises(GraphValidationError, match="mixed"):
        LabeledGraph({"a": "A", "b": "B", "c": "C"}, [Edge("a", "b", t=1), Edge("b", "c")])


def test_temporal_flag():
    g = LabeledGraph({"a": "A", "b": "B"}, [Edge("a", "b", directed=True, t=1)])
    assert g.temporal and g.directed
    assert not LabeledGraph({"a": "A"}).temporal


def test_neighbors_and_outgoing_respect_direction():
    g = LabeledGraph({"a": "A", "b": "B", "c": "C"},
                     [Edge("a", "b", directed=True), Edge("b", "c")])
    assert [i.node for i in neighbors(g, "b")] == ["a", "c"]
    assert [i.node for i in g.outgoing("b")] == ["c"]
    assert [i.node for i in g.outgoing("a")] == ["b"]
    assert g.edge_from("b", "a") is None and g.edge_from("a", "b") is not None


def test_graph_stats_of_triangle(tri_data):
    s = graph_stats(tri_data)
    assert (s.node_count, s.edge_count, s.max_degree) == (3, 3, 2)
    assert s.label_histogram == {"A": 1, "B": 1, "C": 1}


def test_write_then_read(tmp_path, tri_data):
    path = tmp_path / "g.json"
    write_graph(tri_data, path)
    back = read_graph(path)
    assert back.nodes == tri_data.nodes and set(back.edges) == set(tri_data.edges)
    json.loads(path.read_text())  # plain JSON on disk


@given(labeled_graphs())
def test_document_round_trip(g):
    back = load_graph(json.dumps(graph_to_document(g)))
    assert back.nodes == g.nodes
    assert set(back.edges) == set(g.edges)


@given(labeled_graphs())
def test_undirected_adjacency_is_symmetric(g):
    for n in g.node_ids:
        for inc in g.incident(n):
            assert n in {i.node for i in g.incident(inc.node)}


@given(labeled_graphs())
def test_degree_sum_is_twice_edge_count(g):
    assert sum(g.degree(n) for n in g.node_ids) == 2 * len(g.edges)
