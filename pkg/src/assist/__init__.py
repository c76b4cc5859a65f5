"""Approximate labeled subgraph matching by stigmergic swarming agents.

Typical use::

    from assist import Params, match
    result, report = match(pattern, data, seed=1)
    result.mapping
"""
from .extensions import Mode, Ontology, load_ontology, match_labels, read_ontology
from .extraction import MatchResult, extract_matches, validate_mapping
from .graph import (DATA, PATTERN, Edge, LabeledGraph, graph_stats, graph_to_document,
                    load_graph, neighbors, read_graph, write_graph)
from .peering import build_label_index, peer_all, peers_of
from .pheromone import Params, PheromoneState, field_totals
from .swarm import run_until_converged, run_wave, weighted_choice

__version__ = "0.1.0"


def match(pattern, data, params=None, mode=None, seed=0, *, ontology=None, one_to_one=True):
    """Run the swarm to convergence and extract the match.

    Returns ``(MatchResult, ConvergenceReport)``.
    """
    params = params or Params()
    mode = mode or Mode()
    state, report = run_until_converged(pattern, data, params, mode, seed, ontology=ontology)
    result = extract_matches(state, pattern, data, params, mode=mode, one_to_one=one_to_one)
    return result, report


__all__ = [
    "PATTERN", "DATA", "Edge", "LabeledGraph", "load_graph", "read_graph", "write_graph",
    "graph_to_document", "neighbors", "graph_stats",
    "build_label_index", "peers_of", "peer_all",
    "Params", "PheromoneState", "field_totals",
    "weighted_choice", "run_wave", "run_until_converged",
    "Mode", "Ontology", "load_ontology", "read_ontology", "match_labels",
    "MatchResult", "extract_matches", "validate_mapping",
    "match",
]
