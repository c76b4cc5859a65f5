"""Label index over the data graph and pattern-to-data peer sets.

Peers are data nodes whose label matches a pattern node's label: matching
subgraphs of size one.  The index keeps labels in a sorted array so each
lookup costs a binary search; the number of key comparisons is counted so the
logarithmic lookup cost can be measured rather than assumed.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .extensions import Ontology
from .graph import DATA, PATTERN, LabeledGraph

__all__ = ["LabelIndex", "PeerMap", "build_label_index", "peers_of", "peer_all"]


class LabelIndex:
    """Sorted label keys, each mapped to the sorted ids of data nodes carrying it."""

    def __init__(self, groups: dict[str, tuple[str, ...]]):
        self.keys: tuple[str, ...] = tuple(sorted(groups))
        self._groups = groups
        self.comparisons = 0

    def __len__(self) -> int:
        return sum(len(v) for v in self._groups.values())

    def as_dict(self) -> dict[str, list[str]]:
        return {k: list(self._groups[k]) for k in self.keys}

    def lookup(self, label: str) -> tuple[tuple[str, ...], int]:
        """Binary search for `label`; returns (node ids, key comparisons used)."""
        keys = self.keys
        lo, hi, cost = 0, len(keys), 0
        while lo < hi:
            mid = (lo + hi) // 2
            cost += 1
            if keys[mid] < label:
                lo = mid + 1
            else:
                hi = mid
        found = ()
        if lo < len(keys):
            cost += 1
            if keys[lo] == label:
                found = self._groups[label]
        self.comparisons += cost
        return found, cost


def build_label_index(data: LabeledGraph) -> LabelIndex:
    if data.role != DATA:
        raise ValueError("build_label_index expects a data graph")
    groups: dict[str, list[str]] = {}
    for n in data.node_ids:
        groups.setdefault(data.label(n), []).append(n)
    return LabelIndex({k: tuple(v) for k, v in groups.items()})


def peers_of(index: LabelIndex, label: str) -> list[str]:
    return list(index.lookup(label)[0])


@dataclass
class PeerMap:
    """Pattern node -> data peers, the reverse map, and per-pair match quality.

    ``comparisons`` counts index key comparisons spent building the map.
    """

    peers: dict[str, tuple[str, ...]]
    reverse: dict[str, tuple[str, ...]]
    quality: dict[tuple[str, str], float]
    unpeered: tuple[str, ...] = ()
    comparisons: int = 0
    lookups: int = field(default=0)

    @property
    def peered(self) -> tuple[str, ...]:
        """Pattern nodes with at least one peer, in id order."""
        return tuple(u for u, xs in self.peers.items() if xs)

    def pairs(self):
        for u, xs in self.peers.items():
            for x in xs:
                yield u, x


def peer_all(pattern: LabeledGraph, index: LabelIndex, ontology: Ontology | None = None,
             gamma: float = 0.5) -> PeerMap:
    """Peer every pattern node against the data index.

    Exact-label peers get quality 1.  With an ontology, data nodes whose
    label subsumes or is subsumed by the pattern label are added with quality
    `gamma`.  Pattern nodes without peers are kept and listed in
    ``unpeered``.
    """
    if pattern.role != PATTERN:
        raise ValueError("peer_all expects a pattern graph")
    peers: dict[str, tuple[str, ...]] = {}
    quality: dict[tuple[str, str], float] = {}
    reverse: dict[str, list[str]] = {}
    comparisons = lookups = 0
    for u in pattern.node_ids:
        label = pattern.label(u)
        found: dict[str, float] = {}
        hits, cost = index.lookup(label)
        comparisons += cost
        lookups += 1
        for x in hits:
            found[x] = 1.0
        if ontology is not None:
            for other in sorted(ontology.related(label) - {label}):
                hits, cost = index.lookup(other)
                comparisons += cost
                lookups += 1
                for x in hits:
                    found.setdefault(x, gamma)
        xs = tuple(sorted(found))
        peers[u] = xs
        for x in xs:
            quality[(u, x)] = found[x]
            reverse.setdefault(x, []).append(u)
    unpeered = tuple(u for u, xs in peers.items() if not xs)
    return PeerMap(peers, {x: tuple(sorted(us)) for x, us in sorted(reverse.items())},
                   quality, unpeered, comparisons, lookups)
