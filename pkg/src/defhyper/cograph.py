"""Hypernym co-occurrence graph and degree centrality.

Each definition carries a tag set: the defined term plus any partner
terms it was tagged with.  Mapping every tag to its known hypernym (when
one is known) turns each tag set into a clique of hypernym nodes; the
union of those cliques over a corpus is the co-occurrence graph.  Degree
centrality of a node is its degree divided by the largest degree in the
graph, so values live in [0, 1] and popular hypernyms sit near 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable


@dataclass
class Graph:
    """Undirected simple graph over lowercased hypernym surfaces."""

    adjacency: dict[str, set[str]] = field(default_factory=dict)

    @property
    def nodes(self) -> list[str]:
        return sorted(self.adjacency)

    def add_node(self, node: str) -> None:
        self.adjacency.setdefault(node, set())

    def add_edge(self, a: str, b: str) -> None:
        if a == b:
            return
        self.adjacency.setdefault(a, set()).add(b)
        self.adjacency.setdefault(b, set()).add(a)

    def degree(self, node: str) -> int:
        return len(self.adjacency.get(node, ()))

    def max_degree(self) -> int:
        if not self.adjacency:
            return 0
        return max(len(nbrs) for nbrs in self.adjacency.values())


def build_hypernym_map(definitions: Iterable) -> dict[str, str]:
    """term -> gold hypernym surface, both lowercased; first record wins."""
    mapping: dict[str, str] = {}
    for d in definitions:
        term = d.term.lower()
        if term in mapping or not d.gold:
            continue
        gold_pos = min(d.gold)
        mapping[term] = d.W[gold_pos - 1].lower()
    return mapping


def build_graph(definitions: Iterable, hypernym_map: dict[str, str]) -> Graph:
    """Clique-union co-occurrence graph over mapped tag sets.

    Tags with no known hypernym are skipped.  A tag set whose mapped
    hypernyms collapse to a single node still registers that node, so
    isolated hypernyms exist in the graph with degree zero.
    """
    graph = Graph()
    for d in definitions:
        tags = [d.term] + list(d.tag_partners)
        mapped = []
        seen = set()
        for tag in tags:
            hyp = hypernym_map.get(tag.lower())
            if hyp is not None and hyp not in seen:
                seen.add(hyp)
                mapped.append(hyp)
        for node in mapped:
            graph.add_node(node)
        for i in range(len(mapped)):
            for j in range(i + 1, len(mapped)):
                graph.add_edge(mapped[i], mapped[j])
    return graph


def degree_centrality(graph: Graph) -> dict[str, float]:
    """degree / max_degree per node; all zeros when the graph has no edges."""
    dmax = graph.max_degree()
    if dmax == 0:
        return {node: 0.0 for node in graph.adjacency}
    return {node: len(nbrs) / dmax for node, nbrs in graph.adjacency.items()}


def centrality_of(dc_map: dict[str, float], surface: str) -> float:
    """Centrality feature for a candidate surface; unknown nodes score 0."""
    return dc_map.get(surface.lower(), 0.0)
