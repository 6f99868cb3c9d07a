"""Co-occurrence graph construction and degree centrality."""

import random

from defhyper.cograph import (Graph, build_graph, build_hypernym_map,
                              centrality_of, degree_centrality)

from conftest import make_definition


def _defn(term, gold_surface, partners=()):
    tokens = [term, "is", "a", gold_surface, "for", "managing", "data"]
    return make_definition(term=term, tokens=tokens,
                           hypernym=gold_surface,
                           tag_partners=list(partners))


def test_hypernym_map_lowercases_and_first_record_wins():
    defs = [
        _defn("sql", "Language"),
        _defn("SQL", "format"),       # duplicate term: ignored
        _defn("css", "language"),
    ]
    mapping = build_hypernym_map(defs)
    assert mapping == {"sql": "language", "css": "language"}


def test_hypernym_map_skips_definitions_without_gold():
    d = _defn("sql", "language")
    d.gold = set()
    assert build_hypernym_map([d]) == {}


def test_graph_is_clique_union_over_mapped_tag_sets():
    defs = [
        _defn("sql", "language"),
        _defn("mysql", "database"),
        _defn("css", "format"),
        _defn("tcp", "protocol", partners=["sql", "mysql", "unknown"]),
    ]
    mapping = build_hypernym_map(defs)
    graph = build_graph(defs, mapping)
    # The tcp record cliques {protocol, language, database}; css's
    # record maps only itself, so format is isolated but present.
    assert graph.adjacency["protocol"] == {"language", "database"}
    assert graph.adjacency["language"] == {"protocol", "database"}
    assert graph.adjacency["format"] == set()
    assert "unknown" not in graph.adjacency


def test_same_hypernym_tags_do_not_self_loop():
    defs = [
        _defn("sql", "language"),
        _defn("css", "language", partners=["sql"]),
    ]
    graph = build_graph(defs, build_hypernym_map(defs))
    assert graph.adjacency["language"] == set()


def test_degree_centrality_hand_example():
    g = Graph()
    g.add_edge("a", "b")
    g.add_edge("a", "c")
    g.add_edge("b", "c")
    g.add_edge("a", "d")
    dc = degree_centrality(g)
    assert dc == {"a": 1.0, "b": 2 / 3, "c": 2 / 3, "d": 1 / 3}


def test_degree_centrality_of_edgeless_graph_is_all_zero():
    g = Graph()
    g.add_node("a")
    g.add_node("b")
    assert degree_centrality(g) == {"a": 0.0, "b": 0.0}
    assert degree_centrality(Graph()) == {}


def test_centrality_lookup_is_lowercased_with_zero_default():
    assert centrality_of({"language": 0.5}, "Language") == 0.5
    assert centrality_of({"language": 0.5}, "nothere") == 0.0


def test_centrality_matches_brute_force_on_random_graphs():
    rng = random.Random(7)
    for _ in range(25):
        n = rng.randint(2, 50)
        nodes = [f"n{k}" for k in range(n)]
        g = Graph()
        counts = {v: set() for v in nodes}
        for v in nodes:
            g.add_node(v)
        for _ in range(rng.randint(0, 3 * n)):
            a, b = rng.sample(nodes, 2)
            g.add_edge(a, b)
            counts[a].add(b)
            counts[b].add(a)
        dmax = max(len(s) for s in counts.values())
        dc = degree_centrality(g)
        for v in nodes:
            if dmax == 0:
                assert dc[v] == 0.0
            else:
                assert dc[v] == len(counts[v]) / dmax
                assert round(dc[v] * dmax) == len(counts[v])
