import random
from itertools import combinations

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from bagrefine.canonical import canonical_key, enumerate_connected, enumerate_graphs, is_isomorphic
from bagrefine.errors import SizeCapError
from bagrefine.graph import (
    Graph,
    complete,
    complete_bipartite,
    components,
    cycle,
    elongated_prism,
    empty,
    grid,
    path,
    petersen,
    random_planar_graph,
    random_planar_triangulation,
    star,
    subdivide_edges,
    wheel,
)
from bagrefine.minors import check_minor_witness, is_minor, is_subdivision_of
from bagrefine.oracles import min_vertex_cut_brute
from bagrefine.paths import max_disjoint_paths


@st.composite
def graphs(draw, max_n=7, min_n=0):
    n = draw(st.integers(min_n, max_n))
    pairs = list(combinations(range(n), 2))
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [p for p, k in zip(pairs, keep) if k])


def test_components_examples():
    assert sorted(map(sorted, components(path(3), {1}))) == [[0], [2]]
    assert components(complete(4)) == [frozenset(range(4))]
    parts = components(cycle(6), {0, 3})
    assert sorted(map(len, parts)) == [2, 2]
    assert components(empty(0)) == []


@given(graphs(), st.data())
def test_components_partition(g, data):
    removed = set(data.draw(st.lists(st.integers(0, max(g.n - 1, 0)), max_size=3))) if g.n else set()
    parts = components(g, removed)
    union = set().union(*parts) if parts else set()
    assert union == set(range(g.n)) - removed
    assert sum(map(len, parts)) == len(union)
    for a, b in combinations(parts, 2):
        assert not any(g.has_edge(u, v) for u in a for v in b)
    for p in parts:
        sub, _ = g.induced(p)
        assert nx.is_connected(sub.to_networkx())


def test_generators_are_simple():
    for g in (complete(5), complete_bipartite(2, 4), path(6), cycle(5), star(4), wheel(5), grid(3, 4), petersen(), elongated_prism((1, 0, 2))):
        g.check()
        assert all(u != v for u, v in g.edges)


def test_generator_shapes():
    assert (complete(5).m, complete_bipartite(2, 6).m, path(6).m, cycle(6).m, star(4).n, grid(3, 3).m) == (10, 12, 5, 6, 5, 12)
    assert wheel(5).n == 6 and wheel(5).m == 10
    prism = elongated_prism()
    assert nx.is_isomorphic(prism.to_networkx(), nx.circular_ladder_graph(3))
    sub = elongated_prism((2, 0, 1))
    assert sub.n == 9 and sub.m == 12


def test_random_generation_is_deterministic():
    a, _ = random_planar_triangulation(20, seed=4)
    b, _ = random_planar_triangulation(20, seed=4)
    assert a.sorted_edges() == b.sorted_edges()
    assert a.m == 3 * 20 - 6
    assert nx.check_planarity(a.to_networkx())[0]
    h = random_planar_graph(15, seed=2)
    assert nx.is_connected(h.to_networkx()) and nx.check_planarity(h.to_networkx())[0]


def test_enumeration_counts():
    assert [len(enumerate_connected(n)) for n in range(1, 8)] == [1, 1, 2, 6, 21, 112, 853]
    assert [len(enumerate_graphs(n)) for n in range(0, 7)] == [1, 1, 2, 4, 11, 34, 156]
    three = enumerate_connected(3)
    assert sorted(g.m for g in three) == [2, 3]


def test_enumeration_matches_graph_atlas():
    atlas = [g for g in nx.graph_atlas_g() if g.number_of_nodes() == 6 and nx.is_connected(g)]
    ours = enumerate_connected(6)
    assert len(ours) == len(atlas) == 112
    # each atlas graph matches exactly one enumerated graph
    keys = {canonical_key(g) for g in ours}
    assert len(keys) == 112
    for h in atlas:
        relabelled = nx.convert_node_labels_to_integers(h)
        assert canonical_key(Graph.from_edges(6, relabelled.edges())) in keys


@settings(max_examples=60)
@given(graphs(max_n=7), st.randoms(use_true_random=False))
def test_canonical_key_is_invariant(g, rnd):
    perm = list(range(g.n))
    rnd.shuffle(perm)
    h = g.relabel(perm)
    assert canonical_key(g) == canonical_key(h)
    assert is_isomorphic(g, h)


def test_enumeration_cap():
    with pytest.raises(SizeCapError):
        enumerate_graphs(9)


def test_minor_examples():
    assert is_minor(complete(5), complete(4)) is not None
    assert is_minor(path(7), cycle(3)) is None
    assert is_minor(star(5), cycle(3)) is None
    w = is_minor(petersen(), complete(5))
    assert w is not None and check_minor_witness(petersen(), complete(5), w)
    assert is_minor(petersen(), complete(6)) is None
    assert is_minor(grid(3, 3), complete(5)) is None
    assert is_minor(grid(3, 3), complete(4)) is not None


def _is_minor_nx_oracle(g: Graph, pattern: Graph) -> bool:
    """Contract edges / delete vertices exhaustively with networkx (tiny graphs only)."""
    target = pattern.to_networkx()
    seen = set()
    stack = [g.to_networkx()]
    while stack:
        h = stack.pop()
        key = nx.weisfeiler_lehman_graph_hash(h) + str(sorted(d for _, d in h.degree()))
        if (key, h.number_of_nodes(), h.number_of_edges()) in seen:
            continue
        seen.add((key, h.number_of_nodes(), h.number_of_edges()))
        if h.number_of_nodes() < target.number_of_nodes() or h.number_of_edges() < target.number_of_edges():
            continue
        if nx.algorithms.isomorphism.GraphMatcher(h, target).subgraph_is_monomorphic():
            return True
        for v in list(h.nodes):
            k = h.copy()
            k.remove_node(v)
            stack.append(k)
        for u, v in list(h.edges):
            stack.append(nx.contracted_nodes(h, u, v, self_loops=False))
    return False


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=6, min_n=3))
def test_minor_matches_contraction_oracle(g):
    for pattern in (cycle(3), complete(4), complete_bipartite(2, 3)):
        assert (is_minor(g, pattern) is not None) == _is_minor_nx_oracle(g, pattern)


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=7, min_n=4), st.randoms(use_true_random=False))
def test_minor_is_monotone_in_pattern(g, rnd):
    pattern = complete(4)
    if is_minor(g, pattern) is None:
        return
    edges = list(pattern.edges)
    drop = rnd.sample(edges, rnd.randint(0, len(edges)))
    smaller = Graph.from_edges(4, [e for e in edges if e not in drop])
    assert is_minor(g, smaller) is not None


def test_minor_witness_is_checked():
    w = is_minor(complete(5), complete(4))
    assert check_minor_witness(complete(5), complete(4), w)
    bad = dict(w)
    first = next(iter(bad))
    bad[first] = frozenset()
    assert not check_minor_witness(complete(5), complete(4), bad)


def test_subdivision_examples():
    assert is_subdivision_of(cycle(6), cycle(3)) is not None
    assert is_subdivision_of(complete(4), complete(4)) is not None
    spider = subdivide_edges(star(3), {(0, 1): 1, (0, 2): 1, (0, 3): 1})
    assert is_subdivision_of(spider, star(3)) is not None


def test_subdivision_is_exact_not_contains():
    # a subdivision of C3 plus a pendant edge is not itself a subdivision of C3
    g = cycle(5).add_edges([])
    pendant = Graph.from_edges(6, list(g.edges) + [(0, 5)])
    assert is_subdivision_of(pendant, cycle(3)) is None
    assert is_subdivision_of(cycle(4), complete(4)) is None
    assert is_subdivision_of(path(4), cycle(3)) is None
    # K4 with one edge subdivided twice, and not a subdivision of K_{2,3}
    k4s = subdivide_edges(complete(4), {(0, 1): 2})
    assert is_subdivision_of(k4s, complete(4)) is not None
    assert is_subdivision_of(k4s, complete_bipartite(2, 3)) is None


def _subdivision_brute(g: Graph, pattern: Graph) -> bool:
    """Suppress degree-2 vertices in every way and compare with networkx isomorphism."""
    if g.m - g.n != pattern.m - pattern.n:
        return False
    target = pattern.to_networkx()
    h0 = g.to_networkx()
    stack = [h0]
    seen = set()
    while stack:
        h = stack.pop()
        key = tuple(sorted(h.edges))
        if key in seen:
            continue
        seen.add(key)
        if h.number_of_nodes() == target.number_of_nodes() and nx.is_isomorphic(nx.Graph(h), target) and not any(
            h.number_of_edges(u, v) > 1 for u, v in h.edges()
        ):
            return True
        for v in list(h.nodes):
            if h.degree(v) == 2 and not h.has_edge(v, v):
                a, b = list(h.neighbors(v))
                if a != b and not h.has_edge(a, b):
                    k = nx.Graph(h)
                    k.remove_node(v)
                    k.add_edge(a, b)
                    stack.append(nx.convert_node_labels_to_integers(k))
    return False


@settings(max_examples=80, deadline=None)
@given(graphs(max_n=7, min_n=3))
def test_subdivision_matches_suppression_oracle(g):
    for pattern in (cycle(3), complete(4), star(3), complete_bipartite(2, 3)):
        assert (is_subdivision_of(g, pattern) is not None) == _subdivision_brute(g, pattern), pattern.sorted_edges()


def test_disjoint_path_examples():
    k23 = complete_bipartite(2, 3)
    assert len(max_disjoint_paths(k23, [0], [1], share_terminals=True)) == 3
    two = empty(2)
    assert len(max_disjoint_paths(two, [0], [1])) == 0
    g = grid(4, 4)
    bundle = max_disjoint_paths(g, [0, 4, 8, 12], [3, 7, 11, 15])
    assert len(bundle) == 4
    bundle.check(g)


def test_disjoint_paths_respect_forbidden_internal():
    k23 = complete_bipartite(2, 3)
    bundle = max_disjoint_paths(k23, [0], [1], forbidden_internal=[2], share_terminals=True)
    assert len(bundle) == 2
    bundle.check(k23, forbidden_internal=[2], share_terminals=True)


@settings(max_examples=80, deadline=None)
@given(graphs(max_n=8, min_n=2), st.data())
def test_disjoint_paths_match_min_cut(g, data):
    vs = list(range(g.n))
    sources = data.draw(st.sets(st.sampled_from(vs), min_size=1, max_size=2))
    rest = [v for v in vs if v not in sources]
    if not rest:
        return
    sinks = data.draw(st.sets(st.sampled_from(rest), min_size=1, max_size=2))
    bundle = max_disjoint_paths(g, sources, sinks)
    bundle.check(g)
    assert len(bundle) == min_vertex_cut_brute(g, sources, sinks)


def test_random_minor_triples_within_guardrails():
    rng = random.Random(5)
    for _ in range(15):
        n = rng.randint(5, 8)
        g = Graph.from_edges(n, [p for p in combinations(range(n), 2) if rng.random() < 0.5])
        sub = Graph.from_edges(4, [e for e in complete(4).edges if rng.random() < 0.6])
        if is_minor(g, complete(4)) is not None:
            assert is_minor(g, sub) is not None
