import math

import pytest
from hypothesis import given, settings, strategies as st

from bagrefine.decomposition import TreeDecomposition
from bagrefine.errors import PreconditionError
from bagrefine.exact import pathwidth_exact, treewidth, validate
from bagrefine.graph import Graph, complete, components, cycle, grid, path, random_planar_triangulation
from bagrefine.layered import (
    Layering,
    bfs_layering,
    layered_planar_input,
    layered_width,
    residue_peel,
    shallow_peel,
    sqrt_decomposition,
    tree_cotree_decomposition,
    union_bag_width_report,
    union_certificate,
    union_pathwidth_report,
    window_path_decomposition,
)


def test_bfs_layering_examples():
    assert bfs_layering(path(3), [0]).layers == (frozenset({0}), frozenset({1}), frozenset({2}))
    assert [len(l) for l in bfs_layering(complete(4), [2]).layers] == [1, 3]
    assert [len(l) for l in bfs_layering(grid(3, 3), [0]).layers] == [1, 2, 3, 2, 1]
    # an unrooted component starts at its smallest vertex
    two = Graph.from_edges(4, [(0, 1), (2, 3)])
    assert bfs_layering(two, [0]).layers == (frozenset({0, 2}), frozenset({1, 3}))


def test_layering_violations():
    bad = Layering((frozenset({0}), frozenset({1}), frozenset({2})))
    assert bad.violations(Graph.from_edges(3, [(0, 2)]))
    assert bad.violations(path(3)) == []


def test_layered_width_examples():
    lay = bfs_layering(complete(4), [0])
    assert layered_width(TreeDecomposition.single(4, range(4)), lay) == 3
    p = path(6)
    edges = TreeDecomposition.from_path(6, [{i, i + 1} for i in range(5)])
    assert layered_width(edges, bfs_layering(p, [0])) == 1
    with pytest.raises(PreconditionError):
        layered_width(edges, bfs_layering(path(3), [0]))


def test_tree_cotree_examples():
    dec, lay = tree_cotree_decomposition(complete(4))
    assert validate(complete(4), dec) == [] and layered_width(dec, lay) <= 3
    dec, lay = tree_cotree_decomposition(cycle(4))
    assert validate(cycle(4), dec) == [] and layered_width(dec, lay) <= 3
    with pytest.raises(PreconditionError):
        tree_cotree_decomposition(complete(5))
    with pytest.raises(PreconditionError):
        tree_cotree_decomposition(path(2))


@pytest.mark.parametrize("seed", range(6))
def test_tree_cotree_on_triangulations(seed):
    g, _ = random_planar_triangulation(30, seed=seed)
    dec, lay = tree_cotree_decomposition(g, root=seed % 30)
    assert validate(g, dec) == [] and lay.violations(g) == []
    assert layered_width(dec, lay) <= 3
    # each bag is three vertical paths, so it meets every layer in at most 3 vertices
    assert all(len(b & layer) <= 3 for b in dec.bags for layer in lay.layers)


def test_residue_peel_picks_smallest_class():
    lay = Layering(tuple(frozenset({i}) if i % 3 else frozenset({i, 100 + i}) for i in range(9)))
    peel = residue_peel(lay, 1, 9)
    assert peel.p == 3 and peel.residue == 1 and peel.vertices == frozenset({1, 4, 7})


@pytest.mark.parametrize("n,seed", [(12, 0), (25, 1), (40, 2), (60, 3)])
def test_sqrt_planar(n, seed):
    g, _ = random_planar_triangulation(n, seed=seed)
    lay, dec, c = layered_planar_input(g)
    sq = sqrt_decomposition(g, lay, dec, 3)
    assert validate(g, sq.dec) == []
    assert sq.dec.width <= 2 * math.sqrt(3 * n)
    # every component of g minus the peeled layers spans at most p - 1 layers
    where = lay.layer_of()
    for comp in components(g, sq.peel.vertices):
        span = {where[v] for v in comp}
        assert max(span) - min(span) + 1 <= sq.peel.p - 1


def test_sqrt_degenerate_single_layer():
    g = complete(5)
    lay = Layering((frozenset(range(5)),))
    dec = TreeDecomposition.single(5, range(5))
    sq = sqrt_decomposition(g, lay, dec, 5)
    assert sq.peel.p == 1 and sq.peel.vertices == frozenset(range(5))
    assert sq.dec.width == 4


def test_sqrt_non_planar_host_with_supplied_layering():
    # C3 x C12 has Euler genus 2; column-distance layers with two-layer windows
    k = 12
    vid = lambda i, j: 3 * j + i
    edges = [(vid(i, j), vid((i + 1) % 3, j)) for i in range(3) for j in range(k)]
    edges += [(vid(i, j), vid(i, (j + 1) % k)) for i in range(3) for j in range(k)]
    g = Graph.from_edges(3 * k, edges)
    lay = bfs_layering(g, [0, 1, 2])
    windows = TreeDecomposition.from_path(g.n, [lay.layers[d] | lay.layers[d + 1] for d in range(len(lay.layers) - 1)])
    assert validate(g, windows) == []
    c = 2 * 2 + 3
    assert layered_width(windows, lay) <= c
    sq = sqrt_decomposition(g, lay, windows, c)
    assert validate(g, sq.dec) == [] and sq.dec.width <= 2 * math.sqrt(c * g.n)


def test_sqrt_rejects_small_c():
    g, _ = random_planar_triangulation(20, seed=0)
    lay, dec, c = layered_planar_input(g)
    with pytest.raises(PreconditionError):
        sqrt_decomposition(g, lay, dec, c - 1)
    with pytest.raises(PreconditionError):
        sqrt_decomposition(g, lay, dec, 0)


def test_union_reports():
    g, _ = random_planar_triangulation(30, seed=7)
    lay, dec, _ = layered_planar_input(g)
    sq = sqrt_decomposition(g, lay, dec, 3)
    r1 = union_bag_width_report(g, sq, 1, bound=11)
    assert r1.exhaustive and r1.max_width <= 11
    r2 = union_bag_width_report(g, sq, 2, bound=20)
    assert r2.max_width <= 20
    assert r1.line().startswith("k=1 ")
    with pytest.raises(PreconditionError):
        union_bag_width_report(g, sq, 0)


def test_union_of_all_bags_is_treewidth():
    g, _ = random_planar_triangulation(12, seed=3)
    lay, dec, _ = layered_planar_input(g)
    sq = sqrt_decomposition(g, lay, dec, 3)
    rep = union_bag_width_report(g, sq.dec, sq.dec.size)
    assert rep.subsets == 1 and rep.max_exact == treewidth(g)


@pytest.mark.parametrize("seed", range(4))
def test_union_certificates_validate(seed):
    g, _ = random_planar_triangulation(40, seed=seed)
    lay, dec, _ = layered_planar_input(g)
    sq = sqrt_decomposition(g, lay, dec, 3)
    for nodes in ((0,), (0, sq.dec.size - 1)):
        cert, sub = union_certificate(g, sq, nodes)
        assert validate(sub, cert) == []
        assert cert.width <= (3 * len(nodes) + 1) * 3 - 1


@pytest.mark.parametrize("n,seed", [(20, 0), (45, 5)])
def test_shallow_peel_planar(n, seed):
    g, _ = random_planar_triangulation(n, seed=seed)
    lay, dec, _ = layered_planar_input(g)
    pr = shallow_peel(g, lay, dec, 3)
    root = math.sqrt(3 * n)
    assert len(pr.S) <= root
    sg, _ = g.induced(pr.S)
    assert (treewidth(sg) if sg.n else -1) <= 2
    assert validate(pr.rest, pr.dec_rest) == [] and pr.dec_rest.width <= root
    for k in (1, 2):
        rep = union_pathwidth_report(pr, k)
        assert rep.max_window_width <= 6 * k - 1
        assert rep.max_exact <= rep.max_window_width


def test_window_decomposition_gives_pathwidth_bound():
    g, _ = random_planar_triangulation(30, seed=2)
    lay, dec, _ = layered_planar_input(g)
    pr = shallow_peel(g, lay, dec, 3)
    for x in range(min(pr.dec_rest.size, 5)):
        wd, sub = window_path_decomposition(pr, [x])
        assert validate(sub, wd) == []
        if sub.n <= 12:
            assert pathwidth_exact(sub) <= wd.width


def test_shallow_peel_path():
    g = path(16)
    lay = bfs_layering(g, [0])
    dec = TreeDecomposition.from_path(16, [{i, i + 1} for i in range(15)])
    pr = shallow_peel(g, lay, dec, 1)
    assert pr.peel.p == 4
    assert pr.S == frozenset(range(pr.peel.residue, 16, 4))
    assert all(len(c) <= 3 for c in components(g, pr.S))


def test_shallow_peel_needs_n_above_c():
    g = complete(3)
    lay = bfs_layering(g, [0])
    with pytest.raises(PreconditionError):
        shallow_peel(g, lay, TreeDecomposition.single(3, range(3)), 3)


@settings(max_examples=15)
@given(st.integers(10, 40), st.integers(0, 10_000))
def test_sqrt_property(n, seed):
    g, _ = random_planar_triangulation(n, seed=seed)
    lay, dec, c = layered_planar_input(g)
    assert c <= 3
    sq = sqrt_decomposition(g, lay, dec, max(c, 1))
    assert validate(g, sq.dec) == [] and sq.dec.width <= sq.bound()
