import pytest

from bagrefine.drawing import Crossing, Drawing
from bagrefine.errors import PreconditionError
from bagrefine.exact import validate
from bagrefine.gadget import (
    STOCK_DRAWINGS,
    build_gadget,
    chord_crossings,
    delete_vertex,
    extend_over_subdivisions,
    layout_problems,
    pair_paths,
    planarize,
    random_pairing,
    realisable,
    star_decomposition,
    verify_gadget,
)
from bagrefine.minors import is_subdivision_of

SMALL = {
    "p4x": Drawing(4, ((0, 1), (1, 2), (2, 3)), (Crossing(0, 0, 2, 0),)),
    "twice": Drawing(4, ((0, 1), (1, 2), (2, 3)), (Crossing(0, 0, 2, 0), Crossing(0, 1, 2, 1))),
    "k13x": Drawing(5, ((0, 1), (0, 2), (0, 3), (3, 4)), (Crossing(0, 0, 3, 0),)),
    "c4chord": Drawing(4, ((0, 1), (1, 2), (2, 3), (0, 3), (0, 2))),
}

# (|S|, |V(G')|, |E(G')|, |V(G)|) from the first run of the construction, frozen
FROZEN = {
    ("edge", 0): (3, 15, 38, 189),
    ("edge", 1): (3, 21, 56, 459),
    ("k3", 0): (26, 150, 2330, 1457657),
    ("k3", 1): (36, 282, 6912, 14130927),
    ("c4", 0): (36, 208, 4436, 5466259),
    ("c4", 1): (50, 392, 13286, 53296171),
    ("k4x", 0): (188, 1044, 135830, 6053074947),
    ("k4x", 1): (276, 2088, 444506, 65271195075),
}


def test_planarize_examples():
    pl = planarize(STOCK_DRAWINGS["k3"]())
    assert pl.node_count == 3 and len(pl.faces) == 2 and pl.s == 1
    assert pl.parent == (1, None)
    pl = planarize(STOCK_DRAWINGS["k4x"]())
    assert pl.node_count == 5 and pl.crossing_degrees() == [4]
    assert len(pl.faces) == 5 == 2 - 5 + len(pl.segments)
    pl = planarize(SMALL["twice"])
    assert pl.crossing_degrees() == [4, 4] and not pl.is_simple() and len(pl.faces) == 3


def test_planarize_classes_partition():
    for d in list(SMALL.values()) + [f() for f in STOCK_DRAWINGS.values()]:
        pl = planarize(d)
        segs = [sg for cls in pl.edge_classes for sg in cls]
        assert sorted(segs) == list(range(len(pl.segments)))
        verts = [v for cls in pl.vertex_classes for v in cls]
        assert sorted(verts) == list(range(d.n))
        # parents come later in the order, so the last face is the root
        assert all(p is None or p > i for i, p in enumerate(pl.parent))
        assert pl.parent[-1] is None


def test_drawing_validation():
    with pytest.raises(PreconditionError):
        Drawing(3, ((0, 1), (1, 2)), (Crossing(0, 0, 0, 1),))
    with pytest.raises(PreconditionError):
        Drawing(3, ((0, 1), (1, 2)), (Crossing(0, 1, 1, 0),))
    with pytest.raises(PreconditionError):
        Drawing(3, ((0, 1), (1, 0)))
    with pytest.raises(PreconditionError):
        planarize(Drawing(4, ((0, 1), (2, 3))))


def test_realisable_matches_planarity():
    from itertools import combinations
    k5 = Drawing(5, tuple(combinations(range(5), 2)))
    assert not realisable(k5)
    # one crossing between two independent edges fixes it
    k5x = Drawing(5, k5.edges, (Crossing(1, 0, 5, 0),))
    assert realisable(k5x)
    assert realisable(STOCK_DRAWINGS["k4x"]())


@pytest.mark.parametrize("key", sorted(FROZEN))
def test_frozen_sizes(key):
    name, c = key
    res = build_gadget(STOCK_DRAWINGS[name](), c)
    assert (len(res.S), res.core.n, res.core.m, res.n_vertices) == FROZEN[key]
    assert res.fan_size == 2 * c + 4
    assert layout_problems(res) == []


def test_fan_size_grows_with_c():
    for name in STOCK_DRAWINGS:
        sizes = [build_gadget(STOCK_DRAWINGS[name](), c).n_vertices for c in (0, 1)]
        assert sizes[0] < sizes[1]
        res = build_gadget(STOCK_DRAWINGS[name](), 1)
        per = {}
        for (v, j, _y) in res.fan:
            per[(v, j)] = per.get((v, j), 0) + 1
        assert set(per.values()) == {6}


def test_subdivision_of_g0():
    for name in ("edge", "k3", "c4", "k4x"):
        res = build_gadget(STOCK_DRAWINGS[name](), 0)
        sg, _ = res.core.induced(res.S)
        assert is_subdivision_of(sg, res.g0) is not None


@pytest.mark.parametrize("name", ["p4x", "twice", "k13x", "c4chord"])
def test_explicit_materialisation(name):
    res = build_gadget(SMALL[name], 0, fan_size=1)
    assert res.materialisable()
    g, dr = res.graph(), res.drawing()
    assert g.n == res.n_vertices and g.m == res.n_edges
    assert dr.is_one_planar() and realisable(dr)
    ext = extend_over_subdivisions(res, star_decomposition(res))
    assert validate(g, ext) == [] and ext.width <= len(res.S)
    checks = {c.name: c for c in verify_gadget(res, 0, samples=3)}
    for name_ in ("one-planar", "subdivision", "star-width"):
        assert checks[name_].ok, checks[name_].line()
    assert "explicit" in checks["one-planar"].detail


@pytest.mark.parametrize("name", ["edge", "k3", "c4"])
def test_explicit_stock_drawings_with_small_fans(name):
    res = build_gadget(STOCK_DRAWINGS[name](), 0, fan_size=1)
    dr = res.drawing()
    assert dr.is_one_planar() and realisable(dr)


def test_chord_crossings_rule():
    res = build_gadget(STOCK_DRAWINGS["k3"](), 0, fan_size=1)
    face = res.layout[0]
    counts = chord_crossings(face)
    chords = [(min(p, q), max(p, q)) for *_, p, q in face.chords]
    brute = [sum(1 for (c, d) in chords if a < c < b < d or c < a < d < b) for a, b in chords]
    assert list(counts) == brute


def test_verify_fresh_gadgets():
    for name in ("k3", "c4"):
        for c in (0, 1):
            res = build_gadget(STOCK_DRAWINGS[name](), c)
            for check in verify_gadget(res, c, samples=5, seed=c):
                assert check.ok, check.line()
                assert check.line().startswith(f"R {check.name} pass")


def test_star_decomposition_width():
    res = build_gadget(STOCK_DRAWINGS["c4"](), 0)
    star = star_decomposition(res)
    assert validate(res.core, star) == [] and star.width <= len(res.S)
    assert star.bags[0] == res.S


def test_deleting_a_fan_vertex_breaks_the_bundles():
    res = build_gadget(STOCK_DRAWINGS["k3"](), 0)
    x0 = sorted(v for v, i in res.x_class.items() if i == 0)
    x1 = sorted(v for v, i in res.x_class.items() if i == 1)
    a, b = x0[0], x1[0]
    assert pair_paths(res, a, b) >= res.fan_size
    mutant = delete_vertex(res, res.fan[(a, 1, 1)])
    shift = lambda u: u - (u > res.fan[(a, 1, 1)])
    checks = {c.name: c for c in verify_gadget(mutant, 0, samples=20, collections=[[(shift(a), shift(b))]])}
    assert not checks["path-bundles"].ok
    assert checks["subdivision"].ok


def test_deleting_an_s_vertex_breaks_the_subdivision():
    res = build_gadget(STOCK_DRAWINGS["k3"](), 0)
    mutant = delete_vertex(res, 0)
    checks = {c.name: c for c in verify_gadget(mutant, 0, samples=2)}
    assert not checks["subdivision"].ok


def test_random_pairing_is_maximal_and_disjoint():
    import random

    s = list(range(11))
    pairs = random_pairing(s, random.Random(0))
    flat = [v for p in pairs for v in p]
    assert len(pairs) == 5 and len(set(flat)) == 10


def test_bad_parameters():
    with pytest.raises(PreconditionError):
        build_gadget(STOCK_DRAWINGS["k3"](), -1)
    with pytest.raises(PreconditionError):
        build_gadget(STOCK_DRAWINGS["k3"](), 0, fan_size=0)
