import random
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from bagrefine.canonical import enumerate_connected, enumerate_graphs
from bagrefine.decomposition import BagProfile, TreeDecomposition, is_normal, lex_less, normalise, profile
from bagrefine.errors import PreconditionError
from bagrefine.exact import decomposition_from_order, treewidth, treewidth_exact, validate
from bagrefine.graph import Graph, complete, complete_bipartite, cycle, path, petersen, star, wheel
from bagrefine.oracles import all_separations, breakable_brute, reducible_brute, reducing_orders_brute
from bagrefine.refine import TELEMETRY, Level, TraceStep, find_split, reduce_step, refine_to_fixpoint, split_step, write_trace
from bagrefine.separations import Separation, is_breakable, is_reducible

from test_graph_core import graphs


def test_profile_examples():
    assert profile(TreeDecomposition.from_path(3, [{0, 1}, {1, 2}])).counts == (0, 2, 0)
    assert profile(TreeDecomposition.single(4, range(4))).counts == (1, 0, 0, 0)
    assert lex_less(BagProfile((0, 1, 2, 0)), BagProfile((0, 2, 0, 0)))
    assert not lex_less(BagProfile((0, 2, 0, 0)), BagProfile((0, 2, 0, 0)))
    with pytest.raises(PreconditionError):
        lex_less(BagProfile((1, 0)), BagProfile((0, 1, 0)))


def test_profile_ignores_empty_bags():
    dec = TreeDecomposition.from_path(2, [set(), {0, 1}])
    assert profile(dec).counts == (1, 0)


def test_normalise_examples():
    p3 = TreeDecomposition.from_path(3, [{0, 1}, {1}, {1, 2}])
    out = normalise(p3)
    assert sorted(map(sorted, out.bags)) == [[0, 1], [1, 2]] and out.size == 2
    already = TreeDecomposition.from_path(3, [{0, 1}, {1, 2}])
    assert normalise(already).bag_multiset() == already.bag_multiset()
    chain = TreeDecomposition.from_path(2, [{0}, {0}, {0, 1}])
    assert normalise(chain).bags == (frozenset({0, 1}),)


@settings(max_examples=60)
@given(graphs(max_n=8, min_n=1), st.randoms(use_true_random=False))
def test_normalise_properties(g, rnd):
    order = list(range(g.n))
    rnd.shuffle(order)
    dec = decomposition_from_order(g, order)
    once = normalise(dec)
    assert validate(g, once) == []
    assert is_normal(once) and once.width <= dec.width
    assert normalise(once).bag_multiset() == once.bag_multiset()
    assert once.size <= g.n


def test_breakable_examples():
    for k in (3, 4, 5):
        assert is_breakable(complete(k), range(k)) is None
    sep = is_breakable(path(3), {0, 1, 2})
    assert sep is not None and sep.breaks({0, 1, 2}) and sep.is_separation_of(path(3))
    assert is_breakable(star(4), {1, 2, 3, 4}) is None


def test_reducible_examples():
    for k in (3, 4, 5):
        assert is_reducible(complete(k), range(k)) is None
    sep = is_reducible(star(4), {1, 2, 3, 4})
    assert sep.separator == frozenset({0})
    assert sorted(len((sep.A - sep.B) & {1, 2, 3, 4}) for _ in [0]) + sorted([len((sep.B - sep.A) & {1, 2, 3, 4})]) == [2, 2]
    k26 = complete_bipartite(2, 6)
    sep = is_reducible(k26, range(2, 8))
    assert sep.separator == frozenset({0, 1}) and sep.order == 2
    assert len(sep.A - sep.B) == len(sep.B - sep.A) == 3


def test_reducible_witness_has_minimum_order():
    for g, s in ((star(4), {1, 2, 3, 4}), (complete_bipartite(2, 6), set(range(2, 8))), (cycle(6), set(range(6))), (petersen().induced(range(9))[0], set(range(9)))):
        if g.n > 9:
            continue
        sep = is_reducible(g, s)
        orders = reducing_orders_brute(g, s)
        assert (sep is None) == (orders.size == 0)
        if sep is not None:
            assert sep.reduces(s) and sep.order == orders.min()


def test_breakability_oracle_up_to_five():
    for n in range(1, 6):
        for g in enumerate_graphs(n):
            seps = all_separations(g)
            for size in range(n + 1):
                for s in combinations(range(n), size):
                    fast = is_breakable(g, s)
                    assert (fast is not None) == breakable_brute(g, s, seps)
                    if fast is not None:
                        assert fast.is_separation_of(g) and fast.breaks(s)
                        assert reducible_brute(g, s, seps)


@settings(max_examples=40)
@given(graphs(max_n=7, min_n=1), st.data())
def test_reducible_matches_brute(g, data):
    s = data.draw(st.sets(st.integers(0, g.n - 1)))
    sep = is_reducible(g, s)
    orders = reducing_orders_brute(g, s)
    assert (sep is None) == (orders.size == 0)
    if sep is not None:
        assert sep.is_separation_of(g) and sep.reduces(s) and sep.order == orders.min()


def test_split_step_examples():
    bowtie = Graph.from_edges(5, [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)])
    out = split_step(bowtie, TreeDecomposition.single(5, range(5)), 0, 0, {2})
    assert sorted(map(sorted, out.bags)) == [[0, 1, 2], [2, 3, 4]]
    out = split_step(path(3), TreeDecomposition.single(3, range(3)), 0, 0, {1})
    assert sorted(map(sorted, out.bags)) == [[0, 1], [1, 2]]
    with pytest.raises(PreconditionError):
        split_step(complete(3), TreeDecomposition.single(3, range(3)), 0, 0, {1})
    with pytest.raises(PreconditionError):
        split_step(path(3), TreeDecomposition.single(3, range(3)), 0, 0, {0, 1, 2})


def test_reduce_step_k26():
    g = complete_bipartite(2, 6)
    six = set(range(2, 8))
    dec = TreeDecomposition(8, (frozenset(six | {0}), frozenset(six | {1})), frozenset({(0, 1)}))
    assert validate(g, dec) == []
    sep = is_reducible(g, dec.bags[0])
    out = reduce_step(g, dec, 0, sep)
    assert validate(g, out) == []
    assert lex_less(profile(out), profile(dec)) and out.width <= dec.width


def test_reduce_step_star():
    g = star(4)
    leaves = frozenset({1, 2, 3, 4})
    dec = TreeDecomposition(5, (leaves, frozenset({0, 1, 2, 3, 4})), frozenset({(0, 1)}))
    sep = is_reducible(g, leaves)
    out = reduce_step(g, dec, 0, sep)
    assert validate(g, out) == []
    assert max(len(b & leaves) for b in out.bags) < 4


def test_reduce_step_preconditions():
    g = complete(4)
    dec = TreeDecomposition.single(4, range(4))
    bogus = Separation(frozenset({0, 1, 2}), frozenset({1, 2, 3}))
    with pytest.raises(PreconditionError):
        reduce_step(g, dec, 0, bogus)
    # K_{2,8} plus an isolated vertex placed in the separator: reducing, but no Menger family
    g = Graph.from_edges(11, complete_bipartite(2, 8).edges)
    eight = frozenset(range(2, 10))
    sep = Separation(frozenset({0, 1, 10, 2, 3, 4, 5}), frozenset({0, 1, 10, 6, 7, 8, 9}))
    assert sep.is_separation_of(g) and sep.reduces(eight)
    dec = TreeDecomposition(11, (eight | {0}, eight | {1}, frozenset({10})), frozenset({(0, 1), (1, 2)}))
    assert validate(g, dec) == []
    with pytest.raises(PreconditionError, match="minimum order"):
        reduce_step(g, dec, 0, sep)


def test_fixpoint_examples():
    k5 = complete(5)
    out = refine_to_fixpoint(k5, TreeDecomposition.single(5, range(5)), Level.IRREDUCIBLE)
    assert out.bags == (frozenset(range(5)),)
    out = refine_to_fixpoint(star(4), TreeDecomposition.single(5, range(5)))
    assert out.width == 1 and sorted(map(sorted, out.bags)) == [[0, 1], [0, 2], [0, 3], [0, 4]]


def test_fixpoint_rejects_invalid_input():
    with pytest.raises(PreconditionError):
        refine_to_fixpoint(path(3), TreeDecomposition.single(3, {0, 1}))


def test_trace_lines():
    steps: list[TraceStep] = []
    refine_to_fixpoint(star(4), TreeDecomposition.single(5, range(5)), trace=steps)
    text = write_trace(steps)
    assert text.splitlines()[0] == "step split (1,0,0,0,0) (0,1,0,1,0)"
    assert all(lex_less(s.after, s.before) for s in steps)


@settings(max_examples=40)
@given(graphs(max_n=7, min_n=1), st.randoms(use_true_random=False), st.sampled_from(list(Level)))
def test_fixpoint_properties_from_random_seeds(g, rnd, level):
    order = list(range(g.n))
    rnd.shuffle(order)
    seed = decomposition_from_order(g, order)
    before = TELEMETRY.snapshot()
    out = refine_to_fixpoint(g, seed, level)
    assert validate(g, out) == [] and out.width <= seed.width
    assert out.size <= g.n
    for bag in out.bags:
        assert is_breakable(g, bag) is None
        if level is Level.IRREDUCIBLE:
            assert not reducible_brute(g, bag)
    assert find_split(g, out) is None
    assert TELEMETRY.snapshot()["failures"] == before["failures"]


def test_optimal_seed_stays_optimal():
    rng = random.Random(1)
    for g in rng.sample(enumerate_connected(7), 40):
        w, dec = treewidth_exact(g)
        assert refine_to_fixpoint(g, dec, Level.IRREDUCIBLE).width == w


def test_wheel_single_bag_is_fixpoint():
    g = wheel(5)
    dec = TreeDecomposition.single(6, range(6))
    out = refine_to_fixpoint(g, dec)
    assert validate(g, out) == [] and out.width <= 5
    assert all(is_breakable(g, b) is None for b in out.bags)
    assert treewidth(g) == 3
