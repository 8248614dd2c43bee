"""Exact treewidth and pathwidth, elimination orderings, and decomposition checks."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from . import kernels
from ._config import size_cap
from .decomposition import TreeDecomposition, normalise
from .errors import PreconditionError, SizeCapError
from .graph import Graph

TW_CAP = 20
PW_CAP = 18


def _order_from_last(last: np.ndarray, n: int) -> list[int]:
    order = []
    s = (1 << n) - 1
    while s:
        v = int(last[s])
        order.append(v)
        s &= ~(1 << v)
    return order[::-1]


def optimal_elimination_order(g: Graph) -> tuple[int, list[int]]:
    cap = size_cap(TW_CAP)
    if g.n > cap:
        raise SizeCapError("treewidth_exact", g.n, cap)
    if g.n == 0:
        return -1, []
    tw, last = kernels.tw_dp(g.mask_array(), g.n)
    return int(tw[-1]), _order_from_last(last, g.n)


def decomposition_from_order(g: Graph, order: Sequence[int]) -> TreeDecomposition:
    """Tree-decomposition induced by eliminating vertices in ``order``.

    Node ``i`` carries ``v = order[i]`` plus its later neighbours in the
    filled graph, and hangs from the node of the earliest of them.
    Components without a later neighbour are chained together.
    """
    n = g.n
    if sorted(order) != list(range(n)):
        raise PreconditionError("order must be a permutation of the vertices")
    if n == 0:
        return TreeDecomposition.single(0, ())
    pos = {v: i for i, v in enumerate(order)}
    nb = [set(a) for a in g.adj]
    bags = []
    parent = []
    for i, v in enumerate(order):
        later = {w for w in nb[v] if pos[w] > i}
        bags.append(frozenset(later | {v}))
        parent.append(min((pos[w] for w in later), default=None))
        for a in later:
            nb[a] |= later - {a}
    edges = set()
    roots = []
    for i, p in enumerate(parent):
        if p is None:
            roots.append(i)
        else:
            edges.add((i, p))
    edges.update(zip(roots, roots[1:]))
    return TreeDecomposition(n, tuple(bags), frozenset(edges))


def elimination_width(g: Graph, order: Sequence[int]) -> int:
    return decomposition_from_order(g, order).width


def treewidth_exact(g: Graph) -> tuple[int, TreeDecomposition]:
    """Exact treewidth with an optimal normalised decomposition (``|V| <= 20``)."""
    width, order = optimal_elimination_order(g)
    if g.n == 0:
        return -1, TreeDecomposition.single(0, ())
    dec = normalise(decomposition_from_order(g, order))
    assert dec.width == width
    return width, dec


def treewidth(g: Graph) -> int:
    return optimal_elimination_order(g)[0]


def pathwidth_exact(g: Graph) -> int:
    """Exact pathwidth as the vertex-separation number (``|V| <= 18``)."""
    cap = size_cap(PW_CAP)
    if g.n > cap:
        raise SizeCapError("pathwidth_exact", g.n, cap)
    if g.n == 0:
        return -1
    return int(kernels.pw_dp(g.mask_array(), g.n)[-1])


def _greedy_order(g: Graph, score) -> list[int]:
    nb = [set(a) for a in g.adj]
    alive = set(range(g.n))
    order = []
    while alive:
        v = min(alive, key=lambda x: (score(nb, x), x))
        order.append(v)
        alive.discard(v)
        for a in nb[v]:
            nb[a] |= nb[v] - {a}
            nb[a].discard(v)
        nb[v] = set()
    return order


def _fill(nb, v):
    ns = list(nb[v])
    return sum(1 for i, a in enumerate(ns) for b in ns[i + 1:] if b not in nb[a])


def treewidth_upper(g: Graph) -> tuple[int, TreeDecomposition]:
    """Better of the min-degree and min-fill elimination heuristics."""
    if g.n == 0:
        return -1, TreeDecomposition.single(0, ())
    best = None
    for score in (lambda nb, v: len(nb[v]), _fill):
        dec = decomposition_from_order(g, _greedy_order(g, score))
        if best is None or dec.width < best.width:
            best = dec
    best = normalise(best)
    return best.width, best


def treewidth_any(g: Graph, exact_cap: int = 16) -> tuple[int, bool]:
    """``(width, exact)``: exact treewidth when small, else a heuristic upper bound."""
    if g.n <= exact_cap:
        return treewidth(g), True
    return treewidth_upper(g)[0], False


def validate(g: Graph, dec: TreeDecomposition) -> list[str]:
    """Axiom violations of ``dec`` as a decomposition of ``g``; empty means valid."""
    out = []
    if dec.n != g.n:
        out.append(f"decomposition is for {dec.n} vertices, graph has {g.n}")
    if not dec.is_tree():
        out.append("index graph is not a tree")
    where: list[list[int]] = [[] for _ in range(g.n)]
    for x, bag in enumerate(dec.bags):
        for v in bag:
            if not 0 <= v < g.n:
                out.append(f"node {x} holds vertex {v} outside the graph")
            else:
                where[v].append(x)
    for v in range(g.n):
        if not where[v]:
            out.append(f"vertex {v} uncovered")
    for u, v in g.sorted_edges():
        if not any(u in dec.bags[x] for x in where[v]):
            out.append(f"edge {u}-{v} uncovered")
    if dec.is_tree():
        nbrs = dec.neighbours()
        for v in range(g.n):
            occ = set(where[v])
            if len(occ) <= 1:
                continue
            start = next(iter(occ))
            seen = {start}
            stack = [start]
            while stack:
                x = stack.pop()
                for y in nbrs[x]:
                    if y in occ and y not in seen:
                        seen.add(y)
                        stack.append(y)
            if seen != occ:
                out.append(f"occurrence set of {v} disconnected")
    return out


def is_valid(g: Graph, dec: TreeDecomposition) -> bool:
    return not validate(g, dec)
