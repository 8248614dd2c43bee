"""Canonical forms for small graphs and isomorphism-free enumeration."""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations

import numpy as np

from . import kernels
from ._config import size_cap
from .errors import SizeCapError
from .graph import Graph

CanonKey = tuple[int, int]


def _twin_classes(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    masks = g.masks
    reps: list[int] = []
    cls = np.zeros(max(g.n, 1), np.int64)
    for v in range(g.n):
        for ci, r in enumerate(reps):
            if masks[v] & ~(1 << r) == masks[r] & ~(1 << v):
                cls[v] = ci
                break
        else:
            cls[v] = len(reps)
            reps.append(v)
    cls_mask = np.zeros(max(len(reps), 1), np.int64)
    for v in range(g.n):
        cls_mask[cls[v]] |= 1 << v
    return cls, cls_mask


def canonical_order(g: Graph) -> tuple[list[int], CanonKey]:
    """Vertex ordering maximising the adjacency code, and the code.

    ``order[k]`` is the original vertex placed at position ``k``. Two graphs
    are isomorphic iff their keys are equal.
    """
    n = g.n
    if n == 0:
        return [], (0, 0)
    if n > 62:
        raise SizeCapError("canonical form", n, 62)
    cls, cls_mask = _twin_classes(g)
    order, chunks = kernels.canon(g.mask_array(), n, cls, cls_mask)
    code = 0
    for k in range(n):
        code = (code << k) | int(chunks[k])
    return [int(v) for v in order], (n, code)


def canonical_key(g: Graph) -> CanonKey:
    return canonical_order(g)[1]


def canonical_graph(g: Graph) -> Graph:
    order, _ = canonical_order(g)
    perm = [0] * g.n
    for pos, v in enumerate(order):
        perm[v] = pos
    return g.relabel(perm)


def is_isomorphic(g: Graph, h: Graph) -> bool:
    return g.n == h.n and g.m == h.m and canonical_key(g) == canonical_key(h)


def _extend(graphs: tuple[Graph, ...], connected: bool, max_degree: int | None):
    seen: dict[CanonKey, Graph] = {}
    for g in graphs:
        n = g.n
        pool = [v for v in range(n) if max_degree is None or g.degree(v) < max_degree]
        top = len(pool) if max_degree is None else min(max_degree, len(pool))
        for k in range(0 if not connected or n == 0 else 1, top + 1):
            for nbrs in combinations(pool, k):
                h = Graph.from_edges(n + 1, list(g.edges) + [(v, n) for v in nbrs])
                order, key = canonical_order(h)
                if key not in seen:
                    perm = [0] * h.n
                    for pos, v in enumerate(order):
                        perm[v] = pos
                    seen[key] = h.relabel(perm)
    return tuple(seen[k] for k in sorted(seen))


@lru_cache(maxsize=None)
def _enum(n: int, connected: bool, max_degree: int | None) -> tuple[Graph, ...]:
    if n == 0:
        return (Graph(0),)
    return _extend(_enum(n - 1, connected, max_degree), connected, max_degree)


def enumerate_graphs(
    n: int, connected: bool = False, max_degree: int | None = None
) -> tuple[Graph, ...]:
    """Every graph on ``n`` vertices up to isomorphism, each in canonical labelling.

    Connected graphs are grown by attaching a new vertex to a non-empty
    neighbour set, which reaches every connected graph because every one has
    a non-cut vertex. ``max_degree`` restricts growth to that degree bound.
    """
    cap = size_cap(8 if max_degree is None else 10)
    if n > cap:
        raise SizeCapError("enumerate_graphs", n, cap)
    if n < 0:
        raise ValueError("n must be non-negative")
    if connected and n == 0:
        return ()
    return _enum(n, connected, max_degree)


def enumerate_connected(n: int) -> tuple[Graph, ...]:
    return enumerate_graphs(n, connected=True)
