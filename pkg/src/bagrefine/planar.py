"""Rotation-system embeddings, triangulation, and classification of non-separable planar graphs."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from itertools import combinations
from typing import Iterable, Optional, Sequence

import networkx as nx

from ._config import size_cap
from .canonical import CanonKey, canonical_key
from .errors import InvariantViolation, PreconditionError, SizeCapError
from .graph import Graph, complete, complete_bipartite, complete_multipartite, components, elongated_prism, is_connected
from .minors import find_monomorphism, is_minor

Dart = tuple[int, int]


@dataclass(frozen=True)
class Embedding:
    """Counter-clockwise cyclic order of neighbours around every vertex.

    Faces are traced by ``next(u -> v) = (v -> w)`` where ``w`` precedes
    ``u`` in the rotation at ``v``.
    """

    n: int
    rotation: tuple[tuple[int, ...], ...]

    @classmethod
    def from_faces(cls, n: int, faces: Iterable[Sequence[int]]) -> "Embedding":
        """Embedding whose faces are the given counter-clockwise vertex cycles."""
        succ: list[dict[int, int]] = [dict() for _ in range(n)]
        for face in faces:
            k = len(face)
            for i in range(k):
                a, b, c = face[i - 1], face[i], face[(i + 1) % k]
                if c in succ[b]:
                    raise PreconditionError(f"dart {b}->{c} appears in two faces")
                succ[b][c] = a
        rotation = []
        for v in range(n):
            if not succ[v]:
                rotation.append(())
                continue
            start = min(succ[v])
            order = [start]
            while True:
                nxt = succ[v][order[-1]]
                if nxt == start:
                    break
                order.append(nxt)
            if len(order) != len(succ[v]):
                raise PreconditionError(f"faces around vertex {v} do not close up")
            rotation.append(tuple(order))
        return cls(n, tuple(rotation))

    @classmethod
    def from_networkx(cls, n: int, emb: nx.PlanarEmbedding) -> "Embedding":
        rotation = []
        for v in range(n):
            cw = list(emb.neighbors_cw_order(v)) if v in emb else []
            rotation.append(tuple(reversed(cw)))
        return cls(n, tuple(rotation))

    @cached_property
    def _index(self) -> tuple[dict[int, int], ...]:
        return tuple({w: i for i, w in enumerate(rot)} for rot in self.rotation)

    def succ(self, v: int, u: int) -> int:
        """Neighbour after ``u`` counter-clockwise around ``v``."""
        rot = self.rotation[v]
        return rot[(self._index[v][u] + 1) % len(rot)]

    def pred(self, v: int, u: int) -> int:
        rot = self.rotation[v]
        return rot[(self._index[v][u] - 1) % len(rot)]

    def edges(self) -> list[tuple[int, int]]:
        return sorted({(min(v, w), max(v, w)) for v in range(self.n) for w in self.rotation[v]})

    def graph(self) -> Graph:
        return Graph.from_edges(self.n, self.edges())

    def next_dart(self, d: Dart) -> Dart:
        u, v = d
        return v, self.pred(v, u)

    @cached_property
    def face_darts(self) -> tuple[tuple[Dart, ...], ...]:
        """Dart cycles of all faces, each starting at its smallest dart."""
        seen: set[Dart] = set()
        out = []
        for d in sorted((v, w) for v in range(self.n) for w in self.rotation[v]):
            if d in seen:
                continue
            cyc = [d]
            seen.add(d)
            nxt = self.next_dart(d)
            while nxt != d:
                cyc.append(nxt)
                seen.add(nxt)
                nxt = self.next_dart(nxt)
            out.append(tuple(cyc))
        return tuple(out)

    def faces(self) -> list[tuple[int, ...]]:
        """Face walks as vertex sequences (isolated vertices excluded)."""
        return [tuple(d[0] for d in f) for f in self.face_darts]

    def face_count(self) -> int:
        """Faces of each component drawn on its own sphere."""
        return len(self.face_darts) + sum(1 for r in self.rotation if not r)

    def euler_ok(self) -> bool:
        g = self.graph()
        c = len(components(g))
        return self.n - g.m + self.face_count() == 2 * c

    def check(self) -> None:
        for v in range(self.n):
            rot = self.rotation[v]
            assert len(set(rot)) == len(rot), f"repeated neighbour at {v}"
            for w in rot:
                assert v in self._index[w], f"asymmetric rotation {v}-{w}"
        assert self.euler_ok(), "rotation system is not planar"

    def is_triangulated(self) -> bool:
        return all(len(f) == 3 for f in self.face_darts)

    def with_chord(self, corner_a: tuple[int, int], corner_b: tuple[int, int]) -> "Embedding":
        """Add edge ``a b`` through the face corners given as ``(vertex, next vertex on the walk)``."""
        rotation = [list(r) for r in self.rotation]
        (a, an), (b, bn) = corner_a, corner_b
        rotation[a].insert(rotation[a].index(an) + 1, b)
        rotation[b].insert(rotation[b].index(bn) + 1, a)
        return Embedding(self.n, tuple(tuple(r) for r in rotation))


def planarity_embed(g: Graph) -> Optional[Embedding]:
    """A planar embedding of ``g``, or ``None`` when ``g`` is not planar."""
    ok, emb = nx.check_planarity(g.to_networkx())
    if not ok:
        return None
    out = Embedding.from_networkx(g.n, emb)
    if not out.euler_ok():
        raise InvariantViolation("planarity embedding violates Euler's formula")
    return out


def is_planar(g: Graph) -> bool:
    return nx.check_planarity(g.to_networkx())[0]


def _chord_in_face(emb: Embedding, walk: list[int], adjacent) -> Optional[tuple[tuple[int, int], tuple[int, int]]]:
    k = len(walk)
    # ears first: they cut off a triangle
    for i in range(k):
        a, b = walk[i], walk[(i + 2) % k]
        if a != b and not adjacent(a, b):
            return (a, walk[(i + 1) % k]), (b, walk[(i + 3) % k])
    for i, j in combinations(range(k), 2):
        if (j - i) % k in (1, k - 1):
            continue
        a, b = walk[i], walk[j]
        if a != b and not adjacent(a, b):
            return (a, walk[(i + 1) % k]), (b, walk[(j + 1) % k])
    return None


def triangulate(emb: Embedding) -> Embedding:
    """Add chords inside faces until every face is a triangle.

    The input graph is a subgraph of the output, which stays simple and planar.
    """
    g = emb.graph()
    if g.n < 3:
        raise PreconditionError("triangulation needs at least 3 vertices")
    if not is_connected(g):
        raise PreconditionError("triangulation needs a connected graph")
    edges = set(g.edges)

    def adjacent(a, b):
        return (min(a, b), max(a, b)) in edges

    cur = emb
    while True:
        big = [f for f in cur.faces() if len(f) > 3]
        if not big:
            break
        chord = _chord_in_face(cur, list(big[0]), adjacent)
        if chord is None:
            raise InvariantViolation(f"no chord fits face {big[0]}")
        cur = cur.with_chord(*chord)
        a, b = chord[0][0], chord[1][0]
        edges.add((min(a, b), max(a, b)))
    assert cur.euler_ok() and cur.is_triangulated()
    return cur


class BagClass(str, Enum):
    OUTERPLANAR = "outerplanar"
    WHEEL = "wheel-subgraph"
    PRISM = "prism-subgraph"
    NOT_NON_SEPARABLE = "not-non-separable"

    @property
    def positive(self) -> bool:
        return self is not BagClass.NOT_NON_SEPARABLE


CLASSIFY_CAP = 14

K1_K4 = complete(4).disjoint_union(Graph(1))
K1_K23 = complete_bipartite(2, 3).disjoint_union(Graph(1))
K113 = complete_multipartite(1, 1, 3)
FORBIDDEN = (K1_K4, K1_K23, K113)

_CLASS_CACHE: dict[CanonKey, BagClass] = {}


def is_outerplanar(g: Graph) -> bool:
    return is_minor(g, complete(4)) is None and is_minor(g, complete_bipartite(2, 3)) is None


def wheel_hub(g: Graph) -> Optional[int]:
    """A vertex ``v`` with ``g - v`` inside a single cycle on the other vertices."""
    if g.n < 4:
        return 0 if g.n else None
    for v in range(g.n):
        rest, _ = g.remove_vertices([v])
        if rest.max_degree() > 2:
            continue
        comps = components(rest)
        acyclic = rest.m == rest.n - len(comps)
        spanning_cycle = len(comps) == 1 and rest.m == rest.n
        if acyclic or spanning_cycle:
            return v
    return None


def _prism_shapes(n: int):
    for total in range(0, n + 1):
        for a in range(total + 1):
            for b in range(a, total - a + 1):
                c = total - a - b
                if c >= b:
                    yield (a, b, c)


def prism_embedding(g: Graph) -> Optional[tuple[tuple[int, int, int], dict[int, int]]]:
    """Subdivision counts and a map of ``g`` into some elongated triangular prism."""
    if g.max_degree() > 3:
        return None
    for shape in _prism_shapes(g.n):
        host = elongated_prism(shape)
        if host.n < g.n or host.m < g.m:
            continue
        mono = find_monomorphism(g, host)
        if mono is not None:
            return shape, mono
    return None


def classify_nonseparable(g: Graph) -> BagClass:
    """Class of ``g`` among non-separable planar graphs, tested in priority order.

    Non-planar graphs and graphs with a ``K1 + K4``, ``K1 + K2,3`` or
    ``K1,1,3`` minor are not non-separable; the rest are outerplanar, wheel
    subgraphs or elongated prism subgraphs, and finding none of these
    raises :class:`InvariantViolation`.
    """
    cap = size_cap(CLASSIFY_CAP)
    if g.n > cap:
        raise SizeCapError("classify_nonseparable", g.n, cap)
    key = canonical_key(g)
    hit = _CLASS_CACHE.get(key)
    if hit is not None:
        return hit
    result = _classify(g)
    _CLASS_CACHE[key] = result
    return result


def _classify(g: Graph) -> BagClass:
    if not is_planar(g):
        return BagClass.NOT_NON_SEPARABLE
    if any(is_minor(g, h) is not None for h in FORBIDDEN):
        return BagClass.NOT_NON_SEPARABLE
    if is_outerplanar(g):
        return BagClass.OUTERPLANAR
    if wheel_hub(g) is not None:
        return BagClass.WHEEL
    if prism_embedding(g) is not None:
        return BagClass.PRISM
    raise InvariantViolation(f"{g} has no forbidden minor but fits no class")
