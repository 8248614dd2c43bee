"""Simple undirected graphs on vertices ``0..n-1`` and basic generators."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from ._config import size_cap
from .errors import PreconditionError, SizeCapError

Edge = tuple[int, int]


def _norm(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph. Edges are stored as sorted pairs ``(u, v)``, u < v."""

    n: int
    edges: frozenset[Edge] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 0:
            raise PreconditionError("vertex count must be non-negative")
        clean = set()
        for u, v in self.edges:
            if u == v:
                raise PreconditionError(f"loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise PreconditionError(f"edge {u}-{v} outside 0..{self.n - 1}")
            clean.add(_norm(u, v))
        object.__setattr__(self, "edges", frozenset(clean))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        return cls(n, frozenset(_norm(int(u), int(v)) for u, v in edges))

    # -- derived views -------------------------------------------------
    @cached_property
    def adj(self) -> tuple[frozenset[int], ...]:
        nbrs: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        return tuple(frozenset(s) for s in nbrs)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        """Neighbourhood of each vertex as a Python-int bitmask."""
        out = [0] * self.n
        for u, v in self.edges:
            out[u] |= 1 << v
            out[v] |= 1 << u
        return tuple(out)

    def mask_array(self) -> np.ndarray:
        if self.n > 62:
            raise SizeCapError("bitmask kernels", self.n, 62)
        return np.array(self.masks, dtype=np.int64)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def vertices(self) -> range:
        return range(self.n)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return _norm(u, v) in self.edges

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    # -- derived graphs ------------------------------------------------
    def induced(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph, relabelled to ``0..k-1``; also returns the old ids."""
        keep = sorted(set(vertices))
        index = {v: i for i, v in enumerate(keep)}
        sub = [(index[u], index[v]) for u, v in self.edges if u in index and v in index]
        return Graph.from_edges(len(keep), sub), keep

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex ``v`` renamed ``perm[v]``."""
        return Graph.from_edges(self.n, ((perm[u], perm[v]) for u, v in self.edges))

    def add_edges(self, extra: Iterable[Sequence[int]]) -> "Graph":
        return Graph.from_edges(self.n, itertools.chain(self.edges, extra))

    def remove_vertices(self, removed: Iterable[int]) -> tuple["Graph", list[int]]:
        gone = set(removed)
        return self.induced(v for v in range(self.n) if v not in gone)

    def disjoint_union(self, other: "Graph") -> "Graph":
        shift = [(u + self.n, v + self.n) for u, v in other.edges]
        return Graph.from_edges(self.n + other.n, itertools.chain(self.edges, shift))

    def check(self) -> None:
        """Assert simplicity and adjacency symmetry."""
        for v in range(self.n):
            assert v not in self.adj[v]
            for w in self.adj[v]:
                assert v in self.adj[w]
        assert sum(len(a) for a in self.adj) == 2 * self.m

    def to_networkx(self):
        import networkx as nx

        h = nx.Graph()
        h.add_nodes_from(range(self.n))
        h.add_edges_from(self.edges)
        return h

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def component_masks(g: Graph, allowed: int) -> list[int]:
    """Components of ``g[allowed]`` as bitmasks, ordered by smallest vertex."""
    adj = g.masks
    out = []
    rest = allowed
    while rest:
        low = rest & -rest
        comp = low
        frontier = low
        while frontier:
            fl = frontier & -frontier
            frontier ^= fl
            new = adj[fl.bit_length() - 1] & allowed & ~comp
            comp |= new
            frontier |= new
        out.append(comp)
        rest &= ~comp
    return out


def components(g: Graph, removed: Iterable[int] = ()) -> list[frozenset[int]]:
    """Vertex sets of the components of ``g - removed``."""
    allowed = ((1 << g.n) - 1) & ~to_mask(removed)
    return [frozenset(bits(c)) for c in component_masks(g, allowed)]


def is_connected(g: Graph) -> bool:
    return g.n == 0 or len(component_masks(g, (1 << g.n) - 1)) == 1


def neighbourhood_mask(g: Graph, mask: int) -> int:
    out = 0
    for v in bits(mask):
        out |= g.masks[v]
    return out & ~mask


# -- generators --------------------------------------------------------

def complete(p: int) -> Graph:
    return Graph.from_edges(p, itertools.combinations(range(p), 2))


def empty(n: int) -> Graph:
    return Graph(n)


def complete_bipartite(a: int, b: int) -> Graph:
    """Parts ``0..a-1`` and ``a..a+b-1``."""
    return Graph.from_edges(a + b, ((i, a + j) for i in range(a) for j in range(b)))


def complete_multipartite(*parts: int) -> Graph:
    starts = list(itertools.accumulate((0,) + parts))
    groups = [range(starts[i], starts[i + 1]) for i in range(len(parts))]
    edges = [
        (u, v)
        for gi, gj in itertools.combinations(groups, 2)
        for u in gi
        for v in gj
    ]
    return Graph.from_edges(starts[-1], edges)


def path(n: int) -> Graph:
    return Graph.from_edges(n, ((i, i + 1) for i in range(n - 1)))


def cycle(n: int) -> Graph:
    if n < 3:
        raise PreconditionError("a cycle needs at least 3 vertices")
    return Graph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def star(n: int) -> Graph:
    """``K_{1,n}`` with centre 0."""
    return Graph.from_edges(n + 1, ((0, i) for i in range(1, n + 1)))


def wheel(n: int) -> Graph:
    """Hub 0 joined to a rim cycle ``1..n`` (n >= 3 spokes)."""
    if n < 3:
        raise PreconditionError("a wheel needs at least 3 spokes")
    rim = [(1 + i, 1 + (i + 1) % n) for i in range(n)]
    return Graph.from_edges(n + 1, rim + [(0, i) for i in range(1, n + 1)])


def grid(r: int, c: int) -> Graph:
    """``r x c`` grid; vertex ``(i, j)`` is ``i * c + j``."""
    edges = []
    for i in range(r):
        for j in range(c):
            v = i * c + j
            if j + 1 < c:
                edges.append((v, v + 1))
            if i + 1 < r:
                edges.append((v, v + c))
    return Graph.from_edges(r * c, edges)


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    return Graph.from_edges(10, outer + inner + spokes)


def elongated_prism(subdivisions: Sequence[int] = (0, 0, 0)) -> Graph:
    """Triangular prism with the three non-triangle edges subdivided.

    Triangles are ``0,1,2`` and ``3,4,5``; the rung ``i -- i+3`` carries
    ``subdivisions[i]`` extra vertices.
    """
    if len(subdivisions) != 3 or min(subdivisions) < 0:
        raise PreconditionError("need three non-negative subdivision counts")
    edges = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]
    nxt = 6
    for i, k in enumerate(subdivisions):
        prev = i
        for _ in range(k):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
        edges.append((prev, i + 3))
    return Graph.from_edges(nxt, edges)


def subdivide_edges(g: Graph, counts: dict[Edge, int]) -> Graph:
    """Replace each edge ``e`` by a path with ``counts[e]`` internal vertices."""
    edges = []
    nxt = g.n
    for e in g.sorted_edges():
        k = counts.get(e, 0)
        prev = e[0]
        for _ in range(k):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
        edges.append((prev, e[1]))
    return Graph.from_edges(nxt, edges)


def random_planar_triangulation(n: int, seed: int = 0, flips: int | None = None):
    """Random maximal planar graph with its embedding.

    Stacked insertions into random faces followed by random edge flips.
    Returns ``(graph, embedding)``; see :mod:`bagrefine.planar`.
    """
    from .planar import Embedding

    if n < 3:
        raise PreconditionError("triangulations need at least 3 vertices")
    cap = size_cap(5000)
    if n > cap:
        raise SizeCapError("random_planar_triangulation", n, cap)
    rng = random.Random(seed)
    # faces as ccw triples; both sides of the first triangle
    faces: list[tuple[int, int, int]] = [(0, 1, 2), (0, 2, 1)]
    for v in range(3, n):
        a, b, c = faces.pop(rng.randrange(len(faces)))
        faces += [(a, b, v), (b, c, v), (c, a, v)]
    if flips is None:
        flips = 2 * n
    for _ in range(flips):
        _random_flip(faces, rng)
    emb = Embedding.from_faces(n, faces)
    return Graph.from_edges(n, emb.edges()), emb


def _random_flip(faces: list[tuple[int, int, int]], rng: random.Random) -> None:
    dart_face = {}
    for idx, (a, b, c) in enumerate(faces):
        dart_face[(a, b)] = idx
        dart_face[(b, c)] = idx
        dart_face[(c, a)] = idx
    edges = set()
    for a, b, c in faces:
        for u, v in ((a, b), (b, c), (c, a)):
            edges.add(_norm(u, v))
    i = rng.randrange(len(faces))
    a, b, c = faces[i]
    j = dart_face[(b, a)]
    x, y, z = faces[j]
    # rotate so that faces[j] = (b, a, d)
    rot = {(x, y): z, (y, z): x, (z, x): y}
    d = rot[(b, a)]
    if d == c or _norm(c, d) in edges or len(faces) <= 2:
        return
    faces[i] = (c, a, d)
    faces[j] = (d, b, c)


def random_planar_graph(n: int, seed: int = 0, keep: float | None = None) -> Graph:
    """Connected planar graph: a random triangulation thinned to a random edge subset.

    A random spanning tree is always kept, so the result is connected.
    """
    rng = random.Random(seed)
    if n < 3:
        return path(n)
    tri, _ = random_planar_triangulation(n, seed=rng.randrange(2**31))
    if keep is None:
        keep = rng.uniform(0.35, 1.0)
    edges = tri.sorted_edges()
    rng.shuffle(edges)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    chosen = []
    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            chosen.append((u, v))
        elif rng.random() < keep:
            chosen.append((u, v))
    return Graph.from_edges(n, chosen)
