"""Layerings, layered width, tree-cotree decompositions and the sqrt(n) constructions."""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .decomposition import TreeDecomposition, join, normalise_tracked
from .errors import InvariantViolation, PreconditionError
from .exact import pathwidth_exact, treewidth, treewidth_upper, validate
from .graph import Graph, components, is_connected
from .planar import Embedding, planarity_embed, triangulate


@dataclass(frozen=True)
class Layering:
    layers: tuple[frozenset[int], ...]

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(frozenset(l) for l in self.layers))

    @property
    def n(self) -> int:
        return sum(len(l) for l in self.layers)

    def layer_of(self) -> dict[int, int]:
        return {v: k for k, layer in enumerate(self.layers) for v in layer}

    def violations(self, g: Graph) -> list[str]:
        out = []
        where = self.layer_of()
        if sum(len(l) for l in self.layers) != len(where) or set(where) != set(range(g.n)):
            out.append("layers do not partition the vertex set")
            return out
        for u, v in g.sorted_edges():
            if abs(where[u] - where[v]) > 1:
                out.append(f"edge {u}-{v} skips from layer {where[u]} to {where[v]}")
        return out

    def window(self, lo: int, hi: int) -> frozenset[int]:
        """Union of layers ``lo..hi`` (clipped to the range)."""
        lo, hi = max(lo, 0), min(hi, len(self.layers) - 1)
        return frozenset().union(*self.layers[lo:hi + 1]) if lo <= hi else frozenset()


def bfs_layering(g: Graph, roots: Iterable[int] = ()) -> Layering:
    """Layer ``k`` holds the vertices at distance ``k`` from the roots.

    A component without a root is rooted at its smallest vertex.
    """
    dist = {r: 0 for r in roots}
    for comp in components(g):
        if not any(v in dist for v in comp):
            dist[min(comp)] = 0
    queue = deque(sorted(dist))
    while queue:
        u = queue.popleft()
        for w in sorted(g.adj[u]):
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    depth = max(dist.values(), default=-1)
    layers = [set() for _ in range(depth + 1)]
    for v, d in dist.items():
        layers[d].add(v)
    return Layering(tuple(layers))


def layered_width(dec: TreeDecomposition, layering: Layering) -> int:
    if dec.n != layering.n:
        raise PreconditionError(f"decomposition host has {dec.n} vertices, layering {layering.n}")
    return max((len(b & layer) for b in dec.bags for layer in layering.layers), default=0)


def tree_cotree_decomposition(
    g: Graph, emb: Optional[Embedding] = None, root: int = 0
) -> tuple[TreeDecomposition, Layering]:
    """Decomposition indexed by the faces of a triangulation of ``g``.

    With a BFS tree of the triangulation from ``root``, the duals of the
    non-tree edges form a spanning tree of the faces; a face's bag is the
    union of the tree paths from its three corners to the root. Each such
    path meets every BFS layer once, so bags meet layers in at most three
    vertices.
    """
    if g.n < 3:
        raise PreconditionError("need at least 3 vertices")
    if not is_connected(g):
        raise PreconditionError("graph must be connected")
    if emb is None:
        emb = planarity_embed(g)
        if emb is None:
            raise PreconditionError("graph is not planar")
    elif set(emb.edges()) != set(g.edges):
        raise PreconditionError("embedding is not an embedding of g")
    tri = triangulate(emb)
    th = tri.graph()
    parent = {root: None}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w in sorted(th.adj[u]):
            if w not in parent:
                parent[w] = u
                queue.append(w)
    tree_edges = {(min(v, p), max(v, p)) for v, p in parent.items() if p is not None}
    layering = bfs_layering(th, [root])

    def vertical(v):
        out = []
        while v is not None:
            out.append(v)
            v = parent[v]
        return out

    faces = tri.face_darts
    face_of = {d: i for i, f in enumerate(faces) for d in f}
    bags = []
    for f in faces:
        bag = set()
        for u, _ in f:
            bag.update(vertical(u))
        bags.append(frozenset(bag))
    edges = set()
    for i, f in enumerate(faces):
        for u, w in f:
            if (min(u, w), max(u, w)) not in tree_edges:
                j = face_of[(w, u)]
                if i < j:
                    edges.add((i, j))
    dec = TreeDecomposition(g.n, tuple(bags), frozenset(edges))
    problems = validate(g, dec)
    if problems:
        raise InvariantViolation(f"tree-cotree decomposition invalid: {problems[:3]}")
    return dec, layering


@dataclass(frozen=True)
class ResiduePeel:
    p: int
    residue: int
    vertices: frozenset[int]


def residue_peel(layering: Layering, c: int, n: int) -> ResiduePeel:
    """``p = ceil(sqrt(n / c))`` and the smallest residue class of layers mod ``p``."""
    p = max(1, math.isqrt(n // c))
    while p * p * c < n:
        p += 1
    classes = [frozenset().union(*layering.layers[i::p]) for i in range(p)]
    i = min(range(p), key=lambda r: (len(classes[r]), r))
    return ResiduePeel(p, i, classes[i])


def _check_inputs(g: Graph, layering: Layering, dec_layered: TreeDecomposition, c: int) -> None:
    if g.n <= 0:
        raise PreconditionError("need at least one vertex")
    problems = layering.violations(g) + validate(g, dec_layered)
    if problems:
        raise PreconditionError(f"bad layered decomposition: {problems[:3]}")
    measured = layered_width(dec_layered, layering)
    if c < 1 or c < measured:
        raise PreconditionError(f"c = {c} is below the measured layered width {measured}")


def _restrict_per_component(g: Graph, dec: TreeDecomposition, removed: frozenset[int], layering: Layering, p: int):
    """Per component of ``g - removed``, the decomposition's bags cut to it, joined.

    Returns the normalised joint decomposition (host ids) and each node's
    origin node in ``dec``.
    """
    where = layering.layer_of()
    parts = []
    origin = []
    for comp in components(g, removed):
        span = {where[v] for v in comp}
        if max(span) - min(span) + 1 > p - 1:
            raise InvariantViolation(f"component spans {max(span) - min(span) + 1} layers, more than p - 1 = {p - 1}")
        parts.append(TreeDecomposition(g.n, tuple(b & comp for b in dec.bags), dec.edges))
        origin.extend(range(dec.size))
    if not parts:
        return TreeDecomposition.single(g.n, ()), [None]
    joint, kept = normalise_tracked(join(parts, g.n))
    return joint, [origin[k] for k in kept]


@dataclass(frozen=True)
class SqrtDecomposition:
    dec: TreeDecomposition
    peel: ResiduePeel
    c: int
    origins: tuple[Optional[int], ...]
    """node of the layered decomposition each output bag was cut from"""
    base: TreeDecomposition
    layering: Layering

    def bound(self) -> float:
        return 2 * math.sqrt(self.c * self.dec.n)


def sqrt_decomposition(g: Graph, layering: Layering, dec_layered: TreeDecomposition, c: int) -> SqrtDecomposition:
    """Width at most ``2 sqrt(c n)`` by peeling one residue class of layers.

    The rest splits into components spanning at most ``p - 1`` layers, each
    decomposed by cutting ``dec_layered``; the peeled set joins every bag.
    """
    _check_inputs(g, layering, dec_layered, c)
    peel = residue_peel(layering, c, g.n)
    inner, origins = _restrict_per_component(g, dec_layered, peel.vertices, layering, peel.p)
    dec = inner.with_bags_extended(peel.vertices)
    problems = validate(g, dec)
    if problems:
        raise InvariantViolation(f"sqrt decomposition invalid: {problems[:3]}")
    out = SqrtDecomposition(dec, peel, c, tuple(origins), dec_layered, layering)
    if dec.width > out.bound() + 1e-9:
        raise InvariantViolation(f"width {dec.width} exceeds 2 sqrt(cn) = {out.bound():.3f}")
    return out


def union_certificate(g: Graph, sq: SqrtDecomposition, nodes: Sequence[int]) -> tuple[TreeDecomposition, Graph]:
    """Decomposition of ``G[union of the chosen bags]`` of width at most ``(3k+1)c - 1``.

    One copy of the layered tree per peeled layer, strung on a path through
    the layers; copy ``j`` keeps layer ``j`` of its bag plus layers
    ``j-1..j+1`` of the chosen original bags.
    """
    base, layers = sq.base, sq.layering.layers
    m = len(layers)
    p, i = sq.peel.p, sq.peel.residue
    chosen = {sq.origins[x] for x in nodes if sq.origins[x] is not None}
    bs = frozenset().union(*(base.bags[z] for z in chosen))
    union = frozenset().union(*(sq.dec.bags[x] for x in nodes))
    near = [bs & sq.layering.window(j - 1, j + 1) for j in range(m)]
    bags: list[frozenset[int]] = []
    edges: list[tuple[int, int]] = []
    path_node = []
    for j in range(m):
        if j % p == i:
            off = len(bags)
            bags.extend((b & layers[j]) | near[j] for b in base.bags)
            edges.extend((a + off, b + off) for a, b in base.edges)
            path_node.append(off)  # the copy of the root node 0 sits on the path
        else:
            path_node.append(len(bags))
            bags.append(near[j])
    edges.extend(zip(path_node, path_node[1:]))
    sub, ids = g.induced(union)
    index = {v: t for t, v in enumerate(ids)}
    cert = TreeDecomposition(sub.n, tuple(frozenset(index[v] for v in b if v in index) for b in bags), frozenset(edges))
    return cert, sub


@dataclass
class UnionReport:
    k: int
    subsets: int
    exhaustive: bool
    max_exact: int
    max_upper: int
    skipped: int
    certified: int

    @property
    def all_exact(self) -> bool:
        return self.skipped == 0

    @property
    def max_width(self) -> int:
        """Best known upper bound over all checked unions."""
        return self.max_upper

    def line(self) -> str:
        mode = "exhaustive" if self.exhaustive else "sampled"
        return (
            f"k={self.k} subsets={self.subsets} {mode} max_exact={self.max_exact} "
            f"max_upper={self.max_upper} skipped={self.skipped} certified={self.certified}"
        )


def _subsets(count: int, k: int, cap: int, samples: int, seed: int):
    total = math.comb(count, k)
    if total <= cap:
        return total, True, combinations(range(count), k)
    rng = random.Random(seed)
    picks = {tuple(sorted(rng.sample(range(count), k))) for _ in range(samples)}
    return len(picks), False, sorted(picks)


def union_bag_width_report(
    g: Graph,
    dec: TreeDecomposition | SqrtDecomposition,
    k: int,
    cap: int = 5000,
    samples: int = 2000,
    seed: int = 0,
    exact_cap: int = 14,
    bound: Optional[int] = None,
) -> UnionReport:
    """Treewidth of unions of ``k`` bags, over all ``k``-subsets or a seeded sample.

    Unions with at most ``exact_cap`` vertices get their exact treewidth.
    Larger ones get an upper bound from elimination heuristics and, when a
    :class:`SqrtDecomposition` is given and the heuristic misses ``bound``,
    from the validated union certificate; they count as skipped for the
    exact maximum.
    """
    sq = dec if isinstance(dec, SqrtDecomposition) else None
    plain = sq.dec if sq else dec
    if not 1 <= k <= plain.size:
        raise PreconditionError(f"k must be in 1..{plain.size}")
    total, exhaustive, picks = _subsets(plain.size, k, cap, samples, seed)
    rep = UnionReport(k, total, exhaustive, -1, -1, 0, 0)
    seen: dict[frozenset[int], tuple[int, bool]] = {}
    for nodes in picks:
        union = frozenset().union(*(plain.bags[x] for x in nodes))
        if union not in seen:
            sub, _ = g.induced(union)
            if sub.n <= exact_cap:
                seen[union] = (treewidth(sub), True)
            else:
                up = treewidth_upper(sub)[0]
                if sq is not None and bound is not None and up > bound:
                    cert, csub = union_certificate(g, sq, nodes)
                    problems = validate(csub, cert)
                    if problems:
                        raise InvariantViolation(f"union certificate invalid: {problems[:3]}")
                    up = min(up, cert.width)
                    rep.certified += 1
                seen[union] = (up, False)
        width, exact = seen[union]
        rep.max_upper = max(rep.max_upper, width)
        if exact:
            rep.max_exact = max(rep.max_exact, width)
        else:
            rep.skipped += 1
    return rep


@dataclass(frozen=True)
class PeelResult:
    S: frozenset[int]
    peel: ResiduePeel
    rest: Graph
    """``g - S`` relabelled to ``0..n-|S|-1``"""
    rest_ids: tuple[int, ...]
    """vertex of ``g`` behind each vertex of ``rest``"""
    dec_rest: TreeDecomposition
    origins: tuple[Optional[int], ...]
    base: TreeDecomposition
    layering: Layering
    c: int
    s_certificate: TreeDecomposition
    """decomposition of ``G[S]`` (ids of ``sorted(S)``) meeting each layer separately"""


def shallow_peel(g: Graph, layering: Layering, dec_layered: TreeDecomposition, c: int) -> PeelResult:
    """A set ``S`` of at most ``sqrt(cn)`` vertices with ``tw(G[S]) < c`` and a narrow decomposition of ``g - S``."""
    _check_inputs(g, layering, dec_layered, c)
    if g.n <= c:
        raise PreconditionError(f"shallow_peel needs n > c (n = {g.n}, c = {c})")
    peel = residue_peel(layering, c, g.n)
    assert peel.p >= 2
    s = peel.vertices
    inner, origins = _restrict_per_component(g, dec_layered, s, layering, peel.p)
    rest, ids = g.remove_vertices(s)
    index = {v: t for t, v in enumerate(ids)}
    dec_rest = TreeDecomposition(rest.n, tuple(frozenset(index[v] for v in b) for b in inner.bags), inner.edges)
    problems = validate(rest, dec_rest)
    if problems:
        raise InvariantViolation(f"decomposition of g - S invalid: {problems[:3]}")
    # chosen layers are at least p >= 2 apart, so G[S] is the disjoint union of its layers
    sg, sids = g.induced(s)
    sindex = {v: t for t, v in enumerate(sids)}
    parts = []
    for layer in layering.layers[peel.residue::peel.p]:
        parts.append(TreeDecomposition(sg.n, tuple(frozenset(sindex[v] for v in b & layer) for b in dec_layered.bags), dec_layered.edges))
    cert = normalise_tracked(join(parts, sg.n))[0] if parts else TreeDecomposition.single(0, ())
    problems = validate(sg, cert)
    if problems:
        raise InvariantViolation(f"layer-wise decomposition of G[S] invalid: {problems[:3]}")
    return PeelResult(s, peel, rest, tuple(ids), dec_rest, tuple(origins), dec_layered, layering, c, cert)


def window_path_decomposition(pr: PeelResult, nodes: Sequence[int]) -> tuple[TreeDecomposition, Graph]:
    """Path decomposition of ``G[union of the chosen dec_rest bags]`` from two-layer windows."""
    chosen = {pr.origins[x] for x in nodes if pr.origins[x] is not None}
    xhat = frozenset().union(*(pr.base.bags[z] for z in chosen))
    layers = pr.layering.layers
    windows = [xhat & (layers[j] | layers[j + 1]) for j in range(len(layers) - 1)] or [xhat & layers[0]]
    sub, ids = pr.rest.induced(v for x in nodes for v in pr.dec_rest.bags[x])
    host = {pr.rest_ids[v]: t for t, v in enumerate(ids)}
    dec = TreeDecomposition.from_path(sub.n, [frozenset(host[v] for v in w if v in host) for w in windows])
    return dec, sub


@dataclass
class PathUnionReport:
    k: int
    subsets: int
    exhaustive: bool
    max_window_width: int
    max_exact: int
    exact_checked: int

    def line(self) -> str:
        mode = "exhaustive" if self.exhaustive else "sampled"
        return (
            f"k={self.k} subsets={self.subsets} {mode} max_window_width={self.max_window_width} "
            f"max_exact_pw={self.max_exact} exact_checked={self.exact_checked}"
        )


def union_pathwidth_report(
    pr: PeelResult, k: int, cap: int = 5000, samples: int = 2000, seed: int = 0, exact_cap: int = 12
) -> PathUnionReport:
    """Pathwidth of unions of ``k`` bags of ``dec_rest`` via validated window decompositions."""
    size = pr.dec_rest.size
    if not 1 <= k <= size:
        raise PreconditionError(f"k must be in 1..{size}")
    total, exhaustive, picks = _subsets(size, k, cap, samples, seed)
    rep = PathUnionReport(k, total, exhaustive, -1, -1, 0)
    for nodes in picks:
        dec, sub = window_path_decomposition(pr, nodes)
        problems = validate(sub, dec)
        if problems:
            raise InvariantViolation(f"window path decomposition invalid: {problems[:3]}")
        rep.max_window_width = max(rep.max_window_width, dec.width)
        if sub.n <= exact_cap:
            rep.max_exact = max(rep.max_exact, pathwidth_exact(sub))
            rep.exact_checked += 1
    return rep


def layered_planar_input(g: Graph, root: int = 0) -> tuple[Layering, TreeDecomposition, int]:
    """Tree-cotree layering and decomposition of a planar graph with its measured width."""
    dec, lay = tree_cotree_decomposition(g, root=root)
    return lay, dec, layered_width(dec, lay)


__all__ = [
    "Layering",
    "bfs_layering",
    "layered_width",
    "tree_cotree_decomposition",
    "ResiduePeel",
    "residue_peel",
    "SqrtDecomposition",
    "sqrt_decomposition",
    "union_certificate",
    "UnionReport",
    "union_bag_width_report",
    "PeelResult",
    "shallow_peel",
    "window_path_decomposition",
    "union_pathwidth_report",
    "layered_planar_input",
]

