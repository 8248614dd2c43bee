"""1-planar gadget: subdivide a drawn graph and attach fans so the subdivided copy is very well linked.

Given a drawing of ``G0`` and ``c >= 0`` the construction returns a graph
``G`` with a drawing in which every edge is crossed at most once, and a set
``S`` inducing a subdivision of ``G0`` such that any disjoint pairs in ``S``
are joined by ``2c + 4`` internally disjoint paths avoiding ``S``.

Layout: the planarisation ``H`` of the input drawing is embedded with the
segments around every crossing point forced to alternate. Each face of
``H`` is then treated as a disk whose boundary carries, in order, the
corners, subdivision vertices and points where fan edges cross into it;
fan and clique edges are chords of that disk in convex position, so two of
them cross iff their endpoints interleave.

``G`` itself is kept implicit: clique edges inside a face form a large
complete bipartite graph, so the crossing count (and with it the number of
subdivision vertices) grows far past anything that can be listed. The
result stores ``G'`` and the subdivision count of every long edge.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Sequence

import networkx as nx
import numpy as np

from .decomposition import TreeDecomposition
from .drawing import Crossing, Drawing
from .errors import InvariantViolation, PreconditionError
from .exact import validate
from . import kernels
from ._config import size_cap
from .errors import SizeCapError
from .graph import Graph, is_connected
from .minors import is_subdivision_of
from .paths import max_disjoint_paths
from .planar import Embedding


@dataclass(frozen=True)
class Segment:
    edge: int
    """input edge id"""
    index: int
    """position along the input edge, from its first endpoint"""
    tail: int
    head: int


@dataclass(frozen=True)
class Planarization:
    """Planarised drawing with the face order and classes used by the construction."""

    drawing: Drawing
    node_count: int
    """input vertices ``0..n-1`` then one node per crossing"""
    segments: tuple[Segment, ...]
    embedding: Embedding
    """rotation system on nodes plus one midpoint per segment"""
    faces: tuple[tuple[tuple[int, int], ...], ...]
    """per face, its walk as ``(node, segment)`` steps: leave ``node`` along ``segment``"""
    order: tuple[int, ...]
    """``order[i]`` is the face called ``f_i``; the last one is the root"""
    parent_segment: tuple[Optional[int], ...]
    """per ``f_i``, the segment dual to the tree edge towards its parent"""
    parent: tuple[Optional[int], ...]
    """per ``f_i``, the index of its parent"""
    edge_classes: tuple[tuple[int, ...], ...]
    vertex_classes: tuple[tuple[int, ...], ...]

    @property
    def s(self) -> int:
        return len(self.order) - 1

    def graph(self) -> nx.MultiGraph:
        h = nx.MultiGraph()
        h.add_nodes_from(range(self.node_count))
        for i, sg in enumerate(self.segments):
            h.add_edge(sg.tail, sg.head, key=i)
        return h

    def is_simple(self) -> bool:
        pairs = [(min(s.tail, s.head), max(s.tail, s.head)) for s in self.segments]
        return len(set(pairs)) == len(pairs)

    def crossing_degrees(self) -> list[int]:
        deg = [0] * self.node_count
        for sg in self.segments:
            deg[sg.tail] += 1
            deg[sg.head] += 1
        return deg[self.drawing.n:]

    def tree_path(self, i: int, j: int) -> list[int]:
        """Indices ``i = k_0, ..., k_r = j`` of the faces on the dual tree path."""
        up_i = [i]
        while self.parent[up_i[-1]] is not None:
            up_i.append(self.parent[up_i[-1]])
        up_j = [j]
        while self.parent[up_j[-1]] is not None:
            up_j.append(self.parent[up_j[-1]])
        common = set(up_i) & set(up_j)
        a = next(k for k in up_i if k in common)
        left = up_i[: up_i.index(a) + 1]
        right = up_j[: up_j.index(a)]
        return left + right[::-1]


def _segments(d: Drawing) -> tuple[list[Segment], dict[tuple[int, int], int]]:
    """Segments of every edge, and the node id of each crossing keyed by (edge, pos)."""
    node_at: dict[tuple[int, int], int] = {}
    for k, cr in enumerate(d.crossings):
        node_at[(cr.e1, cr.pos1)] = d.n + k
        node_at[(cr.e2, cr.pos2)] = d.n + k
    count = [0] * len(d.edges)
    for e, _ in node_at:
        count[e] += 1
    segs = []
    for e, (u, w) in enumerate(d.edges):
        nodes = [u] + [node_at[(e, p)] for p in range(count[e])] + [w]
        for t in range(len(nodes) - 1):
            segs.append(Segment(e, t, nodes[t], nodes[t + 1]))
    return segs, node_at


def _realise(d: Drawing, segs: Sequence[Segment]) -> Embedding:
    """Embed nodes plus segment midpoints with alternating segments at each crossing."""
    nodes = d.n + len(d.crossings)
    mid = {i: nodes + i for i in range(len(segs))}
    g = nx.Graph()
    g.add_nodes_from(range(nodes + len(segs)))
    seg_id = {(sg.edge, sg.index): i for i, sg in enumerate(segs)}
    for i, sg in enumerate(segs):
        g.add_edge(sg.tail, mid[i])
        g.add_edge(mid[i], sg.head)
    forcing = set()
    for cr in d.crossings:
        ring = [
            mid[seg_id[(cr.e1, cr.pos1)]],
            mid[seg_id[(cr.e2, cr.pos2)]],
            mid[seg_id[(cr.e1, cr.pos1 + 1)]],
            mid[seg_id[(cr.e2, cr.pos2 + 1)]],
        ]
        for a, b in zip(ring, ring[1:] + ring[:1]):
            if not g.has_edge(a, b):
                forcing.add((a, b))
    g.add_edges_from(forcing)
    ok, emb = nx.check_planarity(g)
    if not ok:
        raise PreconditionError("drawing cannot be realised in the plane")
    forcing |= {(b, a) for a, b in forcing}
    rotation = []
    for v in range(nodes + len(segs)):
        cw = [w for w in emb.neighbors_cw_order(v) if (v, w) not in forcing]
        rotation.append(tuple(reversed(cw)))
    return Embedding(nodes + len(segs), tuple(rotation))


def planarize(d: Drawing) -> Planarization:
    """Planarisation, face order, dual spanning tree and the edge / vertex classes."""
    if not is_connected(d.graph()):
        raise PreconditionError("the drawn graph must be connected")
    segs, _ = _segments(d)
    nodes = d.n + len(d.crossings)
    emb = _realise(d, segs)
    faces = []
    for darts in emb.face_darts:
        walk = []
        for a, b in darts:
            if a < nodes:
                walk.append((a, b - nodes))  # b is the midpoint of the segment left along
        faces.append(tuple(walk))
    if not faces:
        raise PreconditionError("drawing has no edges")
    # the two faces beside each segment
    sides: dict[int, list[int]] = {i: [] for i in range(len(segs))}
    for fi, walk in enumerate(faces):
        for _, sg in walk:
            sides[sg].append(fi)
    root = max(range(len(faces)), key=lambda f: (len(faces[f]), -f))
    parent = {root: None}
    via: dict[int, Optional[int]] = {root: None}
    queue = deque([root])
    bfs = []
    while queue:
        f = queue.popleft()
        bfs.append(f)
        for sg in sorted({sg for _, sg in faces[f]}):
            a, b = sides[sg]
            other = b if a == f else a
            if other not in parent:
                parent[other] = f
                via[other] = sg
                queue.append(other)
    order = bfs[::-1]
    pos = {f: i for i, f in enumerate(order)}
    par_idx = tuple(None if parent[f] is None else pos[parent[f]] for f in order)
    par_seg = tuple(via[f] for f in order)
    tree_segs = {sg for sg in par_seg if sg is not None}
    assigned: set[int] = set()
    edge_classes = []
    for i, f in enumerate(order):
        inc = sorted({sg for _, sg in faces[f]})
        if i == 0:
            cls = [sg for sg in inc if sg not in tree_segs]
        else:
            cls = [sg for sg in inc if sg not in assigned and sg != par_seg[i]]
        assigned.update(cls)
        edge_classes.append(tuple(cls))
    if assigned != set(range(len(segs))):
        raise InvariantViolation("edge classes do not partition the segments")
    seen: set[int] = set()
    vertex_classes = []
    for i, f in enumerate(order):
        here = sorted({v for v, _ in faces[f] if v < d.n} - seen)
        seen.update(here)
        vertex_classes.append(tuple(here))
    return Planarization(
        d, nodes, tuple(segs), emb, tuple(faces), tuple(order), par_seg, par_idx,
        tuple(edge_classes), tuple(vertex_classes),
    )


#: Largest fully subdivided gadget that :meth:`GadgetResult.graph` will build.
MATERIALISE_CAP = 200_000


@dataclass(frozen=True)
class FaceLayout:
    """One face seen as a disk: boundary slots in cyclic order and the chords inside.

    A slot is ``("v", u)`` for a vertex of ``S``, ``("a", u)`` for a fan
    vertex, ``("x", fan_edge, segment)`` where a fan edge crosses into the
    face, or a placeholder for a crossing corner / repeated corner. Chords
    are ``(long_edge, step, slot_p, slot_q)``; with all slots in convex
    position two chords cross iff their endpoints interleave.
    """

    slots: tuple[tuple, ...]
    chords: tuple[tuple[int, int, int, int], ...]


@dataclass
class GadgetResult:
    """The gadget ``G`` stored as ``G'`` plus the number of subdivisions of each long edge.

    ``core`` is ``G'``: the subdivided copy of ``G0`` on ``S`` together with
    the fan and clique edges ("long edges"). ``G`` replaces long edge ``e``
    by a path with ``subdivisions[e]`` inner vertices; it is usually far too
    large to build, so :meth:`graph` and :meth:`drawing` are capped.
    """

    core: Graph
    S: frozenset[int]
    fan: dict[tuple[int, int, int], int]
    """``(v, j, y) -> a_{v,j,y}``"""
    g0: Graph
    c: int
    fan_size: int
    x_class: dict[int, int]
    """``S`` vertex -> ``i`` with the vertex in ``X_i``"""
    owner: dict[int, int]
    """fan vertex -> the ``S`` vertex it was created for"""
    s_edges: tuple[tuple[int, int], ...]
    long_edges: tuple[tuple[int, int], ...]
    """fan edges first, then clique edges; each runs ``S`` vertex -> fan vertex"""
    fan_routes: tuple[tuple[int, int], ...]
    """per fan edge ``(i, j)``: it starts in ``f_i`` and ends in ``f_j``"""
    subdivisions: tuple[int, ...]
    layout: Optional[tuple[FaceLayout, ...]]
    s_crossings: tuple[tuple[int, int], ...]
    """pairs of ``S`` pieces meeting at a crossing of the input drawing"""
    dual_crossings: tuple[tuple[int, int, int, int], ...]
    """``(fan edge, step, segment, S piece)``: the fan edge leaves its step-th face across that piece"""
    planarization: Optional[Planarization] = field(default=None, repr=False)

    @property
    def n_vertices(self) -> int:
        return self.core.n + sum(self.subdivisions)

    @property
    def n_edges(self) -> int:
        return len(self.s_edges) + len(self.long_edges) + sum(self.subdivisions)

    def summary(self) -> str:
        return (
            f"|S|={len(self.S)} |V(G')|={self.core.n} |E(G')|={self.core.m} "
            f"|V(G)|={self.n_vertices} |E(G)|={self.n_edges} fan_size={self.fan_size}"
        )

    def materialisable(self) -> bool:
        return self.layout is not None and self.n_vertices <= size_cap(MATERIALISE_CAP)

    def graph(self) -> Graph:
        return _materialise(self)[0]

    def drawing(self) -> Drawing:
        return _materialise(self)[1]


class _Ids:
    def __init__(self, start: int):
        self.next = start

    def take(self) -> int:
        v = self.next
        self.next += 1
        return v


def build_gadget(d: Drawing, c: int, fan_size: Optional[int] = None) -> GadgetResult:
    """Build the gadget for the drawn graph ``d`` with ``2c + 4`` fan vertices per (vertex, face).

    ``fan_size`` overrides ``2c + 4``; small values give gadgets small
    enough to materialise, which the tests use to check the layout.
    """
    if c < 0:
        raise PreconditionError("c must be non-negative")
    size = 2 * c + 4 if fan_size is None else fan_size
    if size < 1:
        raise PreconditionError("fan size must be positive")
    pl = planarize(d)
    segs = pl.segments
    ids = _Ids(d.n)
    seg_cross: dict[int, list[int]] = {i: [] for i in range(len(segs))}
    seg_subs: dict[int, list[int]] = {}
    x_class: dict[int, int] = {}
    fan: dict[tuple[int, int, int], int] = {}
    owner: dict[int, int] = {}
    fan_edges: list[tuple[int, int]] = []
    fan_routes: list[tuple[int, int]] = []
    clique: list[tuple[int, int, int]] = []
    earlier: list[int] = []
    for i in range(pl.s + 1):
        xi = list(pl.vertex_classes[i])
        for sg in pl.edge_classes[i]:
            seg_subs[sg] = [ids.take() for _ in range(len(seg_cross[sg]) + 1)]
            xi.extend(seg_subs[sg])
        for v in xi:
            x_class[v] = i
        for v in xi:
            for j in range(i, pl.s + 1):
                path = pl.tree_path(i, j)
                crossed = [_dual_segment(pl, a, b) for a, b in zip(path, path[1:])]
                for y in range(1, size + 1):
                    a = ids.take()
                    fan[(v, j, y)] = a
                    owner[a] = v
                    for sg in crossed:
                        seg_cross[sg].append(len(fan_edges))
                    fan_edges.append((v, a))
                    fan_routes.append((i, j))
        earlier.extend(xi)
        for v in xi:
            for w in earlier:
                if w != v:
                    clique.extend((v, fan[(w, i, y)], i) for y in range(1, size + 1))
    s_set = frozenset(range(d.n)) | frozenset(u for subs in seg_subs.values() for u in subs)

    # S pieces along each input edge; remember which piece carries which crossing
    s_edges: list[tuple[int, int]] = []
    piece_of_cross: dict[tuple[int, int], int] = {}
    at_node: dict[int, list[int]] = {}
    by_edge: dict[int, list[int]] = {}
    for k, sg in enumerate(segs):
        by_edge.setdefault(sg.edge, []).append(k)
    for e in sorted(by_edge):
        prev = d.edges[e][0]
        for k in sorted(by_edge[e], key=lambda k: segs[k].index):
            subs = seg_subs[k]
            if segs[k].tail >= d.n:
                at_node.setdefault(segs[k].tail, []).append(len(s_edges))
            s_edges.append((prev, subs[0]))
            for t in range(len(subs) - 1):
                piece_of_cross[(k, t)] = len(s_edges)
                s_edges.append((subs[t], subs[t + 1]))
            prev = subs[-1]
        s_edges.append((prev, d.edges[e][1]))
    s_crossings = tuple(tuple(p) for _, p in sorted(at_node.items()))

    long_edges = fan_edges + [(v, a) for v, a, _ in clique]
    rank = {sg: {eid: t for t, eid in enumerate(lst)} for sg, lst in seg_cross.items()}
    dual = []
    for eid, (i, j) in enumerate(fan_routes):
        path = pl.tree_path(i, j)
        for t, (a, b) in enumerate(zip(path, path[1:])):
            sg = _dual_segment(pl, a, b)
            dual.append((eid, t, sg, piece_of_cross[(sg, rank[sg][eid])]))
    layout = _layout(pl, seg_subs, seg_cross, fan_edges, fan_routes, clique, d.n)
    crossings = _crossing_counts(layout, len(long_edges), dual)
    core = Graph.from_edges(ids.next, s_edges + long_edges)
    return GadgetResult(
        core, s_set, fan, Graph.from_edges(d.n, d.edges), c, size, x_class, owner,
        tuple(s_edges), tuple(long_edges), tuple(fan_routes),
        tuple(max(int(m) - 1, 0) for m in crossings), layout, s_crossings, tuple(dual), pl,
    )


def _dual_segment(pl: Planarization, a: int, b: int) -> int:
    """Segment dual to the tree edge between ``f_a`` and ``f_b``."""
    if pl.parent[a] == b:
        return pl.parent_segment[a]
    if pl.parent[b] == a:
        return pl.parent_segment[b]
    raise InvariantViolation(f"f_{a} and f_{b} are not adjacent in the dual tree")


def _segment_run(pl: Planarization, seg_subs, seg_cross, sg: int, forward: bool) -> list[tuple]:
    subs = seg_subs[sg]
    run = [("v", subs[0])]
    for t, eid in enumerate(seg_cross[sg]):
        run += [("x", eid, sg), ("v", subs[t + 1])]
    return run if forward else run[::-1]


def _layout(pl, seg_subs, seg_cross, fan_edges, fan_routes, clique, n0) -> tuple[FaceLayout, ...]:
    chords: list[list[tuple]] = [[] for _ in range(pl.s + 1)]
    after: list[dict[tuple, list[tuple]]] = [{} for _ in range(pl.s + 1)]
    for eid, ((v, a), (i, j)) in enumerate(zip(fan_edges, fan_routes)):
        path = pl.tree_path(i, j)
        start = ("v", v)
        for t, f in enumerate(path):
            if t == len(path) - 1:
                end = ("a", a)
                after[f].setdefault(start, []).append(end)
            else:
                end = ("x", eid, _dual_segment(pl, f, path[t + 1]))
            chords[f].append((eid, t, start, end))
            start = end
    base = len(fan_edges)
    for cid, (v, a, i) in enumerate(clique):
        chords[i].append((base + cid, 0, ("v", v), ("a", a)))
    out = []
    for i in range(pl.s + 1):
        ring: list[tuple] = []
        seen: set[int] = set()
        for node, sg in pl.faces[pl.order[i]]:
            items = [("v", node)] if node < n0 else [("corner", node)]
            items += _segment_run(pl, seg_subs, seg_cross, sg, pl.segments[sg].tail == node)
            for item in items:
                if item[0] == "v" and item[1] in seen or item[0] == "corner":
                    ring.append(("dup", item[1], len(ring)))
                    continue
                if item[0] == "v":
                    seen.add(item[1])
                ring.append(item)
                ring.extend(after[i].get(item, ()))
        index = {item: k for k, item in enumerate(ring)}
        try:
            placed = tuple((e, t, index[p], index[q]) for e, t, p, q in chords[i])
        except KeyError as exc:
            raise InvariantViolation(f"face f_{i} has no slot {exc}") from None
        out.append(FaceLayout(tuple(ring), placed))
    return tuple(out)


def chord_crossings(face: FaceLayout) -> np.ndarray:
    """Crossings on each chord: chords with one endpoint strictly inside its arc and one strictly outside."""
    if not face.chords:
        return np.zeros(0, np.int64)
    ch = np.asarray(face.chords, np.int64)
    lo = np.minimum(ch[:, 2], ch[:, 3])
    hi = np.maximum(ch[:, 2], ch[:, 3])
    m = len(face.slots)
    mult = np.bincount(np.concatenate([lo, hi]), minlength=m)
    before = np.concatenate([[0], np.cumsum(mult)])
    inside = before[hi] - before[lo + 1]
    nested = kernels.nested_counts(lo, hi, m)
    keys = np.sort(np.concatenate([lo * m + hi, hi * m + lo]))

    def between(a, b):
        return np.searchsorted(keys, b, "left") - np.searchsorted(keys, a, "left")

    shared = between(lo * m + lo + 1, lo * m + hi) + between(hi * m + lo + 1, hi * m + hi)
    return inside - 2 * nested - shared


def _crossing_counts(layout, count: int, dual) -> np.ndarray:
    total = np.zeros(count, np.int64)
    for face in layout:
        if face.chords:
            np.add.at(total, np.asarray(face.chords, np.int64)[:, 0], chord_crossings(face))
    for eid, *_ in dual:
        total[eid] += 1
    return total


def _positions(face: FaceLayout, salt: int) -> np.ndarray:
    rng = np.random.default_rng(salt)
    m = len(face.slots)
    ang = 2 * np.pi * (np.arange(m) + rng.uniform(-0.3, 0.3, m)) / m
    return np.stack([np.cos(ang), np.sin(ang)], axis=1)


def _face_hits(face: FaceLayout, salt: int):
    """Explicit crossings inside one face: ``(chord_a, t_a, chord_b, t_b)`` with ``t`` along each chord."""
    xy = _positions(face, salt)
    ch = np.asarray(face.chords, np.int64).reshape(-1, 4)
    p, r = xy[ch[:, 2]], xy[ch[:, 3]] - xy[ch[:, 2]]
    out = []
    for a in range(len(ch) - 1):
        q = p[a + 1:] - p[a]
        den = r[a, 0] * r[a + 1:, 1] - r[a, 1] * r[a + 1:, 0]
        with np.errstate(divide="ignore", invalid="ignore"):
            t = (q[:, 0] * r[a + 1:, 1] - q[:, 1] * r[a + 1:, 0]) / den
            u = (q[:, 0] * r[a, 1] - q[:, 1] * r[a, 0]) / den
        share = (ch[a + 1:, 2:] == ch[a, 2]).any(axis=1) | (ch[a + 1:, 2:] == ch[a, 3]).any(axis=1)
        hit = ~share & (np.abs(den) > 1e-15) & (t > 0) & (t < 1) & (u > 0) & (u < 1)
        for off in np.nonzero(hit)[0]:
            out.append((a, float(t[off]), a + 1 + int(off), float(u[off])))
    return out


_MATERIALISED: dict[int, tuple[Graph, Drawing]] = {}


def _materialise(res: GadgetResult) -> tuple[Graph, Drawing]:
    key = id(res)
    hit = _MATERIALISED.get(key)
    if hit is not None and hit[0].n == res.n_vertices:
        return hit
    cap = size_cap(MATERIALISE_CAP)
    if res.layout is None:
        raise PreconditionError("this gadget carries no layout")
    if res.n_vertices > cap:
        raise SizeCapError("materialised gadget", res.n_vertices, cap)
    seq: list[list[tuple]] = [[] for _ in res.long_edges]
    token = 0
    for fi, face in enumerate(res.layout):
        for a, ta, b, tb in _face_hits(face, fi):
            ea, sa = face.chords[a][:2]
            eb, sb = face.chords[b][:2]
            seq[ea].append((sa, ta, ("chord", token)))
            seq[eb].append((sb, tb, ("chord", token)))
            token += 1
    for eid, step, _, piece in res.dual_crossings:
        seq[eid].append((step, 2.0, ("piece", piece)))
    edges = list(res.s_edges)
    crossings = [Crossing(a, 0, b, 0) for a, b in res.s_crossings]
    pending: dict[int, int] = {}
    nxt = res.core.n
    for eid, (v, a) in enumerate(res.long_edges):
        hits = sorted(seq[eid], key=lambda h: (h[0], h[1]))
        if max(len(hits) - 1, 0) != res.subdivisions[eid]:
            raise InvariantViolation(f"long edge {eid}: {len(hits)} explicit crossings, counted {res.subdivisions[eid] + 1}")
        inner = list(range(nxt, nxt + res.subdivisions[eid]))
        nxt += len(inner)
        chain = [v] + inner + [a]
        first = len(edges)
        edges.extend(zip(chain, chain[1:]))
        for q, (_, _, what) in enumerate(hits):
            if what[0] == "piece":
                crossings.append(Crossing(first + q, 0, what[1], 0))
            elif what[1] in pending:
                crossings.append(Crossing(pending.pop(what[1]), 0, first + q, 0))
            else:
                pending[what[1]] = first + q
    if pending:
        raise InvariantViolation(f"{len(pending)} chord crossings seen once")
    out = (Graph.from_edges(nxt, edges), Drawing(nxt, tuple(edges), tuple(crossings)))
    _MATERIALISED.clear()
    _MATERIALISED[key] = out
    return out


def layout_problems(res: GadgetResult) -> list[str]:
    """Consistency of the implicit drawing of ``G``; empty means every edge of ``G`` is crossed at most once.

    Checks that each fan edge is a chain of chords along its dual-tree
    route whose consecutive chords meet at the same crossing slot, that each
    segment shows the same alternating run of subdivision vertices and
    crossing points to both faces beside it, that the stored subdivision
    counts equal the recomputed crossing counts less one, and that no piece
    of ``S`` carries two crossings.
    """
    out: list[str] = []
    pl = res.planarization
    if res.layout is None or pl is None:
        return ["no layout"]
    owner_face = {}
    by_edge: dict[int, dict[int, tuple[int, tuple, tuple]]] = {}
    for fi, face in enumerate(res.layout):
        if len(set(face.slots)) != len(face.slots):
            out.append(f"f_{fi}: repeated slot")
        for slot in face.slots:
            if slot[0] == "a":
                if slot[1] in owner_face:
                    out.append(f"fan vertex {slot[1]} drawn in two faces")
                owner_face[slot[1]] = fi
        for e, t, p, q in face.chords:
            by_edge.setdefault(e, {})[t] = (fi, face.slots[p], face.slots[q])
    nfan = len(res.fan_routes)
    for eid, (v, a) in enumerate(res.long_edges):
        got = by_edge.get(eid, {})
        if eid < nfan:
            i, j = res.fan_routes[eid]
            path = pl.tree_path(i, j)
        else:
            path = [res.x_class[v]]
        if sorted(got) != list(range(len(path))) or [got[t][0] for t in range(len(path))] != path:
            out.append(f"long edge {eid} does not follow its route")
            continue
        if got[0][1] != ("v", v) or got[len(path) - 1][2] != ("a", a):
            out.append(f"long edge {eid} has wrong ends")
        for t in range(len(path) - 1):
            sg = _dual_segment(pl, path[t], path[t + 1])
            if got[t][2] != ("x", eid, sg) or got[t + 1][1] != ("x", eid, sg):
                out.append(f"long edge {eid} breaks between faces {path[t]} and {path[t + 1]}")
        if owner_face.get(a) != path[-1]:
            out.append(f"fan vertex {a} is not in the face its edge ends in")
    # a crossing slot sits between the two ends of its S piece in every face showing it
    piece_of = {(eid, sg): piece for eid, _, sg, piece in res.dual_crossings}
    for fi, face in enumerate(res.layout):
        ring = [s for s in face.slots if s[0] != "a"]
        for k, slot in enumerate(ring):
            if slot[0] != "x":
                continue
            ends = set(res.s_edges[piece_of[(slot[1], slot[2])]])
            around = {ring[k - 1][1], ring[(k + 1) % len(ring)][1]}
            if around != ends:
                out.append(f"f_{fi}: crossing of long edge {slot[1]} is off its piece")
    counts = _crossing_counts(res.layout, len(res.long_edges), res.dual_crossings)
    expect = tuple(max(int(m) - 1, 0) for m in counts)
    if expect != res.subdivisions:
        bad = sum(1 for x, y in zip(expect, res.subdivisions) if x != y)
        out.append(f"{bad} long edges subdivided inconsistently with their crossings")
    load: dict[int, int] = {}
    for *_, piece in res.dual_crossings:
        load[piece] = load.get(piece, 0) + 1
    for pair in res.s_crossings:
        for piece in pair:
            load[piece] = load.get(piece, 0) + 1
    heavy = [p for p, k in load.items() if k > 1]
    if heavy:
        out.append(f"{len(heavy)} S pieces crossed more than once")
    return out


def star_decomposition(res: GadgetResult) -> TreeDecomposition:
    """Star of ``G'``: centre bag ``S``, one leaf bag ``N[a]`` per fan vertex ``a``."""
    nbrs: dict[int, set[int]] = {}
    for v, a in res.long_edges:
        nbrs.setdefault(a, {a}).add(v)
    for a in res.owner:
        nbrs.setdefault(a, {a})
    bags = [frozenset(res.S)] + [frozenset(nbrs[a]) for a in sorted(nbrs)]
    return TreeDecomposition(res.core.n, tuple(bags), frozenset((0, k) for k in range(1, len(bags))))


def extend_over_subdivisions(res: GadgetResult, dec: TreeDecomposition) -> TreeDecomposition:
    """Decomposition of the materialised ``G`` from the star of ``G'``.

    A long edge ``v a`` subdivided by ``t_1 .. t_k`` hangs the chain of bags
    ``{v, a, t_1}, {a, t_1, t_2}, ..., {a, t_{k-1}, t_k}`` off the leaf of ``a``.
    """
    g = res.graph()
    leaf = {}
    for x, bag in enumerate(dec.bags[1:], 1):
        for a in bag:
            if a in res.owner:
                leaf[a] = x
    bags = list(dec.bags)
    edges = set(dec.edges)
    nxt = res.core.n
    for eid, (v, a) in enumerate(res.long_edges):
        k = res.subdivisions[eid]
        inner = list(range(nxt, nxt + k))
        nxt += k
        prev = leaf[a]
        for t in range(k):
            bag = {v, a, inner[0]} if t == 0 else {a, inner[t - 1], inner[t]}
            edges.add((prev, len(bags)))
            prev = len(bags)
            bags.append(frozenset(bag))
    return TreeDecomposition(g.n, tuple(bags), frozenset(edges))


def realisable(d: Drawing) -> bool:
    """True iff the crossing data can be drawn in the plane."""
    try:
        _realise(d, _segments(d)[0])
    except PreconditionError:
        return False
    return True


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str

    def line(self) -> str:
        return f"R {self.name} {'pass' if self.ok else 'fail'} {self.detail}"


def random_pairing(s: Sequence[int], rng: random.Random) -> list[tuple[int, int]]:
    """A maximal collection of disjoint pairs from ``s``: shuffle, then pair neighbours."""
    items = sorted(s)
    rng.shuffle(items)
    return [(items[k], items[k + 1]) for k in range(0, len(items) - 1, 2)]


def _regions(res: GadgetResult) -> dict[int, set[int]]:
    out: dict[int, set[int]] = {}
    for a, v in res.owner.items():
        out.setdefault(v, set()).add(a)
    return out


def pair_paths(res: GadgetResult, a: int, b: int, regions=None) -> int:
    """Internally disjoint ``a``-``b`` paths through fan vertices reserved for ``a`` or ``b``.

    Subdividing long edges does not change this count, so it is computed
    on ``G'``; reserved sets of disjoint pairs are disjoint, so bundles for
    a whole collection of pairs are disjoint too.
    """
    regions = _regions(res) if regions is None else regions
    ids = sorted({a, b} | regions.get(a, set()) | regions.get(b, set()))
    index = {v: t for t, v in enumerate(ids)}
    adj = res.core.adj
    sub = Graph.from_edges(len(ids), [(index[u], index[w]) for u in ids for w in adj[u] if w in index and u < w])
    return len(max_disjoint_paths(sub, [index[a]], [index[b]], share_terminals=True))


def verify_gadget(
    res: GadgetResult,
    c: int,
    samples: int = 20,
    seed: int = 0,
    collections: Optional[Sequence[Sequence[tuple[int, int]]]] = None,
) -> list[CheckResult]:
    """Certificate checks; failures are reported, never raised.

    ``one-planar`` checks the implicit drawing (and the explicit one when
    the gadget is small enough to build); ``subdivision`` that ``G[S]`` is a
    subdivision of ``G0``; ``star-width`` that the star decomposition is
    valid with width at most ``|S|``; ``path-bundles`` that every pair of
    ``samples`` random maximal pair collections, plus ``collections``, is
    joined by ``2c + 4`` paths.
    """
    out = []
    try:
        problems = layout_problems(res)
        detail = "implicit"
        if not problems and res.materialisable():
            dr = res.drawing()
            if not dr.is_one_planar():
                problems.append(f"explicit drawing has an edge crossed {dr.max_crossings_per_edge()} times")
            if not realisable(dr):
                problems.append("explicit drawing is not realisable")
            detail = "explicit"
    except (InvariantViolation, PreconditionError, SizeCapError) as exc:
        problems, detail = [str(exc)], "error"
    note = problems[0] if problems else f"max_crossings_per_edge={min(1, max(res.subdivisions, default=0) + 1)}"
    out.append(CheckResult("one-planar", not problems, f"{detail} problems={len(problems)} {note}"))
    sg, _ = res.core.induced(res.S)
    try:
        wit = is_subdivision_of(sg, res.g0)
        note = "witness" if wit is not None else "none"
    except SizeCapError as exc:
        wit, note = None, str(exc)
    out.append(CheckResult("subdivision", wit is not None, note))
    star = star_decomposition(res)
    bad = validate(res.core, star)
    width = star.width
    if not bad and res.materialisable():
        ext = extend_over_subdivisions(res, star)
        bad = validate(res.graph(), ext)
        width = ext.width
    ok = not bad and width <= len(res.S)
    out.append(CheckResult("star-width", ok, f"width={width} |S|={len(res.S)} violations={len(bad)}"))
    need = 2 * c + 4
    rng = random.Random(seed)
    cols = [random_pairing(res.S, rng) for _ in range(samples)] + [list(p) for p in (collections or [])]
    regions = _regions(res)
    cache: dict[tuple[int, int], int] = {}
    worst, short = None, 0
    for col in cols:
        used: set[int] = set()
        for a, b in col:
            if a == b or a not in res.S or b not in res.S or used & {a, b}:
                short += 1
                continue
            used |= {a, b}
            key = (min(a, b), max(a, b))
            if key not in cache:
                cache[key] = pair_paths(res, a, b, regions)
            k = cache[key]
            worst = k if worst is None else min(worst, k)
            short += k < need
    out.append(CheckResult("path-bundles", short == 0, f"collections={len(cols)} need={need} min_found={worst} short_pairs={short}"))
    return out


def delete_vertex(res: GadgetResult, v: int) -> GadgetResult:
    """Copy of ``res`` without vertex ``v`` of ``G'`` (for mutation tests; the layout is dropped)."""
    core, keep = res.core.remove_vertices([v])
    new = {u: t for t, u in enumerate(keep)}
    kept = [e for e, (a, b) in enumerate(res.long_edges) if v not in (a, b)]
    return GadgetResult(
        core,
        frozenset(new[u] for u in res.S if u != v),
        {k: new[a] for k, a in res.fan.items() if v not in (a, k[0])},
        res.g0, res.c, res.fan_size,
        {new[u]: i for u, i in res.x_class.items() if u != v},
        {new[a]: new[o] for a, o in res.owner.items() if v not in (a, o)},
        tuple((new[a], new[b]) for a, b in res.s_edges if v not in (a, b)),
        tuple((new[a], new[b]) for a, b in (res.long_edges[e] for e in kept)),
        (), tuple(res.subdivisions[e] for e in kept), None, (), (), None,
    )


# -- stock drawings ----------------------------------------------------------

def drawing_k3() -> Drawing:
    return Drawing(3, ((0, 1), (1, 2), (0, 2)))


def drawing_c4() -> Drawing:
    return Drawing(4, ((0, 1), (1, 2), (2, 3), (0, 3)))


def drawing_k4_one_crossing() -> Drawing:
    """``K4`` on a square with both diagonals drawn, crossing once."""
    edges = ((0, 1), (1, 2), (2, 3), (0, 3), (0, 2), (1, 3))
    return Drawing(4, edges, (Crossing(4, 0, 5, 0),))


def drawing_edge() -> Drawing:
    return Drawing(2, ((0, 1),))


STOCK_DRAWINGS = {
    "edge": drawing_edge,
    "k3": drawing_k3,
    "c4": drawing_c4,
    "k4x": drawing_k4_one_crossing,
}
