"""Vertex-disjoint paths by unit-capacity flow on the vertex-split graph."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .errors import PreconditionError
from .graph import Graph


@dataclass(frozen=True)
class PathBundle:
    sources: frozenset[int]
    sinks: frozenset[int]
    paths: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.paths)

    def check(self, g: Graph, forbidden_internal: Iterable[int] = (), share_terminals=False):
        """Assert the bundle invariants against ``g``."""
        forbidden = set(forbidden_internal)
        terminals = self.sources | self.sinks
        seen: set[int] = set()
        for p in self.paths:
            assert p[0] in self.sources and p[-1] in self.sinks
            for a, b in zip(p, p[1:]):
                assert g.has_edge(a, b)
            assert len(set(p)) == len(p)
            inner = p[1:-1]
            assert not (set(inner) & (forbidden | terminals))
            own = set(inner) if share_terminals else set(p)
            assert not (own & seen), "paths are not disjoint"
            seen |= own


def max_disjoint_paths(
    g: Graph,
    sources: Iterable[int],
    sinks: Iterable[int],
    forbidden_internal: Iterable[int] = (),
    share_terminals: bool = False,
) -> PathBundle:
    """Maximum family of disjoint source-to-sink paths.

    By default the paths are fully vertex-disjoint (set form of Menger's
    theorem); a vertex in both sets is a one-vertex path. With
    ``share_terminals`` the terminals have unbounded capacity and only
    internal vertices must be distinct, which is the form needed for many
    internally disjoint ``a``-``b`` paths. Internal vertices never lie in
    ``forbidden_internal`` or in a terminal set.
    """
    src = frozenset(sources)
    snk = frozenset(sinks)
    forbidden = frozenset(forbidden_internal)
    if not src or not snk:
        raise PreconditionError("sources and sinks must be non-empty")
    if forbidden & (src | snk):
        raise PreconditionError("forbidden_internal must avoid the terminals")
    if share_terminals and src & snk:
        raise PreconditionError("shared terminals need disjoint source and sink sets")
    n = g.n
    big = n + 1
    s_node, t_node = 2 * n, 2 * n + 1
    cap: dict[int, dict[int, int]] = {i: {} for i in range(2 * n + 2)}

    def arc(a, b, c):
        cap[a][b] = cap[a].get(b, 0) + c
        cap[b].setdefault(a, 0)

    terminals = src | snk
    for v in range(n):
        if v in forbidden:
            continue
        arc(2 * v, 2 * v + 1, big if (share_terminals and v in terminals) else 1)
    for v in src:
        arc(s_node, 2 * v, big)
    for v in snk:
        arc(2 * v + 1, t_node, big)
    for u, v in g.edges:
        if u in forbidden or v in forbidden:
            continue
        for a, b in ((u, v), (v, u)):
            # paths leave sources and enter sinks only at their ends
            if b in src or a in snk:
                continue
            arc(2 * a + 1, 2 * b, 1)

    original = {a: dict(row) for a, row in cap.items()}
    flow = 0
    while True:
        parent = {s_node: None}
        queue = deque([s_node])
        while queue and t_node not in parent:
            a = queue.popleft()
            for b, c in cap[a].items():
                if c > 0 and b not in parent:
                    parent[b] = a
                    queue.append(b)
        if t_node not in parent:
            break
        b = t_node
        while parent[b] is not None:
            a = parent[b]
            cap[a][b] -= 1
            cap[b][a] += 1
            b = a
        flow += 1

    carried = {
        a: {b: original[a][b] - cap[a][b] for b in row if original[a][b] - cap[a][b] > 0}
        for a, row in original.items()
    }
    paths = []
    for _ in range(flow):
        node, walk = s_node, []
        while node != t_node:
            nxt = min(carried[node])
            carried[node][nxt] -= 1
            if not carried[node][nxt]:
                del carried[node][nxt]
            if nxt < 2 * n and nxt % 2 == 0:
                walk.append(nxt // 2)
            node = nxt
        paths.append(tuple(_shortcut(walk)))
    paths.sort()
    return PathBundle(src, snk, tuple(paths))


def _shortcut(walk: list[int]) -> list[int]:
    out: list[int] = []
    where: dict[int, int] = {}
    for v in walk:
        if v in where:
            for w in out[where[v] + 1:]:
                del where[w]
            del out[where[v] + 1:]
        else:
            where[v] = len(out)
            out.append(v)
    return out
