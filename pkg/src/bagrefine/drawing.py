"""Combinatorial drawings: edges with ordered crossing lists."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

from .errors import PreconditionError
from .graph import Graph


@dataclass(frozen=True)
class Crossing:
    """Edge ``e1`` meets edge ``e2``; ``pos`` counts earlier crossings along each edge."""

    e1: int
    pos1: int
    e2: int
    pos2: int


@dataclass(frozen=True)
class Drawing:
    """A drawing of a graph given by edge ids and crossing records.

    Edge ``i`` runs from ``edges[i][0]`` to ``edges[i][1]``; crossing
    positions along an edge are counted from its first endpoint.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    crossings: tuple[Crossing, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((int(u), int(w)) for u, w in self.edges))
        object.__setattr__(self, "crossings", tuple(self.crossings))
        self.check()

    def check(self) -> None:
        seen = set()
        for i, (u, w) in enumerate(self.edges):
            if u == w or not (0 <= u < self.n and 0 <= w < self.n):
                raise PreconditionError(f"edge {i} has bad endpoints {u}, {w}")
            key = (min(u, w), max(u, w))
            if key in seen:
                raise PreconditionError(f"parallel edge {u}-{w}")
            seen.add(key)
        used = defaultdict(list)
        for c in self.crossings:
            for e in (c.e1, c.e2):
                if not 0 <= e < len(self.edges):
                    raise PreconditionError(f"crossing names unknown edge {e}")
            if c.e1 == c.e2:
                raise PreconditionError(f"edge {c.e1} crosses itself")
            used[c.e1].append(c.pos1)
            used[c.e2].append(c.pos2)
        for e, ps in used.items():
            if sorted(ps) != list(range(len(ps))):
                raise PreconditionError(f"crossing positions on edge {e} are not 0..{len(ps) - 1}")

    def graph(self) -> Graph:
        return Graph.from_edges(self.n, self.edges)

    def crossings_on(self, e: int) -> list[tuple[int, Crossing]]:
        """Crossings along edge ``e`` in order, with the other edge's id."""
        out = []
        for c in self.crossings:
            if c.e1 == e:
                out.append((c.pos1, c.e2, c))
            elif c.e2 == e:
                out.append((c.pos2, c.e1, c))
        return [(other, c) for _, other, c in sorted(out, key=lambda t: t[0])]

    def crossing_counts(self) -> list[int]:
        counts = [0] * len(self.edges)
        for c in self.crossings:
            counts[c.e1] += 1
            counts[c.e2] += 1
        return counts

    def max_crossings_per_edge(self) -> int:
        return max(self.crossing_counts(), default=0)

    def is_one_planar(self) -> bool:
        return self.max_crossings_per_edge() <= 1
