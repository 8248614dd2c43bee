"""Tree-decompositions, bag-size profiles and normalisation."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import PreconditionError

Bag = frozenset[int]


@dataclass(frozen=True)
class TreeDecomposition:
    """A tree on nodes ``0..k-1`` with one bag per node.

    ``n`` is the vertex count of the host graph; it fixes the length of the
    profile. Validity against a concrete graph is checked by
    :func:`bagrefine.exact.validate`.
    """

    n: int
    bags: tuple[Bag, ...]
    edges: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self):
        bags = tuple(frozenset(b) for b in self.bags)
        if not bags:
            raise PreconditionError("a tree-decomposition needs at least one node")
        edges = set()
        for a, b in self.edges:
            if a == b or not (0 <= a < len(bags) and 0 <= b < len(bags)):
                raise PreconditionError(f"bad tree edge {a}-{b}")
            edges.add((min(a, b), max(a, b)))
        object.__setattr__(self, "bags", bags)
        object.__setattr__(self, "edges", frozenset(edges))

    @classmethod
    def single(cls, n: int, bag: Iterable[int]) -> "TreeDecomposition":
        return cls(n, (frozenset(bag),))

    @classmethod
    def from_path(cls, n: int, bags: Sequence[Iterable[int]]) -> "TreeDecomposition":
        return cls(n, tuple(frozenset(b) for b in bags), frozenset((i, i + 1) for i in range(len(bags) - 1)))

    @property
    def size(self) -> int:
        return len(self.bags)

    @property
    def width(self) -> int:
        return max(len(b) for b in self.bags) - 1

    def neighbours(self) -> list[set[int]]:
        out: list[set[int]] = [set() for _ in self.bags]
        for a, b in self.edges:
            out[a].add(b)
            out[b].add(a)
        return out

    def is_tree(self) -> bool:
        k = len(self.bags)
        if len(self.edges) != k - 1:
            return False
        nbrs = self.neighbours()
        seen = {0}
        stack = [0]
        while stack:
            x = stack.pop()
            for y in nbrs[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == k

    def tree_path(self, x: int, y: int) -> list[int]:
        """Nodes on the tree path from ``x`` to ``y``, inclusive."""
        nbrs = self.neighbours()
        parent = {x: None}
        stack = [x]
        while stack:
            u = stack.pop()
            for w in nbrs[u]:
                if w not in parent:
                    parent[w] = u
                    stack.append(w)
        out = [y]
        while out[-1] != x:
            out.append(parent[out[-1]])
        return out[::-1]

    def side(self, x: int, y: int) -> frozenset[int]:
        """Vertices in bags on ``x``'s side of the tree edge ``xy``."""
        if (min(x, y), max(x, y)) not in self.edges:
            raise PreconditionError(f"{x}-{y} is not a tree edge")
        nbrs = self.neighbours()
        seen = {x}
        stack = [x]
        while stack:
            u = stack.pop()
            for w in nbrs[u]:
                if w not in seen and not (u == x and w == y):
                    seen.add(w)
                    stack.append(w)
        return frozenset().union(*(self.bags[u] for u in seen))

    def bag_multiset(self) -> Counter:
        return Counter(self.bags)

    def relabel_vertices(self, mapping: Mapping[int, int] | Sequence[int], n: int) -> "TreeDecomposition":
        """Rename bag vertices ``v -> mapping[v]`` in a host with ``n`` vertices."""
        bags = tuple(frozenset(mapping[v] for v in b) for b in self.bags)
        return TreeDecomposition(n, bags, self.edges)

    def with_bags_extended(self, extra: Iterable[int], n: int | None = None) -> "TreeDecomposition":
        extra = frozenset(extra)
        return TreeDecomposition(self.n if n is None else n, tuple(b | extra for b in self.bags), self.edges)

    def __repr__(self) -> str:
        return f"TreeDecomposition(n={self.n}, bags={self.size}, width={self.width})"


@dataclass(frozen=True, order=False)
class BagProfile:
    """Bag-size counts ``(n_N, ..., n_1)`` for a host with ``N`` vertices."""

    counts: tuple[int, ...]

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.counts)) + ")"


def profile(dec: TreeDecomposition) -> BagProfile:
    sizes = Counter(len(b) for b in dec.bags)
    for s in sizes:
        if s > dec.n:
            raise PreconditionError(f"bag of size {s} in a host with {dec.n} vertices")
    return BagProfile(tuple(sizes.get(i, 0) for i in range(dec.n, 0, -1)))


def lex_less(p1: BagProfile, p2: BagProfile) -> bool:
    if len(p1.counts) != len(p2.counts):
        raise PreconditionError("profiles over different host sizes")
    return p1.counts < p2.counts


def normalise_tracked(dec: TreeDecomposition) -> tuple[TreeDecomposition, list[int]]:
    """Normalise and report, for each output node, the input node it came from.

    Repeatedly contracts a tree edge ``xy`` with ``B_x`` a subset of ``B_y``,
    keeping ``B_y``. Edges are scanned in sorted order, so the result is
    deterministic.
    """
    bags = dict(enumerate(dec.bags))
    nbrs = {x: set(s) for x, s in enumerate(dec.neighbours())}
    changed = True
    while changed:
        changed = False
        for x in sorted(bags):
            for y in sorted(nbrs[x]):
                if bags[x] <= bags[y]:
                    # x disappears into y
                    for z in nbrs[x]:
                        if z != y:
                            nbrs[z].discard(x)
                            nbrs[z].add(y)
                            nbrs[y].add(z)
                    nbrs[y].discard(x)
                    del nbrs[x]
                    del bags[x]
                    changed = True
                    break
            if changed:
                break
    keep = sorted(bags)
    index = {x: i for i, x in enumerate(keep)}
    edges = frozenset((index[x], index[y]) for x in keep for y in nbrs[x] if x < y)
    return TreeDecomposition(dec.n, tuple(bags[x] for x in keep), edges), keep


def normalise(dec: TreeDecomposition) -> TreeDecomposition:
    return normalise_tracked(dec)[0]


def is_normal(dec: TreeDecomposition) -> bool:
    return not any(dec.bags[a] <= dec.bags[b] or dec.bags[b] <= dec.bags[a] for a, b in dec.edges)


def join(decs: Sequence[TreeDecomposition], n: int) -> TreeDecomposition:
    """Disjoint union of decompositions (bags already in host ids), node 0 of each chained."""
    bags: list[Bag] = []
    edges: list[tuple[int, int]] = []
    roots = []
    for d in decs:
        off = len(bags)
        roots.append(off)
        bags.extend(d.bags)
        edges.extend((a + off, b + off) for a, b in d.edges)
    edges.extend(zip(roots, roots[1:]))
    if not bags:
        bags.append(frozenset())
    return TreeDecomposition(n, tuple(bags), frozenset(edges))
