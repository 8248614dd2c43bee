"""Minor, subgraph and subdivision tests for small graphs."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ._config import size_cap
from .canonical import CanonKey, canonical_order
from .errors import SizeCapError
from .graph import Graph, bits, component_masks

MINOR_PATTERN_CAP = 10
MINOR_HOST_CAP = 20
SUBDIVISION_CHOICE_CAP = 200_000

# pattern -> canonical keys of hosts known to be pattern-minor-free
_MINOR_FREE: dict[tuple, set[CanonKey]] = {}


def find_monomorphism(pattern: Graph, host: Graph) -> Optional[dict[int, int]]:
    """Injective map ``pattern -> host`` preserving edges (not necessarily induced)."""
    if pattern.n > host.n or pattern.m > host.m:
        return None
    order = sorted(range(pattern.n), key=lambda v: (-pattern.degree(v), v))
    # prefer vertices adjacent to those already placed
    placed: list[int] = []
    rest = set(order)
    while rest:
        best = max(
            rest,
            key=lambda v: (sum(1 for w in placed if pattern.has_edge(v, w)), pattern.degree(v), -v),
        )
        placed.append(best)
        rest.remove(best)
    hdeg = [host.degree(v) for v in range(host.n)]
    hmask = host.masks
    before = [[w for w in placed[:i] if pattern.has_edge(placed[i], w)] for i in range(len(placed))]
    image: dict[int, int] = {}

    def go(i: int, used: int) -> bool:
        if i == len(placed):
            return True
        v = placed[i]
        need = pattern.degree(v)
        allowed = ((1 << host.n) - 1) & ~used
        for w in before[i]:
            allowed &= hmask[image[w]]
        for x in bits(allowed):
            if hdeg[x] < need:
                continue
            image[v] = x
            if go(i + 1, used | (1 << x)):
                return True
            del image[v]
        return False

    return dict(image) if go(0, 0) else None


def find_isomorphism(g: Graph, h: Graph) -> Optional[dict[int, int]]:
    if g.n != h.n or g.m != h.m:
        return None
    return find_monomorphism(g, h)


def _check_caps(g: Graph, pattern: Graph, what: str) -> None:
    pcap = size_cap(MINOR_PATTERN_CAP)
    hcap = size_cap(MINOR_HOST_CAP)
    if pattern.n > pcap:
        raise SizeCapError(f"{what} pattern", pattern.n, pcap)
    if g.n > hcap:
        raise SizeCapError(f"{what} host", g.n, hcap)


def is_minor(g: Graph, pattern: Graph) -> Optional[dict[int, frozenset[int]]]:
    """Branch sets of a ``pattern`` minor in ``g``, or ``None``.

    Searches over vertex deletions and edge contractions down to
    ``|V(pattern)|`` vertices and then looks for ``pattern`` as a subgraph.
    Every minor model arises this way, so a ``None`` answer is exact.
    Graphs already refuted are memoised by canonical form.
    """
    if pattern.n > g.n or pattern.m > g.m:
        return None
    if pattern.n == 0:
        return {}
    _check_caps(g, pattern, "is_minor")
    free = _MINOR_FREE.setdefault((pattern.n, pattern.edges), set())
    sets = tuple(1 << v for v in range(g.n))
    found = _minor_search(g, sets, pattern, free)
    if found is None:
        return None
    return {pv: frozenset(bits(m)) for pv, m in found.items()}


def _minor_search(h: Graph, sets: tuple[int, ...], pattern: Graph, free: set) -> Optional[dict]:
    if h.n < pattern.n or h.m < pattern.m:
        return None
    _, key = canonical_order(h)
    if key in free:
        return None
    if h.n == pattern.n:
        mono = find_monomorphism(pattern, h)
        if mono is not None:
            return {pv: sets[hv] for pv, hv in mono.items()}
        free.add(key)
        return None
    # surplus isolated vertices can only be deleted
    isolated = [v for v in range(h.n) if not h.adj[v]]
    if isolated and sum(1 for v in range(pattern.n) if not pattern.adj[v]) < len(isolated):
        drop = isolated[-1]
        res = _minor_search(*_delete(h, sets, drop), pattern, free)
        if res is None:
            free.add(key)
        return res
    for v in sorted(range(h.n), key=lambda x: (h.degree(x), x)):
        res = _minor_search(*_delete(h, sets, v), pattern, free)
        if res is not None:
            return res
    for u, v in h.sorted_edges():
        res = _minor_search(*_contract(h, sets, u, v), pattern, free)
        if res is not None:
            return res
    free.add(key)
    return None


def _delete(h: Graph, sets, v):
    sub, keep = h.remove_vertices([v])
    return sub, tuple(sets[x] for x in keep)


def _contract(h: Graph, sets, u, v):
    # merge v into u, then drop v
    index = {x: (x if x < v else x - 1) for x in range(h.n) if x != v}
    edges = set()
    for a, b in h.edges:
        a2 = u if a == v else a
        b2 = u if b == v else b
        if a2 != b2:
            edges.add((index[a2], index[b2]))
    new_sets = tuple((sets[x] | sets[v]) if x == u else sets[x] for x in range(h.n) if x != v)
    return Graph.from_edges(h.n - 1, edges), new_sets


def check_minor_witness(g: Graph, pattern: Graph, witness: dict[int, frozenset[int]]) -> bool:
    """True iff ``witness`` is a valid minor model of ``pattern`` in ``g``."""
    if set(witness) != set(range(pattern.n)):
        return False
    seen: set[int] = set()
    masks = {}
    for pv, bs in witness.items():
        if not bs or bs & seen:
            return False
        seen |= bs
        m = sum(1 << v for v in bs)
        if len(component_masks(g, m)) != 1:
            return False
        masks[pv] = m
    for a, b in pattern.edges:
        if not any(g.masks[x] & masks[b] for x in bits(masks[a])):
            return False
    return True


@dataclass(frozen=True)
class SubdivisionWitness:
    branch: dict[int, int]
    """pattern vertex -> host vertex"""
    paths: dict[tuple[int, int], tuple[int, ...]]
    """pattern edge (u, v), u < v -> host path from branch[u] to branch[v]"""


def is_subdivision_of(g: Graph, pattern: Graph) -> Optional[SubdivisionWitness]:
    """Witness that ``g`` is isomorphic to a subdivision of ``pattern``.

    Host vertices whose degree is not 2 must be branch vertices; the
    remaining branch vertices are chosen among degree-2 host vertices, and
    the suppressed graph must be simple and isomorphic to ``pattern``.
    The guardrail is on the number of such choices, not on ``|V(g)|``,
    since subdivisions are typically large.
    """
    pcap = size_cap(MINOR_PATTERN_CAP)
    if pattern.n > pcap:
        raise SizeCapError("is_subdivision_of pattern", pattern.n, pcap)
    if g.n < pattern.n or g.m < pattern.m or g.n - g.m != pattern.n - pattern.m:
        return None
    forced = [v for v in range(g.n) if g.degree(v) != 2]
    deg2 = [v for v in range(g.n) if g.degree(v) == 2]
    k2 = sum(1 for v in range(pattern.n) if pattern.degree(v) == 2)
    if len(forced) != pattern.n - k2 or k2 > len(deg2):
        return None
    if sorted(g.degree(v) for v in forced) != sorted(
        pattern.degree(v) for v in range(pattern.n) if pattern.degree(v) != 2
    ):
        return None
    threads = _threads(g, set(forced))
    tried = 0
    for counts in _distributions([len(t) for t, _ in threads], [cyc for _, cyc in threads], k2):
        tried += 1
        if tried > size_cap(SUBDIVISION_CHOICE_CAP):
            raise SizeCapError("is_subdivision_of branch choices", tried, SUBDIVISION_CHOICE_CAP)
        extra = [v for (inner, _), k in zip(threads, counts) for v in inner[:k]]
        branch = sorted(forced + extra)
        reduced = _suppress(g, set(branch))
        if reduced is None:
            continue
        rgraph, thread_of = reduced
        iso = find_isomorphism(pattern, rgraph)
        if iso is None:
            continue
        bmap = {pv: branch[iso[pv]] for pv in range(pattern.n)}
        paths = {}
        for a, b in pattern.sorted_edges():
            ra, rb = iso[a], iso[b]
            thread = thread_of[(min(ra, rb), max(ra, rb))]
            if thread[0] != bmap[a]:
                thread = tuple(reversed(thread))
            paths[(a, b)] = thread
        return SubdivisionWitness(bmap, paths)
    return None


def _threads(g: Graph, forced: set[int]) -> list[tuple[list[int], bool]]:
    """Maximal runs of degree-2 vertices, in order; the flag marks runs closing into a cycle."""
    seen: set[int] = set()
    out = []
    for s in sorted(forced):
        for first in sorted(g.adj[s]):
            if first in forced or first in seen:
                continue
            run, prev, cur = [], s, first
            while cur not in forced:
                run.append(cur)
                seen.add(cur)
                prev, cur = cur, next(w for w in g.adj[cur] if w != prev)
            out.append((run, False))
    for v in range(g.n):
        if v in forced or v in seen:
            continue
        run, prev, cur = [v], v, min(g.adj[v])
        seen.add(v)
        while cur != v:
            run.append(cur)
            seen.add(cur)
            prev, cur = cur, next(w for w in g.adj[cur] if w != prev)
        out.append((run, True))
    return out


def _distributions(lengths: list[int], cyclic: list[bool], total: int):
    """Ways to place ``total`` indistinguishable branch points on runs of the given lengths.

    A run closing into a cycle needs at least one point; placement within a
    run does not change the suppressed graph up to isomorphism.
    """
    k = len(lengths)
    need = [1 if c else 0 for c in cyclic]
    room = [sum(lengths[i:]) for i in range(k)] + [0]

    def rec(i, left, acc):
        if i == k:
            if left == 0:
                yield tuple(acc)
            return
        if left > room[i]:
            return
        for take in range(need[i], min(lengths[i], left) + 1):
            acc.append(take)
            yield from rec(i + 1, left - take, acc)
            acc.pop()

    yield from rec(0, total, [])


def _suppress(g: Graph, branch: set[int]):
    """Suppress non-branch degree-2 vertices; ``None`` if not a simple graph."""
    order = sorted(branch)
    index = {v: i for i, v in enumerate(order)}
    covered: set[int] = set()
    threads: dict[tuple[int, int], tuple[int, ...]] = {}
    for s in order:
        for first in sorted(g.adj[s]):
            walk = [s, first]
            prev, cur = s, first
            while cur not in branch:
                nxt = [w for w in g.adj[cur] if w != prev]
                if len(nxt) != 1:
                    return None
                prev, cur = cur, nxt[0]
                walk.append(cur)
                if len(walk) > g.n + 1:
                    return None
            if cur == s:
                return None
            a, b = index[s], index[cur]
            key = (min(a, b), max(a, b))
            inner = walk[1:-1]
            if key in threads:
                if set(threads[key][1:-1]) != set(inner):
                    return None  # parallel threads
                continue
            threads[key] = tuple(walk)
            covered.update(inner)
    if len(covered) + len(branch) != g.n:
        return None  # a cycle with no branch vertex
    return Graph.from_edges(len(order), threads.keys()), threads
