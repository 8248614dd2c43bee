"""Slow, definition-level reference implementations used to cross-check the fast code.

Nothing here is clever on purpose: separations are enumerated as all
``3^n`` ways of putting each vertex in ``A`` only, ``B`` only or both, and
treewidth is minimised over every elimination ordering.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations

import numpy as np

from .errors import SizeCapError
from .graph import Graph, to_mask

ORACLE_CAP = 9


def _popcount(a: np.ndarray) -> np.ndarray:
    return np.bitwise_count(a.astype(np.uint64)).astype(np.int64)


@lru_cache(maxsize=None)
def _labelings(n: int) -> tuple[np.ndarray, np.ndarray]:
    """All ``(A, B)`` bitmask pairs with ``A | B = V``."""
    codes = np.arange(3**n, dtype=np.int64)
    a = np.zeros_like(codes)
    b = np.zeros_like(codes)
    for v in range(n):
        digit = codes % 3
        codes = codes // 3
        a |= np.where(digit != 1, 1 << v, 0)  # 0: both, 2: A only
        b |= np.where(digit != 2, 1 << v, 0)  # 1: B only
    return a, b


def all_separations(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    """Bitmask arrays ``(A, B)`` of every separation of ``g``."""
    if g.n > ORACLE_CAP:
        raise SizeCapError("separation oracle", g.n, ORACLE_CAP)
    a, b = _labelings(g.n)
    a_only = a & ~b
    b_only = b & ~a
    ok = np.ones(a.shape, bool)
    for u, v in g.edges:
        bu, bv = 1 << u, 1 << v
        ok &= ~(((a_only & bu) != 0) & ((b_only & bv) != 0))
        ok &= ~(((a_only & bv) != 0) & ((b_only & bu) != 0))
    return a[ok], b[ok]


def breakable_brute(g: Graph, s, seps=None) -> bool:
    a, b = all_separations(g) if seps is None else seps
    sm = to_mask(s)
    hit = ((a & b & ~sm) == 0) & ((sm & ~a) != 0) & ((sm & ~b) != 0)
    return bool(hit.any())


def reducing_orders_brute(g: Graph, s, seps=None) -> np.ndarray:
    """Orders of all separations that reduce ``s``."""
    a, b = all_separations(g) if seps is None else seps
    sm = to_mask(s)
    k = bin(sm).count("1")
    hit = (_popcount((sm | b) & a) < k) & (_popcount((sm | a) & b) < k)
    return _popcount(a[hit] & b[hit])


def reducible_brute(g: Graph, s, seps=None) -> bool:
    return reducing_orders_brute(g, s, seps).size > 0


def treewidth_brute(g: Graph) -> int:
    """Minimum over all orderings of the largest later-neighbourhood in the fill-in.

    Shared prefixes are simulated once via depth-first search over orderings.
    """
    if g.n > ORACLE_CAP:
        raise SizeCapError("treewidth oracle", g.n, ORACLE_CAP)
    if g.n == 0:
        return -1
    best = [g.n - 1]

    def go(masks: tuple[int, ...], alive: int, width: int) -> None:
        if width >= best[0]:
            return
        if not alive:
            best[0] = width
            return
        rest = alive
        while rest:
            low = rest & -rest
            rest ^= low
            v = low.bit_length() - 1
            nb = masks[v] & alive
            deg = bin(nb).count("1")
            new = list(masks)
            m = nb
            while m:
                lw = m & -m
                m ^= lw
                w = lw.bit_length() - 1
                new[w] = (new[w] | nb) & ~lw
            go(tuple(new), alive & ~low, max(width, deg))

    go(g.masks, (1 << g.n) - 1, 0)
    return best[0]


def treewidth_all_orderings(g: Graph) -> int:
    """Literal ``min over n!`` orderings; for tiny cross-checks of the oracle itself."""
    if g.n > 7:
        raise SizeCapError("ordering enumeration", g.n, 7)
    if g.n == 0:
        return -1
    best = g.n
    for order in permutations(range(g.n)):
        nb = [set(a) for a in g.adj]
        width = 0
        for i, v in enumerate(order):
            later = {w for w in nb[v] if w not in order[:i]}
            width = max(width, len(later))
            for a in later:
                nb[a] |= later - {a}
        best = min(best, width)
    return best


def pathwidth_brute(g: Graph) -> int:
    """Minimum vertex-separation number over all orderings."""
    if g.n > 8:
        raise SizeCapError("pathwidth oracle", g.n, 8)
    if g.n == 0:
        return -1
    best = g.n
    for order in permutations(range(g.n)):
        placed = 0
        worst = 0
        for v in order:
            placed |= 1 << v
            boundary = sum(1 for u in range(g.n) if placed >> u & 1 and g.masks[u] & ~placed)
            worst = max(worst, boundary)
        best = min(best, worst)
    return best


def min_vertex_cut_brute(g: Graph, sources, sinks, share_terminals: bool = False) -> int:
    """Smallest vertex set meeting every source-sink path (Menger's other side).

    With ``share_terminals`` only non-terminal vertices may be cut, and each
    source-sink edge is a path of its own that no cut can block.
    """
    src, snk = set(sources), set(sinks)
    terminals = src | snk
    pool = [v for v in range(g.n) if not (share_terminals and v in terminals)]
    direct = 0
    if share_terminals:
        direct = sum(1 for u, v in g.edges if (u in src and v in snk) or (v in src and u in snk))
        g = Graph.from_edges(g.n, [
            (u, v) for u, v in g.edges if not ((u in src and v in snk) or (v in src and u in snk))
        ])
    best = None
    for mask in range(1 << len(pool)):
        cut = {pool[i] for i in range(len(pool)) if mask >> i & 1}
        if best is not None and len(cut) >= best:
            continue
        seen = set(src - cut)
        stack = list(seen)
        reached = bool(seen & snk)
        while stack and not reached:
            x = stack.pop()
            for y in g.adj[x]:
                if y in cut or y in seen:
                    continue
                if y in src:
                    continue
                seen.add(y)
                if y in snk:
                    reached = True
                    break
                stack.append(y)
        if not reached:
            best = len(cut)
    return best + direct
