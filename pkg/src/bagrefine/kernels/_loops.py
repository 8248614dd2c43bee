"""Scalar bitmask kernels.

Written in the numba-compatible subset of Python. ``_jit`` compiles them;
without numba they run as plain Python (slow, correct).
"""

import numpy as np


def tw_dp(adj, n):
    """Subset DP for treewidth over elimination orderings.

    ``tw[S]`` is the best width of eliminating ``S`` first; ``last[S]`` is the
    vertex eliminated last within ``S`` in an optimal ordering.
    """
    size = 1 << n
    tw = np.full(size, 127, np.int8)
    last = np.zeros(size, np.int8)
    tw[0] = -1
    for s in range(1, size):
        best = 127
        bv = 0
        rest = s
        while rest:
            low = rest & -rest
            v = 0
            while (low >> v) != 1:
                v += 1
            rest ^= low
            p = s ^ low
            prev = tw[p]
            if prev >= best:
                continue
            # component of v in G[p + v], then its outer neighbourhood
            comp = low
            frontier = low
            nb = 0
            while frontier:
                fl = frontier & -frontier
                u = 0
                while (fl >> u) != 1:
                    u += 1
                frontier ^= fl
                nb |= adj[u]
                new = adj[u] & p & ~comp
                comp |= new
                frontier |= new
            q = nb & ~p & ~low
            cnt = 0
            while q:
                q &= q - 1
                cnt += 1
            val = prev if prev > cnt else cnt
            if val < best:
                best = val
                bv = v
        tw[s] = best
        last[s] = bv
    return tw, last


def pw_dp(adj, n):
    """Vertex-separation DP; the minimum over orderings equals pathwidth."""
    size = 1 << n
    f = np.full(size, 127, np.int8)
    f[0] = 0
    for s in range(1, size):
        boundary = 0
        rest = s
        best = 127
        while rest:
            low = rest & -rest
            v = 0
            while (low >> v) != 1:
                v += 1
            rest ^= low
            if adj[v] & ~s:
                boundary += 1
            prev = f[s ^ low]
            if prev < best:
                best = prev
        f[s] = best if best > boundary else boundary
    return f


def canon(adj, n, cls, cls_mask):
    """Lexicographically largest adjacency code over vertex orderings.

    The code is the sequence of chunks ``chunk[k]`` = adjacency bits of the
    k-th vertex to the vertices before it. Twins (equal open neighbourhoods
    up to each other) are interchangeable, so only the smallest unused member
    of a twin class is tried at each level.
    """
    order = np.zeros(n, np.int64)
    best_order = np.zeros(n, np.int64)
    best = np.full(n + 1, -1, np.int64)
    pos = np.zeros(n + 1, np.int64)
    used = 0
    level = 0
    while level >= 0:
        if level == n:
            for i in range(n):
                best_order[i] = order[i]
            level -= 1
            used ^= 1 << order[level]
            continue
        found = False
        v = pos[level]
        while v < n:
            if not (used >> v) & 1:
                if cls_mask[cls[v]] & ~used & ((1 << v) - 1):
                    v += 1
                    continue
                c = 0
                for i in range(level):
                    c = (c << 1) | ((adj[v] >> order[i]) & 1)
                if c >= best[level]:
                    if c > best[level]:
                        best[level] = c
                        for j in range(level + 1, n + 1):
                            best[j] = -1
                    found = True
                    break
            v += 1
        if found:
            pos[level] = v + 1
            order[level] = v
            used |= 1 << v
            level += 1
            if level <= n:
                pos[level] = 0
        else:
            level -= 1
            if level >= 0:
                used ^= 1 << order[level]
    return best_order, best[:n]


def nested_counts(p, q, m):
    """Per chord ``k``, the number of chords ``l`` with ``p[k] < p[l]`` and ``q[l] < q[k]``.

    Endpoints are slot positions in ``0..m-1``; a Fenwick tree over ``q``
    collects chords in decreasing order of ``p``, holding back ties in ``p``.
    """
    k = p.shape[0]
    out = np.zeros(k, np.int64)
    tree = np.zeros(m + 1, np.int64)
    order = np.argsort(-p, kind="mergesort")
    i = 0
    while i < k:
        j = i
        while j < k and p[order[j]] == p[order[i]]:
            j += 1
        for t in range(i, j):
            c = order[t]
            pos = q[c]  # count stored q < q[c]: prefix over 1..q[c]
            s = 0
            while pos > 0:
                s += tree[pos]
                pos -= pos & -pos
            out[c] = s
        for t in range(i, j):
            pos = q[order[t]] + 1
            while pos <= m:
                tree[pos] += 1
                pos += pos & -pos
        i = j
    return out
