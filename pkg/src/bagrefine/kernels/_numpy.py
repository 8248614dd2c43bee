"""Vectorised numpy versions of the subset DPs (no compiler needed)."""

import numpy as np

from . import _loops


def _popcount(a):
    return np.bitwise_count(a.astype(np.uint64)).astype(np.int64)


def _outer_neighbourhoods(adj, n, masks, v):
    """For each mask M: neighbourhood of the component of v in G[M + v]."""
    bit = np.int64(1) << v
    comp = np.full(masks.shape, bit, np.int64)
    while True:
        nb = np.zeros_like(comp)
        for u in range(n):
            nb |= np.where((comp >> u) & 1, adj[u], 0)
        grown = comp | (nb & masks)
        if np.array_equal(grown, comp):
            return nb
        comp = grown


def tw_dp(adj, n):
    adj = np.asarray(adj, np.int64)
    size = 1 << n
    masks = np.arange(size, dtype=np.int64)
    q = np.empty((n, size), np.int64)
    for v in range(n):
        nb = _outer_neighbourhoods(adj, n, masks, v)
        q[v] = _popcount(nb & ~masks & ~(np.int64(1) << v))
    pc = _popcount(masks)
    tw = np.full(size, 127, np.int64)
    last = np.zeros(size, np.int64)
    tw[0] = -1
    for k in range(1, n + 1):
        layer = masks[pc == k]
        best = np.full(layer.shape, 127, np.int64)
        arg = np.zeros(layer.shape, np.int64)
        for v in range(n):
            has = ((layer >> v) & 1).astype(bool)
            prev = layer ^ (np.int64(1) << v)
            val = np.maximum(tw[prev], q[v][prev])
            better = has & (val < best)
            best = np.where(better, val, best)
            arg = np.where(better, v, arg)
        tw[layer] = best
        last[layer] = arg
    return tw.astype(np.int8), last.astype(np.int8)


def pw_dp(adj, n):
    adj = np.asarray(adj, np.int64)
    size = 1 << n
    masks = np.arange(size, dtype=np.int64)
    boundary = np.zeros(size, np.int64)
    for v in range(n):
        boundary += ((masks >> v) & 1) * ((adj[v] & ~masks) != 0)
    pc = _popcount(masks)
    f = np.full(size, 127, np.int64)
    f[0] = 0
    for k in range(1, n + 1):
        layer = masks[pc == k]
        best = np.full(layer.shape, 127, np.int64)
        for v in range(n):
            has = ((layer >> v) & 1).astype(bool)
            prev = f[layer ^ (np.int64(1) << v)]
            best = np.where(has & (prev < best), prev, best)
        f[layer] = np.maximum(best, boundary[layer])
    return f.astype(np.int8)


# Branch-and-bound has no useful vectorised form; run the scalar source.
canon = _loops.canon


def nested_counts(p, q, m, block=1024):
    """Blocked form of the nested-chord count: a sorted suffix for later blocks, broadcasting within one."""
    p = np.asarray(p, np.int64)
    q = np.asarray(q, np.int64)
    order = np.argsort(p, kind="mergesort")
    ps, qs = p[order], q[order]
    k = len(ps)
    res = np.zeros(k, np.int64)
    # block boundaries never split a run of equal p
    cuts = sorted({int(np.searchsorted(ps, ps[i], side="left")) for i in range(0, k, block)} | {k})
    suffix = np.zeros(0, np.int64)
    for lo, hi in reversed(list(zip(cuts, cuts[1:]))):
        bp, bq = ps[lo:hi], qs[lo:hi]
        res[lo:hi] = np.searchsorted(suffix, bq, side="left")
        inner = (bp[None, :] > bp[:, None]) & (bq[None, :] < bq[:, None])
        res[lo:hi] += inner.sum(axis=1)
        suffix = np.sort(np.concatenate([suffix, bq]))
    out = np.zeros(k, np.int64)
    out[order] = res
    del m
    return out
