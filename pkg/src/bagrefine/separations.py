"""Separations and the breakability / reducibility tests for vertex sets."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional

from ._config import size_cap
from .errors import PreconditionError, SizeCapError
from .graph import Graph, bits, component_masks, neighbourhood_mask, to_mask

REDUCIBLE_CAP = 16


@dataclass(frozen=True)
class Separation:
    A: frozenset[int]
    B: frozenset[int]

    @property
    def order(self) -> int:
        return len(self.A & self.B)

    @property
    def separator(self) -> frozenset[int]:
        return self.A & self.B

    def is_separation_of(self, g: Graph) -> bool:
        if self.A | self.B != frozenset(range(g.n)):
            return False
        a_only, b_only = self.A - self.B, self.B - self.A
        return not any((u in a_only and v in b_only) or (v in a_only and u in b_only) for u, v in g.edges)

    def breaks(self, s: Iterable[int]) -> bool:
        s = frozenset(s)
        return bool(s - self.A) and bool(s - self.B) and self.separator <= s

    def reduces(self, s: Iterable[int]) -> bool:
        s = frozenset(s)
        return len((s | self.B) & self.A) < len(s) and len((s | self.A) & self.B) < len(s)

    def swapped(self) -> "Separation":
        return Separation(self.B, self.A)


def _check_subset(g: Graph, s: frozenset[int]) -> None:
    if any(not 0 <= v < g.n for v in s):
        raise PreconditionError("set must be a subset of V(g)")


def is_breakable(g: Graph, s: Iterable[int]) -> Optional[Separation]:
    """A separation breaking ``s``, or ``None`` if ``s`` is unbreakable.

    ``s`` is breakable iff two of its vertices ``u, v`` lie in different
    components of ``g - (s - {u, v})``. With ``C`` the component of ``u``,
    ``(C + N(C), V - C)`` then breaks ``s``. Pairs are tried in sorted order.
    """
    s = frozenset(s)
    _check_subset(g, s)
    full = (1 << g.n) - 1
    smask = to_mask(s)
    for u, v in combinations(sorted(s), 2):
        allowed = full & ~smask | (1 << u) | (1 << v)
        comp = next(c for c in component_masks(g, allowed) if c >> u & 1)
        if comp >> v & 1:
            continue
        a = comp | neighbourhood_mask(g, comp)
        return Separation(frozenset(bits(a)), frozenset(bits(full & ~comp)))
    return None


def _best_split(counts: list[int]) -> tuple[int, list[bool]]:
    """Split items into two sides maximising the smaller total.

    Returns the smaller total and, per item, whether it goes on side one.
    """
    total = sum(counts)
    # reach[t] = index list achieving sum t on side one (first found)
    reach: dict[int, tuple[int, ...]] = {0: ()}
    for i, c in enumerate(counts):
        for t, chosen in list(reach.items()):
            if t + c not in reach:
                reach[t + c] = chosen + (i,)
    best_t = max(reach, key=lambda t: (min(t, total - t), -t))
    side = [False] * len(counts)
    for i in reach[best_t]:
        side[i] = True
    return min(best_t, total - best_t), side


def is_reducible(g: Graph, s: Iterable[int]) -> Optional[Separation]:
    """A minimum-order separation reducing ``s``, or ``None`` (``|V(g)| <= 16``).

    Candidate separators ``X`` are tried by increasing size, then
    lexicographically. For each, the components of ``g - X`` are split into
    two sides to maximise the smaller number of ``s``-vertices on a side;
    ``(A, B)`` reduces ``s`` iff ``|X - s|`` is below that number.
    """
    s = frozenset(s)
    _check_subset(g, s)
    cap = size_cap(REDUCIBLE_CAP)
    if g.n > cap:
        raise SizeCapError("is_reducible", g.n, cap)
    full = (1 << g.n) - 1
    smask = to_mask(s)
    for size in range(g.n + 1):
        for xs in combinations(range(g.n), size):
            x = to_mask(xs)
            outside = bin(x & ~smask).count("1")
            if 2 * (outside + 1) > bin(smask & ~x).count("1"):
                continue
            comps = component_masks(g, full & ~x)
            counts = [bin(c & smask).count("1") for c in comps]
            low, side = _best_split(counts)
            if outside < low:
                one = x
                for c, first in zip(comps, side):
                    if first:
                        one |= c
                two = full & ~one | x
                return Separation(frozenset(bits(one)), frozenset(bits(two)))
    return None
