"""Bag refinement: component splits, reductions along separations, and the fixpoint loop.

Every step returns a new normalised decomposition and checks that the
bag-size profile went down strictly in lexicographic order. A failed check
raises :class:`InvariantViolation`; it is never swallowed.
"""

from __future__ import annotations

import threading
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Optional

from .decomposition import BagProfile, TreeDecomposition, lex_less, normalise, profile
from .errors import InvariantViolation, PreconditionError
from .exact import validate
from .graph import Graph, bits, component_masks, to_mask
from .paths import max_disjoint_paths
from .separations import Separation, is_reducible


class Level(str, Enum):
    UNBREAKABLE = "unbreakable"
    IRREDUCIBLE = "irreducible"


@dataclass(frozen=True)
class TraceStep:
    kind: str
    before: BagProfile
    after: BagProfile

    def line(self) -> str:
        return f"step {self.kind} {self.before} {self.after}"


@dataclass
class Telemetry:
    """Process-wide counters of engine steps and checks (for audits)."""

    steps: dict[str, int] = field(default_factory=lambda: {"split": 0, "reduce": 0})
    validated: int = 0
    failures: int = 0
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def record(self, kind: str) -> None:
        with self.lock:
            self.steps[kind] += 1
            self.validated += 1

    def fail(self) -> None:
        with self.lock:
            self.failures += 1

    def reset(self) -> None:
        with self.lock:
            self.steps = {"split": 0, "reduce": 0}
            self.validated = 0
            self.failures = 0

    def snapshot(self) -> dict[str, int]:
        with self.lock:
            return {**self.steps, "validated": self.validated, "failures": self.failures}


TELEMETRY = Telemetry()


def _check_step(g: Graph, kind: str, before: TreeDecomposition, after: TreeDecomposition) -> TraceStep:
    problems = validate(g, after)
    p0, p1 = profile(before), profile(after)
    if problems:
        msg = f"{kind} produced an invalid decomposition: {problems[:3]}"
    elif not lex_less(p1, p0):
        msg = f"{kind} did not decrease the profile: {p0} -> {p1}"
    elif after.width > before.width:
        msg = f"{kind} increased the width: {before.width} -> {after.width}"
    else:
        TELEMETRY.record(kind)
        return TraceStep(kind, p0, p1)
    TELEMETRY.fail()
    raise InvariantViolation(msg)


def _doubled(dec: TreeDecomposition, y: int, side1: frozenset[int], side2: frozenset[int], bags=None):
    """Two copies of the tree joined at ``y``; copy ``i`` keeps bag parts inside ``side_i``."""
    k = dec.size
    src = dec.bags if bags is None else bags
    new_bags = [b & side1 for b in src] + [b & side2 for b in src]
    edges = {(a, b) for a, b in dec.edges} | {(a + k, b + k) for a, b in dec.edges}
    edges.add((y, y + k))
    return TreeDecomposition(dec.n, tuple(new_bags), frozenset(edges))


def meeting_components(g: Graph, bag: frozenset[int], s: frozenset[int]) -> list[frozenset[int]]:
    """Components of ``g - s`` that meet ``bag``, ordered by smallest vertex."""
    full = (1 << g.n) - 1
    bm = to_mask(bag)
    comps = component_masks(g, full & ~to_mask(s))
    return [frozenset(bits(c)) for c in comps if c & bm]


def split_step(g: Graph, dec: TreeDecomposition, x: int, y: int, s) -> TreeDecomposition:
    """Split along the first component of ``g - s`` meeting ``B_x``.

    Requires ``s`` inside ``B_y`` and ``B_x`` meeting at least two components
    of ``g - s`` (and not ``x = y`` with ``s = B_y``).
    """
    s = frozenset(s)
    if not s <= dec.bags[y]:
        raise PreconditionError("s must be a subset of B_y")
    if x == y and s == dec.bags[y]:
        raise PreconditionError("x = y with s = B_y is excluded")
    hit = meeting_components(g, dec.bags[x], s)
    if len(hit) < 2:
        raise PreconditionError(f"B_{x} meets {len(hit)} component(s) of g - s, need at least 2")
    h1 = hit[0]
    d1 = h1 | s
    d2 = frozenset(range(g.n)) - h1
    out = normalise(_doubled(dec, y, d1, d2))
    bx = dec.bags[x]
    if any(bx <= b for b in out.bags):
        raise InvariantViolation("split left B_x inside an output bag")
    _check_step(g, "split", dec, out)
    return out


def _closest_holders(dec: TreeDecomposition, y: int, vertices) -> dict[int, int]:
    """For each vertex, the node nearest ``y`` whose bag holds it."""
    nbrs = dec.neighbours()
    want = set(vertices)
    out = {}
    seen = {y}
    queue = deque([y])
    while queue and want:
        u = queue.popleft()
        for a in list(want):
            if a in dec.bags[u]:
                out[a] = u
                want.discard(a)
        for w in sorted(nbrs[u]):
            if w not in seen:
                seen.add(w)
                queue.append(w)
    if want:
        raise PreconditionError(f"vertices {sorted(want)} are in no bag")
    return out


def reduce_step(g: Graph, dec: TreeDecomposition, y: int, sep: Separation) -> TreeDecomposition:
    """Double the tree along a minimum-order separation reducing ``B_y``.

    Each separator vertex ``a`` is first added to every bag on the tree path
    from ``y`` to the nearest node holding ``a``; copy ``i`` of the tree then
    keeps bag parts inside side ``i``.
    """
    by = dec.bags[y]
    if not sep.is_separation_of(g):
        raise PreconditionError("not a separation of g")
    if not sep.reduces(by):
        raise PreconditionError(f"separation does not reduce B_{y}")
    x = sep.separator
    if x:
        for side in (sep.A, sep.B):
            found = len(max_disjoint_paths(g, x, by & side))
            if found < len(x):
                raise PreconditionError(
                    f"separation is not of minimum order: only {found} of {len(x)} disjoint paths"
                )
    holder = _closest_holders(dec, y, x)
    extra: list[set[int]] = [set() for _ in dec.bags]
    for a, wa in holder.items():
        for w in dec.tree_path(y, wa):
            extra[w].add(a)
    bags = [b | frozenset(e) for b, e in zip(dec.bags, extra)]
    out = normalise(_doubled(dec, y, sep.A, sep.B, bags))
    _check_step(g, "reduce", dec, out)
    return out


def find_split(g: Graph, dec: TreeDecomposition) -> Optional[tuple[int, int, frozenset[int]]]:
    """First ``(x, y, S)`` with ``S`` inside ``B_y`` splitting ``B_x``, or ``None``.

    Nodes ``y`` in order, ``S`` by size then lexicographically, then ``x`` in
    order. Empty bags meet no component and never trigger.
    """
    full = (1 << g.n) - 1
    bag_masks = [to_mask(b) for b in dec.bags]
    for y, by in enumerate(dec.bags):
        members = sorted(by)
        for size in range(len(members) + 1):
            for combo in combinations(members, size):
                sm = to_mask(combo)
                comps = component_masks(g, full & ~sm)
                if len(comps) < 2:
                    continue
                for x, bm in enumerate(bag_masks):
                    if x == y and size == len(members):
                        continue
                    if sum(1 for c in comps if c & bm) >= 2:
                        return x, y, frozenset(combo)
    return None


def refine_to_fixpoint(
    g: Graph,
    dec: TreeDecomposition,
    level: Level | str = Level.UNBREAKABLE,
    trace: list[TraceStep] | None = None,
) -> TreeDecomposition:
    """Apply splits to exhaustion, then (for ``irreducible``) one reduction, and repeat.

    Width never increases and the profile strictly decreases at every step,
    which also bounds the number of steps.
    """
    level = Level(level)
    problems = validate(g, dec)
    if problems:
        raise PreconditionError(f"invalid input decomposition: {problems[:3]}")
    cur = normalise(dec)
    while True:
        found = find_split(g, cur)
        if found is not None:
            nxt = split_step(g, cur, *found)
            kind = "split"
        elif level is Level.IRREDUCIBLE:
            nxt = None
            for y, by in enumerate(cur.bags):
                sep = is_reducible(g, by)
                if sep is not None:
                    nxt = reduce_step(g, cur, y, sep)
                    break
            if nxt is None:
                return cur
            kind = "reduce"
        else:
            return cur
        if trace is not None:
            trace.append(TraceStep(kind, profile(cur), profile(nxt)))
        cur = nxt


def write_trace(steps: list[TraceStep]) -> str:
    return "".join(s.line() + "\n" for s in steps)
