"""Per-bag audits of a tree-decomposition: width of bags, forbidden minors, degree, separations, planar class."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .decomposition import TreeDecomposition
from .exact import treewidth, validate
from .graph import Graph, complete_bipartite, grid
from .minors import is_minor
from .planar import classify_nonseparable
from .separations import is_breakable, is_reducible

CHECKS = ("tw", "k2-minor", "grid-minor", "degree", "unbreakable", "irreducible", "planar-class")


@dataclass(frozen=True)
class AuditEntry:
    check: str
    node: int
    """bag index, or -1 for whole-decomposition checks"""
    ok: bool
    detail: str

    def line(self) -> str:
        return f"R {self.check} {'pass' if self.ok else 'fail'} node={self.node} {self.detail}"


@dataclass
class AuditReport:
    entries: list[AuditEntry] = field(default_factory=list)

    @property
    def violations(self) -> list[AuditEntry]:
        return [e for e in self.entries if not e.ok]

    @property
    def ok(self) -> bool:
        return not self.violations

    def lines(self) -> list[str]:
        return [e.line() for e in self.entries]

    def summary(self) -> str:
        checks = sorted({e.check for e in self.entries})
        return f"bags audited; checks={','.join(checks)} entries={len(self.entries)} violations={len(self.violations)}"


def surface_tw_bound(genus: int) -> int:
    return max(4 * genus + 2, 3)


def grid_side(genus: int) -> int:
    """Side of the grid minor whose presence in a bag would make the bag breakable."""
    return 4 * math.ceil(math.sqrt(genus + 1))


def _minor_free(bag_graph: Graph, pattern: Graph) -> tuple[bool, str]:
    if pattern.n > bag_graph.n or pattern.m > bag_graph.m:
        return True, "pattern larger than bag"
    model = is_minor(bag_graph, pattern)
    return model is None, "no minor" if model is None else "minor found"


def bag_audit(
    g: Graph,
    dec: TreeDecomposition,
    checks: Iterable[str],
    genus: Optional[int] = None,
    tw_bound: Optional[int] = None,
) -> AuditReport:
    """Run the requested ``checks`` on every bag of ``dec``.

    ``tw`` compares each bag's treewidth with ``tw_bound`` (default: the
    surface bound for ``genus``, else no bound); ``k2-minor`` and
    ``grid-minor`` need ``genus``; ``degree`` tests that ``G[B]`` has maximum
    degree below that of ``g`` or ``|B| <= Delta + 1``. An invalid
    decomposition gets one ``valid`` failure per axiom violation.
    """
    checks = list(checks)
    unknown = [c for c in checks if c not in CHECKS]
    if unknown:
        raise ValueError(f"unknown checks {unknown}; choose from {CHECKS}")
    if genus is not None and tw_bound is None:
        tw_bound = surface_tw_bound(genus)
    if ("k2-minor" in checks or "grid-minor" in checks) and genus is None:
        raise ValueError("minor checks need a genus")
    rep = AuditReport()
    problems = validate(g, dec)
    for p in problems:
        rep.entries.append(AuditEntry("valid", -1, False, p.replace(" ", "_")))
    if problems:
        return rep
    rep.entries.append(AuditEntry("valid", -1, True, f"width={dec.width} bags={dec.size}"))
    delta = g.max_degree()
    k2 = complete_bipartite(2, 4 * genus + 2) if genus is not None else None
    side = grid_side(genus) if genus is not None else 0
    for x, bag in enumerate(dec.bags):
        sub, _ = g.induced(bag)
        for check in checks:
            if check == "tw":
                w = treewidth(sub)
                ok = tw_bound is None or w <= tw_bound
                rep.entries.append(AuditEntry("tw", x, ok, f"tw={w} bound={tw_bound}"))
            elif check == "k2-minor":
                ok, why = _minor_free(sub, k2)
                rep.entries.append(AuditEntry("k2-minor", x, ok, f"K2,{4 * genus + 2} {why}"))
            elif check == "grid-minor":
                # the grid is only built when the bag could possibly hold it
                if side * side > sub.n:
                    ok, why = True, "pattern larger than bag"
                else:
                    ok, why = _minor_free(sub, grid(side, side))
                rep.entries.append(AuditEntry("grid-minor", x, ok, f"{side}x{side} {why}"))
            elif check == "degree":
                d = sub.max_degree() if sub.n else 0
                ok = d <= delta - 1 or len(bag) <= delta + 1
                rep.entries.append(AuditEntry("degree", x, ok, f"bag_max_degree={d} size={len(bag)} delta={delta}"))
            elif check == "unbreakable":
                sep = is_breakable(g, bag)
                rep.entries.append(AuditEntry("unbreakable", x, sep is None, "none" if sep is None else f"order={sep.order}"))
            elif check == "irreducible":
                sep = is_reducible(g, bag)
                rep.entries.append(AuditEntry("irreducible", x, sep is None, "none" if sep is None else f"order={sep.order}"))
            elif check == "planar-class":
                cls = classify_nonseparable(sub)
                rep.entries.append(AuditEntry("planar-class", x, cls.positive, cls.value))
    return rep
