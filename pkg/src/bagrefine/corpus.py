"""Named desk-scale suites checking the bag-structure results end to end.

Each suite enumerates its instances, checks them (optionally on several
worker threads) and collects violations in instance order.
"""

from __future__ import annotations

import math
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from .audit import bag_audit
from .canonical import enumerate_connected, enumerate_graphs
from .decomposition import TreeDecomposition
from .exact import decomposition_from_order, treewidth, treewidth_exact, validate
from .gadget import STOCK_DRAWINGS, build_gadget, verify_gadget
from .graph import Graph, complete, complete_bipartite, random_planar_graph, random_planar_triangulation
from .layered import (
    layered_planar_input,
    shallow_peel,
    sqrt_decomposition,
    union_bag_width_report,
    union_pathwidth_report,
)
from .oracles import all_separations, breakable_brute, reducible_brute, reducing_orders_brute, treewidth_brute
from .planar import classify_nonseparable, is_planar
from .refine import TELEMETRY, Level, refine_to_fixpoint
from .separations import is_breakable, is_reducible

def canonical_hash(g: Graph) -> int:
    """Stable per-graph integer for deriving seeds."""
    return sum((u * 31 + v) * 1009 for u, v in g.edges) + g.n


Check = Callable[[object], tuple[list[str], dict]]

#: Euler genus of the surface-suite graphs (projective plane for the first three).
SURFACE_GENUS = {"K5": 1, "K6": 1, "K3,3": 1, "K4,4": 2}


@dataclass
class SuiteResult:
    name: str
    instances: int = 0
    violations: list[str] = field(default_factory=list)
    stats: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.violations

    def lines(self, limit: int = 20) -> list[str]:
        stats = " ".join(f"{k}={_fmt(v)}" for k, v in sorted(self.stats.items()))
        out = [
            f"R suite-{self.name} {'pass' if self.ok else 'fail'} instances={self.instances} "
            f"violations={len(self.violations)} seconds={self.seconds:.1f} {stats}".rstrip()
        ]
        out += [f"R {self.name} fail {v}" for v in self.violations[:limit]]
        return out


def _fmt(v) -> str:
    return f"{v:.3f}" if isinstance(v, float) else str(v)


def _merge(into: dict, part: dict) -> None:
    for k, v in part.items():
        if k.startswith("max_"):
            into[k] = max(into.get(k, v), v)
        elif k.startswith("min_"):
            into[k] = min(into.get(k, v), v)
        else:
            into[k] = into.get(k, 0) + v


def _run(name: str, instances: Iterable, check: Check, workers: int) -> SuiteResult:
    start = time.perf_counter()
    items = list(instances)
    res = SuiteResult(name, len(items))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            outs = list(pool.map(check, items))
    else:
        outs = [check(x) for x in items]
    for bad, stats in outs:
        res.violations.extend(bad)
        _merge(res.stats, stats)
    res.seconds = time.perf_counter() - start
    return res


def _refined(g: Graph, level: Level) -> tuple[int, object, list[str]]:
    """Optimal seed, its fixpoint, and violations of width and validity."""
    tw, seed = treewidth_exact(g)
    ref = refine_to_fixpoint(g, seed, level)
    bad = []
    problems = validate(g, ref)
    if problems:
        bad.append(f"{g} fixpoint invalid: {problems[0]}")
    if ref.width != tw:
        bad.append(f"{g} fixpoint width {ref.width} != tw {tw}")
    return tw, ref, bad


# -- suites -------------------------------------------------------------------

def tw_oracle(workers: int = 1, seed: int = 0, max_n: int = 7) -> SuiteResult:
    def check(g):
        fast, brute = treewidth(g), treewidth_brute(g)
        return ([] if fast == brute else [f"{g}: exact {fast} oracle {brute}"]), {"compared": 1}

    return _run("tw-oracle", (g for n in range(1, max_n + 1) for g in enumerate_connected(n)), check, workers)


def breakability(workers: int = 1, seed: int = 0, max_n: int = 6) -> SuiteResult:
    def check(g):
        seps = all_separations(g)
        bad = []
        for mask in range(1 << g.n):
            s = frozenset(v for v in range(g.n) if mask >> v & 1)
            fast_b = is_breakable(g, s) is not None
            if fast_b != breakable_brute(g, s, seps):
                bad.append(f"{g} S={sorted(s)}: breakable fast={fast_b}")
            sep = is_reducible(g, s)
            orders = reducing_orders_brute(g, s, seps)
            if (sep is not None) != reducible_brute(g, s, seps):
                bad.append(f"{g} S={sorted(s)}: reducible fast={sep is not None}")
            elif sep is not None and sep.order != int(np.min(orders)):
                bad.append(f"{g} S={sorted(s)}: reducing order {sep.order} not minimum {int(np.min(orders))}")
            if fast_b and sep is None:
                bad.append(f"{g} S={sorted(s)}: breakable but not reducible")
        return bad, {"pairs": 1 << g.n}

    return _run("breakability", (g for n in range(0, max_n + 1) for g in enumerate_graphs(n)), check, workers)


def _planar_instances(seed: int, random_count: int, max_n: int):
    for n in range(1, max_n + 1):
        for g in enumerate_connected(n):
            if is_planar(g):
                yield g
    rng = random.Random(seed)
    for _ in range(random_count):
        yield random_planar_graph(rng.randint(3, 12), seed=rng.randrange(2**31))


def planar_thm(workers: int = 1, seed: int = 0, random_count: int = 500, max_n: int = 8) -> SuiteResult:
    def check(g):
        _, ref, bad = _refined(g, Level.UNBREAKABLE)
        worst = -1
        for x, bag in enumerate(ref.bags):
            sub, _ = g.induced(bag)
            w = treewidth(sub)
            worst = max(worst, w)
            if w > 3:
                bad.append(f"{g} bag {x}: tw {w} > 3")
            cls = classify_nonseparable(sub)
            if not cls.positive:
                bad.append(f"{g} bag {x}: class {cls.value}")
        return bad, {"max_bag_tw": worst}

    return _run("planar-thm", _planar_instances(seed, random_count, max_n), check, workers)


def irreducible(workers: int = 1, seed: int = 0, max_n: int = 7) -> SuiteResult:
    def check(g):
        _, ref, bad = _refined(g, Level.IRREDUCIBLE)
        # non-optimal seeds make the engine do real work
        wide = refine_to_fixpoint(g, TreeDecomposition.single(g.n, range(g.n)), Level.IRREDUCIBLE)
        order = list(range(g.n))
        random.Random(seed * 7919 + canonical_hash(g)).shuffle(order)
        shuffled = refine_to_fixpoint(g, decomposition_from_order(g, order), Level.IRREDUCIBLE)
        seps = all_separations(g)
        for label, dec in (("optimal", ref), ("single-bag", wide), ("random-order", shuffled)):
            if validate(g, dec):
                bad.append(f"{g} {label} fixpoint invalid")
            for x, bag in enumerate(dec.bags):
                if reducible_brute(g, bag, seps):
                    bad.append(f"{g} {label} bag {x} {sorted(bag)} is reducible")
        return bad, {"bags": ref.size}

    return _run("irreducible", (g for n in range(1, max_n + 1) for g in enumerate_connected(n)), check, workers)


def degree(workers: int = 1, seed: int = 0, max_n: int = 7, subcubic_n: int = 10) -> SuiteResult:
    def check(item):
        kind, g = item
        _, ref, bad = _refined(g, Level.UNBREAKABLE)
        if kind == "all":
            rep = bag_audit(g, ref, ["degree"])
        else:
            rep = bag_audit(g, ref, ["tw"], tw_bound=3)
        bad += [f"{g} {e.line()}" for e in rep.violations]
        return bad, {kind: 1}

    items = [("all", g) for n in range(1, max_n + 1) for g in enumerate_connected(n)]
    items += [("subcubic", g) for n in range(1, subcubic_n + 1) for g in enumerate_graphs(n, connected=True, max_degree=3)]
    return _run("degree", items, check, workers)


def surface_graphs() -> list[tuple[str, Graph, int]]:
    graphs = {"K5": complete(5), "K6": complete(6), "K3,3": complete_bipartite(3, 3), "K4,4": complete_bipartite(4, 4)}
    return [(name, graphs[name], SURFACE_GENUS[name]) for name in graphs]


def surface(workers: int = 1, seed: int = 0) -> SuiteResult:
    def check(item):
        name, g, genus = item
        _, ref, bad = _refined(g, Level.UNBREAKABLE)
        rep = bag_audit(g, ref, ["tw", "k2-minor", "grid-minor"], genus=genus)
        bad += [f"{name} {e.line()}" for e in rep.violations]
        return bad, {"bags": ref.size}

    return _run("surface", surface_graphs(), check, workers)


def triangulation_corpus(seed: int = 0, count: int = 50, lo: int = 10, hi: int = 60) -> list[tuple[int, int]]:
    """``(n, seed)`` pairs of the random triangulations shared by the layered suites."""
    rng = random.Random(seed)
    return [(rng.randint(lo, hi), rng.randrange(2**31)) for _ in range(count)]


def ltw(workers: int = 1, seed: int = 0, count: int = 50) -> SuiteResult:
    def check(item):
        n, s = item
        g, _ = random_planar_triangulation(n, seed=s)
        lay, dec, c = layered_planar_input(g)
        bad = []
        if c > 3:
            bad.append(f"n={n} seed={s}: layered width {c} > 3")
        sq = sqrt_decomposition(g, lay, dec, 3)
        bound = 2 * math.sqrt(3 * n)
        if validate(g, sq.dec):
            bad.append(f"n={n} seed={s}: sqrt decomposition invalid")
        if sq.dec.width > bound:
            bad.append(f"n={n} seed={s}: sqrt width {sq.dec.width} > {bound:.2f}")
        stats = {"max_sqrt_ratio": sq.dec.width / bound}
        for k, lim in ((1, 11), (2, 20)):
            rep = union_bag_width_report(g, sq, k, cap=5000, seed=seed, bound=lim)
            if rep.max_width > lim:
                bad.append(f"n={n} seed={s}: union k={k} width {rep.max_width} > {lim}")
            stats[f"max_union_k{k}"] = rep.max_width
            stats[f"exhaustive_k{k}"] = int(rep.exhaustive)
        return bad, stats

    return _run("ltw", triangulation_corpus(seed, count), check, workers)


def ltw2(workers: int = 1, seed: int = 0, count: int = 50) -> SuiteResult:
    def check(item):
        n, s = item
        g, _ = random_planar_triangulation(n, seed=s)
        lay, dec, _ = layered_planar_input(g)
        pr = shallow_peel(g, lay, dec, 3)
        root = math.sqrt(3 * n)
        bad = []
        sg, _ = g.induced(pr.S)
        tw_s = treewidth(sg) if sg.n else -1
        if len(pr.S) > root:
            bad.append(f"n={n} seed={s}: |S|={len(pr.S)} > {root:.2f}")
        if tw_s > 2:
            bad.append(f"n={n} seed={s}: tw(G[S])={tw_s} > 2")
        if pr.dec_rest.width > root:
            bad.append(f"n={n} seed={s}: width(dec_rest)={pr.dec_rest.width} > {root:.2f}")
        stats = {"max_S_ratio": len(pr.S) / root, "max_rest_ratio": pr.dec_rest.width / root}
        for k in (1, 2):
            rep = union_pathwidth_report(pr, k, cap=5000, seed=seed)
            if rep.max_window_width > 6 * k - 1:
                bad.append(f"n={n} seed={s}: union pathwidth k={k} {rep.max_window_width} > {6 * k - 1}")
            stats[f"max_pw_k{k}"] = rep.max_window_width
        return bad, stats

    return _run("ltw2", triangulation_corpus(seed, count), check, workers)


GADGET_INPUTS = ("k3", "c4", "k4x")


def gadget(workers: int = 1, seed: int = 0, seeds: int = 10, samples: int = 20) -> SuiteResult:
    def check(item):
        name, c = item
        res = build_gadget(STOCK_DRAWINGS[name](), c)
        bad = []
        for s in range(seed, seed + seeds):
            for r in verify_gadget(res, c, samples=samples, seed=s):
                if not r.ok:
                    bad.append(f"{name} c={c} seed={s} {r.line()}")
        return bad, {"verified": seeds, "max_S": len(res.S)}

    return _run("gadget", [(name, c) for name in GADGET_INPUTS for c in (0, 1)], check, workers)


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "tw-oracle": tw_oracle,
    "breakability": breakability,
    "planar-thm": planar_thm,
    "irreducible": irreducible,
    "degree": degree,
    "surface": surface,
    "ltw": ltw,
    "ltw2": ltw2,
    "gadget": gadget,
}


def telemetry_result() -> SuiteResult:
    """Engine step checks recorded so far in this process."""
    snap = TELEMETRY.snapshot()
    res = SuiteResult("telemetry", snap["split"] + snap["reduce"], stats=snap)
    if snap["failures"]:
        res.violations.append(f"{snap['failures']} engine steps failed their checks")
    return res


def run_suite(name: str, workers: int = 1, seed: int = 0) -> SuiteResult:
    if name == "telemetry":
        return telemetry_result()
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)} or telemetry")
    return SUITES[name](workers=workers, seed=seed)
