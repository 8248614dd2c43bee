"""``bagrefine`` command line.

Every command prints machine-readable lines ``R <check> <pass|fail> <detail>``
next to its human-readable output. Exit codes: 0 success, 1 a reported
check failed, 2 size cap exceeded, 3 invalid input decomposition, 4
malformed input file or violated precondition.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import io
from .audit import bag_audit
from .corpus import SUITES, run_suite, telemetry_result
from .decomposition import profile
from .errors import FormatError, PreconditionError, SizeCapError
from .exact import treewidth_exact, validate
from .gadget import STOCK_DRAWINGS, build_gadget, verify_gadget
from .layered import Layering, layered_planar_input, layered_width, shallow_peel, sqrt_decomposition
from .refine import Level, TraceStep, refine_to_fixpoint, write_trace

EXIT_CHECK = 1
EXIT_CAP = 2
EXIT_INVALID_TD = 3
EXIT_INPUT = 4


class _InvalidDecomposition(Exception):
    pass


def _out(path: Optional[str], default: Path) -> Path:
    return Path(path) if path else default


def _with(p: str, suffix: str) -> Path:
    """``p`` with its last extension replaced by ``suffix`` (which may hold dots)."""
    path = Path(p)
    return Path(str(path.with_suffix("") if path.suffix else path) + suffix)


def _report(check: str, ok: bool, detail: str) -> None:
    print(f"R {check} {'pass' if ok else 'fail'} {detail}")


def _load_td(g, path: str):
    dec = io.read_td(path)
    problems = validate(g, dec)
    if problems:
        for p in problems:
            _report("valid", False, p.replace(" ", "_"))
        raise _InvalidDecomposition(path)
    return dec


def cmd_tw(args) -> int:
    g = io.read_gr(args.graph)
    w, dec = treewidth_exact(g)
    out = _out(args.out, _with(args.graph, ".td"))
    io.write_td(out, dec)
    print(w)
    _report("tw", True, f"width={w} n={g.n} m={g.m} td={out}")
    return 0


def cmd_refine(args) -> int:
    g = io.read_gr(args.graph)
    if args.td:
        seed = _load_td(g, args.td)
    else:
        seed = treewidth_exact(g)[1]
    steps: list[TraceStep] = []
    dec = refine_to_fixpoint(g, seed, Level(args.level), trace=steps)
    out = _out(args.out, _with(args.graph, ".refined.td"))
    log = _out(args.log, _with(args.graph, ".steps.log"))
    io.write_td(out, dec)
    log.write_text(f"seed {profile(seed)}\n" + write_trace(steps) + f"final {profile(dec)}\n")
    ok = not validate(g, dec) and dec.width <= seed.width
    print(f"width {seed.width} -> {dec.width}, {len(steps)} steps, {dec.size} bags")
    _report("refine", ok, f"level={args.level} seed_width={seed.width} width={dec.width} steps={len(steps)} td={out} log={log}")
    return 0 if ok else EXIT_CHECK


def cmd_audit(args) -> int:
    g = io.read_gr(args.graph)
    dec = _load_td(g, args.td)
    checks = list(args.check or ["tw", "unbreakable"])
    tw_bound = args.tw_bound
    if args.planar:
        checks.append("planar-class")
        tw_bound = 3 if tw_bound is None else tw_bound
    if args.degree:
        checks.append("degree")
    if args.genus is not None:
        checks += ["k2-minor", "grid-minor"]
    checks = list(dict.fromkeys(checks))
    rep = bag_audit(g, dec, checks, genus=args.genus, tw_bound=tw_bound)
    for line in rep.lines():
        print(line)
    print(rep.summary())
    _report("audit", rep.ok, f"violations={len(rep.violations)}")
    return 0 if rep.ok else EXIT_CHECK


def _layered_input(g, args):
    """The layering and layered decomposition from files, or tree-cotree when absent."""
    if bool(args.layers) != bool(args.layered_td):
        raise PreconditionError("--layers and --layered-td go together")
    if args.layers:
        lay = Layering(tuple(io.parse_layers(Path(args.layers).read_text(), g.n)))
        dec = _load_td(g, args.layered_td)
        return lay, dec, layered_width(dec, lay)
    return layered_planar_input(g, root=args.root)


def cmd_sqrt(args) -> int:
    g = io.read_gr(args.graph)
    lay, base, measured = _layered_input(g, args)
    c = args.c if args.c is not None else max(measured, 1)
    sq = sqrt_decomposition(g, lay, base, c)
    out = _out(args.out, _with(args.graph, ".sqrt.td"))
    io.write_td(out, sq.dec)
    if not args.layers:
        _with(args.graph, ".layers").write_text(io.format_layers(lay.layers))
    bound = sq.bound()
    print(f"width {sq.dec.width} <= 2*sqrt({c}*{g.n}) = {bound:.3f}")
    _report("layered-width", measured <= c, f"measured={measured} c={c}")
    _report("sqrt-width", sq.dec.width <= bound, f"width={sq.dec.width} bound={bound:.3f} p={sq.peel.p} peeled={len(sq.peel.vertices)} td={out}")
    return 0 if sq.dec.width <= bound else EXIT_CHECK


def cmd_peel(args) -> int:
    g = io.read_gr(args.graph)
    lay, base, measured = _layered_input(g, args)
    c = args.c if args.c is not None else max(measured, 1)
    pr = shallow_peel(g, lay, base, c)
    prefix = Path(args.prefix) if args.prefix else _with(args.graph, ".peel")
    Path(f"{prefix}.sset").write_text(io.format_sset(pr.S))
    Path(f"{prefix}.rest.gr").write_text(io.format_gr(pr.rest, [f"vertex t of this graph is vertex ids[t] of {Path(args.graph).name}", "ids " + " ".join(str(v + 1) for v in pr.rest_ids)]))
    io.write_td(f"{prefix}.rest.td", pr.dec_rest)
    root = math.sqrt(c * g.n)
    s_ok = len(pr.S) <= root
    rest_ok = pr.dec_rest.width <= root
    cert_ok = pr.s_certificate.width <= c - 1
    print(f"|S| = {len(pr.S)}, tw(G[S]) <= {pr.s_certificate.width}, width(G - S) = {pr.dec_rest.width}, sqrt(cn) = {root:.3f}")
    _report("peel-size", s_ok, f"S={len(pr.S)} bound={root:.3f}")
    _report("peel-tw-S", cert_ok, f"width={pr.s_certificate.width} bound={c - 1}")
    _report("peel-rest-width", rest_ok, f"width={pr.dec_rest.width} bound={root:.3f} prefix={prefix}")
    return 0 if s_ok and rest_ok and cert_ok else EXIT_CHECK


def cmd_gadget(args) -> int:
    if args.drawing in STOCK_DRAWINGS:
        d = STOCK_DRAWINGS[args.drawing]()
        default_prefix = Path(f"{args.drawing}.c{args.c}")
    else:
        d = io.parse_draw(Path(args.drawing).read_text())
        default_prefix = _with(args.drawing, f".c{args.c}")
    res = build_gadget(d, args.c, fan_size=args.fan_size)
    prefix = Path(args.prefix) if args.prefix else default_prefix
    core = Path(f"{prefix}.core.gr")
    core.write_text(io.format_gr(res.core, ["core graph G'; long edges are listed with subdivision counts in the .subdiv file"]))
    Path(f"{prefix}.sset").write_text(io.format_sset(res.S))
    lines = ["c long edge u v of the core graph, then the number of inner vertices on its path"]
    lines += [f"{u + 1} {w + 1} {k}" for (u, w), k in zip(res.long_edges, res.subdivisions)]
    Path(f"{prefix}.subdiv").write_text("\n".join(lines) + "\n")
    print(res.summary())
    if res.materialisable():
        Path(f"{prefix}.gr").write_text(io.format_gr(res.graph()))
        Path(f"{prefix}.draw").write_text(io.format_draw(res.drawing()))
        _report("materialised", True, f"vertices={res.n_vertices} files={prefix}.gr,{prefix}.draw")
    else:
        _report("materialised", True, f"skipped vertices={res.n_vertices} (implicit; core plus subdivision counts written)")
    ok = True
    for check in verify_gadget(res, args.c, samples=args.samples, seed=args.seed):
        print(check.line())
        ok &= check.ok
    return 0 if ok else EXIT_CHECK


def cmd_corpus(args) -> int:
    res = run_suite(args.suite, workers=args.workers, seed=args.seed)
    for line in res.lines(limit=args.limit):
        print(line)
    ok = res.ok
    if args.suite != "telemetry":
        tel = telemetry_result()
        for line in tel.lines(limit=args.limit):
            print(line)
        ok &= tel.ok
    return 0 if ok else EXIT_CHECK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for every random choice (default 0)")
    p = argparse.ArgumentParser(prog="bagrefine", description="Construct, refine and audit tree-decompositions.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("tw", parents=[common], help="exact treewidth; writes an optimal .td")
    s.add_argument("graph")
    s.add_argument("-o", "--out")
    s.set_defaults(func=cmd_tw)

    s = sub.add_parser("refine", parents=[common], help="refine to unbreakable or irreducible bags")
    s.add_argument("graph")
    s.add_argument("--td", help="seed decomposition (default: an optimal one)")
    s.add_argument("--level", choices=[lv.value for lv in Level], default=Level.UNBREAKABLE.value)
    s.add_argument("-o", "--out")
    s.add_argument("--log")
    s.set_defaults(func=cmd_refine)

    s = sub.add_parser("audit", parents=[common], help="per-bag checks")
    s.add_argument("graph")
    s.add_argument("td")
    s.add_argument("--genus", type=int)
    s.add_argument("--planar", action="store_true", help="bag tw <= 3 and planar bag classes")
    s.add_argument("--degree", action="store_true")
    s.add_argument("--tw-bound", type=int)
    s.add_argument("--check", action="append", help="extra check name, repeatable")
    s.set_defaults(func=cmd_audit)

    for name, func, helptext in (
        ("sqrt", cmd_sqrt, "width O(sqrt n) decomposition from a layered one"),
        ("peel", cmd_peel, "peel a shallow set S and decompose G - S"),
    ):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("graph")
        s.add_argument("--layers", help=".layers file (default: tree-cotree layering; graph must be planar)")
        s.add_argument("--layered-td", help="layered decomposition matching --layers")
        s.add_argument("--c", type=int, help="layered width to assume (default: measured)")
        s.add_argument("--root", type=int, default=0, help="root vertex of the tree-cotree layering")
        if name == "sqrt":
            s.add_argument("-o", "--out")
        else:
            s.add_argument("--prefix")
        s.set_defaults(func=func)

    s = sub.add_parser("gadget", parents=[common], help="build and verify the 1-planar gadget of a drawing")
    s.add_argument("drawing", help=f".draw file or one of {', '.join(STOCK_DRAWINGS)}")
    s.add_argument("--c", type=int, default=0)
    s.add_argument("--fan-size", type=int)
    s.add_argument("--samples", type=int, default=20)
    s.add_argument("--prefix")
    s.set_defaults(func=cmd_gadget)

    s = sub.add_parser("corpus", parents=[common], help="run a named acceptance suite")
    s.add_argument("suite", choices=sorted(SUITES) + ["telemetry"])
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--limit", type=int, default=20, help="violation lines to print")
    s.set_defaults(func=cmd_corpus)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SizeCapError as exc:
        _report("size-cap", False, str(exc).replace(" ", "_"))
        print(exc, file=sys.stderr)
        return EXIT_CAP
    except _InvalidDecomposition as exc:
        print(f"invalid tree-decomposition {exc}", file=sys.stderr)
        return EXIT_INVALID_TD
    except (FormatError, PreconditionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
