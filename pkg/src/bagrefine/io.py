"""Text formats: PACE ``.gr`` / ``.td``, layerings, drawings and vertex-set sidecars.

Files use 1-indexed vertex ids; everything in memory is 0-indexed. Writers
emit a canonical form (sorted edges, sorted bag members), so reading a
written file and writing it again reproduces it byte for byte.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Sequence

from .decomposition import TreeDecomposition
from .drawing import Crossing, Drawing
from .errors import FormatError
from .graph import Graph


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line and not line.startswith("c"):
            yield no, line.split()


def _ints(no: int, parts: Sequence[str]) -> list[int]:
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise FormatError(f"line {no}: expected integers, got {' '.join(parts)!r}") from None


def parse_gr(text: str) -> Graph:
    header = None
    edges = []
    for no, parts in _lines(text):
        if parts[0] == "p":
            if header is not None or len(parts) != 4 or parts[1] != "tw":
                raise FormatError(f"line {no}: bad header")
            header = _ints(no, parts[2:])
            continue
        if header is None:
            raise FormatError(f"line {no}: edge before header")
        if len(parts) != 2:
            raise FormatError(f"line {no}: edge lines have two endpoints")
        u, v = _ints(no, parts)
        if not (1 <= u <= header[0] and 1 <= v <= header[0]) or u == v:
            raise FormatError(f"line {no}: bad edge {u} {v}")
        edges.append((u - 1, v - 1))
    if header is None:
        raise FormatError("missing 'p tw' header")
    g = Graph.from_edges(header[0], edges)
    if g.m != header[1] or len(edges) != header[1]:
        raise FormatError(f"header promises {header[1]} edges, found {len(edges)} ({g.m} distinct)")
    return g


def format_gr(g: Graph, comments: Iterable[str] = ()) -> str:
    out = [f"c {c}" for c in comments]
    out.append(f"p tw {g.n} {g.m}")
    out += [f"{u + 1} {v + 1}" for u, v in g.sorted_edges()]
    return "\n".join(out) + "\n"


def parse_td(text: str) -> TreeDecomposition:
    header = None
    bags: dict[int, frozenset[int]] = {}
    edges = []
    for no, parts in _lines(text):
        if parts[0] == "s":
            if header is not None or len(parts) != 5 or parts[1] != "td":
                raise FormatError(f"line {no}: bad header")
            header = _ints(no, parts[2:])
        elif header is None:
            raise FormatError(f"line {no}: content before header")
        elif parts[0] == "b":
            nums = _ints(no, parts[1:])
            if not nums:
                raise FormatError(f"line {no}: bag line without id")
            bid, members = nums[0], nums[1:]
            if not 1 <= bid <= header[0] or bid in bags:
                raise FormatError(f"line {no}: bad or repeated bag id {bid}")
            if any(not 1 <= v <= header[2] for v in members):
                raise FormatError(f"line {no}: vertex outside 1..{header[2]}")
            bags[bid] = frozenset(v - 1 for v in members)
        else:
            if len(parts) != 2:
                raise FormatError(f"line {no}: tree edges have two endpoints")
            a, b = _ints(no, parts)
            if not (1 <= a <= header[0] and 1 <= b <= header[0]):
                raise FormatError(f"line {no}: tree edge names unknown bag")
            edges.append((a - 1, b - 1))
    if header is None:
        raise FormatError("missing 's td' header")
    if len(bags) != header[0]:
        raise FormatError(f"header promises {header[0]} bags, found {len(bags)}")
    dec = TreeDecomposition(header[2], tuple(bags[i + 1] for i in range(header[0])), frozenset(edges))
    if max(len(b) for b in dec.bags) != header[1]:
        raise FormatError("header max bag size does not match the bags")
    return dec


def format_td(dec: TreeDecomposition, comments: Iterable[str] = ()) -> str:
    out = [f"c {c}" for c in comments]
    out.append(f"s td {dec.size} {dec.width + 1} {dec.n}")
    for i, bag in enumerate(dec.bags):
        out.append(" ".join(["b", str(i + 1)] + [str(v + 1) for v in sorted(bag)]))
    out += [f"{a + 1} {b + 1}" for a, b in sorted(dec.edges)]
    return "\n".join(out) + "\n"


def parse_layers(text: str, n: int | None = None) -> list[frozenset[int]]:
    layers: list[frozenset[int]] = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        head, sep, rest = line.partition(":")
        bits = head.split()
        if not sep or len(bits) != 2 or bits[0] != "L":
            raise FormatError(f"line {no}: expected 'L <k>: v...'")
        (k,) = _ints(no, bits[1:])
        if k != len(layers):
            raise FormatError(f"line {no}: layer {k} out of order")
        members = _ints(no, rest.split())
        if any(v < 1 or (n is not None and v > n) for v in members):
            raise FormatError(f"line {no}: bad vertex id")
        layers.append(frozenset(v - 1 for v in members))
    return layers


def format_layers(layers: Sequence[Iterable[int]]) -> str:
    out = []
    for k, layer in enumerate(layers):
        members = " ".join(str(v + 1) for v in sorted(layer))
        out.append(f"L {k}: {members}".rstrip())
    return "\n".join(out) + "\n"


def parse_draw(text: str) -> Drawing:
    n = None
    edges: dict[int, tuple[int, int]] = {}
    crossings = []
    for no, parts in _lines(text):
        kind, nums = parts[0], _ints(no, parts[1:])
        if kind == "v" and len(nums) == 1 and n is None:
            n = nums[0]
        elif kind == "e" and len(nums) == 3 and n is not None:
            eid, u, w = nums
            if eid in edges or not (1 <= u <= n and 1 <= w <= n):
                raise FormatError(f"line {no}: bad edge line")
            edges[eid] = (u - 1, w - 1)
        elif kind == "x" and len(nums) == 4:
            crossings.append(nums)
        else:
            raise FormatError(f"line {no}: unexpected {' '.join(parts)!r}")
    if n is None:
        raise FormatError("missing 'v <n>' line")
    ids = sorted(edges)
    if ids != list(range(1, len(ids) + 1)):
        raise FormatError("edge ids must be 1..m")
    out = []
    for e1, p1, e2, p2 in crossings:
        if e1 not in edges or e2 not in edges:
            raise FormatError(f"crossing names unknown edge {e1} or {e2}")
        out.append(Crossing(e1 - 1, p1, e2 - 1, p2))
    return Drawing(n, tuple(edges[i] for i in ids), tuple(out))


def format_draw(d: Drawing) -> str:
    out = [f"v {d.n}"]
    out += [f"e {i + 1} {u + 1} {w + 1}" for i, (u, w) in enumerate(d.edges)]
    for c in sorted(d.crossings, key=lambda c: (c.e1, c.pos1, c.e2, c.pos2)):
        out.append(f"x {c.e1 + 1} {c.pos1} {c.e2 + 1} {c.pos2}")
    return "\n".join(out) + "\n"


def parse_sset(text: str) -> frozenset[int]:
    out = set()
    for no, parts in _lines(text):
        (v,) = _ints(no, parts) if len(parts) == 1 else (0,)
        if v < 1:
            raise FormatError(f"line {no}: expected one positive vertex id")
        out.add(v - 1)
    return frozenset(out)


def format_sset(s: Iterable[int]) -> str:
    return "".join(f"{v + 1}\n" for v in sorted(s))


def read_gr(path: str | Path) -> Graph:
    return parse_gr(Path(path).read_text())


def write_gr(path: str | Path, g: Graph) -> None:
    Path(path).write_text(format_gr(g))


def read_td(path: str | Path) -> TreeDecomposition:
    return parse_td(Path(path).read_text())


def write_td(path: str | Path, dec: TreeDecomposition) -> None:
    Path(path).write_text(format_td(dec))
