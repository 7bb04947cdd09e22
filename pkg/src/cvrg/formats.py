"""Line-oriented text documents for instances and solutions.

The grammar lives in docs/format.md. ``emit_*`` is canonical: fixed keyword
order, sorted metadata keys, every real printed with 17 significant digits,
so emitting the same object always gives the same bytes and parsing it back
gives an equal object.
"""
from __future__ import annotations

import math
import re
from typing import Iterator

from .errors import CVRGError, ParseError
from .geom import Point, region
from .model import SOLVERS, Customer, Instance, Solution, Tour
from .routing import PrecedenceDag

INSTANCE_MAGIC = "cvrg-instance 1"
SOLUTION_MAGIC = "cvrg-solution 1"
_INT = re.compile(r"[+-]?\d+\Z")
_KEY = re.compile(r"[A-Za-z_][A-Za-z0-9_.-]*\Z")


def fmt(x: float) -> str:
    x = float(x)
    if x == 0.0:
        return "0"  # also folds -0.0
    return format(x, ".17g")


def _fmt_value(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return fmt(v)
    s = str(v)
    if "\n" in s:
        raise ValueError("metadata values must fit on one line")
    return s


# ---------------------------------------------------------------------------
# emit


def emit_instance(inst: Instance) -> str:
    out = [INSTANCE_MAGIC,
           f"workspace {fmt(inst.workspace[0])} {fmt(inst.workspace[1])}",
           f"depot {fmt(inst.depot.x)} {fmt(inst.depot.y)}",
           f"capacity {fmt(inst.capacity)}",
           f"customers {inst.n}"]
    for i, c in enumerate(inst.customers):
        coords = " ".join(f"{fmt(v.x)} {fmt(v.y)}" for v in c.region.vertices)
        out.append(f"customer {i} weight {fmt(c.weight)} vertices {len(c.region.vertices)} {coords}")
    edges = inst.precedence.edges if inst.precedence else ()
    out.append(f"precedence {len(edges)}")
    out.extend(f"above {a} {b}" for a, b in edges)
    for key in sorted(inst.provenance):
        out.append(f"meta {key} {inst.provenance[key]}".rstrip())
    out.append("end")
    return "\n".join(out) + "\n"


def emit_solution(sol: Solution) -> str:
    out = [SOLUTION_MAGIC, f"solver {sol.solver}", f"total_cost {fmt(sol.total_cost)}"]
    for key in sorted(sol.stats):
        out.append(f"stat {key} {_fmt_value(sol.stats[key])}".rstrip())
    out.append(f"tours {len(sol.tours)}")
    for j, t in enumerate(sol.tours):
        out.append(f"tour {j} length {fmt(t.length)} stops {len(t.customer_ids)}")
        for c, p in zip(t.customer_ids, t.delivery_points):
            out.append(f"stop {c} {fmt(p[0])} {fmt(p[1])}")
    out.append("end")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# parse


class _Lines:
    """Significant lines (comments and blanks skipped) with their numbers."""

    def __init__(self, text: str):
        self._it: Iterator = (
            (no, line.split()) for no, line in enumerate(text.splitlines(), 1)
            if line.strip() and not line.lstrip().startswith("#")
        )
        self.last = 0
        self._peek = None

    def peek(self):
        if self._peek is None:
            self._peek = next(self._it, (self.last + 1, None))
        return self._peek

    def take(self, keyword: str, nargs: int | None = None) -> tuple[int, list[str]]:
        no, toks = self.peek()
        self._peek = None
        self.last = no
        if toks is None:
            raise ParseError(f"unexpected end of document, expected '{keyword}'", no, keyword)
        if toks[0] != keyword:
            raise ParseError(f"expected '{keyword}', found '{toks[0]}'", no, keyword)
        args = toks[1:]
        if nargs is not None and len(args) != nargs:
            raise ParseError(f"'{keyword}' takes {nargs} values, got {len(args)}", no, keyword)
        return no, args


def _real(tok: str, line: int, field: str) -> float:
    try:
        x = float(tok)
    except ValueError:
        raise ParseError(f"not a number: {tok!r}", line, field) from None
    if not math.isfinite(x):
        raise ParseError(f"non-finite number: {tok!r}", line, field)
    return x


def _int(tok: str, line: int, field: str, lo: int = 0) -> int:
    if not _INT.match(tok):
        raise ParseError(f"not an integer: {tok!r}", line, field)
    v = int(tok)
    if v < lo:
        raise ParseError(f"{v} is below {lo}", line, field)
    return v


def _magic(lines: _Lines, magic: str):
    no, toks = lines.peek()
    if toks is None or " ".join(toks) != magic:
        got = "nothing" if toks is None else repr(" ".join(toks))
        raise ParseError(f"expected header '{magic}', found {got}", no, "header")
    lines.take(toks[0])


def _end(lines: _Lines):
    lines.take("end", 0)
    no, toks = lines.peek()
    if toks is not None:
        raise ParseError("content after 'end'", no, toks[0])


def _meta_value(tok: str):
    if _INT.match(tok):
        return int(tok)
    try:
        return float(tok)
    except ValueError:
        return tok


def _rest(args: list[str]) -> str:
    return " ".join(args)


def parse_instance(text: str) -> Instance:
    lines = _Lines(text)
    _magic(lines, INSTANCE_MAGIC)
    no, a = lines.take("workspace", 2)
    workspace = (_real(a[0], no, "workspace"), _real(a[1], no, "workspace"))
    no, a = lines.take("depot", 2)
    depot = Point(_real(a[0], no, "depot"), _real(a[1], no, "depot"))
    no, a = lines.take("capacity", 1)
    capacity = _real(a[0], no, "capacity")
    if capacity != 1.0:
        raise ParseError("capacity must be 1", no, "capacity")
    no, a = lines.take("customers", 1)
    n = _int(a[0], no, "customers")
    customers = []
    for i in range(n):
        no, a = lines.take("customer")
        if len(a) < 5 or a[1] != "weight" or a[3] != "vertices":
            raise ParseError("expected 'customer <id> weight <w> vertices <m> <x y>...'", no, "customer")
        if _int(a[0], no, "customer") != i:
            raise ParseError(f"customer ids must run 0..{n - 1} in order, expected {i}", no, "customer")
        w = _real(a[2], no, "weight")
        if not (0.0 < w <= 1.0):
            raise ParseError(f"weight {a[2]} outside (0, 1]", no, "weight")
        m = _int(a[4], no, "vertices", lo=1)
        coords = a[5:]
        if len(coords) != 2 * m:
            raise ParseError(f"{m} vertices need {2 * m} coordinates, got {len(coords)}", no, "vertices")
        pts = [(_real(coords[2 * j], no, "vertices"), _real(coords[2 * j + 1], no, "vertices"))
               for j in range(m)]
        try:
            customers.append(Customer(region(pts), w))
        except CVRGError as exc:
            raise ParseError(str(exc), no, "vertices") from None
    no, a = lines.take("precedence", 1)
    e = _int(a[0], no, "precedence")
    edges = []
    for _ in range(e):
        no, a = lines.take("above", 2)
        top, below = _int(a[0], no, "above"), _int(a[1], no, "above")
        if top >= n or below >= n or top == below:
            raise ParseError(f"bad precedence pair ({top}, {below}) for {n} customers", no, "above")
        edges.append((top, below))
    prec = None
    if edges:
        try:
            prec = PrecedenceDag(n, tuple(edges))
        except CVRGError as exc:
            raise ParseError(str(exc), no, "above") from None
    provenance = {}
    while lines.peek()[1] is not None and lines.peek()[1][0] == "meta":
        no, a = lines.take("meta")
        if not a or not _KEY.match(a[0]):
            raise ParseError("expected 'meta <key> <value>'", no, "meta")
        if a[0] in provenance:
            raise ParseError(f"duplicate key {a[0]!r}", no, "meta")
        provenance[a[0]] = _rest(a[1:])
    _end(lines)
    try:
        return Instance(depot, tuple(customers), capacity, prec, workspace, provenance)
    except CVRGError as exc:
        raise ParseError(str(exc), None, "instance") from None


def parse_solution(text: str) -> Solution:
    lines = _Lines(text)
    _magic(lines, SOLUTION_MAGIC)
    no, a = lines.take("solver", 1)
    if a[0] not in SOLVERS:
        raise ParseError(f"unknown solver {a[0]!r}", no, "solver")
    solver = a[0]
    no, a = lines.take("total_cost", 1)
    total = _real(a[0], no, "total_cost")
    stats = {}
    while lines.peek()[1] is not None and lines.peek()[1][0] == "stat":
        no, a = lines.take("stat")
        if not a or not _KEY.match(a[0]):
            raise ParseError("expected 'stat <key> <value>'", no, "stat")
        stats[a[0]] = _meta_value(_rest(a[1:])) if len(a) == 2 else _rest(a[1:])
    no, a = lines.take("tours", 1)
    count = _int(a[0], no, "tours")
    tours = []
    for j in range(count):
        no, a = lines.take("tour", 5)
        if a[1] != "length" or a[3] != "stops":
            raise ParseError("expected 'tour <j> length <L> stops <k>'", no, "tour")
        if _int(a[0], no, "tour") != j:
            raise ParseError(f"tour ids must run in order, expected {j}", no, "tour")
        length = _real(a[2], no, "length")
        k = _int(a[4], no, "stops")
        ids, pts = [], []
        for _ in range(k):
            no, s = lines.take("stop", 3)
            ids.append(_int(s[0], no, "stop"))
            pts.append(Point(_real(s[1], no, "stop"), _real(s[2], no, "stop")))
        tours.append(Tour(tuple(ids), tuple(pts), length))
    _end(lines)
    return Solution(tuple(tours), total, solver, stats)


def read_instance(path) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def write_instance(path, inst: Instance):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(emit_instance(inst))


def read_solution(path) -> Solution:
    with open(path, encoding="utf-8") as fh:
        return parse_solution(fh.read())


def write_solution(path, sol: Solution):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(emit_solution(sol))
