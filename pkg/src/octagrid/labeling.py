"""L(h,k)-edge labelings: representation, constraint checking, spans, JSON I/O."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .grid import CLASS_OFFSET, Edge, EdgeClass, Vertex, edge_distance, neighbors
from .subgraph import EdgeSet

MIN_PERIOD = 6


class LabelingError(ValueError):
    """Raised for malformed or incomplete labelings."""


class FormatError(LabelingError):
    """A labeling file could not be parsed."""


def required_gap(distance: int, h: int, k: int) -> int:
    if distance == 1:
        return h
    if distance == 2:
        return k
    return 0


def _ball2_offsets(cls: EdgeClass) -> tuple[tuple[int, int, EdgeClass], ...]:
    e = Edge.at((0, 0), cls)
    seen = {e}
    out = []
    for p in e.endpoints():
        for u in neighbors(p) | {p}:
            for w in neighbors(u):
                f = Edge.of(u, w)
                if f not in seen:
                    seen.add(f)
                    out.append((f.a.x, f.a.y, f.cls))
    return tuple(sorted(out))


_BALL2 = {cls: _ball2_offsets(cls) for cls in EdgeClass}


def ball2(e: Edge) -> list[Edge]:
    """Edges at distance 1 or 2 from ``e`` (``e`` itself excluded)."""
    ax, ay = e.a
    out = []
    for dx, dy, cls in _BALL2[e.cls]:
        ox, oy = CLASS_OFFSET[cls]
        out.append(Edge(Vertex(ax + dx, ay + dy), Vertex(ax + dx + ox, ay + dy + oy)))
    return out


@dataclass
class Labeling:
    assignment: dict[Edge, int] = field(default_factory=dict)
    h: int = 1
    k: int = 2

    def __post_init__(self):
        for e, c in self.assignment.items():
            if c < 0:
                raise LabelingError(f"negative color {c} on edge {e}")

    def __getitem__(self, e: Edge) -> int:
        return self.assignment[e]

    def __contains__(self, e) -> bool:
        return e in self.assignment

    def __len__(self) -> int:
        return len(self.assignment)

    def get(self, e: Edge, default=None):
        return self.assignment.get(e, default)

    def with_(self, e: Edge, color: int) -> "Labeling":
        return Labeling({**self.assignment, e: color}, self.h, self.k)

    def map_edges(self, fn) -> "Labeling":
        return Labeling({fn(e): c for e, c in self.assignment.items()}, self.h, self.k)

    def map_colors(self, fn) -> "Labeling":
        return Labeling({e: fn(c) for e, c in self.assignment.items()}, self.h, self.k)

    def region(self) -> EdgeSet:
        return EdgeSet.of(self.assignment)


@dataclass(frozen=True, order=True)
class Violation:
    e1: Edge
    e2: Edge
    distance: int
    required: int
    actual: int

    def to_json(self) -> dict:
        return {
            "e1": [list(self.e1.a), list(self.e1.b)],
            "e2": [list(self.e2.a), list(self.e2.b)],
            "distance": self.distance,
            "required": self.required,
            "actual": self.actual,
        }


@dataclass
class ViolationReport:
    violations: list[Violation] = field(default_factory=list)
    checked_pairs: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def __len__(self) -> int:
        return len(self.violations)

    def __iter__(self):
        return iter(self.violations)

    def to_json(self) -> dict:
        return {
            "valid": self.ok,
            "checked_pairs": self.checked_pairs,
            "violations": [v.to_json() for v in self.violations],
        }


@dataclass(frozen=True)
class SpanResult:
    span: int
    color_count: int


def _check_pair(e1, c1, e2, c2, h, k) -> Violation | None:
    d = edge_distance(e1, e2)
    need = required_gap(d, h, k)
    gap = abs(c1 - c2)
    if gap < need:
        a, b = (e1, e2) if e1 < e2 else (e2, e1)
        return Violation(a, b, d, need, gap)
    return None


def verify(region: EdgeSet | Iterable[Edge], lab: Labeling) -> ViolationReport:
    """Check every distance-1 and distance-2 pair of ``region`` under ``lab``."""
    edges = region.edges if isinstance(region, EdgeSet) else tuple(region)
    inside = set(edges)
    for e in edges:
        if e not in lab.assignment:
            raise LabelingError(f"edge {e} of the region has no color")
    report = ViolationReport()
    small = len(edges) <= 64
    for e in edges:
        for f in (edges if small else ball2(e)):
            if f in inside and e < f and (not small or edge_distance(e, f) <= 2):
                report.checked_pairs += 1
                v = _check_pair(e, lab[e], f, lab[f], lab.h, lab.k)
                if v:
                    report.violations.append(v)
    report.violations.sort()
    return report


def span(lab: Labeling) -> SpanResult:
    if not lab.assignment:
        raise LabelingError("span of an empty labeling is undefined")
    colors = lab.assignment.values()
    return SpanResult(max(colors), len(set(colors)))


def forbidden_colors(e: Edge, lab: Labeling | Mapping[Edge, int], h: int, k: int,
                     n: int | None = None) -> set[int]:
    """Colors that ``e`` cannot take given the already-assigned edges.

    With ``n`` given the result is clipped to ``0..n``.
    """
    assignment = lab.assignment if isinstance(lab, Labeling) else lab
    out: set[int] = set()
    if len(assignment) <= 64:
        near = ((f, c) for f, c in assignment.items() if f != e)
    else:
        near = ((f, assignment[f]) for f in ball2(e) if f in assignment)
    for f, c in near:
        g = required_gap(edge_distance(e, f), h, k)
        out.update(range(max(0, c - g + 1), c + g))
    if n is not None:
        out = {c for c in out if c <= n}
    return out


@dataclass
class PeriodicLabeling:
    """Labels on one period of edge classes, repeated by lattice translation.

    ``labels`` maps ``(x mod px, y mod py, class)`` to a color; the edge of
    a class is anchored at its canonical lower endpoint.
    """

    period: tuple[int, int]
    labels: dict[tuple[int, int, EdgeClass], int]
    h: int = 1
    k: int = 2

    def check_shape(self) -> None:
        px, py = self.period
        if px < MIN_PERIOD or py < MIN_PERIOD:
            raise LabelingError(f"period {px}x{py} is below the minimum {MIN_PERIOD}x{MIN_PERIOD}")
        want = {(x, y, c) for x in range(px) for y in range(py) for c in EdgeClass}
        if set(self.labels) != want:
            missing = sorted(want - set(self.labels), key=str)[:3]
            raise LabelingError(f"fundamental domain needs {len(want)} entries; missing e.g. {missing}")
        if any(c < 0 for c in self.labels.values()):
            raise LabelingError("negative color in periodic labeling")

    def color(self, e: Edge) -> int:
        px, py = self.period
        return self.labels[(e.a.x % px, e.a.y % py, e.cls)]

    def instantiate(self, edges: Iterable[Edge]) -> Labeling:
        return Labeling({e: self.color(e) for e in edges}, self.h, self.k)

    def shifted(self, dx: int, dy: int) -> "PeriodicLabeling":
        """The labeling translated by ``(dx, dy)``."""
        px, py = self.period
        return PeriodicLabeling(
            self.period,
            {((x + dx) % px, (y + dy) % py, c): v for (x, y, c), v in self.labels.items()},
            self.h, self.k,
        )

    def span(self) -> SpanResult:
        vals = self.labels.values()
        return SpanResult(max(vals), len(set(vals)))


def verify_periodic(plab: PeriodicLabeling, h: int | None = None, k: int | None = None) -> ViolationReport:
    """Check a periodic labeling on a window large enough to see every constraint.

    The labeling is laid out on a ``(2px+4) x (2py+4)`` block; every edge whose
    endpoints sit at least 2 away from the block border has its full
    distance-2 neighbourhood inside the block and is checked against it.
    """
    plab.check_shape()
    h = plab.h if h is None else h
    k = plab.k if k is None else k
    px, py = plab.period
    W, H = 2 * px + 4, 2 * py + 4

    def interior(e: Edge) -> bool:
        return all(2 <= v.x <= W - 3 and 2 <= v.y <= H - 3 for v in e.endpoints())

    report = ViolationReport()
    found = set()
    for x in range(W):
        for y in range(H):
            for cls in EdgeClass:
                e = Edge.at((x, y), cls)
                if not interior(e):
                    continue
                ce = plab.color(e)
                for f in ball2(e):
                    if interior(f) and f < e:
                        continue  # pair already seen from f
                    report.checked_pairs += 1
                    v = _check_pair(e, ce, f, plab.color(f), h, k)
                    if v and v not in found:
                        found.add(v)
    report.violations = sorted(found)
    return report


# ---------------------------------------------------------------- JSON formats

def _vertex(obj, where: str) -> Vertex:
    if not (isinstance(obj, list) and len(obj) == 2 and all(isinstance(t, int) for t in obj)):
        raise FormatError(f"{where}: expected [x, y] integer pair, got {obj!r}")
    return Vertex(*obj)


def _int(obj, where: str) -> int:
    if not isinstance(obj, int) or isinstance(obj, bool):
        raise FormatError(f"{where}: expected integer, got {obj!r}")
    return obj


def labeling_to_json(lab: Labeling) -> dict:
    return {
        "h": lab.h,
        "k": lab.k,
        "edges": [
            {"a": list(e.a), "b": list(e.b), "color": c}
            for e, c in sorted(lab.assignment.items())
        ],
    }


def labeling_from_json(doc: dict) -> Labeling:
    try:
        h, k = _int(doc["h"], "h"), _int(doc["k"], "k")
        assignment = {}
        for i, item in enumerate(doc["edges"]):
            where = f"edges[{i}]"
            try:
                e = Edge.of(_vertex(item["a"], where + ".a"), _vertex(item["b"], where + ".b"))
            except ValueError as exc:
                raise FormatError(f"{where}: {exc}") from None
            if e in assignment:
                raise FormatError(f"{where}: duplicate edge {e}")
            assignment[e] = _int(item["color"], where + ".color")
    except (KeyError, TypeError) as exc:
        raise FormatError(f"missing or mistyped field: {exc}") from None
    return Labeling(assignment, h, k)


def periodic_to_json(plab: PeriodicLabeling) -> dict:
    order = list(EdgeClass)
    items = sorted(plab.labels.items(), key=lambda kv: (kv[0][0], kv[0][1], order.index(kv[0][2])))
    return {
        "h": plab.h,
        "k": plab.k,
        "period": list(plab.period),
        "labels": [
            {"anchor": [x, y], "class": c.value, "color": v} for (x, y, c), v in items
        ],
    }


def periodic_from_json(doc: dict) -> PeriodicLabeling:
    try:
        h, k = _int(doc["h"], "h"), _int(doc["k"], "k")
        per = doc["period"]
        if not (isinstance(per, list) and len(per) == 2):
            raise FormatError("period: expected [px, py]")
        px, py = _int(per[0], "period[0]"), _int(per[1], "period[1]")
        labels = {}
        for i, item in enumerate(doc["labels"]):
            where = f"labels[{i}]"
            x, y = _vertex(item["anchor"], where + ".anchor")
            try:
                cls = EdgeClass(item["class"])
            except ValueError:
                raise FormatError(f"{where}.class: expected one of H, V, R, L") from None
            key = (x % px, y % py, cls) if px > 0 and py > 0 else (x, y, cls)
            if key in labels:
                raise FormatError(f"{where}: duplicate domain entry {key}")
            labels[key] = _int(item["color"], where + ".color")
    except (KeyError, TypeError) as exc:
        raise FormatError(f"missing or mistyped field: {exc}") from None
    return PeriodicLabeling((px, py), labels, h, k)


def parse_document(text: str) -> Labeling | PeriodicLabeling:
    """Parse either file format; the presence of ``period`` selects the periodic one."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise FormatError("top-level JSON value must be an object")
    return periodic_from_json(doc) if "period" in doc else labeling_from_json(doc)


def load(path) -> Labeling | PeriodicLabeling:
    with open(path) as fh:
        return parse_document(fh.read())


def dump(obj: Labeling | PeriodicLabeling, path) -> None:
    doc = periodic_to_json(obj) if isinstance(obj, PeriodicLabeling) else labeling_to_json(obj)
    key = "labels" if "labels" in doc else "edges"
    head = json.dumps({k: v for k, v in doc.items() if k != key})[:-1]
    rows = ",\n".join("  " + json.dumps(item) for item in doc[key])
    with open(path, "w") as fh:
        fh.write(f'{head}, "{key}": [\n{rows}\n]}}\n')
