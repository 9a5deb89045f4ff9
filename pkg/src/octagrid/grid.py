"""The infinite octagonal (king) grid: vertices, edges and edge distance."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterator, NamedTuple


class Vertex(NamedTuple):
    x: int
    y: int

    def shift(self, dx: int, dy: int) -> "Vertex":
        return Vertex(self.x + dx, self.y + dy)


class EdgeClass(str, Enum):
    H = "H"
    V = "V"
    R = "R"
    L = "L"

    @property
    def slanting(self) -> bool:
        return self in (EdgeClass.R, EdgeClass.L)


# displacement b - a of the canonical representation
CLASS_OFFSET = {
    EdgeClass.H: (1, 0),
    EdgeClass.V: (0, 1),
    EdgeClass.R: (1, 1),
    EdgeClass.L: (1, -1),
}
_OFFSET_CLASS = {v: k for k, v in CLASS_OFFSET.items()}

KING_STEPS = tuple((dx, dy) for dx in (-1, 0, 1) for dy in (-1, 0, 1) if (dx, dy) != (0, 0))


def chebyshev(u, w) -> int:
    return max(abs(u[0] - w[0]), abs(u[1] - w[1]))


def adjacent(u, w) -> bool:
    return chebyshev(u, w) == 1


def neighbors(v) -> set[Vertex]:
    """The 8 vertices at Chebyshev distance 1 from ``v``."""
    return {Vertex(v[0] + dx, v[1] + dy) for dx, dy in KING_STEPS}


@dataclass(frozen=True, order=True)
class Edge:
    """An undirected grid edge stored with ``a < b`` lexicographically.

    Build edges with :meth:`of` (or :func:`edge`); the constructor assumes
    the endpoints are already canonical.
    """

    a: Vertex
    b: Vertex

    @classmethod
    def of(cls, p, q) -> "Edge":
        p, q = Vertex(*p), Vertex(*q)
        if not adjacent(p, q):
            raise ValueError(f"{tuple(p)} and {tuple(q)} are not adjacent in the king grid")
        return cls(p, q) if p < q else cls(q, p)

    @classmethod
    def at(cls, anchor, cls_: EdgeClass | str) -> "Edge":
        """The edge of class ``cls_`` whose canonical lower endpoint is ``anchor``."""
        dx, dy = CLASS_OFFSET[EdgeClass(cls_)]
        a = Vertex(*anchor)
        return cls(a, a.shift(dx, dy))

    @property
    def cls(self) -> EdgeClass:
        return _OFFSET_CLASS[(self.b.x - self.a.x, self.b.y - self.a.y)]

    @property
    def slanting(self) -> bool:
        return self.cls.slanting

    def endpoints(self) -> tuple[Vertex, Vertex]:
        return (self.a, self.b)

    def shift(self, dx: int, dy: int) -> "Edge":
        return Edge(self.a.shift(dx, dy), self.b.shift(dx, dy))

    def transform(self, sym: "Symmetry") -> "Edge":
        return Edge.of(sym(self.a), sym(self.b))

    def __str__(self) -> str:
        return f"({self.a.x},{self.a.y})-({self.b.x},{self.b.y})"


def edge(p, q) -> Edge:
    return Edge.of(p, q)


def edge_class(e: Edge) -> EdgeClass:
    return e.cls


def edge_distance(e1: Edge, e2: Edge) -> int:
    """Line-graph distance between two edges of the king grid."""
    if e1 == e2:
        return 0
    return 1 + min(chebyshev(u, w) for u in e1.endpoints() for w in e2.endpoints())


def shared_vertex(e1: Edge, e2: Edge) -> Vertex | None:
    common = set(e1.endpoints()) & set(e2.endpoints())
    return next(iter(common)) if len(common) == 1 else None


def angular_distance(e1: Edge, e2: Edge) -> int:
    """Angle in degrees (45, 90, 135 or 180) between two adjacent edges.

    Both edges are read as rays leaving their common vertex; the reflex
    angles are folded back, so the result is the smaller of the two angles.
    """
    if e1 == e2:
        raise ValueError("angular distance needs two distinct edges")
    p = shared_vertex(e1, e2)
    if p is None:
        raise ValueError(f"edges {e1} and {e2} do not share a vertex")
    u = e1.b if e1.a == p else e1.a
    w = e2.b if e2.a == p else e2.a
    d1 = (u.x - p.x, u.y - p.y)
    d2 = (w.x - p.x, w.y - p.y)
    # king steps are the 8 compass directions, 45 degrees apart
    idx = [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)]
    steps = (idx.index(d2) - idx.index(d1)) % 8
    return 45 * min(steps, 8 - steps)


class Symmetry(NamedTuple):
    """An element of the dihedral group of the square acting on the lattice."""

    rot: int  # quarter turns, 0..3
    flip: bool  # reflect x -> -x before rotating

    def __call__(self, v) -> Vertex:
        x, y = v[0], v[1]
        if self.flip:
            x = -x
        for _ in range(self.rot):
            x, y = -y, x
        return Vertex(x, y)


DIHEDRAL = tuple(Symmetry(r, f) for f in (False, True) for r in range(4))


def window_vertices(x0: int, y0: int, w: int, h: int) -> Iterator[Vertex]:
    for x in range(x0, x0 + w):
        for y in range(y0, y0 + h):
            yield Vertex(x, y)


def window_edges(x0: int, y0: int, w: int, h: int) -> list[Edge]:
    """All edges with both endpoints in the ``w`` x ``h`` block at ``(x0, y0)``."""
    inside = set(window_vertices(x0, y0, w, h))
    out = set()
    for v in inside:
        for dx, dy in CLASS_OFFSET.values():
            u = v.shift(dx, dy)
            if u in inside:
                out.add(Edge(v, u))
    return sorted(out)
