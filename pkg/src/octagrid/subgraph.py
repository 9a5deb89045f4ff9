"""Finite pieces of the king grid: K4 sites, G_S and the two-hop region G."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

from .grid import Edge, Vertex, adjacent, neighbors, window_edges


@dataclass(frozen=True, order=True)
class K4Site:
    """A unit 2x2 block, identified by its minimum corner."""

    anchor: Vertex

    @classmethod
    def at(cls, x: int, y: int) -> "K4Site":
        return cls(Vertex(x, y))

    @property
    def vertex_set(self) -> frozenset[Vertex]:
        x, y = self.anchor
        return frozenset({Vertex(x, y), Vertex(x + 1, y), Vertex(x, y + 1), Vertex(x + 1, y + 1)})

    def edges(self) -> list[Edge]:
        return sorted(Edge.of(p, q) for p, q in combinations(self.vertex_set, 2))

    def side_edges(self) -> list[Edge]:
        return [e for e in self.edges() if not e.slanting]

    def shift(self, dx: int, dy: int) -> "K4Site":
        return K4Site(self.anchor.shift(dx, dy))

    def __str__(self) -> str:
        return f"K4@({self.anchor.x},{self.anchor.y})"


@dataclass(frozen=True)
class EdgeSet:
    """A finite edge collection kept in canonical sorted order."""

    edges: tuple[Edge, ...]
    extra_vertices: frozenset[Vertex] = field(default=frozenset())

    @classmethod
    def of(cls, edges: Iterable[Edge], extra_vertices: Iterable = ()) -> "EdgeSet":
        return cls(tuple(sorted(set(edges))), frozenset(Vertex(*v) for v in extra_vertices))

    @property
    def vertices(self) -> frozenset[Vertex]:
        vs = set(self.extra_vertices)
        for e in self.edges:
            vs.update(e.endpoints())
        return frozenset(vs)

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)

    def __contains__(self, e) -> bool:
        return e in self._lookup

    @property
    def _lookup(self) -> frozenset[Edge]:
        # cached lazily; dataclass is frozen so bypass __setattr__
        try:
            return self.__dict__["_lookup_cache"]
        except KeyError:
            s = frozenset(self.edges)
            object.__setattr__(self, "_lookup_cache", s)
            return s

    def union(self, other: "EdgeSet") -> "EdgeSet":
        return EdgeSet.of(self.edges + other.edges, self.extra_vertices | other.extra_vertices)

    def issubset(self, other: "EdgeSet") -> bool:
        return self._lookup <= other._lookup

    def shift(self, dx: int, dy: int) -> "EdgeSet":
        return EdgeSet.of((e.shift(dx, dy) for e in self.edges),
                          (v.shift(dx, dy) for v in self.extra_vertices))


def neighborhood(S: Iterable) -> set[Vertex]:
    """Union of the king neighbourhoods of the vertices in ``S``."""
    out: set[Vertex] = set()
    for v in S:
        out |= neighbors(v)
    return out


def incident_edges(core: Iterable) -> set[Edge]:
    """Every grid edge with at least one endpoint in ``core``."""
    out = set()
    for v in core:
        for u in neighbors(v):
            out.add(Edge.of(v, u))
    return out


def build_GS(site: K4Site) -> EdgeSet:
    S = site.vertex_set
    return EdgeSet.of(incident_edges(S), S | neighborhood(S))


def two_hop_core(site: K4Site) -> set[Vertex]:
    S = set(site.vertex_set)
    NS = neighborhood(S)
    return S | NS | neighborhood(NS)


def build_G(site: K4Site) -> EdgeSet:
    core = two_hop_core(site)
    return EdgeSet.of(incident_edges(core), core | neighborhood(core))


def enumerate_k4(region: EdgeSet) -> list[K4Site]:
    """K4 sites whose four vertices and six edges all lie in ``region``."""
    anchors = {e.a for e in region.edges} | {e.b.shift(-1, -1) for e in region.edges}
    sites = []
    for a in anchors:
        site = K4Site(a)
        if all(e in region for e in site.edges()):
            sites.append(site)
    return sorted(set(sites))


def enumerate_k3(region: EdgeSet) -> list[tuple[Vertex, Vertex, Vertex]]:
    """Triangles of the king grid with all three edges in ``region`` (sorted triples)."""
    out = set()
    for e in region.edges:
        for w in neighbors(e.a) & neighbors(e.b):
            if Edge.of(e.a, w) in region and Edge.of(e.b, w) in region:
                out.add(tuple(sorted((e.a, e.b, w))))
    return sorted(out)


def triangle_edges(tri) -> tuple[Edge, Edge, Edge]:
    p, q, r = tri
    return (Edge.of(p, q), Edge.of(p, r), Edge.of(q, r))


def brute_force_cliques(vertices: Iterable, size: int) -> list[tuple[Vertex, ...]]:
    """All ``size``-cliques among ``vertices`` by checking every subset."""
    vs = sorted(Vertex(*v) for v in vertices)
    return [c for c in combinations(vs, size) if all(adjacent(p, q) for p, q in combinations(c, 2))]


def window_region(x0: int, y0: int, w: int, h: int) -> EdgeSet:
    return EdgeSet.of(window_edges(x0, y0, w, h))

