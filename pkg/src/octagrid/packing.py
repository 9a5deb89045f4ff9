"""Area (packing) lower bound for L(1,2)-edge labelings of the whole grid.

Every vertex ``v`` owns the footprint of the four unit cells around it. Two
vertices at Chebyshev distance >= 2 have disjoint footprints, so edges at
distance >= 3 have disjoint footprints as well.

Take two consecutive colors c, c+1. Same-colored edges sit at distance >= 3
and c / c+1 edges may not sit at distance exactly 2, so every connected unit
of their union is a single edge or a two-edge path (an edge touching two
edges of the other color would put those two within distance 2). Distinct
units are at distance >= 3. Single edges cover >= 6 cells and two-edge
paths >= 8, so a pair of color classes holds at most 1/4 edge per cell and a
single class at most 1/6. The grid has 4 edges per cell, which bounds the
number of colors from below.

Each step is checked here by enumeration; the final inequality is exact
rational arithmetic.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .grid import Edge, EdgeClass, edge_distance
from .lemmas import ClaimResult, LemmaReport

EDGES_PER_CELL = 4  # H, V, R, L anchored at each vertex
REACH = 4  # offsets scanned around the origin; distance-2 balls fit well inside


def footprint(vertices) -> frozenset[tuple[int, int]]:
    """Unit cells (by lower-left corner) touching any of ``vertices``."""
    return frozenset((v.x + dx, v.y + dy) for v in vertices for dx in (-1, 0) for dy in (-1, 0))


def unit_footprint(edges) -> frozenset[tuple[int, int]]:
    return footprint({v for e in edges for v in e.endpoints()})


def _origin_edges() -> list[Edge]:
    return [Edge.at((0, 0), c) for c in EdgeClass]


def _nearby(reach: int = REACH) -> list[Edge]:
    return [Edge.at((x, y), c) for x in range(-reach, reach + 1)
            for y in range(-reach, reach + 1) for c in EdgeClass]


def disjointness_failures() -> int:
    """Pairs at distance >= 3 whose footprints overlap (expected 0)."""
    bad = 0
    for e in _origin_edges():
        fe = unit_footprint([e])
        for f in _nearby():
            if edge_distance(e, f) >= 3 and fe & unit_footprint([f]):
                bad += 1
    return bad


def branching_failures() -> int:
    """Edges with two distinct neighbors at distance >= 3 from each other.

    A unit with three or more edges needs such a configuration (its two
    same-colored edges both touch the middle one); the count is expected 0.
    """
    bad = 0
    for e in _origin_edges():
        adj = [f for f in _nearby(2) if f != e and edge_distance(e, f) == 1]
        bad += sum(1 for f1, f2 in combinations(adj, 2) if edge_distance(f1, f2) >= 3)
    return bad


def min_single_area() -> int:
    return min(len(unit_footprint([e])) for e in _origin_edges())


def min_pair_area() -> int:
    """Smallest footprint of two adjacent edges."""
    return min(len(unit_footprint([e, f])) for e in _origin_edges()
               for f in _nearby(2) if edge_distance(e, f) == 1)


def pair_density(single: int | None = None, pair: int | None = None) -> Fraction:
    """Max edges per cell over two consecutive color classes."""
    single = min_single_area() if single is None else single
    pair = min_pair_area() if pair is None else pair
    return max(Fraction(1, single), Fraction(2, pair))


def capacity(n: int, single_density: Fraction, pair_density_: Fraction) -> Fraction:
    """Max edges per cell any labeling with colors 0..n can cover."""
    colors = n + 1
    return (colors // 2) * pair_density_ + (colors % 2) * single_density


def packing_lower_bound(single_density: Fraction | None = None,
                        pair_density_: Fraction | None = None) -> int:
    """Smallest n whose capacity reaches the grid's 4 edges per cell."""
    single_density = Fraction(1, min_single_area()) if single_density is None else single_density
    pair_density_ = pair_density() if pair_density_ is None else pair_density_
    n = 0
    while capacity(n, single_density, pair_density_) < EDGES_PER_CELL:
        n += 1
    return n


def check_packing(target: int = 28) -> LemmaReport:
    """Mechanize the area bound and test whether span ``target`` survives it."""
    report = LemmaReport("packing")

    def fact(cid, found, want, note=""):
        report.claims.append(ClaimResult(cid, 1, found, want, found == want, note))

    fact("footprint.disjoint_at_distance3", disjointness_failures(), 0)
    fact("unit.at_most_two_edges", branching_failures(), 0)
    single, pair = min_single_area(), min_pair_area()
    fact("area.single_edge_min", single, 6)
    fact("area.two_edge_path_min", pair, 8)
    sd, pd = Fraction(1, single), pair_density(single, pair)
    lb = packing_lower_bound(sd, pd)
    cap = capacity(target, sd, pd)
    report.facts.update({
        "single_class_density": str(sd),
        "pair_density": str(pd),
        "lower_bound": lb,
        f"capacity_at_{target}": str(cap),
        "edges_per_cell": EDGES_PER_CELL,
    })
    if cap < EDGES_PER_CELL:
        report.notes.append(f"span {target} covers at most {cap} < {EDGES_PER_CELL} edges per cell: "
                            f"no L(1,2)-edge labeling with colors 0..{target} exists")
    return report
