from collections import deque

import pytest

from octagrid.grid import (
    DIHEDRAL, Edge, EdgeClass, Vertex, angular_distance, chebyshev, edge, edge_distance,
    neighbors, shared_vertex, window_edges,
)

WINDOW = window_edges(-4, -4, 9, 9)


def line_graph_distances(source: Edge, edges) -> dict[Edge, int]:
    """Oracle: BFS in the line graph restricted to ``edges``."""
    by_vertex: dict[Vertex, list[Edge]] = {}
    for e in edges:
        for v in e.endpoints():
            by_vertex.setdefault(v, []).append(e)
    dist = {source: 0}
    queue = deque([source])
    while queue:
        e = queue.popleft()
        for v in e.endpoints():
            for f in by_vertex[v]:
                if f not in dist:
                    dist[f] = dist[e] + 1
                    queue.append(f)
    return dist


def test_vertex_has_eight_neighbors():
    assert len(neighbors((3, -2))) == 8
    assert all(chebyshev((3, -2), w) == 1 for w in neighbors((3, -2)))


def test_edge_is_canonical():
    assert edge((1, 1), (0, 0)) == edge((0, 0), (1, 1))
    assert edge((1, 0), (0, 1)).cls is EdgeClass.L
    with pytest.raises(ValueError):
        edge((0, 0), (2, 0))
    with pytest.raises(ValueError):
        edge((0, 0), (0, 0))


@pytest.mark.parametrize("cls", list(EdgeClass))
def test_edge_distance_matches_line_graph_bfs(cls):
    src = Edge.at((0, 0), cls)
    oracle = line_graph_distances(src, WINDOW)
    for f in WINDOW:
        # the window has margin 4 around the source, so BFS distances up to 3 are exact
        if f != src and oracle[f] <= 3:
            assert edge_distance(src, f) == oracle[f], f
        elif f != src:
            assert edge_distance(src, f) > 3


def test_distance_is_symmetric_and_zero_only_on_self():
    e = Edge.at((0, 0), EdgeClass.R)
    for f in WINDOW[:200]:
        assert edge_distance(e, f) == edge_distance(f, e)
        assert (edge_distance(e, f) == 0) == (e == f)


@pytest.mark.parametrize("sym", DIHEDRAL)
def test_distance_invariant_under_dihedral_and_translation(sym):
    e = Edge.at((0, 0), EdgeClass.H)
    for f in WINDOW[::7]:
        assert edge_distance(e.transform(sym), f.transform(sym)) == edge_distance(e, f)
        assert edge_distance(e.shift(5, -3), f.shift(5, -3)) == edge_distance(e, f)


def test_dihedral_group_is_closed_on_classes():
    slanting = {c for c in EdgeClass if c.slanting}
    for sym in DIHEDRAL:
        for c in EdgeClass:
            assert Edge.at((0, 0), c).transform(sym).slanting == (c in slanting)


def test_angular_cases():
    o = (0, 0)
    h = edge(o, (1, 0))
    assert angular_distance(h, edge(o, (-1, 0))) == 180
    assert angular_distance(h, edge(o, (-1, 1))) == 135
    assert angular_distance(h, edge(o, (0, 1))) == 90
    assert angular_distance(h, edge(o, (1, 1))) == 45
    assert angular_distance(edge(o, (1, 1)), edge(o, (-1, 1))) == 90
    assert shared_vertex(h, edge(o, (0, 1))) == Vertex(0, 0)
    with pytest.raises(ValueError):
        angular_distance(h, edge((5, 5), (6, 5)))


def test_window_edge_count():
    # w x h vertices: horizontal, vertical and two diagonals per unit square
    w, h = 5, 4
    assert len(window_edges(0, 0, w, h)) == (w - 1) * h + w * (h - 1) + 2 * (w - 1) * (h - 1)
