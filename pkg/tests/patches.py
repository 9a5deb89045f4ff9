"""Random small edge patches shared by the solver and acceptance tests."""

import random

from octagrid.grid import window_edges

HK_PAIRS = [(1, 1), (1, 2), (2, 1)]


def random_patch(rng: random.Random, max_edges: int = 10):
    """Up to ``max_edges`` edges drawn from a small window, so most pairs interact."""
    w, h = rng.randint(2, 4), rng.randint(2, 4)
    pool = window_edges(rng.randint(-3, 3), rng.randint(-3, 3), w, h)
    return sorted(rng.sample(pool, rng.randint(1, min(max_edges, len(pool)))))


def patches(seed: int, count: int, max_edges: int = 10):
    rng = random.Random(seed)
    return [random_patch(rng, max_edges) for _ in range(count)]
