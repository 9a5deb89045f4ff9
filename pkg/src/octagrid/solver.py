"""Exact search for L(h,k)-edge labelings.

Finite regions and torus quotients share one backtracking core: colors are
bit masks, assignment subtracts the forbidden interval from every
constrained neighbour, and a pigeonhole test on known cliques (edge sets
whose members pairwise need distinct colors) prunes before any domain
empties. A separate exhaustive scan covers the linear periodic family
``(a*x + b*y + offset[class]) mod m``, which is where the shipped
upper-bound certificate comes from.
"""

from __future__ import annotations

import time
from math import gcd
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from itertools import product
from typing import Sequence

from .grid import EdgeClass, Edge, Vertex, edge_distance, neighbors
from .labeling import (
    MIN_PERIOD, Labeling, LabelingError, PeriodicLabeling, ball2, labeling_to_json,
    periodic_to_json, required_gap, verify, verify_periodic,
)
from .subgraph import EdgeSet, K4Site, build_GS

DEFAULT_NODE_BUDGET = 10**8
DEFAULT_TIME_BUDGET = 300.0
# "color-first" branches on the lowest open color: some edge takes it, or the
# most constrained candidate gives it up. The other two pick an edge and try
# its colors in increasing order.
VARIABLE_ORDERS = ("color-first", "most-constrained-first", "static-canonical")


class Verdict(str, Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class SearchConfig:
    max_color: int | None = None
    node_budget: int = DEFAULT_NODE_BUDGET
    time_budget: float = DEFAULT_TIME_BUDGET
    symmetry_breaking: bool = True
    variable_order: str = "color-first"
    workers: int = 1

    def __post_init__(self):
        if self.node_budget <= 0 or self.time_budget <= 0:
            raise ValueError("search budgets must be positive")
        if self.variable_order not in VARIABLE_ORDERS:
            raise ValueError(f"unknown variable order {self.variable_order!r}")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass
class SearchCertificate:
    verdict: Verdict
    n: int
    nodes: int = 0
    max_depth: int = 0
    elapsed_ms: int = 0
    witness: Labeling | PeriodicLabeling | None = None
    witness_verified: bool = False
    lower_bound: int | None = None
    upper_bound: int | None = None

    def to_json(self) -> dict:
        out = {
            "verdict": self.verdict.value,
            "n": self.n,
            "nodes": self.nodes,
            "depth": self.max_depth,
            "elapsed_ms": self.elapsed_ms,
        }
        if self.lower_bound is not None:
            out["lower_bound"] = self.lower_bound
            out["upper_bound"] = self.upper_bound
        if self.witness is not None:
            out["witness_verified"] = self.witness_verified
            out["witness"] = (periodic_to_json(self.witness) if isinstance(self.witness, PeriodicLabeling)
                              else labeling_to_json(self.witness))
        return out


class _BudgetExceeded(Exception):
    pass


@dataclass
class _Problem:
    """A CSP over integer-indexed variables with pairwise minimum gaps."""

    size: int
    adj: list[list[tuple[int, int]]]  # var -> [(other, gap)]
    cliques: list[list[int]] = field(default_factory=list)

    def clique_gap(self, clique: Sequence[int]) -> int:
        gaps = {(i, j): g for i in clique for j, g in self.adj[i]}
        return min(gaps.get((i, j), 0) for i in clique for j in clique if i != j)


def _mask_below(n: int) -> int:
    return (1 << (n + 1)) - 1


def _interval(lo: int, hi: int) -> int:
    lo = max(lo, 0)
    if hi < lo:
        return 0
    return ((1 << (hi - lo + 1)) - 1) << lo


class _Search:
    def __init__(self, prob: _Problem, n: int, cfg: SearchConfig, root_domain: int | None = None,
                 root_var: int | None = None):
        self.prob = prob
        self.n = n
        self.cfg = cfg
        self.nodes = 0
        self.max_depth = 0
        self.deadline = time.monotonic() + cfg.time_budget
        self.domains = [_mask_below(n)] * prob.size
        self.assigned = [-1] * prob.size
        self.var_cliques: list[list[int]] = [[] for _ in range(prob.size)]
        for ci, cl in enumerate(prob.cliques):
            for v in cl:
                self.var_cliques[v].append(ci)
        self.root_domain = root_domain
        self.root_var = root_var

    def _pigeonhole_ok(self, cliques) -> bool:
        doms, assigned, clq = self.domains, self.assigned, self.prob.cliques
        for ci in cliques:
            union = 0
            free = 0
            for v in clq[ci]:
                if assigned[v] < 0:
                    union |= doms[v]
                    free += 1
            if free and union.bit_count() < free:
                return False
        return True

    def _assign(self, var: int, c: int, trail: list) -> bool:
        self.assigned[var] = c
        trail.append((var, self.domains[var]))
        self.domains[var] = 1 << c
        doms, assigned = self.domains, self.assigned
        touched = set(self.var_cliques[var])
        for j, g in self.prob.adj[var]:
            if assigned[j] >= 0:
                continue
            d = doms[j]
            nd = d & ~_interval(c - g + 1, c + g - 1)
            if nd != d:
                if not nd:
                    return False
                trail.append((j, d))
                doms[j] = nd
                touched.update(self.var_cliques[j])
        return self._pigeonhole_ok(touched)

    def _undo(self, var: int, trail: list, mark: int) -> None:
        while len(trail) > mark:
            j, d = trail.pop()
            self.domains[j] = d
        self.assigned[var] = -1

    def _pick(self) -> int:
        best, best_size = -1, 1 << 30
        doms, assigned = self.domains, self.assigned
        if self.cfg.variable_order == "static-canonical":
            for v in range(self.prob.size):
                if assigned[v] < 0:
                    return v
            return -1
        for v in range(self.prob.size):
            if assigned[v] < 0:
                s = doms[v].bit_count()
                if s < best_size:
                    best, best_size = v, s
                    if s <= 1:
                        break
        return best

    def run(self) -> list[int] | None:
        if not self._pigeonhole_ok(range(len(self.prob.cliques))):
            return None
        if self.prob.size == 0:
            return []
        # complement symmetry: c -> n - c maps labelings to labelings, so one
        # edge may be limited to the lower half of the palette
        root = self.root_var if self.root_var is not None else self._pick()
        if self.root_domain is not None:
            self.domains[root] &= self.root_domain
        elif self.cfg.symmetry_breaking:
            self.domains[root] &= _mask_below(self.n // 2)
        if not self.domains[root]:
            return None
        trail: list = []
        if self.cfg.variable_order == "color-first":
            return self._dfs_color(0, trail)
        return self._dfs(0, trail)

    def _tick(self, depth: int) -> None:
        self.nodes += 1
        if depth > self.max_depth:
            self.max_depth = depth
        if self.nodes > self.cfg.node_budget or (self.nodes & 1023 == 0 and time.monotonic() > self.deadline):
            raise _BudgetExceeded

    def _dfs(self, depth: int, trail: list) -> list[int] | None:
        self._tick(depth)
        var = self._pick()
        if var < 0:
            return list(self.assigned)
        dom = self.domains[var]
        while dom:
            low = dom & -dom
            c = low.bit_length() - 1
            dom ^= low
            mark = len(trail)
            if self._assign(var, c, trail):
                found = self._dfs(depth + 1, trail)
                if found is not None:
                    return found
            self._undo(var, trail, mark)
        return None

    def _dfs_color(self, depth: int, trail: list) -> list[int] | None:
        self._tick(depth)
        doms, assigned = self.domains, self.assigned
        union = 0
        free = []
        for v in range(self.prob.size):
            if assigned[v] < 0:
                free.append(v)
                union |= doms[v]
        if not free:
            return list(assigned)
        c = (union & -union).bit_length() - 1
        bit = 1 << c
        var, best = -1, 1 << 30
        for v in free:
            if doms[v] & bit:
                s = doms[v].bit_count()
                if s < best:
                    var, best = v, s
        mark = len(trail)
        if self._assign(var, c, trail):
            found = self._dfs_color(depth + 1, trail)
            if found is not None:
                return found
        self._undo(var, trail, mark)
        # var avoids c; c stays available to the others
        trail.append((var, doms[var]))
        doms[var] &= ~bit
        if doms[var] and self._pigeonhole_ok(self.var_cliques[var]):
            found = self._dfs_color(depth + 1, trail)
            if found is not None:
                return found
        while len(trail) > mark:
            j, d = trail.pop()
            doms[j] = d
        return None


def _run_search(prob: _Problem, n: int, cfg: SearchConfig, root_domain=None, root_var=None):
    s = _Search(prob, n, cfg, root_domain, root_var)
    try:
        sol = s.run()
        verdict = Verdict.SAT if sol is not None else Verdict.UNSAT
    except _BudgetExceeded:
        sol, verdict = None, Verdict.UNKNOWN
    return verdict, sol, s.nodes, s.max_depth


def _solve(prob: _Problem, n: int, cfg: SearchConfig):
    """Run the search, optionally splitting the first decision across processes."""
    if n < 0:
        return Verdict.UNSAT, None, 0, 0
    if cfg.workers <= 1 or prob.size == 0:
        return _run_search(prob, n, cfg)
    # split on the most constrained root variable; each worker owns a set of its colors
    root = _Search(prob, n, cfg)
    if not root._pigeonhole_ok(range(len(prob.cliques))):
        return Verdict.UNSAT, None, 1, 0
    var = root._pick()
    colors = list(range(n // 2 + 1 if cfg.symmetry_breaking else n + 1))
    parts = [sum(1 << c for c in colors[w::cfg.workers]) for w in range(cfg.workers)]
    parts = [p for p in parts if p]
    sub = replace(cfg, workers=1)
    with ProcessPoolExecutor(max_workers=len(parts)) as pool:
        futs = [pool.submit(_run_search, prob, n, sub, p, var) for p in parts]
        results = [f.result() for f in futs]
    nodes = sum(r[2] for r in results)
    depth = max(r[3] for r in results)
    sats = [r for r in results if r[0] is Verdict.SAT]
    if sats:
        # lowest-colored branch first keeps the witness choice stable
        return Verdict.SAT, sats[0][1], nodes, depth
    if any(r[0] is Verdict.UNKNOWN for r in results):
        return Verdict.UNKNOWN, None, nodes, depth
    return Verdict.UNSAT, None, nodes, depth


# ------------------------------------------------------------ finite regions

def _region_cliques(edges: Sequence[Edge], index: dict[Edge, int], adj) -> list[list[int]]:
    """Cliques of the conflict graph taken from G_S blocks and vertex stars."""
    conflict = [set(j for j, g in adj[i] if g > 0) for i in range(len(edges))]
    candidates = set()
    anchors = set()
    for e in edges:
        for p in e.endpoints():
            for q in neighbors(p) | {p}:
                anchors.add(q)
    for a in anchors:
        members = [index[f] for f in build_GS(K4Site(a)) if f in index]
        candidates.add(tuple(sorted(members)))
        star = [index[Edge.of(a, q)] for q in neighbors(a) if Edge.of(a, q) in index]
        candidates.add(tuple(sorted(star)))
    out = []
    for cl in sorted(candidates):
        if len(cl) >= 2 and all(j in conflict[i] for i in cl for j in cl if i != j):
            out.append(list(cl))
    # drop cliques contained in another one
    sets = [set(c) for c in out]
    return [c for i, c in enumerate(out)
            if not any(i != j and sets[i] < sets[j] for j in range(len(out)))]


def _edge_problem(region: EdgeSet | Sequence[Edge], h: int, k: int) -> tuple[list[Edge], _Problem]:
    edges = list(region.edges if isinstance(region, EdgeSet) else sorted(set(region)))
    index = {e: i for i, e in enumerate(edges)}
    adj: list[list[tuple[int, int]]] = [[] for _ in edges]
    for i, e in enumerate(edges):
        for f in ball2(e):
            j = index.get(f)
            if j is not None:
                g = required_gap(edge_distance(e, f), h, k)
                if g > 0:
                    adj[i].append((j, g))
    return edges, _Problem(len(edges), adj, _region_cliques(edges, index, adj))


def _certify(region_edges, sol, n, h, k, verdict, nodes, depth, t0) -> SearchCertificate:
    cert = SearchCertificate(verdict, n, nodes, depth, int((time.monotonic() - t0) * 1000))
    if verdict is Verdict.SAT:
        lab = Labeling(dict(zip(region_edges, sol)), h, k)
        report = verify(region_edges, lab)
        if not report.ok or max(sol, default=0) > n:
            raise AssertionError(f"solver produced an invalid witness: {report.violations[:3]}")
        cert.witness, cert.witness_verified = lab, True
    return cert


def feasible(region: EdgeSet | Sequence[Edge], n: int, h: int = 1, k: int = 2,
             cfg: SearchConfig | None = None) -> SearchCertificate:
    """Decide whether ``region`` has an L(h,k)-edge labeling with colors in ``0..n``."""
    cfg = cfg or SearchConfig()
    t0 = time.monotonic()
    edges, prob = _edge_problem(region, h, k)
    if not edges:
        raise ValueError("feasible() needs a nonempty region")
    verdict, sol, nodes, depth = _solve(prob, n, cfg)
    return _certify(edges, sol, n, h, k, verdict, nodes, depth, t0)


def clique_lower_bound(region: EdgeSet | Sequence[Edge], h: int = 1, k: int = 2) -> int:
    """A span lower bound: a clique of m edges with pairwise gap >= g needs (m-1)*g."""
    _, prob = _edge_problem(region, h, k)
    return _clique_lb(prob)


def _clique_lb(prob: _Problem) -> int:
    best = 0
    for cl in prob.cliques:
        best = max(best, (len(cl) - 1) * prob.clique_gap(cl))
    for i in range(prob.size):
        for _, g in prob.adj[i]:
            best = max(best, g)
    return best


def greedy_labeling(region: EdgeSet | Sequence[Edge], h: int = 1, k: int = 2) -> Labeling:
    """First-fit labeling in canonical order; always valid, gives an upper bound."""
    edges = list(region.edges if isinstance(region, EdgeSet) else sorted(set(region)))
    lab = Labeling({}, h, k)
    inside = set(edges)
    for e in edges:
        bad = set()
        for f in ball2(e):
            if f in inside and f in lab:
                g = required_gap(edge_distance(e, f), h, k)
                bad.update(range(lab[f] - g + 1, lab[f] + g))
        c = 0
        while c in bad:
            c += 1
        lab.assignment[e] = c
    return lab


def min_span(region: EdgeSet | Sequence[Edge], h: int = 1, k: int = 2,
             cfg: SearchConfig | None = None) -> tuple[int | None, SearchCertificate]:
    """Smallest ``n`` admitting a labeling, scanning upward from a clique bound.

    On budget exhaustion the span is ``None`` and the certificate carries the
    bracketing interval ``[lower_bound, upper_bound]``.
    """
    cfg = cfg or SearchConfig()
    t0 = time.monotonic()
    edges, prob = _edge_problem(region, h, k)
    if not edges:
        raise ValueError("min_span() needs a nonempty region")
    greedy = greedy_labeling(edges, h, k)
    ub = max(greedy.assignment.values())
    nodes = depth = 0
    n = min(_clique_lb(prob), ub)
    while n < ub:
        verdict, sol, dn, dd = _solve(prob, n, cfg)
        nodes += dn
        depth = max(depth, dd)
        if verdict is Verdict.SAT:
            cert = _certify(edges, sol, n, h, k, verdict, nodes, depth, t0)
            cert.lower_bound = cert.upper_bound = n
            return n, cert
        if verdict is Verdict.UNKNOWN:
            cert = SearchCertificate(Verdict.UNKNOWN, n, nodes, depth,
                                     int((time.monotonic() - t0) * 1000), lower_bound=n, upper_bound=ub)
            return None, cert
        n += 1
    report = verify(edges, greedy)
    assert report.ok
    cert = SearchCertificate(Verdict.SAT, ub, nodes, depth, int((time.monotonic() - t0) * 1000),
                             greedy, True, ub, ub)
    return ub, cert


MAX_BRUTE_EDGES = 12
MAX_BRUTE_COLORS = 16


def brute_force_min_span(region: EdgeSet | Sequence[Edge], h: int = 1, k: int = 2,
                         n_cap: int = MAX_BRUTE_COLORS) -> int | None:
    """Reference span by plain enumeration, without propagation or cliques.

    Colors are tried edge by edge in canonical order; a prefix is abandoned
    as soon as some pair of its edges violates a constraint. Returns ``None``
    when no labeling fits in ``0..n_cap``.
    """
    edges = list(region.edges if isinstance(region, EdgeSet) else sorted(set(region)))
    if len(edges) > MAX_BRUTE_EDGES or n_cap > MAX_BRUTE_COLORS:
        raise ValueError(f"brute force is limited to {MAX_BRUTE_EDGES} edges and n_cap {MAX_BRUTE_COLORS}")
    if not edges:
        raise ValueError("brute_force_min_span() needs a nonempty region")
    m = len(edges)
    gap = [[required_gap(edge_distance(edges[i], edges[j]), h, k) if i != j else 0 for j in range(m)]
           for i in range(m)]

    def extend(prefix: list[int], n: int) -> bool:
        i = len(prefix)
        if i == m:
            return True
        for c in range(n + 1):
            if all(abs(c - prefix[j]) >= gap[i][j] for j in range(i)):
                prefix.append(c)
                if extend(prefix, n):
                    return True
                prefix.pop()
        return False

    for n in range(n_cap + 1):
        if extend([], n):
            return n
    return None


# ------------------------------------------------------------ periodic search

def _torus_problem(px: int, py: int, h: int, k: int) -> tuple[list[tuple[int, int, EdgeClass]], _Problem]:
    if px < MIN_PERIOD or py < MIN_PERIOD:
        raise LabelingError(f"period {px}x{py} is below the minimum {MIN_PERIOD}x{MIN_PERIOD}")
    keys = [(x, y, c) for x in range(px) for y in range(py) for c in EdgeClass]
    index = {key: i for i, key in enumerate(keys)}

    def var_of(e: Edge) -> int:
        return index[(e.a.x % px, e.a.y % py, e.cls)]

    adj: list[list[tuple[int, int]]] = []
    for x, y, c in keys:
        e = Edge.at((x, y), c)
        i = index[(x, y, c)]
        gaps: dict[int, int] = {}
        for f in ball2(e):
            j = var_of(f)
            if j == i:
                raise LabelingError("period too small: an edge aliases into its own neighbourhood")
            g = required_gap(edge_distance(e, f), h, k)
            if g > gaps.get(j, 0):
                gaps[j] = g
        adj.append(sorted(gaps.items()))
    cliques = []
    conflict = [set(j for j, g in a if g > 0) for a in adj]
    for x in range(px):
        for y in range(py):
            site = K4Site(Vertex(x, y))
            gs = sorted({var_of(f) for f in build_GS(site)})
            star = sorted({var_of(Edge.of((x, y), q)) for q in neighbors((x, y))})
            for cl in (gs, star):
                if all(j in conflict[i] for i in cl for j in cl if i != j):
                    cliques.append(cl)
    return keys, _Problem(len(keys), adj, cliques)


def periodic_search(period: tuple[int, int], n: int, h: int = 1, k: int = 2,
                    cfg: SearchConfig | None = None) -> SearchCertificate:
    """Search for a labeling of the torus ``Z_px x Z_py`` with colors ``0..n``.

    A SAT witness is a periodic labeling of the whole grid; UNSAT is a
    statement about this period only.
    """
    cfg = cfg or SearchConfig()
    t0 = time.monotonic()
    px, py = period
    keys, prob = _torus_problem(px, py, h, k)
    verdict, sol, nodes, depth = _solve(prob, n, cfg)
    cert = SearchCertificate(verdict, n, nodes, depth, int((time.monotonic() - t0) * 1000))
    if verdict is Verdict.SAT:
        plab = PeriodicLabeling((px, py), dict(zip(keys, sol)), h, k)
        report = verify_periodic(plab)
        if not report.ok:
            raise AssertionError(f"periodic search produced an invalid witness: {report.violations[:3]}")
        cert.witness, cert.witness_verified = plab, True
    return cert


def sweep_periods(start: int = MIN_PERIOD, stop: int = 12):
    """Periods in order of increasing area, then by shape."""
    periods = [(px, py) for px, py in product(range(start, stop + 1), repeat=2) if px <= py]
    return sorted(periods, key=lambda p: (p[0] * p[1], p))


def _linear_relations(h: int, k: int) -> list[tuple[int, int, int, int, int]]:
    """(class i, class j, dx, dy, gap) for every constrained pair, first edge at the origin."""
    classes = list(EdgeClass)
    out = []
    for i, c in enumerate(classes):
        e = Edge.at((0, 0), c)
        for f in ball2(e):
            g = required_gap(edge_distance(e, f), h, k)
            if g > 0:
                out.append((i, classes.index(f.cls), f.a.x, f.a.y, g))
    return out


def linear_labeling(m: int, a: int, b: int, offsets: Sequence[int], h: int = 1, k: int = 2) -> PeriodicLabeling:
    """The labeling ``(a*x + b*y + offsets[class]) mod m`` on a rectangular period."""
    def period(step):
        p = m // gcd(step, m)
        return p * -(-MIN_PERIOD // p)  # smallest multiple that is a legal period

    px, py = period(a), period(b)
    labels = {(x, y, c): (a * x + b * y + offsets[i]) % m
              for x in range(px) for y in range(py) for i, c in enumerate(EdgeClass)}
    return PeriodicLabeling((px, py), labels, h, k)


def linear_search(n: int, h: int = 1, k: int = 2) -> PeriodicLabeling | None:
    """Exhaust the labelings ``(a*x + b*y + o_class) mod (n+1)`` that keep every gap cyclically.

    Cyclic gaps are stronger than the plain ones, so any hit is a valid
    labeling with colors ``0..n``; a miss says nothing beyond this family.
    """
    m = n + 1
    rel = _linear_relations(h, k)
    pairs = [(i, j) for i in range(4) for j in range(4)]
    for a, b in product(range(m), repeat=2):
        # forbidden values of o_j - o_i for each class pair
        forb = {p: set() for p in pairs}
        for i, j, dx, dy, g in rel:
            base = a * dx + b * dy
            forb[i, j].update((r - base) % m for r in range(1 - g, g))
        if any(0 in forb[i, i] for i in range(4)):
            continue

        def fits(o, j):
            return all((o[j] - o[i]) % m not in forb[i, j] and (o[i] - o[j]) % m not in forb[j, i]
                       for i in range(j))

        def extend(o):
            if len(o) == 4:
                return o
            for v in range(m):
                if fits(o + [v], len(o)):
                    found = extend(o + [v])
                    if found:
                        return found
            return None

        offsets = extend([0])
        if offsets:
            plab = linear_labeling(m, a, b, offsets, h, k)
            report = verify_periodic(plab)
            if not report.ok:
                raise AssertionError(f"linear search produced an invalid witness: {report.violations[:3]}")
            return plab
    return None
