"""Mechanized checks of the counting facts behind the lower bound 28.

Every count here is recomputed from the distance rules alone: a K4 site
S_i is *excluded* for color c when c cannot appear anywhere in G_{S_i},
i.e. the edge already carrying c is not in G_{S_i} and every edge of
G_{S_i} has c among its forbidden colors.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

from .grid import Edge, Vertex, angular_distance, edge_distance
from .labeling import Labeling, forbidden_colors, verify
from .subgraph import K4Site, build_G, build_GS, enumerate_k3, enumerate_k4, triangle_edges

H, K = 1, 2
HOLES = 24  # K4 sites of G other than the central one

# Vertex names used in the figures, for the central K4 anchored at the origin.
# v1..v4 go round the central square; u1..u12 and w1..w20 walk the two
# surrounding rings in the same rotational sense, starting top-left.
FIGURE: dict[str, Vertex] = {
    "v1": Vertex(0, 0), "v2": Vertex(1, 0), "v3": Vertex(1, 1), "v4": Vertex(0, 1),
}
_U_RING = [(-1, 2), (0, 2), (1, 2), (2, 2), (2, 1), (2, 0), (2, -1), (1, -1), (0, -1), (-1, -1), (-1, 0), (-1, 1)]
_W_RING = [(-2, 3), (-1, 3), (0, 3), (1, 3), (2, 3), (3, 3), (3, 2), (3, 1), (3, 0), (3, -1),
           (3, -2), (2, -2), (1, -2), (0, -2), (-1, -2), (-2, -2), (-2, -1), (-2, 0), (-2, 1), (-2, 2)]
FIGURE.update({f"u{i}": Vertex(*p) for i, p in enumerate(_U_RING, 1)})
FIGURE.update({f"w{i}": Vertex(*p) for i, p in enumerate(_W_RING, 1)})


def fig_edge(p: str, q: str) -> Edge:
    return Edge.of(FIGURE[p], FIGURE[q])


def fig_site(*names: str) -> K4Site:
    """The K4 site spanned by four named figure vertices."""
    pts = {FIGURE[n] for n in names}
    site = K4Site(min(pts))
    if set(site.vertex_set) != pts:
        raise ValueError(f"{names} is not a unit square")
    return site


CENTRAL = K4Site.at(0, 0)


@dataclass(frozen=True)
class ExclusionScenario:
    central_site: K4Site
    labeled_edges: tuple[tuple[Edge, int], ...]
    case: str

    def labeling(self) -> Labeling:
        return Labeling(dict(self.labeled_edges), H, K)

    def edge_with(self, color: int) -> Edge | None:
        for e, c in self.labeled_edges:
            if c == color:
                return e
        return None

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "edges": [{"a": list(e.a), "b": list(e.b), "color": c} for e, c in self.labeled_edges],
        }


@lru_cache(maxsize=None)
def _site_tables(central: K4Site):
    others = [s for s in enumerate_k4(build_G(central)) if s != central]
    return others, {s: build_GS(s) for s in others}


def candidate_sites(central: K4Site = CENTRAL) -> list[K4Site]:
    return list(_site_tables(central)[0])


def excluded_k4s(scenario: ExclusionScenario, color: int) -> list[K4Site]:
    """Sites of G, other than the central one, where ``color`` cannot appear."""
    others, gs_of = _site_tables(scenario.central_site)
    partial = dict(scenario.labeled_edges)
    out = []
    for site in others:
        ok = True
        for e in gs_of[site].edges:
            c = partial.get(e)
            if c is not None:
                if c == color:
                    ok = False  # color already present in this G_{S_i}
                    break
                continue  # occupied by another color
            if color not in forbidden_colors(e, partial, H, K):
                ok = False
                break
        if ok:
            out.append(site)
    return out


@dataclass
class ScenarioRecord:
    scenario: ExclusionScenario
    color: int
    excluded: list[K4Site]

    @property
    def count(self) -> int:
        return len(self.excluded)

    def to_json(self) -> dict:
        return {
            **self.scenario.to_json(),
            "color": self.color,
            "excluded": [list(s.anchor) for s in self.excluded],
            "count": self.count,
        }


@dataclass
class ClaimResult:
    claim_id: str
    scenario_count: int
    min_excluded_found: int | None
    paper_min: int | None
    passed: bool
    note: str = ""

    def to_json(self) -> dict:
        out = {
            "claim_id": self.claim_id,
            "scenario_count": self.scenario_count,
            "min_excluded_found": self.min_excluded_found,
            "paper_min": self.paper_min,
            "pass": self.passed,
        }
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class LemmaReport:
    name: str
    claims: list[ClaimResult] = field(default_factory=list)
    records: list[ScenarioRecord] = field(default_factory=list)
    facts: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.claims)

    def claim(self, claim_id: str) -> ClaimResult:
        for c in self.claims:
            if c.claim_id == claim_id:
                return c
        raise KeyError(claim_id)

    def to_json(self, with_records: bool = False) -> dict:
        out = {
            "name": self.name,
            "pass": self.passed,
            "claims": [c.to_json() for c in self.claims],
        }
        if self.facts:
            out["facts"] = self.facts
        if self.notes:
            out["notes"] = list(self.notes)
        if with_records:
            out["records"] = [r.to_json() for r in self.records]
        return out


def _min_claim(claim_id: str, counts: list[int], paper_min: int, note: str = "") -> ClaimResult:
    found = min(counts) if counts else None
    return ClaimResult(claim_id, len(counts), found, paper_min,
                       bool(counts) and found >= paper_min, note)


# ---------------------------------------------------------------- adjacent pairs

def angular_case(e1: Edge, e2: Edge) -> str:
    ang = angular_distance(e1, e2)
    if ang in (180, 90) and e1.slanting == e2.slanting:
        return f"{ang}-{'slanting' if e1.slanting else 'nonslanting'}"
    return str(ang)


# (case, side) -> minimum; side "any" means either color of the pair,
# otherwise the color sitting on a slanting / non-slanting edge
LEMMA1_MINIMA = {
    ("180-nonslanting", "any"): 2,
    ("180-slanting", "any"): 3,
    ("135", "nonslanting"): 3,
    ("135", "slanting"): 2,
    ("90-nonslanting", "any"): 2,
    ("90-slanting", "any"): 3,
    ("45", "nonslanting"): 2,
    ("45", "slanting"): 1,
}


def adjacent_pairs(region) -> list[tuple[Edge, Edge]]:
    edges = list(region)
    return [(a, b) for i, a in enumerate(edges) for b in edges[i + 1:] if edge_distance(a, b) == 1]


def check_lemma1(central: K4Site = CENTRAL, c: int = 10) -> LemmaReport:
    """Every adjacent pair of G_S carrying c and c+1, in both orientations."""
    gs = build_GS(central)
    report = LemmaReport("lemma1")
    by_side: dict[tuple[str, str], list[int]] = defaultdict(list)
    totals: dict[str, list[int]] = defaultdict(list)
    splits: dict[str, list[tuple[int, int]]] = defaultdict(list)
    for a, b in adjacent_pairs(gs):
        case = angular_case(a, b)
        for e_lo, e_hi in ((a, b), (b, a)):
            sc = ExclusionScenario(central, ((e_lo, c), (e_hi, c + 1)), case)
            n_lo = excluded_k4s(sc, c)
            n_hi = excluded_k4s(sc, c + 1)
            report.records.append(ScenarioRecord(sc, c, n_lo))
            report.records.append(ScenarioRecord(sc, c + 1, n_hi))
            for e, cnt in ((e_lo, len(n_lo)), (e_hi, len(n_hi))):
                side = "any" if (case, "any") in LEMMA1_MINIMA else ("slanting" if e.slanting else "nonslanting")
                by_side[(case, side)].append(cnt)
            totals[case].append(len(n_lo) + len(n_hi))
            splits[case].append(tuple(sorted((len(n_lo), len(n_hi)))))
    for key, paper_min in LEMMA1_MINIMA.items():
        case, side = key
        report.claims.append(_min_claim(f"lemma1.{case}.{side}", by_side[key], paper_min))
    # headline statement: >= 2 and >= 2 (total 4), or >= 2 and >= 1 at 45 degrees
    for case in sorted(totals):
        need = (1, 2) if case == "45" else (2, 2)
        ok = all(lo >= need[0] and hi >= need[1] for lo, hi in splits[case])
        report.claims.append(ClaimResult(
            f"lemma1.{case}.split", len(splits[case]), min(totals[case]), sum(need), ok,
            note=f"smallest split {min(splits[case])}, required {need}"))
    report.facts["adjacent_pairs"] = len(adjacent_pairs(gs))
    report.facts["cases"] = sorted(totals)
    return report


# ---------------------------------------------------------------- consecutive triples

TRIPLE_MINIMA = {
    "slanting-middle.k3": 1,
    "slanting-middle.non-k3": 2,
    "nonslanting-middle.k3": 2,
    "nonslanting-middle.non-k3": 3,
}
# finer cases for a slanting middle outside a K3, by how many partners sit at 45 degrees
SLANTING_REFINED_MINIMA = {2: 2, 1: 3, 0: 4}


def consecutive_triples(central: K4Site = CENTRAL, c: int = 10):
    """Ordered triples (e_a, e, e_b) of G_S that can carry (c-1, c, c+1) validly."""
    gs = build_GS(central)
    edges = list(gs)
    out = []
    for e in edges:
        near = [f for f in edges if f != e and edge_distance(e, f) <= 2]
        for ea, eb in product(near, repeat=2):
            if ea == eb:
                continue
            lab = Labeling({ea: c - 1, e: c, eb: c + 1}, H, K)
            if verify([ea, e, eb], lab).ok:
                out.append((ea, e, eb))
    return out


def check_lemma_triples(central: K4Site = CENTRAL, c: int = 10) -> LemmaReport:
    gs = build_GS(central)
    triangles = {frozenset(triangle_edges(t)) for t in enumerate_k3(gs)}
    report = LemmaReport("triples")
    counts: dict[str, list[int]] = defaultdict(list)
    refined: dict[int, list[int]] = defaultdict(list)
    for ea, e, eb in consecutive_triples(central, c):
        k3 = frozenset((ea, e, eb)) in triangles
        tag = f"{'slanting' if e.slanting else 'nonslanting'}-middle.{'k3' if k3 else 'non-k3'}"
        sc = ExclusionScenario(central, ((ea, c - 1), (e, c), (eb, c + 1)), tag)
        excl = excluded_k4s(sc, c)
        report.records.append(ScenarioRecord(sc, c, excl))
        counts[tag].append(len(excl))
        if e.slanting and not k3:
            refined[sum(angular_distance(f, e) == 45 for f in (ea, eb))].append(len(excl))
    for tag, paper_min in TRIPLE_MINIMA.items():
        report.claims.append(_min_claim(f"triples.{tag}", counts[tag], paper_min))
    for n45, paper_min in SLANTING_REFINED_MINIMA.items():
        report.claims.append(_min_claim(f"triples.slanting-middle.non-k3.partners-at-45={n45}",
                                        refined[n45], paper_min))
    report.facts["triples"] = sum(len(v) for v in counts.values())
    report.notes.append(
        "the 3- and 4-site cases for a slanting middle combine two pair exclusions; "
        "the counts above are of distinct sites, so any overlap between the two sets is already accounted for")
    return report


# ---------------------------------------------------------------- K3 bound

def check_observation1(central: K4Site = CENTRAL) -> LemmaReport:
    gs = build_GS(central)
    report = LemmaReport("obs1")
    tris = enumerate_k3(gs)
    tri_edges = [set(triangle_edges(t)) for t in tris]
    sides = central.side_edges()
    report.claims.append(ClaimResult("obs1.k3_count", 1, len(tris), 12, len(tris) == 12))
    covered = all(t & set(sides) for t in tri_edges)
    report.claims.append(ClaimResult("obs1.every_k3_has_side_edge", len(tris), None, None, covered))
    per_side = [sum(e in t for t in tri_edges) for e in sides]
    report.claims.append(ClaimResult("obs1.k3_per_side_edge", len(sides), min(per_side), 4,
                                     all(n == 4 for n in per_side)))
    # the K3s through a side edge e meet only in e
    others = gs.edges
    caps = []
    for e in sides:
        through = [t - {e} for t in tri_edges if e in t]
        disjoint = all(not (p & q) for i, p in enumerate(through) for q in through[i + 1:])
        best = 0
        # put c-1 and c+1 anywhere in G_S (or nowhere); count K3s through e that see one of them
        slots = [None] + [f for f in others if f != e]
        for lo, hi in product(slots, repeat=2):
            if lo is not None and lo == hi:
                continue
            hosted = sum(1 for t in through if (lo in t) or (hi in t))
            best = max(best, hosted)
        caps.append(best)
        if not disjoint:
            report.notes.append(f"K3s through {e} share an edge besides it")
    cap = max(caps)
    report.claims.append(ClaimResult("obs1.per_edge_cap", len(sides), cap, 2, cap <= 2,
                                     note="maximum K3s through one side edge that can hold a consecutive triple"))
    total = len(sides) * cap
    report.claims.append(ClaimResult("obs1.bound", 1, total, 8, total <= 8))
    report.facts.update({"k3": len(tris), "k3_per_side": per_side, "per_edge_cap": cap, "bound": total})
    return report


# ---------------------------------------------------------------- pigeonhole

STATED_COEFFICIENTS = {
    "x_colors": 1,          # a color of X needs one site (45-degree side of an adjacent pair)
    "slanting_k3": 1,
    "slanting_non_k3": 2,
    "nonslanting_k3": 2,
    "nonslanting_non_k3": 3,
}


def two_unused_demand(x: int, coeff: dict | None = None) -> int:
    """Sites demanded when x slanting colors sit in consecutive K3 triples."""
    q = coeff or STATED_COEFFICIENTS
    return (6 * q["x_colors"] + x * q["slanting_k3"] + (8 - x) * q["slanting_non_k3"]
            + (8 - x) * q["nonslanting_k3"] + (4 + x) * q["nonslanting_non_k3"])


@dataclass
class PigeonholeAudit:
    step: int
    palette_max: int
    unused: tuple[int, ...]
    case: str
    pairs: list[tuple[int, int]]
    demand: int
    holes: int
    demands_by_x: dict[int, int] | None = None
    flags: list[str] = field(default_factory=list)

    @property
    def missing_colors(self) -> int:
        """Colors of G_S that some G_{S_i} must go without (pigeonhole quotient)."""
        return math.ceil(self.demand / self.holes)

    @property
    def implied_lower_bound(self) -> int:
        # G_{S_i} needs 26 distinct colors, so it reaches past G_S's palette
        return 25 + self.missing_colors

    @property
    def contradiction(self) -> bool:
        return self.implied_lower_bound > self.palette_max

    def to_json(self) -> dict:
        out = {
            "step": self.step,
            "palette_max": self.palette_max,
            "unused": list(self.unused),
            "case": self.case,
            "pairs": [list(p) for p in self.pairs],
            "demand": self.demand,
            "holes": self.holes,
            "missing_colors": self.missing_colors,
            "implied_lower_bound": self.implied_lower_bound,
            "contradiction": self.contradiction,
        }
        if self.demands_by_x is not None:
            out["demands_by_x"] = {str(k): v for k, v in self.demands_by_x.items()}
        if self.flags:
            out["flags"] = list(self.flags)
        return out


def _check_pairs(pairs, used) -> None:
    flat = [c for p in pairs for c in p]
    if len(flat) != len(set(flat)) or not set(flat) <= used or any(b != a + 1 for a, b in pairs):
        raise AssertionError(f"pairs {pairs} are not disjoint consecutive used colors")


def pigeonhole_audit(unused_colors=(), palette_max: int = 25, coeff: dict | None = None) -> PigeonholeAudit:
    """Recount the pigeons of the three lower-bound steps for one color pattern.

    G_S always shows 26 distinct colors, so a palette ``0..n`` leaves
    ``n - 25`` of them unused.
    """
    unused = tuple(sorted(set(unused_colors)))
    n = palette_max
    if n not in (25, 26, 27):
        raise ValueError(f"palette_max must be 25, 26 or 27, got {n}")
    if len(unused) != n - 25 or any(not 0 <= c <= n for c in unused):
        raise ValueError(f"with palette 0..{n}, exactly {n - 25} unused colors in range are expected, got {unused}")
    used = set(range(n + 1)) - set(unused)

    if n == 25:
        # any consecutive pair excludes at least one site for one of its colors
        return PigeonholeAudit(1, n, unused, "consecutive-26", [(0, 1)], 1, HOLES)

    if n == 26:
        (cp,) = unused
        if cp in (0, 26) or cp % 2 == 0:
            start = 1 if cp == 0 else 0
            pairs = [(a, a + 1) for a in range(start, 27, 2) if a != cp and a + 1 != cp
                     and a + 1 <= 26]
            if cp not in (0, 26):
                pairs = [(a, a + 1) for a in range(0, cp, 2)] + [(a, a + 1) for a in range(cp + 1, 26, 2)]
            _check_pairs(pairs, used)
            case = "consecutive-26" if cp in (0, 26) else "gap-even"
            return PigeonholeAudit(2, n, unused, case, pairs, 2 * len(pairs), HOLES)
        if cp == 1:
            pairs, extra = [(a, a + 1) for a in range(2, 25, 2)], (25, 26)
        elif cp == 25:
            pairs, extra = [(a, a + 1) for a in range(1, 24, 2)], (0, 1)
        else:
            pairs = [(a, a + 1) for a in range(0, cp - 2, 2)] + [(a, a + 1) for a in range(cp + 1, 25, 2)]
            extra = (25, 26)
        _check_pairs(pairs, used)
        audit = PigeonholeAudit(2, n, unused, "gap-odd", pairs + [extra], 2 * len(pairs) + 1, HOLES)
        audit.flags.append(f"pair {extra} overlaps the partition and contributes one site")
        return audit

    c1, c2 = unused
    xs = {0, c1 - 1, c1 + 1, c2 - 1, c2 + 1, 27}
    by_x = {x: two_unused_demand(x, coeff) for x in range(9)}
    audit = PigeonholeAudit(3, n, unused, "two-unused", [], min(by_x.values()), HOLES, by_x)
    if len(xs) < 6:
        audit.flags.append("colors 0, c1-1, c1+1, c2-1, c2+1, 27 not distinct; "
                           "the larger demand asserted for this case is not recounted")
    audit.flags.append("pigeonhole gives a site with >= ceil(demand/24) demands; that these demands "
                       "concern distinct colors is taken as argued, not rechecked")
    return audit


def pigeonhole_chain(coeff: dict | None = None) -> list[dict]:
    """Worst case of each step 26 -> 27 -> 28, over every admissible unused-color pattern."""
    steps = []
    for n in (25, 26, 27):
        patterns = [()] if n == 25 else (
            [(c,) for c in range(27)] if n == 26 else
            [(a, b) for a in range(28) for b in range(a + 1, 28)])
        audits = [pigeonhole_audit(p, n, coeff) for p in patterns]
        worst = min(audits, key=lambda a: a.demand)
        steps.append({
            "step": worst.step,
            "palette_max": n,
            "patterns": len(audits),
            "min_demand": worst.demand,
            "holes": HOLES,
            "missing_colors": worst.missing_colors,
            "lower_bound": worst.implied_lower_bound,
            "all_contradict": all(a.contradiction for a in audits),
        })
    return steps


def mechanized_coefficients(lemma1: LemmaReport, triples: LemmaReport) -> dict:
    """Two-unused-color coefficients read off the enumerated minima instead of the stated ones."""
    return {
        "x_colors": lemma1.claim("lemma1.45.slanting").min_excluded_found,
        "slanting_k3": triples.claim("triples.slanting-middle.k3").min_excluded_found,
        "slanting_non_k3": triples.claim("triples.slanting-middle.non-k3").min_excluded_found,
        "nonslanting_k3": triples.claim("triples.nonslanting-middle.k3").min_excluded_found,
        "nonslanting_non_k3": triples.claim("triples.nonslanting-middle.non-k3").min_excluded_found,
    }


def check_pigeonhole(coeff: dict | None = None) -> LemmaReport:
    report = LemmaReport("pigeonhole")
    t1 = pigeonhole_audit((), 25, coeff)
    report.claims.append(ClaimResult("step1.demand", 1, t1.demand, 1, t1.demand >= 1 and t1.contradiction))
    first = pigeonhole_audit((26,), 26, coeff)
    report.claims.append(ClaimResult("step2.consecutive.demand", 1, first.demand, 26,
                                     first.demand == 26 and first.contradiction))
    odd = [pigeonhole_audit((c,), 26, coeff) for c in range(1, 26, 2)]
    report.claims.append(ClaimResult("step2.gap-odd.demand", len(odd), min(a.demand for a in odd), 25,
                                     all(a.demand == 25 and a.contradiction for a in odd)))
    even = [pigeonhole_audit((c,), 26, coeff) for c in range(0, 27, 2)]
    report.claims.append(ClaimResult("step2.gap-even.demand", len(even), min(a.demand for a in even), 26,
                                     all(a.demand == 26 and a.contradiction for a in even)))
    t3 = pigeonhole_audit((5, 20), 27, coeff)
    ok = all(d == 50 for d in t3.demands_by_x.values()) and t3.contradiction
    report.claims.append(ClaimResult("step3.demand", 9, min(t3.demands_by_x.values()), 50, ok,
                                     note="demand(x) for x = 0..8 against 24 holes"))
    chain = pigeonhole_chain(coeff)
    report.claims.append(ClaimResult(
        "chain", len(chain), None, None,
        [s["lower_bound"] for s in chain] == [26, 27, 28] and all(s["all_contradict"] for s in chain)))
    report.facts["chain"] = chain
    report.facts["two_unused"] = t3.to_json()
    report.notes.extend(t3.flags)
    return report


def check_structure(central: K4Site = CENTRAL) -> LemmaReport:
    """The structural counts of G_S and G the counting argument rests on."""
    gs, g = build_GS(central), build_G(central)
    report = LemmaReport("structure")
    edges = list(gs)
    max_d = max(edge_distance(a, b) for a in edges for b in edges)
    slant = sum(e.slanting for e in edges)
    sites = enumerate_k4(g)
    full_inside = [s for s in sites if build_GS(s).issubset(g)]

    def fact(cid, found, want):
        report.claims.append(ClaimResult(cid, 1, found, want, found == want))

    fact("gs.edges", len(edges), 26)
    fact("gs.vertices", len(gs.vertices), 16)
    fact("gs.max_edge_distance", max_d, 2)
    fact("gs.slanting", slant, 14)
    fact("gs.nonslanting", len(edges) - slant, 12)
    fact("gs.k3", len(enumerate_k3(gs)), 12)
    fact("gs.k4", len(enumerate_k4(gs)), 1)
    fact("g.k4", len(sites), 25)
    fact("g.k4_other", len([s for s in sites if s != central]), 24)
    report.facts["g_k4_with_gs_inside_g"] = len(full_inside)
    if len(full_inside) != len(sites):
        report.notes.append(f"only {len(full_inside)} of {len(sites)} sites have G_Si inside G")
    return report


CHECKS = {
    "structure": check_structure,
    "lemma1": check_lemma1,
    "triples": check_lemma_triples,
    "obs1": check_observation1,
    "pigeonhole": check_pigeonhole,
}


def run_all(mechanized: bool = True) -> list[LemmaReport]:
    """All checks; the pigeonhole recount uses the enumerated minima when ``mechanized``."""
    structure = check_structure()
    l1 = check_lemma1()
    tr = check_lemma_triples()
    ob = check_observation1()
    coeff = mechanized_coefficients(l1, tr) if mechanized else None
    return [structure, l1, tr, ob, check_pigeonhole(coeff)]
