"""Counting checks of the lower-bound argument.

Named sites use the figure coordinates in ``lemmas.FIGURE``: v1..v4 are the
central square (v1 at the origin), u1..u12 and w1..w20 the two rings.
"""

import random
from fractions import Fraction

import pytest

from octagrid.grid import Edge, EdgeClass, Vertex
from octagrid.labeling import Labeling, verify
from octagrid.lemmas import (
    CENTRAL, LEMMA1_MINIMA, STATED_COEFFICIENTS, TRIPLE_MINIMA, ExclusionScenario, candidate_sites,
    check_lemma1, check_lemma_triples, check_observation1, check_pigeonhole, check_structure,
    excluded_k4s, fig_edge, fig_site, mechanized_coefficients, pigeonhole_audit, pigeonhole_chain,
    two_unused_demand,
)
from octagrid.packing import (
    capacity, check_packing, footprint, min_pair_area, min_single_area, packing_lower_bound,
    unit_footprint,
)
from octagrid.subgraph import build_GS

C = 10


def oracle_excluded(scenario: ExclusionScenario, color: int):
    """Exclusion straight from the definition: try ``color`` on each free edge of each G_Si."""
    partial = dict(scenario.labeled_edges)
    out = []
    for site in candidate_sites(scenario.central_site):
        gs = list(build_GS(site))
        if any(partial.get(e) == color for e in gs):
            continue
        usable = False
        for e in gs:
            if e in partial:
                continue
            trial = Labeling({**partial, e: color})
            if verify(list(trial.assignment), trial).ok:
                usable = True
                break
        if not usable:
            out.append(site)
    return set(out)


def scenario(*pairs):
    return ExclusionScenario(CENTRAL, tuple((fig_edge(*e), c) for e, c in pairs), "named")


def sites(*names):
    return {fig_site(*n) for n in names}


# (edge carrying c, edge carrying c+1, sites excluded for c, sites excluded for c+1)
NAMED_PAIRS = {
    "180 horizontal": (("v1", "v2"), ("v2", "u6"),
                       [("u5", "u6", "w8", "w9"), ("u6", "u7", "w9", "w10")],
                       [("v1", "v4", "u11", "u12"), ("v1", "u9", "u10", "u11")]),
    "180 slanting": (("v1", "v3"), ("v1", "u10"),
                     [("u10", "w15", "w16", "w17"), ("u9", "u10", "w14", "w15"), ("u10", "u11", "w17", "w18")],
                     [("v3", "v4", "u2", "u3"), ("v3", "u3", "u4", "u5"), ("v2", "v3", "u5", "u6")]),
    "135": (("v1", "v2"), ("v2", "u5"),
            [("v3", "u3", "u4", "u5"), ("u4", "u5", "w7", "w8"), ("u5", "u6", "w8", "w9")],
            [("v1", "v4", "u11", "u12"), ("v1", "u9", "u10", "u11")]),
    "90 horizontal-vertical": (("v1", "v2"), ("v2", "v3"),
                               [("v3", "v4", "u2", "u3"), ("v3", "u3", "u4", "u5")],
                               [("v1", "v4", "u11", "u12"), ("v1", "u9", "u10", "u11")]),
    "90 slanting": (("v1", "v3"), ("v1", "u12"),
                    [("u1", "u12", "w19", "w20"), ("u1", "u2", "u12", "v4"), ("u11", "u12", "w18", "w19")],
                    [("v3", "v4", "u2", "u3"), ("v3", "u3", "u4", "u5"), ("v2", "v3", "u5", "u6")]),
    "45": (("v1", "v2"), ("v2", "v4"),
           [("v4", "u1", "u2", "u12"), ("v3", "v4", "u2", "u3")],
           [("v1", "u9", "u10", "u11")]),
}


@pytest.mark.parametrize("name", NAMED_PAIRS)
def test_named_pair_exclusions(name):
    e_lo, e_hi, want_lo, want_hi = NAMED_PAIRS[name]
    sc = scenario((e_lo, C), (e_hi, C + 1))
    assert set(excluded_k4s(sc, C)) == sites(*want_lo)
    assert set(excluded_k4s(sc, C + 1)) == sites(*want_hi)


@pytest.mark.parametrize("edges,want", [
    # slanting middle inside a K3
    ((("v1", "v2"), ("v1", "v3"), ("v2", "v3")), [("v2", "u6", "u7", "u8")]),
    # slanting middle, partners not forming a K3
    ((("v1", "v4"), ("v1", "v3"), ("v2", "v3")), [("v4", "u1", "u2", "u12"), ("v2", "u6", "u7", "u8")]),
    # non-slanting middle inside a K3
    ((("v1", "v2"), ("v2", "v3"), ("v1", "v3")), [("v1", "u9", "u10", "u11"), ("v1", "v4", "u11", "u12")]),
])
def test_named_triple_exclusions(edges, want):
    lo, mid, hi = edges
    sc = scenario((lo, C - 1), (mid, C), (hi, C + 1))
    assert sites(*want) <= set(excluded_k4s(sc, C))


def test_exclusion_matches_oracle_on_random_scenarios():
    rng = random.Random(2024)
    gs = list(build_GS(CENTRAL))
    for trial in range(25):
        edges = rng.sample(gs, 3)
        colors = [C - 1, C, C + 1]
        lab = Labeling(dict(zip(edges, colors)))
        if not verify(edges, lab).ok:
            continue
        sc = ExclusionScenario(CENTRAL, tuple(zip(edges, colors)), "random")
        for color in colors:
            assert set(excluded_k4s(sc, color)) == oracle_excluded(sc, color)


def test_exclusion_is_translation_invariant():
    moved = CENTRAL.shift(4, -3)
    a, b = fig_edge("v1", "v2"), fig_edge("v2", "u6")
    sc0 = ExclusionScenario(CENTRAL, ((a, C), (b, C + 1)), "x")
    sc1 = ExclusionScenario(moved, ((a.shift(4, -3), C), (b.shift(4, -3), C + 1)), "x")
    assert {s.shift(4, -3) for s in excluded_k4s(sc0, C)} == set(excluded_k4s(sc1, C))


def test_structure_report():
    rep = check_structure()
    assert rep.passed, [c for c in rep.claims if not c.passed]
    assert rep.claim("gs.edges").min_excluded_found == 26
    assert rep.claim("g.k4_other").min_excluded_found == 24


def test_lemma1_minima():
    rep = check_lemma1()
    assert rep.passed
    for (case, side), need in LEMMA1_MINIMA.items():
        assert rep.claim(f"lemma1.{case}.{side}").min_excluded_found >= need
    # 6 angular cases, every adjacent pair of G_S seen in both orders
    assert len(rep.facts["cases"]) == 6


def test_triples_minima():
    rep = check_lemma_triples()
    assert rep.passed
    for tag, need in TRIPLE_MINIMA.items():
        assert rep.claim(f"triples.{tag}").min_excluded_found >= need


def test_observation1():
    rep = check_observation1()
    assert rep.passed
    assert rep.facts["k3"] == 12 and rep.facts["k3_per_side"] == [4, 4, 4, 4]
    assert rep.facts["bound"] <= 8


@pytest.mark.parametrize("x", range(9))
def test_two_unused_demand_is_50(x):
    assert two_unused_demand(x) == 50


def test_pigeonhole_audits():
    assert pigeonhole_audit((26,), 26).demand == 26
    assert pigeonhole_audit((0,), 26).demand == 26
    assert {pigeonhole_audit((c,), 26).demand for c in range(1, 26, 2)} == {25}
    t3 = pigeonhole_audit((5, 20), 27)
    assert t3.holes == 24 and t3.missing_colors == 3 and t3.implied_lower_bound == 28
    with pytest.raises(ValueError):
        pigeonhole_audit((1, 2), 26)


def test_chain_26_27_28():
    chain = pigeonhole_chain()
    assert [s["lower_bound"] for s in chain] == [26, 27, 28]
    assert all(s["all_contradict"] for s in chain)
    assert check_pigeonhole().passed


def test_mechanized_coefficients_reproduce_the_stated_ones():
    coeff = mechanized_coefficients(check_lemma1(), check_lemma_triples())
    assert all(coeff[k] >= v for k, v in STATED_COEFFICIENTS.items())
    assert check_pigeonhole(coeff).passed


# ---------------------------------------------------------------- area bound

def test_footprint_of_a_vertex_is_four_cells():
    assert footprint([Vertex(0, 0)]) == {(-1, -1), (0, -1), (-1, 0), (0, 0)}


def test_unit_areas():
    assert len(unit_footprint([Edge.at((0, 0), EdgeClass.H)])) == 6
    assert len(unit_footprint([Edge.at((0, 0), EdgeClass.R)])) == 7
    assert min_single_area() == 6
    # a horizontal edge and a diagonal at 45 degrees cover three vertices in an L
    assert min_pair_area() == 8


def test_area_bound_rules_out_span_28():
    rep = check_packing(28)
    assert rep.passed
    assert rep.facts["capacity_at_28"] == "11/3"
    assert packing_lower_bound() == 31
    assert capacity(30, Fraction(1, 6), Fraction(1, 4)) < 4 <= capacity(31, Fraction(1, 6), Fraction(1, 4))
