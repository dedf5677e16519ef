import math
from fractions import Fraction

import pytest

from bolza.graphs import (
    angle_denominator,
    build_arrangement,
    face_census,
    involution_check,
    is_filling,
    is_filling_graph,
    triangle_type_fractions,
    weierstrass_points_on,
)
from bolza.systems import omega1, omega2, second_systoles, systolic_set
from bolza.words import abelianize


def _check_surface(G):
    # genus 2: Euler characteristic -2 and area 4 pi by Gauss-Bonnet
    assert G.V - G.E + G.F == -2
    assert G.area == pytest.approx(4 * math.pi, abs=1e-8)
    assert len(G.corner_sums) == G.V
    assert all(abs(t - 2 * math.pi) < 1e-8 for t in G.corner_sums)
    for f in G.faces:
        assert len(f.angles) == f.size == len(f.lengths)


def test_systolic_arrangement(model):
    G = build_arrangement(systolic_set(model), model)
    assert (G.V, G.E, G.F) == (6, 24, 16)
    _check_surface(G)
    census = face_census(G)
    assert census.triangulation and dict(census.counts) == {(4, 4, 4): 16}


def test_second_systole_arrangement(model):
    G = build_arrangement(second_systoles(model), model)
    assert (G.V, G.E, G.F) == (22, 72, 48)
    _check_surface(G)
    census = face_census(G)
    assert census.triangulation and dict(census.counts) == {(4, 3, 3): 48}
    assert triangle_type_fractions((4, 3, 3)) == (Fraction(1, 4), Fraction(1, 3), Fraction(1, 3))


def test_combined_arrangement(model):
    S = systolic_set(model).union(second_systoles(model), "Both")
    G = build_arrangement(S, model)
    _check_surface(G)
    assert dict(face_census(G).counts) == {(8, 3, 2): G.F}


def test_omega_split(model):
    Sys, O1, O2 = systolic_set(model), omega1(model), omega2(model)
    assert len(O1) == 4 and len(O2) == 8
    assert set(O1.words) | set(O2.words) == set(Sys.words)
    assert not set(O1.words) & set(O2.words)
    G = build_arrangement(O1, model)
    assert (G.V, G.E, G.F) == (4, 8, 2)
    _check_surface(G)
    assert all(f.size == 8 for f in G.faces)
    # every corner of the two octagons is a right angle
    assert all(angle_denominator(a) == 2 for f in G.faces for a in f.angles)


def test_filling(model):
    for S in (systolic_set(model), second_systoles(model), omega1(model), omega2(model)):
        assert is_filling(S, model)
    one = systolic_set(model).subset("one", ["A"])
    G = build_arrangement(one, model, strict=False)
    assert G.degenerate and not is_filling_graph(G)
    two = systolic_set(model).subset("two", ["A", "C"])
    assert not is_filling(two, model)


def test_involution_examples(model, classes8):
    for c in systolic_set(model).classes:
        r = involution_check(c, model)
        assert r.fixed and not r.orientation_preserved and not r.separating
    seps = [c for c in classes8.classes if c.simple and c.separating]
    assert len(seps) == 4
    for c in seps:
        r = involution_check(c, model)
        assert r.consistent and r.orientation_preserved
        assert abelianize(c.word) == (0, 0, 0, 0)


def test_involution_on_all_short_simple_classes(model, classes8):
    assert all(involution_check(c, model).consistent for c in classes8.classes if c.simple)


def test_involution_rejects_non_simple(model, classes8):
    c = next(c for c in classes8.classes if not c.simple)
    with pytest.raises(ValueError):
        involution_check(c, model)


def test_weierstrass_incidence(model, classes8):
    for c in second_systoles(model).classes:
        assert len(weierstrass_points_on(c, model)) == 2
    for c in systolic_set(model).classes:
        assert len(weierstrass_points_on(c, model)) == 2
    for c in classes8.classes:
        if c.simple and c.separating:
            assert weierstrass_points_on(c, model) == []


def test_dot_output(model):
    dot = build_arrangement(omega1(model), model).to_dot()
    assert dot.startswith('graph "Omega1" {') and dot.endswith("}\n")
    assert dot.count(" -- ") == 8
    assert "-0.000000" not in dot
    assert dot == build_arrangement(omega1(model), model).to_dot()
