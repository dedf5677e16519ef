import math

import pytest

from bolza.group import Elem, ball, word_elem
from bolza.quadint import QuadInt, SnapError
from bolza.simple import enumerate_simple_classes
from bolza.spectrum import (
    IncompleteEnumerationError,
    class_from_elem,
    enumerate_classes,
    length_spectrum,
    self_intersection,
    snap_trace,
)
from bolza.words import parse

from conftest import L1, L2
from oracles import brute_self_intersections


def test_below_the_systole_is_empty(model):
    assert len(enumerate_classes(1.0, model)) == 0
    with pytest.raises(ValueError):
        enumerate_classes(0.0, model)


def test_systoles(model):
    en = enumerate_classes(3.06, model)
    assert len(en) == 12 and en.certified
    for c in en.classes:
        assert c.simple and c.primitive
        assert float(c.length) == pytest.approx(L1, abs=1e-9)
        assert c.trace_exact == QuadInt(2, 2)
        assert c.separating is False


def test_census_to_4_9(model):
    en = enumerate_classes(4.9, model)
    simple = [c for c in en.classes if c.simple]
    assert len(simple) == 24
    assert sorted({round(float(c.length), 9) for c in simple}) == [round(L1, 9), round(L2, 9)]
    # every primitive class to 4.9 is simple; the brute-force ball below agrees
    assert len(en.classes) == 24


def test_census_brute_force_oracle(model):
    # exhaustive: conjugacy classes of all elements in a large ball whose
    # axis meets the octagon, keyed geometrically
    en = enumerate_classes(4.9, model)
    rows = ball(4.9 / 2 + 2 * float(model.circumradius) + 2.0)
    found = set()
    for row in rows:
        g = Elem(tuple(int(v) for v in row))
        if g.is_identity() or abs(float(g.trace)) <= 2 or abs(float(g.trace)) > 2 * math.cosh(4.9 / 2) + 1e-9:
            continue
        found.add(class_from_elem(g, model, with_self=False).key)
    prim = {k for k in found if len(k.word) == len(set([k.word[i:] + k.word[:i] for i in range(len(k.word))]))}
    assert prim == {c.key for c in en.classes}


def test_saturation_certificate(model):
    for L in (5.0, 7.0, 9.0):
        assert enumerate_classes(L, model, with_self=False).certified


def test_saturation_failure_raises(model, monkeypatch):
    import bolza.spectrum as S

    # a radius of 2 sees no generator; raising it to 4 does
    monkeypatch.setattr(S, "search_radius", lambda L: 2.0)
    with pytest.raises(IncompleteEnumerationError):
        S.enumerate_classes(6.0, model, with_self=False)


def test_length_spectrum_rows(model):
    t = length_spectrum(5.0, model)
    assert t.certified
    l1, l2 = t.row("l1"), t.row("l2")
    assert l1.length == pytest.approx(L1, abs=1e-9) and l1.trace == QuadInt(2, 2) and l1.mult_simple == 12
    assert l2.length == pytest.approx(L2, abs=1e-9) and l2.trace == QuadInt(6, 4) and l2.mult_simple == 12
    lengths = [r.length for r in t.rows]
    assert lengths == sorted(lengths) and len(set(lengths)) == len(lengths)
    assert not [x for x in t.simple_lengths() if L1 + 1e-9 < x < L2 - 1e-9]


def test_spectrum_gap(classes8):
    lengths = [float(c.length) for c in classes8.classes]
    assert min(lengths) == pytest.approx(L1, abs=1e-9)
    nonsys = [float(c.length) for c in classes8.classes if c.simple and c.trace_exact != QuadInt(2, 2)]
    assert min(nonsys) == pytest.approx(L2, abs=1e-9)


def test_snap_examples():
    assert snap_trace(4.8284271247) == QuadInt(2, 2)
    assert snap_trace(11.6568542494) == QuadInt(6, 4)
    assert snap_trace(0.0) == QuadInt(0, 0)
    with pytest.raises(SnapError):
        snap_trace(2e6)


def test_isometry_closure_of_class_set(model, classes8):
    keys = {c.key for c in classes8.classes}
    for c in classes8.classes:
        for img in (c.elem.conjugate_by_rotation(1), c.elem.conjugate_by_half_turn(),
                    model.conjugate_word(model.L_images, c.word)):
            assert class_from_elem(img, model, with_self=False).key in keys


def test_self_intersection_is_isometry_invariant(model, classes8):
    for c in classes8.classes[::3]:
        for img in (c.elem.conjugate_by_rotation(1), model.conjugate_word(model.L_images, c.word)):
            d = class_from_elem(img, model)
            assert d.self_intersections == c.self_intersections


def test_simple_sweep_matches_full_enumeration(model, classes8):
    sweep = enumerate_simple_classes(8.0, model)
    assert sweep.certified
    assert {c.key for c in sweep.classes} == {c.key for c in classes8.classes if c.simple}


@pytest.mark.parametrize("word", ["AbA", "ABc", "ABD", "AB", "AbCD", "ABcd"])
def test_self_intersection_against_brute_force(model, word):
    c = class_from_elem(word_elem(parse(word)), model)
    assert self_intersection(c, model) == brute_self_intersections(c.elem, seed=len(word))


def test_self_intersection_examples(model):
    from bolza.systems import second_systoles, systolic_set

    assert all(self_intersection(c, model) == 0 for c in systolic_set(model).classes)
    assert all(self_intersection(c, model) == 0 for c in second_systoles(model).classes)


def test_high_precision_self_intersections(high_model, classes8):
    for c in classes8.classes[::9]:
        d = class_from_elem(word_elem(c.word), high_model)
        assert d.key == c.key and d.self_intersections == c.self_intersections
