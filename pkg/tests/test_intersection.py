import math

import pytest

from bolza.group import word_elem
from bolza.intersection import (
    SYSTOLE_HALF,
    complexity_table,
    intersection_number,
    intersection_with_system,
    lift_count,
    pairwise_matrix,
    system_counts,
    system_record,
    systolic_vertices,
)
from bolza.spectrum import class_from_elem
from bolza.systems import omega1, omega2, second_systoles, systolic_set
from bolza.words import parse

from oracles import brute_crossings


def C(word, model):
    return class_from_elem(word_elem(parse(word)), model)


def test_systole_pairwise_matrix(model):
    M = pairwise_matrix(systolic_set(model).classes, model)
    for i, row in enumerate(M):
        assert row[i] == 0
        assert sorted(row) == [0] * 6 + [1] * 6
        assert all(M[j][i] == row[j] for j in range(12))


def test_second_systole_pairwise_matrix(model):
    M = pairwise_matrix(second_systoles(model).classes, model)
    for i, row in enumerate(M):
        assert set(row) <= {0, 2}
        assert all(M[j][i] == row[j] for j in range(12))


def test_systolic_graph_has_six_vertices(model):
    assert len(systolic_vertices(model)) == 6


@pytest.mark.parametrize("a,b", [("A", "B"), ("A", "C"), ("AC", "BD"), ("ABc", "AbCD"), ("ABcd", "Ab")])
def test_pair_counts_against_brute_force(model, a, b):
    got = intersection_number(C(a, model), C(b, model), model, with_points=False).count
    assert got == brute_crossings(C(a, model).elem, C(b, model).elem, seed=len(a + b))
    assert got == intersection_number(C(b, model), C(a, model), model, with_points=False).count


def test_symmetry_on_second_systoles_against_sys(model):
    for c in second_systoles(model).classes:
        for s in systolic_set(model).classes:
            assert intersection_number(c, s, model, False).count == intersection_number(s, c, model, False).count


def test_isometry_invariance(model):
    a, b = C("AC", model), C("ABcd", model)
    n = intersection_number(a, b, model, False).count
    for img in (lambda c: c.elem.conjugate_by_rotation(1), lambda c: c.elem.conjugate_by_half_turn(),
                lambda c: model.conjugate_word(model.L_images, c.word)):
        ia, ib = class_from_elem(img(a), model), class_from_elem(img(b), model)
        assert intersection_number(ia, ib, model, False).count == n


def test_equal_classes_rejected(model):
    with pytest.raises(ValueError):
        intersection_number(C("A", model), C("a", model), model)
    with pytest.raises(ValueError):
        intersection_with_system(C("A", model), systolic_set(model), model)


def test_diagonals_through_the_centre(model):
    # two of the second systoles that cross at the centre also share the
    # Weierstrass point at the octagon's vertex, so they meet twice
    rec = intersection_number(C("ABcD", model), C("AbCD", model), model)
    assert rec.count == 2
    assert min(abs(x.point) for x in rec.crossings) < 1e-9
    assert all(x.vertex for x in rec.crossings)


def test_second_systoles_against_sys_and_omega1(model):
    Sys, O1, O2 = systolic_set(model), omega1(model), omega2(model)
    for c in second_systoles(model).classes:
        assert intersection_with_system(c, Sys, model) == 10
        a = intersection_with_system(c, O1, model)
        assert a % 2 == 0 and a >= 2
        assert a + intersection_with_system(c, O2, model) == 10


def test_system_record_lists_every_crossing(model):
    c = C("AC", model)
    rec = system_record(c, systolic_set(model), model)
    assert rec.count == 10 == len(rec.crossings)
    assert sum(r.count for r in system_counts(c, systolic_set(model), model)) == 10


def test_lift_count_agrees_with_frame_count(model, classes8):
    Sys, SS = systolic_set(model), second_systoles(model)
    for c in classes8.classes[::2]:
        for S in (Sys, SS):
            if c in S:
                continue
            assert lift_count(c, S, model) == intersection_with_system(c, S, model), c.name


def test_length_bound_from_crossings(model, classes8):
    # a simple curve with k crossings against Sys has length at most k * SYSTOLE_HALF
    Sys = systolic_set(model)
    for c in classes8.classes:
        if c.simple and c not in Sys:
            assert float(c.length) <= intersection_with_system(c, Sys, model) * SYSTOLE_HALF + 1e-9
    assert SYSTOLE_HALF == pytest.approx(math.acosh(1 + math.sqrt(2)))


def test_complexity_table_small_k(model):
    rows = complexity_table(6, model)
    assert [r.k for r in rows] == list(range(1, 7))
    assert all(r.T_k == 0 and r.certified for r in rows)


def test_complexity_table_cap(model):
    with pytest.raises(ValueError):
        complexity_table(0, model)
    with pytest.raises(ValueError):
        complexity_table(13, model)
