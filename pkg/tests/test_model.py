import cmath
import math

import numpy as np
import pytest

from bolza.group import GENERATORS, Elem, generator, word_elem
from bolza.hyp import Isometry, distance
from bolza.model import BolzaModel, ConstructionError, find_relator, relator
from bolza.quadint import QuadInt
from bolza.words import abelianize, enumerate_words

from conftest import L1, L2, SQRT2


def test_generator_determinant_exact():
    for k in range(4):
        g = generator(k)
        # |a|^2 - |b|^2 in exact arithmetic: a real, a^2 - alpha^2 |beta|^2
        iso = g.isometry()
        assert abs(iso.det - 1) < 1e-14
    # (1+sqrt2)^2 - (2+2sqrt2) = 1 in Z[sqrt 2]
    assert QuadInt(1, 1) * QuadInt(1, 1) - QuadInt(2, 2) == QuadInt(1, 0)


def test_generator_traces():
    for code in range(8):
        assert GENERATORS[code].trace == QuadInt(2, 2)


def test_relator_found_by_search_and_trivial(model):
    r = relator()
    assert len(r) == 8
    assert sorted(c // 2 for c in r) == [0, 0, 1, 1, 2, 2, 3, 3]
    assert word_elem(r).is_identity()
    assert model.relator_residual() < 1e-10
    assert find_relator() == r
    assert abelianize(r) == (0, 0, 0, 0)


def test_relator_high_precision(high_model):
    assert high_model.relator_residual() < 1e-30


def test_rotation_conjugates_generators(model):
    R = model.R
    for k in range(3):
        assert (R @ model.gens[2 * k] @ R.inverse()).close_to(model.gens[2 * k + 2], 1e-12)
    assert (R @ model.gens[6] @ R.inverse()).close_to(model.gens[1], 1e-12)


def test_half_turn_inverts_generators(model):
    J = model.J
    for k in range(4):
        assert (J @ model.gens[2 * k] @ J.inverse()).close_to(model.gens[2 * k + 1], 1e-12)


def test_octagon_geometry(model):
    vs = [complex(v) for v in model.vertices]
    for j in range(8):
        p, q, r = vs[j - 1], vs[j], vs[(j + 1) % 8]
        # angle between the geodesic sides at q, via tangent directions
        t1 = _tangent(q, p)
        t2 = _tangent(q, r)
        ang = abs(cmath.phase(t2 / t1))
        assert ang == pytest.approx(math.pi / 4, abs=1e-9)
        assert distance(q, r) == pytest.approx(L1, abs=1e-9)
    assert distance(vs[0], vs[4]) == pytest.approx(L2, abs=1e-9)
    assert abs(vs[0]) == pytest.approx(math.tanh(math.acosh(3 + 2 * SQRT2) / 2), abs=1e-14)


def _tangent(p, q):
    """Unit tangent at p of the geodesic from p to q."""
    t = Isometry.translation_to(p)
    w = t.inverse()(q)
    return t.derivative(0j) * w / abs(w)


def test_side_pairing_maps_opposite_sides(model):
    for k in range(4):
        g = model.gens[2 * k]
        mids = [complex(m) for m in model.midpoints]
        img = complex(g.apply_boundary(mids[(k + 4) % 8]))
        assert min(abs(img - m) for m in mids) < 1e-9


def test_sabotaged_generator_rejected(monkeypatch):
    import bolza.model as M

    bad = list(GENERATORS)
    g = bad[0]
    a = tuple(x + (1 if i == 0 else 0) for i, x in enumerate(g.a))
    bad[0] = Elem.make(a, g.beta)
    monkeypatch.setattr(M, "GENERATORS", tuple(bad))
    with pytest.raises(ConstructionError):
        BolzaModel()


def test_reduce_examples(model):
    z, w = model.reduce_to_domain(0j)
    assert z == 0 and w.is_identity()
    z, w = model.reduce_to_domain(model.gens[0](0j))
    assert abs(z) < 1e-12
    assert w == GENERATORS[1]


def test_tiling_soundness(model):
    rng = np.random.default_rng(3)
    for _ in range(1000):
        p = 0.99 * rng.uniform() ** 0.5 * cmath.exp(2j * math.pi * rng.uniform())
        q, w = model.reduce_to_domain(p)
        assert model.in_domain(q, slack=1e-9)
        assert abs(w.isometry()(p) - q) < 1e-9
    _orbit_check(model, rng, 2, 1e-9, 300)


def test_tiling_soundness_word_length_8(high_model):
    # a word of length 8 moves p about 19 units out; double precision cannot
    # resolve 1e-9 there, so this runs at 128 bits
    _orbit_check(high_model, np.random.default_rng(4), 4, 1e-20, 60)


def _orbit_check(model, rng, half, tol, n):
    words = list(enumerate_words(half))
    num = model.num
    for _ in range(n):
        p = num.c(complex(0.6 * rng.uniform() * cmath.exp(2j * math.pi * rng.uniform())))
        word = words[int(rng.integers(len(words)))] + words[int(rng.integers(len(words)))]
        h = word_elem(word).isometry(num)
        a, _ = model.canonical_point(h(p))
        b, _ = model.canonical_point(p)
        assert abs(a - b) < tol


def test_deep_point_reduces_within_circumradius(model):
    p = math.tanh(5.0) * cmath.exp(0.7j)
    q, _ = model.reduce_to_domain(p)
    assert distance(0j, q) <= math.acosh(3 + 2 * SQRT2) + 1e-9


def test_vertices_are_one_point(model):
    pts = {model.canonical_point(v)[0] for v in model.vertices}
    first = next(iter(pts))
    assert all(abs(p - first) < 1e-9 for p in pts)


def test_special_isometry_orders(model):
    I = Isometry.identity()
    assert model.R.power(8).close_to(I, 1e-12)
    assert model.L.power(3).close_to(I, 1e-12)
    assert model.J.power(2).close_to(I, 1e-12)
    assert model.J(0.3 + 0.1j) == pytest.approx(-(0.3 + 0.1j))
    assert len(model.isometry_group) == 48


def test_L_normalises_the_group(model):
    for img in model.L_images:
        assert isinstance(img, Elem) and not img.is_identity()


def test_weierstrass_points(model):
    W = model.weierstrass_points()
    assert len(W) == 6
    keys = {(round(complex(q).real, 7), round(complex(q).imag, 7)) for q in (model.canonical_point(p)[0] for p in W)}
    assert len(keys) == 6
    for p in W:
        q, _ = model.canonical_point(model.J(p))
        r, _ = model.canonical_point(p)
        assert abs(q - r) < 1e-9
    m0, m4 = complex(model.midpoints[0]), complex(model.midpoints[4])
    assert model.J(m0) == pytest.approx(m4)
    assert abs(model.canonical_point(m0)[0] - model.canonical_point(m4)[0]) < 1e-9


def test_trace_exactness_short_words(model):
    for w in enumerate_words(4):
        e = word_elem(w)
        fl = abs(e.isometry().trace.real)
        assert abs(fl - abs(float(e.trace))) < 1e-9 * max(1, fl)
