import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bolza.group import GENERATORS
from bolza.hyp import (
    DomainError,
    Geodesic,
    Isometry,
    PrecisionError,
    apply,
    axis,
    classify,
    clip_to_polygon,
    compose,
    distance,
    geodesic_cross,
    interleaved,
    point_at_distance,
    translation_length,
)
from bolza.numeric import NumericError

from conftest import L1, L2, SQRT2

angles = st.floats(0, 2 * math.pi, allow_nan=False, exclude_max=True)
radii = st.floats(0, 0.95)


@st.composite
def isometries(draw):
    p = draw(radii) * cmath.exp(1j * draw(angles))
    return Isometry.translation_to(p) @ Isometry.rotation(draw(angles))


@st.composite
def points(draw):
    return draw(radii) * cmath.exp(1j * draw(angles))


def g(code=0):
    return GENERATORS[code].isometry()


# -- compose / apply / classify ------------------------------------------------


def test_compose_identity_and_inverse():
    I = Isometry.identity()
    assert compose(I, g()).close_to(g(), 1e-12)
    assert compose(g(), g().inverse()).close_to(I, 1e-12)


def test_compose_square_trace_follows_tr2_rule():
    t = g().trace.real
    sq = compose(g(), g())
    # a^2-normalised trace rule for unit determinant: tr(g^2) = tr(g)^2 - 2
    assert sq.trace.real == pytest.approx(t * t - 2, rel=1e-12)
    a, b = g().a, g().b
    direct = a * a + b * b.conjugate()
    assert sq.a == pytest.approx(direct, rel=1e-12)


def test_compose_detects_drift():
    bad = Isometry(g().a * (1 + 1e-6), g().b)
    with pytest.raises(NumericError):
        compose(bad, g())


def test_apply_examples():
    assert apply(Isometry.identity(), 0j) == 0
    J = Isometry.rotation(math.pi)
    z = 0.3 - 0.2j
    assert apply(J, z) == pytest.approx(-z)
    with mpmath.workdps(40):
        want = mpmath.sqrt(2 + 2 * mpmath.sqrt(2)) / (1 + mpmath.sqrt(2))
    assert apply(g(), 0j) == pytest.approx(complex(want), abs=1e-14)


def test_apply_rejects_boundary_images():
    far = Isometry.translation_to(1 - 1e-13 + 0j)
    with pytest.raises(PrecisionError):
        apply(far, 0j)


def test_classify_trichotomy():
    assert classify(Isometry.identity()) == "identity"
    assert classify(g()) == "hyperbolic"
    assert classify(Isometry.rotation(math.pi / 4)) == "elliptic"
    # z -> parabolic fixing 1
    par = Isometry(1 + 0.5j, 0.5j)
    assert classify(par) == "parabolic"


def test_translation_length():
    assert translation_length(g()) == pytest.approx(L1, abs=1e-12)
    assert translation_length(g() @ g()) == pytest.approx(2 * L1, abs=1e-11)
    with pytest.raises(DomainError):
        translation_length(Isometry.rotation(1.0))


def test_translation_length_second_systole_word():
    from bolza.group import word_elem
    from bolza.words import parse

    h = word_elem(parse("AbCD")).isometry()
    assert translation_length(h) == pytest.approx(L2, abs=1e-11)


def test_axis_of_g0_is_real_diameter():
    u = axis(g())
    assert (u.t1, u.t2) == pytest.approx((0.0, math.pi), abs=1e-12)
    v = axis(g().inverse())
    assert v.same_as(u, 1e-12)


@given(isometries())
def test_axis_equivariance(h):
    conj = h @ g(2) @ h.inverse()
    assert axis(conj).same_as(axis(g(2)).image(h), 1e-8)


# -- distance ------------------------------------------------------------------


def test_distance_examples(model):
    assert distance(0j, 0j) == 0
    for t, th in [(0.5, 0.0), (3.0, 1.0), (7.0, 4.0)]:
        assert distance(0j, point_at_distance(t, th)) == pytest.approx(t, rel=1e-10)
    assert distance(0j, complex(model.vertices[0])) == pytest.approx(math.acosh(3 + 2 * SQRT2), abs=1e-12)


@given(isometries(), points(), points())
def test_metric_preservation(f, p, q):
    assert abs(distance(f(p), f(q)) - distance(p, q)) < 1e-9 * max(1.0, distance(p, q))


@given(isometries())
def test_trace_conjugacy_invariance(h):
    conj = h @ g(4) @ h.inverse()
    assert abs(conj.trace - g(4).trace) < 1e-9


# -- crossings -------------------------------------------------------------------


def test_cross_diameters():
    u = Geodesic.from_angles(0, math.pi)
    v = Geodesic.from_angles(math.pi / 2, 3 * math.pi / 2)
    p, angle = geodesic_cross(u, v)
    assert abs(p) < 1e-12
    assert angle == pytest.approx(math.pi / 2)


def test_cross_rejects_equal_geodesics():
    u = Geodesic.from_angles(0.3, 2.0)
    with pytest.raises(ValueError):
        geodesic_cross(u, u)


def _circle(u: Geodesic):
    """Euclidean centre and radius of the geodesic's carrier circle."""
    mid = (u.t1 + u.t2) / 2
    half = (u.t2 - u.t1) / 2
    return cmath.exp(1j * mid) / math.cos(half), abs(math.tan(half))


def _circle_oracle(u: Geodesic, v: Geodesic):
    # inside the disc, circle-circle intersection in mpmath
    with mpmath.workdps(50):
        c1, r1 = _circle(u)
        c2, r2 = _circle(v)
        c1, c2 = mpmath.mpc(c1), mpmath.mpc(c2)
        d = abs(c2 - c1)
        if d > r1 + r2 or d < abs(r1 - r2):
            return None
        a = (r1 ** 2 - r2 ** 2 + d ** 2) / (2 * d)
        h = mpmath.sqrt(max(r1 ** 2 - a ** 2, 0))
        base = c1 + a * (c2 - c1) / d
        off = 1j * h * (c2 - c1) / d
        for z in (base + off, base - off):
            if abs(z) < 1:
                return complex(z)
    return None


def test_cross_generator_axes_against_circle_oracle():
    u, v = axis(g(0)), axis(g(2))
    hit = geodesic_cross(u, v)
    # the axes of g0 and g1 are diameters, perpendicular at the centre
    assert hit is not None and abs(hit[0]) < 1e-12
    u, v = axis(g(0)), axis(g(2) @ g(0) @ g(2).inverse())
    hit = geodesic_cross(u, v)
    want = _circle_oracle(u, v)
    assert (hit is None) == (want is None)
    if hit:
        assert hit[0] == pytest.approx(want, abs=1e-10)


def test_interleaving_agrees_with_circle_intersection():
    rng = np.random.default_rng(7)
    disagreements = 0
    for _ in range(10_000):
        a, b, c, d = rng.uniform(0, 2 * math.pi, 4)
        if min(abs(a - b), abs(c - d)) < 1e-3 or abs(abs(a - b) - math.pi) < 1e-3 or abs(abs(c - d) - math.pi) < 1e-3:
            continue
        u, v = Geodesic.from_angles(a, b), Geodesic.from_angles(c, d)
        if min(abs(x - y) for x in (u.t1, u.t2) for y in (v.t1, v.t2)) < 1e-6:
            continue
        disagreements += interleaved(u, v) != (_fast_circle_test(u, v))
    assert disagreements == 0


def _fast_circle_test(u, v):
    c1, r1 = _circle(u)
    c2, r2 = _circle(v)
    d = abs(c2 - c1)
    # orthogonal circles to the unit circle meet inside the disc iff they meet at all
    return abs(r1 - r2) < d < r1 + r2


@given(isometries(), angles, angles, angles, angles)
def test_crossing_equivariance(h, a, b, c, d):
    try:
        u, v = Geodesic.from_angles(a, b), Geodesic.from_angles(c, d)
    except ValueError:
        return
    if min(abs(x - y) for x in (u.t1, u.t2) for y in (v.t1, v.t2)) < 1e-3:
        return
    try:
        hit = geodesic_cross(u, v)
        img = geodesic_cross(u.image(h), v.image(h))
    except PrecisionError:
        return
    assert (hit is None) == (img is None)
    if hit is not None and abs(hit[0]) < 0.99:
        assert abs(h(hit[0]) - img[0]) < 1e-9 / (1 - abs(img[0])) ** 2


# -- clipping ----------------------------------------------------------------------


def test_clip_diameter_to_octagon(model):
    seg = clip_to_polygon(Geodesic.from_angles(0, math.pi), model.vertices)
    ends = sorted([seg.p, seg.q], key=lambda z: z.real)
    assert ends[0] == pytest.approx(complex(model.midpoints[4]), abs=1e-12)
    assert ends[1] == pytest.approx(complex(model.midpoints[0]), abs=1e-12)
    assert not seg.vertex_p and not seg.vertex_q


def test_clip_disjoint_is_none(model):
    u = Geodesic.from_angles(0.1, 0.2)
    assert clip_to_polygon(u, model.vertices) is None


def test_clip_diagonal_joins_opposite_vertices(model):
    v0 = complex(model.vertices[0])
    u = Geodesic.from_angles(cmath.phase(v0), cmath.phase(v0) + math.pi)
    seg = clip_to_polygon(u, model.vertices)
    assert seg.vertex_p and seg.vertex_q
    assert seg.length == pytest.approx(L2, abs=1e-9)
