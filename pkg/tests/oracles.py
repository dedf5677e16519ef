"""Brute-force references used by several test modules."""

import math

import numpy as np

from bolza.group import Elem, ball
from bolza.hyp import Frame, axis_endpoints


def _dist_to_axis(fr) -> float:
    w = fr(0j)
    # distance in the upper half-plane from w to the imaginary axis
    return math.asinh(abs(w.real) / w.imag)


def brute_crossings(g: Elem, h: Elem, seed: int = 0) -> int:
    """Lifts of the axis of h crossing one period of the axis of g, starting
    from a random basepoint.  Every translate of the axis of h by a ball
    element is examined, deduplicated by endpoints."""
    iso = g.isometry()
    e1, e2 = axis_endpoints(iso)
    f1, f2 = axis_endpoints(h.isometry())
    fr = Frame(e1, e2)
    ell = 2 * math.acosh(abs(iso.trace.real) / 2)
    centre = math.log(abs(fr(0j)))
    rng = np.random.default_rng(seed)
    t0 = centre + rng.uniform(-ell / 4, ell / 4) - ell / 2
    # a crossing at distance <= r0 + 3l/4 from 0 comes from a lift of h's axis
    # h'.A, with the point h'^-1 x within the near part of A
    r_h = _dist_to_axis(Frame(f1, f2))
    ell_h = 2 * math.acosh(abs(h.isometry().trace.real) / 2)
    radius = _dist_to_axis(fr) + 0.75 * ell + r_h + 0.5 * ell_h + 0.5
    seen = set()
    hits = 0
    for row in ball(radius):
        m = Elem(tuple(int(v) for v in row)).isometry()
        a, b = m.apply_boundary(f1), m.apply_boundary(f2)
        key = tuple(sorted((round(z.real, 7), round(z.imag, 7)) for z in (a, b)))
        if key in seen:
            continue
        seen.add(key)
        if min(abs(z - e) for z in (a, b) for e in (e1, e2)) < 1e-9:
            continue  # the axis itself; distinct lifts never share an endpoint
        x1, x2 = fr(a).real, fr(b).real
        if x1 * x2 >= 0:
            continue
        t = 0.5 * math.log(-x1 * x2)
        if t0 <= t < t0 + ell:
            hits += 1
    return hits


def brute_self_intersections(g: Elem, seed: int = 0) -> int:
    hits = brute_crossings(g, g, seed)
    assert hits % 2 == 0  # every self-crossing is seen from both branches
    return hits // 2
