"""Simple closed geodesics up to a length bound, through the hyperelliptic
involution.

J fixes every simple closed geodesic.  A non-separating one is reversed by J
and contains exactly two Weierstrass points; if p, q are consecutive
Weierstrass lifts on a lift of it, the half-turns satisfy H_q H_p in Gamma
with translation length 2 d(p, q).  A separating one is preserved with its
orientation, so some lift h of J (h in Gamma J) translates along one of its
lifts by half the length, and h^2 in Gamma is the curve.

The isometry group acts transitively on the Weierstrass points, so for the
non-separating family it is enough to take p = 0 and close the resulting set
of classes under conjugation by R and L.  Rays from 0 are further reduced
modulo the rotation R (and J = R^4 reverses the ray).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import group
from .group import Elem
from .lifts import axis_data, is_simple
from .model import BolzaModel, bolza
from .spectrum import (
    CurveClass,
    Enumeration,
    _class_sort_key,
    make_class,
    search_radius,
)
from .words import CyclicKey, conjugacy_key, cyclic_period, inverse, least_rotation

_EPS = 1e-9


def _key_of_walked(g: Elem, model: BolzaModel) -> CyclicKey:
    walk = model.walk(g.isometry(model.num))
    fwd = least_rotation(walk.word)
    if walk.ties:
        back = least_rotation(model.walk(g.inverse().isometry(model.num)).word)
    else:
        back = least_rotation(inverse(walk.word))
    return CyclicKey(back, True) if back < fwd else CyclicKey(fwd, False)


def weierstrass_rays(L_max: float, model: BolzaModel, radius: Optional[float] = None):
    """(w, index of q0) for the nearest Weierstrass lift q = w.q0 on each ray
    from 0 with angle in [0, pi/4] and 0 < d(0, q) <= L_max / 2."""
    R = float(model.circumradius)
    radius = L_max / 2 + R + 1e-6 if radius is None else radius
    B = group.ball(radius)
    a, b = group.batch_entries(B)
    reps = [complex(p) for p in model.weierstrass_points()]
    best: dict = {}
    r_max = math.tanh(L_max / 4) * (1 + 1e-12)
    for i, q0 in enumerate(reps):
        q = (a * q0 + b) / (np.conj(b) * q0 + np.conj(a))
        rad = np.abs(q)
        ang = np.angle(q)
        keep = (rad > _EPS) & (rad <= r_max) & (ang >= -_EPS) & (ang <= math.pi / 4 + _EPS)
        for row, r_, t_ in zip(B[keep], rad[keep], ang[keep]):
            ray = round(float(t_), 9)
            if ray not in best or r_ < best[ray][0] - _EPS:
                best[ray] = (float(r_), tuple(int(v) for v in row), i)
            elif abs(r_ - best[ray][0]) <= _EPS:
                raise ValueError("two Weierstrass lifts at the same place")
    return [(Elem(w), i) for _, (_, w, i) in sorted(best.items())]


def nonseparating_candidates(L_max: float, model: BolzaModel, radius: Optional[float] = None) -> list:
    """Elements H_q J for the nearest Weierstrass lift q on each ray."""
    offsets = [model.half_turn_offset(p) for p in model.weierstrass_points()]
    out = []
    for w, i in weierstrass_rays(L_max, model, radius):
        # H_q = w gamma J w^-1, so H_q J = w gamma (J w^-1 J)
        out.append(w @ offsets[i] @ w.inverse().conjugate_by_half_turn())
    return out


def separating_candidates(L_max: float, model: BolzaModel, radius: Optional[float] = None) -> list:
    """Squares h^2 of the hyperbolic h = gamma J with l(h) <= L_max / 2 whose
    axis meets the closed octagon."""
    R = float(model.circumradius)
    half = L_max / 2
    radius = search_radius(half) + 1e-6 if radius is None else radius
    B = group.ball(radius)
    a, b = group.batch_entries(B)
    # gamma J has entries (i a, -i b); its trace is -2 Im a
    t = np.abs(a.imag)
    ell = 2 * np.arccosh(np.maximum(t, 1.0))
    keep = (t > 1 + _EPS) & (ell <= half + _EPS) & (np.abs(b) <= math.cosh(R) * np.sinh(ell / 2) * (1 + 1e-9) + 1e-12)
    out = []
    for row in B[keep]:
        g = Elem(tuple(int(v) for v in row))
        out.append(g @ g.conjugate_by_half_turn())
    return out


@dataclass
class SimpleSweep:
    L_max: float
    classes: list
    certified: bool
    nonseparating_seeds: int
    separating_seeds: int


def _close_under_isometries(keys: dict, model: BolzaModel) -> dict:
    """Add the images of every class under conjugation by R and L."""
    frontier = list(keys)
    L_images = model.L_images
    while frontier:
        nxt = []
        for key in frontier:
            g = group.word_elem(key.word)
            for img in (g.conjugate_by_rotation(1), model.conjugate_word(L_images, key.word)):
                k = conjugacy_key(img, model)
                if k not in keys:
                    keys[k] = keys[key]
                    nxt.append(k)
        frontier = nxt
    return keys


def enumerate_simple_classes(L_max: float, model: Optional[BolzaModel] = None, certify: bool = True) -> Enumeration:
    """All simple closed geodesic classes of length <= L_max."""
    model = model or bolza()
    found: dict = {}
    rejected: set = set()

    def consider(g: Elem):
        key = _key_of_walked(g, model)
        if key in found or key in rejected:
            return
        if cyclic_period(key.word) < len(key.word):
            rejected.add(key)
            return
        c = make_class(key, model, with_self=False)
        if c.length > L_max + _EPS or not is_simple(c.axis(model), model):
            rejected.add(key)
            return
        found[key] = c

    for g in nonseparating_candidates(L_max, model):
        consider(g)
    for g in separating_candidates(L_max, model):
        consider(g)
    closed = _close_under_isometries({k: None for k in found}, model)
    certified = False
    if certify:
        R = float(model.circumradius)
        more = nonseparating_candidates(L_max, model, L_max / 2 + R + 2.0)
        more_sep = separating_candidates(L_max, model, search_radius(L_max / 2) + 2.0)
        before = len(found)
        for g in more + more_sep:
            consider(g)
        if len(found) != before:
            raise RuntimeError("simple-curve sweep not saturated at the chosen radius")
        certified = True
    out = []
    for key in closed:
        c = found.get(key) or make_class(key, model, with_self=False)
        c.self_intersections = 0
        c.simple = True
        c.separating = _separating(c)
        out.append(c)
    out.sort(key=_class_sort_key)
    return Enumeration(L_max, 0.0, out, certified, len(found))


def _separating(c: CurveClass) -> bool:
    from .words import abelianize

    return abelianize(c.word) == (0, 0, 0, 0)
