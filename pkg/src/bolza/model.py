"""Concrete Bolza data: generators, the fundamental octagon, tile walking and
the special isometries R, L, J."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Optional

import numpy as np

from . import group
from .group import GENERATORS, IDENTITY, LETTERS, Elem, word_elem
from .hyp import (
    AmbiguityError,
    Frame,
    Isometry,
    axis_endpoints,
    classify,
    distance,
    translation_length,
)
from .numeric import DOUBLE, Num, NumericError, context


class ConstructionError(RuntimeError):
    """A hard invariant of the model failed to certify."""


class NonTerminationError(RuntimeError):
    pass


# letter code of the generator whose tile lies across side k of the octagon
SIDE_CODE = (0, 2, 4, 6, 1, 3, 5, 7)
CODE_SIDE = {c: k for k, c in enumerate(SIDE_CODE)}

# start offsets (fractions of a period) tried when a walk starts near a side
_START_FRACTIONS = (0.1234, 0.3711, 0.6173, 0.8529, 0.0517, 0.4449, 0.7297, 0.9391)


def find_relator() -> tuple:
    """Search the cyclically reduced products of the eight generator symbols,
    each used once and starting with A, for the one equal to the identity.
    Returns the lexicographically least hit."""
    hits = []
    for perm in itertools.permutations(range(1, 8)):
        w = (0,) + perm
        if any(w[i] ^ 1 == w[(i + 1) % 8] for i in range(8)):
            continue
        if word_elem(w).is_identity():
            hits.append(w)
    if not hits:
        raise ConstructionError("no length-8 relator among the side pairings")
    return min(hits)


@lru_cache(maxsize=None)
def relator() -> tuple:
    return find_relator()


@dataclass
class Walk:
    """Cutting sequence of one period of a closed geodesic through the tiling.

    The axis is pushed infinitesimally to its left so that passages through
    tile vertices, and axes running along tile sides, get a well-defined
    sequence of crossed sides."""

    g: Isometry
    frame: Frame
    length: object
    t0: object
    word: tuple
    tiles: list  # Elem of each visited tile, starting tile first
    crossings: list  # axis parameter of each side crossing
    # per tile: (offset, m) where m maps octagon coordinates of the tile to
    # the frame followed by a dilation by exp(-offset)
    charts: list = field(default_factory=list)
    # True when the axis passes through a tile vertex or runs along a side,
    # i.e. when the left push actually decided the sequence
    ties: bool = False

    @property
    def start(self) -> Elem:
        return self.tiles[0]


class BolzaModel:
    def __init__(self, num: Num = DOUBLE):
        self.num = num
        n = num
        s2 = n.sqrt(n.r(2))
        self.one_plus_sqrt2 = 1 + s2
        self.three_plus_2sqrt2 = 3 + 2 * s2
        self.inradius = n.acosh(self.one_plus_sqrt2)
        self.circumradius = n.acosh(self.three_plus_2sqrt2)
        self.systole = 2 * self.inradius
        self.second_systole = 2 * self.circumradius
        self.mid_radius = n.tanh(self.inradius / 2)
        self.vertex_radius = n.tanh(self.circumradius / 2)
        pi = n.pi
        self.vertices = [self.vertex_radius * n.expj((2 * j + 1) * pi / 8) for j in range(8)]
        self.midpoints = [self.mid_radius * n.expj(k * pi / 4) for k in range(8)]
        half_width = pi / 2 - 2 * n.atan2(self.mid_radius, n.r(1))
        self.side_endpoints = [
            (n.expj(k * pi / 4 - half_width), n.expj(k * pi / 4 + half_width)) for k in range(8)
        ]
        self.gens = [g.isometry(num) for g in GENERATORS]
        self._check_generators()

    # -- construction checks -------------------------------------------------

    def _check_generators(self):
        tol = 1e-10 if not self.num.high else 1e-30
        for k, g in enumerate(self.gens):
            if abs(g.det - 1) > tol:
                raise ConstructionError(f"generator {LETTERS[k]} has determinant {g.det}")
        for k in range(8):
            # the side-pairing generator moves the opposite side onto side k
            g = self.gens[SIDE_CODE[k]]
            opp = self.midpoints[(k + 4) % 8]
            if abs(g.apply_boundary(opp) - self.midpoints[k]) > 1e-9:
                raise ConstructionError(f"generator for side {k} does not pair opposite sides")
        if self.relator_residual() > tol:
            raise ConstructionError("relator does not evaluate to the identity")

    def relator_residual(self):
        m = Isometry.identity(self.num)
        for c in relator():
            m = m @ self.gens[c]
        return min(abs(m.a - 1), abs(m.a + 1)) + abs(m.b)

    # -- fundamental domain ---------------------------------------------------

    def in_domain(self, z, slack=None) -> bool:
        slack = self.num.tol.merge if slack is None else slack
        r = abs(z)
        return all(r <= abs(g.apply_boundary(z)) + slack for g in self.gens)

    def reduce_to_domain(self, p, cap: int = 10_000):
        """Greedy descent to the closed octagon: returns (q, w) with w in the
        group and w.p = q."""
        z = p
        w = IDENTITY
        step = self.num.tol.boundary * 1e-2
        for _ in range(cap):
            best, best_code = abs(z) - step, None
            for code, g in enumerate(self.gens):
                r = abs(g.apply_boundary(z))
                if r < best:
                    best, best_code = r, code
            if best_code is None:
                return z, w
            z = self.gens[best_code].apply_boundary(z)
            w = GENERATORS[best_code] @ w
        raise NonTerminationError("reduction to the fundamental domain did not terminate")

    @cached_property
    def star(self) -> list:
        """Group elements whose tile shares at least a vertex with the octagon
        (identity first)."""
        out = [IDENTITY]
        tol = 1e-7
        for row in group.ball(float(self.circumradius) * 2 + 0.1):
            g = Elem(tuple(int(v) for v in row))
            if g.is_identity():
                continue
            iso = g.isometry(self.num)
            images = [iso(v) for v in self.vertices]
            if any(abs(x - v) < tol for x in images for v in self.vertices):
                out.append(g)
        return out

    def canonical_point(self, p):
        """Reduce p and pick a canonical representative among the copies of
        its orbit lying on the boundary of the octagon."""
        q, w = self.reduce_to_domain(p)
        best = (self._point_key(q), q, w)
        for s in self.star[1:]:
            iso = s.isometry(self.num)
            img = iso(q)
            if self.in_domain(img):
                key = self._point_key(img)
                if key < best[0]:
                    best = (key, img, s @ w)
        return best[1], best[2]

    def _point_key(self, z):
        n = self.num
        if abs(z) < 1e-9:
            return (0.0, 0.0)
        theta = float(n.arg(z)) % (2 * np.pi)
        if theta > 2 * np.pi - 1e-9:
            theta = 0.0
        return (round(theta, 7), round(float(abs(z)), 7))

    # -- tile walking ---------------------------------------------------------

    def walk(self, g: Isometry) -> Walk:
        num = self.num
        start, end = axis_endpoints(g)
        fr = Frame(start, end)
        ell = translation_length(g)
        lost = None
        for frac in _START_FRACTIONS:
            # t = 0 is the point of the axis nearest the origin; keep the walk
            # centred there, chart errors grow like exp(|t|)
            try:
                res = self._walk_from(g, fr, ell, (0.2 * frac - 0.6) * ell)
            except NumericError as exc:
                lost = exc
                continue
            if res is not None:
                return res
        if lost is not None:
            raise lost
        raise AmbiguityError("could not find a clean start point for the tile walk")

    def centre(self, g: Elem):
        """Exact conjugate g' = w g w^-1 whose axis meets the closed octagon.

        Returns (g', w).  The point of the axis nearest to the origin is
        reduced to the domain; two passes absorb the rounding of a far
        away axis."""
        num = self.num
        w_total = IDENTITY
        cur = g
        for _ in range(4):
            e1, e2 = axis_endpoints(cur.isometry(num))
            mid = e1 + e2
            if abs(mid) < 1e-12:
                return cur, w_total
            half = abs(num.arg(e1 / e2)) / 2
            r = (1 - num.sin(half)) / num.cos(half)
            p = r * mid / abs(mid)
            if abs(p) < self.vertex_radius + 1e-9:
                return cur, w_total
            _, w = self.reduce_to_domain(p)
            cur = w @ cur @ w.inverse()
            w_total = w @ w_total
        raise NonTerminationError("could not move the axis into the fundamental domain")

    def walk_elem(self, g: Elem) -> Walk:
        """Tile walk of the centred conjugate of g (the walk's g)."""
        c, _ = self.centre(g)
        return self.walk(c.isometry(self.num))

    def _side_data(self, m):
        """Per side of the tile with frame matrix m: (t, perturbation, k) for
        the sides crossing the imaginary axis, t = log of the crossing height."""
        num = self.num
        (p, q), (r, s) = m
        out = []
        # a side on the axis line maps to endpoints ~0 and ~infinity
        ratio_cap = 1e20 if not num.high else 1e50
        # vertices on the axis: their sides get the vertex height exactly, so
        # the left-push order applies (a shallow side's own height is ill
        # conditioned)
        on_axis = {}
        vtol = 1e-8 if not num.high else 1e-28
        for j, v in enumerate(self.vertices):
            w = (p * v + q) / (r * v + s)
            if abs(w.real) <= vtol * abs(w):
                on_axis[j] = num.log(abs(w))
        for k, (z1, z2) in enumerate(self.side_endpoints):
            d1, d2 = r * z1 + s, r * z2 + s
            if d1 == 0 or d2 == 0:
                self._along_side = True
                continue
            w1, w2 = (p * z1 + q) / d1, (p * z2 + q) / d2
            x1, x2 = w1.real, w2.real
            lo, hi = min(abs(w1), abs(w2)), max(abs(w1), abs(w2))
            if hi > lo * ratio_cap:
                self._along_side = True
                continue
            prod = x1 * x2
            if prod >= 0:
                continue
            root = num.sqrt(-prod)
            # side k runs from vertex k-1 to vertex k
            t = on_axis.get(k, on_axis.get((k - 1) % 8))
            if t is None:
                t = num.log(root)
            out.append((t, -(x1 + x2) / (2 * root), k))
        return out

    def _rescaled(self, m, t, g: Optional[Isometry] = None):
        """Dilation by exp(-t) after m (after m o g when g is given),
        normalised so the largest entry has modulus ~1."""
        (p, q), (r, s) = m
        if g is not None:
            a, b = g.a, g.b
            bc, ac = b.conjugate(), a.conjugate()
            p, q, r, s = p * a + q * bc, p * b + q * ac, r * a + s * bc, r * b + s * ac
        e = self.num.exp(-t)
        p, q = p * e, q * e
        big = max(abs(p), abs(q), abs(r), abs(s))
        return ((p / big, q / big), (r / big, s / big))

    def _walk_from(self, g, fr, ell, t0) -> Optional[Walk]:
        num = self.num
        eta = 1e-6 if not num.high else 1e-12
        w0 = num.exp(t0) * num.expj(num.pi / 2 + eta)
        q, w = self.reduce_to_domain(fr.back(w0))
        h = w.inverse()
        # frame matrix of the current tile, re-centred at the current position
        m = self._rescaled(fr.compose(h.isometry(num)), t0)
        margin = 1e-4
        for t, _, _ in self._side_data(m):
            if abs(t) < margin:
                return None
        # crossings through one tile vertex agree only to ~1e-9 in double
        ttol = num.tol.vertex
        ptol = 1e-6 if not num.high else 1e-20
        cur_t, cur_p = t0, None
        tiles, word, crossings = [h], [], []
        charts = [(t0, m)]
        self._along_side = False
        end = t0 + ell
        for _ in range(100_000):
            best = None
            for t, p, k in self._side_data(m):
                if cur_p is None:
                    later = t > 0
                elif abs(t) <= ttol:
                    later = p > cur_p + ptol
                else:
                    later = t > 0
                if not later:
                    continue
                if best is None or t < best[0] - ttol or (abs(t - best[0]) <= ttol and p < best[1]):
                    best = (t, p, k)
            if best is None:
                raise NumericError("tile walk lost the axis")
            t, p, k = best
            if cur_t + t >= end:
                break
            code = SIDE_CODE[k]
            cur_t, cur_p = cur_t + t, p
            word.append(code)
            crossings.append(cur_t)
            h = h @ GENERATORS[code]
            tiles.append(h)
            m = self._rescaled(m, t, self.gens[code])
            charts.append((cur_t, m))
        else:
            raise NumericError("tile walk did not close up")
        last = tiles.pop()
        charts.pop()
        # closing check: the final tile is g applied to the first one
        expected = g @ tiles[0].isometry(num)
        got = last.isometry(num)
        scale = max(1.0, float(abs(got.a)))
        if not got.close_to(expected, 1e-6 * scale if not num.high else 1e-20 * scale):
            return None
        if not word:
            return None
        gaps = [b - a for a, b in zip(crossings, crossings[1:])]
        gaps.append(crossings[0] + ell - crossings[-1])
        ties = self._along_side or min(gaps) < 1e-6
        return Walk(g, fr, ell, t0, tuple(word), tiles, crossings, charts, ties)

    # -- special isometries ---------------------------------------------------

    @cached_property
    def R(self) -> Isometry:
        return Isometry.rotation(self.num.pi / 4, self.num)

    @cached_property
    def J(self) -> Isometry:
        return Isometry.rotation(self.num.pi, self.num)

    @cached_property
    def L(self) -> Isometry:
        """Order-3 rotation about the centre of the triangle (0, m0, m1) of the
        systolic triangulation."""
        n = self.num
        # right triangle centre / vertex / edge-midpoint with angles pi/3, pi/8
        rho = n.acosh(self.one_plus_sqrt2 / n.sqrt(n.r(3)))
        c = n.tanh(rho / 2) * n.expj(n.pi / 8)
        t = Isometry.translation_to(c, n)
        rot = Isometry.rotation(2 * n.pi / 3, n)
        L = t @ rot @ t.inverse()
        for code in range(0, 8, 2):
            self.conjugate(L, GENERATORS[code])
        return L

    def to_elem(self, h: Isometry) -> Elem:
        """The exact group element equal to h; ConstructionError if h is not
        in the group."""
        num = self.num
        z, w = self.reduce_to_domain(h(num.c(0)))
        if abs(z) > 1e-6:
            raise ConstructionError("isometry is not in the group")
        check = w.isometry(num) @ h
        if not check.close_to(Isometry.identity(num), 1e-6):
            raise ConstructionError("isometry is not in the group")
        return w.inverse()

    def conjugate(self, phi: Isometry, g: Elem) -> Elem:
        """phi g phi^-1 as an exact group element; raises ConstructionError if
        phi does not normalise the group."""
        return self.to_elem(phi @ g.isometry(self.num) @ phi.inverse())

    @cached_property
    def L_images(self) -> tuple:
        """L g L^-1 for the eight generator codes, as exact elements."""
        return tuple(self.conjugate(self.L, g) for g in GENERATORS)

    def conjugate_word(self, images, word) -> Elem:
        """Image of the word under the automorphism given on generators."""
        out = IDENTITY
        for c in word:
            out = out @ images[c]
        return out

    def half_turn(self, p) -> Isometry:
        t = Isometry.translation_to(p, self.num)
        return t @ self.J @ t.inverse()

    def half_turn_offset(self, p) -> Elem:
        """gamma with H_p = gamma J, for p a lift of a Weierstrass point."""
        return self.to_elem(self.half_turn(p) @ self.J.inverse())

    def coset_key(self, f: Isometry):
        """Key of the coset f.Gamma in the normaliser."""
        probe = self.num.c(0.1 + 0.05j)
        q, _ = self.reduce_to_domain(f(probe))
        return (round(float(q.real), 6), round(float(q.imag), 6))

    def coset_representative(self, f: Isometry) -> Isometry:
        probe = self.num.c(0.1 + 0.05j)
        _, w = self.reduce_to_domain(f(probe))
        return w.isometry(self.num) @ f

    @cached_property
    def isometry_group(self) -> list:
        """Coset representatives of the group generated by R and L modulo the
        surface group (the orientation-preserving isometry group)."""
        ident = Isometry.identity(self.num)
        reps = {self.coset_key(ident): ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for f in frontier:
                for s in (self.R, self.L):
                    h = self.coset_representative(f @ s)
                    key = self.coset_key(h)
                    if key not in reps:
                        reps[key] = h
                        nxt.append(h)
                    if len(reps) > 10_000:
                        raise ConstructionError("isometry closure is not finite")
            frontier = nxt
        return [reps[k] for k in sorted(reps)]

    def weierstrass_points(self) -> list:
        """Fixed points of J on the quotient: centre, vertex, four midpoints."""
        return [self.num.c(0), self.vertices[0]] + self.midpoints[:4]


@lru_cache(maxsize=None)
def bolza(mode: str = "double", bits: int = 128) -> BolzaModel:
    return BolzaModel(context(mode, bits))
