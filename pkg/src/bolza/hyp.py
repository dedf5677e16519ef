"""Poincaré disc primitives.

Points are plain complex scalars (``complex`` or ``mpmath.mpc``) with
``|z| < 1``.  Isometries are elements of SU(1,1) stored by their first row
``(a, b)``; the matrix is ``[[a, b], [conj(b), conj(a)]]`` and acts by
``z -> (a z + b) / (conj(b) z + conj(a))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import mpmath

from .numeric import DOUBLE, Num, NumericError, PrecisionError, high


class DomainError(ValueError):
    """Operation undefined for this kind of isometry."""


class AmbiguityError(ValueError):
    """Configuration too close to degenerate to decide combinatorially."""


def num_of(*xs) -> Num:
    for x in xs:
        if isinstance(x, (mpmath.mpc, mpmath.mpf)):
            return high(mpmath.mp.prec)
    return DOUBLE


def _conj(z):
    return z.conjugate()


def disc_point(z, num: Num | None = None):
    """Validate ``z`` as a point of the open disc and return it."""
    num = num or num_of(z)
    if abs(z) >= 1 - num.tol.boundary:
        raise PrecisionError(f"point {z} is within {num.tol.boundary} of the unit circle")
    return z


@dataclass(frozen=True)
class Isometry:
    a: complex
    b: complex

    @classmethod
    def identity(cls, num: Num = DOUBLE) -> "Isometry":
        return cls(num.c(1), num.c(0))

    @classmethod
    def rotation(cls, theta, num: Num = DOUBLE) -> "Isometry":
        """Rotation z -> e^{i theta} z about the origin."""
        return cls(num.expj(theta / 2), num.c(0))

    @classmethod
    def translation_to(cls, p, num: Num | None = None) -> "Isometry":
        """The hyperbolic translation along the diameter through p taking 0 to p."""
        num = num or num_of(p)
        s = 1 / num.sqrt(1 - abs(p) ** 2)
        return cls(num.c(s), num.c(s * p))

    @property
    def num(self) -> Num:
        return num_of(self.a, self.b)

    @property
    def det(self):
        return abs(self.a) ** 2 - abs(self.b) ** 2

    @property
    def trace(self):
        return 2 * self.a.real

    def inverse(self) -> "Isometry":
        return Isometry(_conj(self.a), -self.b)

    def __matmul__(self, other: "Isometry") -> "Isometry":
        return compose(self, other)

    def __call__(self, z):
        return apply(self, z)

    def mobius(self):
        """The 2x2 matrix as nested tuples."""
        return ((self.a, self.b), (_conj(self.b), _conj(self.a)))

    def apply_boundary(self, z):
        """Image of a point on (or off) the circle, with no disc check."""
        return (self.a * z + self.b) / (_conj(self.b) * z + _conj(self.a))

    def derivative(self, z):
        return 1 / (_conj(self.b) * z + _conj(self.a)) ** 2

    def close_to(self, other: "Isometry", tol: float) -> bool:
        """Equality in PSU(1,1): matrices agree up to a global sign."""
        plus = abs(self.a - other.a) + abs(self.b - other.b)
        minus = abs(self.a + other.a) + abs(self.b + other.b)
        return min(plus, minus) < tol

    def power(self, n: int) -> "Isometry":
        if n < 0:
            return self.inverse().power(-n)
        out = Isometry.identity(self.num)
        base = self
        while n:
            if n & 1:
                out = out @ base
            base = base @ base
            n >>= 1
        return out


def compose(f: Isometry, g: Isometry) -> Isometry:
    """Matrix product f*g, i.e. the map z -> f(g(z))."""
    a = f.a * g.a + f.b * _conj(g.b)
    b = f.a * g.b + f.b * _conj(g.a)
    h = Isometry(a, b)
    num = h.num
    if abs(h.det - 1) > num.tol.det * max(1, abs(a) ** 2):
        raise NumericError(f"determinant drift {abs(h.det - 1)} after composition")
    return h


def apply(f: Isometry, z):
    w = f.apply_boundary(z)
    num = num_of(w)
    if abs(w) >= 1 - num.tol.boundary:
        raise PrecisionError("image lies on the circle at infinity to working precision")
    return w


def classify(f: Isometry) -> str:
    num = f.num
    t = abs(f.trace)
    tau = num.tol.trace
    if t > 2 + tau:
        return "hyperbolic"
    if t < 2 - tau:
        return "elliptic"
    if abs(f.b) < tau:
        return "identity"
    return "parabolic"


def translation_length(f: Isometry):
    if classify(f) != "hyperbolic":
        raise DomainError("translation length is only defined for hyperbolic isometries")
    return 2 * f.num.acosh(abs(f.trace) / 2)


def distance(p, q, num: Num | None = None):
    num = num or num_of(p, q)
    denom = num.sqrt((1 - abs(p) ** 2) * (1 - abs(q) ** 2))
    return 2 * num.asinh(abs(p - q) / denom)


def point_at_distance(t, theta=0, num: Num = DOUBLE):
    """The point at hyperbolic distance t from 0 in direction theta."""
    return num.tanh(num.r(t) / 2) * num.expj(theta)


# -- geodesics ---------------------------------------------------------------


def _norm_angle(theta, num: Num):
    two_pi = 2 * num.pi
    theta = theta % two_pi
    if theta < 0:
        theta += two_pi
    if two_pi - theta < num.tol.boundary:
        theta = theta - theta  # zero of the right type
    return theta


@dataclass(frozen=True)
class Geodesic:
    """Complete geodesic stored by its boundary angles, smaller first."""

    t1: float
    t2: float

    @classmethod
    def from_angles(cls, a, b, num: Num | None = None) -> "Geodesic":
        num = num or num_of(a, b)
        a, b = _norm_angle(a, num), _norm_angle(b, num)
        if abs(a - b) < 1e-10 or abs(abs(a - b) - 2 * num.pi) < 1e-10:
            raise ValueError("geodesic endpoints coincide")
        return cls(min(a, b), max(a, b))

    @classmethod
    def from_boundary(cls, z1, z2) -> "Geodesic":
        num = num_of(z1, z2)
        return cls.from_angles(num.arg(z1), num.arg(z2), num)

    @classmethod
    def through(cls, p, q) -> "Geodesic":
        """The complete geodesic through two disc points."""
        num = num_of(p, q)
        m = Isometry.translation_to(p, num)
        w = m.inverse().apply_boundary(q)
        u = w / abs(w)
        return cls.from_boundary(m.apply_boundary(-u), m.apply_boundary(u))

    @property
    def num(self) -> Num:
        return num_of(self.t1, self.t2)

    def endpoints(self):
        num = self.num
        return num.expj(self.t1), num.expj(self.t2)

    def image(self, f: Isometry) -> "Geodesic":
        z1, z2 = self.endpoints()
        return Geodesic.from_boundary(f.apply_boundary(z1), f.apply_boundary(z2))

    def same_as(self, other: "Geodesic", tol: float = 1e-9) -> bool:
        return abs(self.t1 - other.t1) < tol and abs(self.t2 - other.t2) < tol


def interleaved(u: Geodesic, v: Geodesic) -> bool:
    """Exact crossing predicate: endpoint pairs alternate around the circle."""
    a_in = u.t1 < v.t1 < u.t2
    b_in = u.t1 < v.t2 < u.t2
    return a_in != b_in


class Frame:
    """Möbius map from the disc to the upper half-plane sending the oriented
    geodesic ``start -> end`` to the imaginary axis traversed upwards."""

    def __init__(self, start, end):
        num = num_of(start, end)
        mid = start + end
        z0 = mid / abs(mid) if abs(mid) > 1e-3 else start * num.c(1j)
        q = (z0 - start) / (z0 - end)
        k = q.conjugate() / abs(q)
        if (k * start / end).imag < 0:
            k = -k
        self.num = num
        # z -> (k z - k start) / (z - end)
        self.m = ((k, -k * start), (num.c(1), -end))
        det = -k * end + k * start
        self.minv = ((-end / det, k * start / det), (-1 / det, k / det))

    def __call__(self, z):
        (p, q), (r, s) = self.m
        return (p * z + q) / (r * z + s)

    def back(self, w):
        (p, q), (r, s) = self.minv
        return (p * w + q) / (r * w + s)

    def compose(self, f: Isometry):
        """Matrix of (frame o f) as nested tuples."""
        (p, q), (r, s) = self.m
        a, b = f.a, f.b
        bc, ac = _conj(b), _conj(a)
        return ((p * a + q * bc, p * b + q * ac), (r * a + s * bc, r * b + s * ac))

    def height(self, z):
        """Signed position along the axis: log |frame(z)|."""
        return self.num.log(abs(self(z)))


def axis_endpoints(f: Isometry):
    """(repelling, attracting) fixed points of a hyperbolic isometry."""
    if classify(f) != "hyperbolic":
        raise DomainError("only hyperbolic isometries have an axis")
    num = f.num
    s = num.sqrt(f.a.real ** 2 - 1)
    bc = _conj(f.b)
    z1 = (num.c(1j) * f.a.imag + s) / bc
    z2 = (num.c(1j) * f.a.imag - s) / bc
    z1, z2 = z1 / abs(z1), z2 / abs(z2)
    if abs(f.derivative(z1)) < 1:
        return z2, z1
    return z1, z2


def axis(f: Isometry) -> Geodesic:
    z1, z2 = axis_endpoints(f)
    return Geodesic.from_boundary(z1, z2)


def frame_of(f: Isometry) -> Frame:
    return Frame(*axis_endpoints(f))


def geodesic_cross(u: Geodesic, v: Geodesic):
    """Crossing point and angle (counterclockwise from line u to line v,
    modulo pi) of two distinct geodesics, or None if they do not meet."""
    if u.same_as(v, 1e-12):
        raise ValueError("geodesic_cross needs two distinct geodesics")
    if not interleaved(u, v):
        return None
    num = u.num
    e1, e2 = u.endpoints()
    fr = Frame(e1, e2)
    w1, w2 = v.endpoints()
    x1, x2 = fr(w1).real, fr(w2).real
    y = num.sqrt(-x1 * x2)
    m = (x1 + x2) / 2
    angle = (num.atan2(m, y) - num.pi / 2) % num.pi
    point = fr.back(num.c(1j) * y)
    if abs(point) >= 1 - num.tol.boundary:
        raise PrecisionError("crossing point indistinguishable from the boundary")
    return point, angle


# -- segments and clipping ---------------------------------------------------


@dataclass(frozen=True)
class Segment:
    geodesic: Geodesic
    p: complex
    q: complex
    side_p: Optional[int] = None
    side_q: Optional[int] = None
    vertex_p: bool = False
    vertex_q: bool = False

    def __post_init__(self):
        if abs(self.p - self.q) == 0:
            raise ValueError("degenerate segment")

    @property
    def length(self):
        return distance(self.p, self.q)


def klein_to_disc(k, num: Num):
    return k / (1 + num.sqrt(1 - abs(k) ** 2))


def disc_to_klein(z):
    return 2 * z / (1 + abs(z) ** 2)


def clip_to_polygon(u: Geodesic, vertices: Sequence, num: Num | None = None) -> Optional[Segment]:
    """Chord of ``u`` inside the convex geodesic polygon with the given
    vertices (counterclockwise; side i joins vertex i to vertex i+1)."""
    num = num or u.num
    n = len(vertices)
    inner = klein_to_disc(sum(disc_to_klein(v) for v in vertices) / n, num)
    e1, e2 = u.endpoints()
    fr = Frame(e1, e2)
    inner_w = fr(inner)
    lo, hi = None, None
    lo_side = hi_side = None
    for i in range(n):
        side = Geodesic.through(vertices[i], vertices[(i + 1) % n])
        z1, z2 = side.endpoints()
        x1, x2 = fr(z1).real, fr(z2).real
        m, rho = (x1 + x2) / 2, abs(x2 - x1) / 2
        inside_circle = abs(inner_w - m) < rho
        if x1 * x2 >= 0:
            # u misses this side line; keep it only if it runs on the inner side
            probe = num.c(1j)
            if (abs(probe - m) < rho) != inside_circle:
                return None
            continue
        t = num.log(-x1 * x2) / 2
        if inside_circle:
            if hi is None or t < hi:
                hi, hi_side = t, i
        elif lo is None or t > lo:
            lo, lo_side = t, i
    if lo is None or hi is None:
        return None
    gap = hi - lo
    if gap <= -num.tol.vertex:
        return None
    if gap < num.tol.vertex:
        raise AmbiguityError("geodesic grazes the polygon; perturb and retry")
    p = fr.back(num.c(1j) * num.exp(lo))
    q = fr.back(num.c(1j) * num.exp(hi))
    near = lambda z: min(abs(z - v) for v in vertices) < num.tol.vertex
    return Segment(u, p, q, lo_side, hi_side, near(p), near(q))
