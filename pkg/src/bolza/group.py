"""Exact arithmetic for the Bolza surface group.

Every element of the group generated by the four side pairings has matrix
``[[a, b], [conj b, conj a]]`` with ``a`` in Z[zeta] and ``b`` in
``alpha * Z[zeta]``, where ``zeta = exp(i pi/4)`` and
``alpha = sqrt(2 + 2 sqrt 2)``.  An element is stored as eight integers: the
coordinates of ``a`` and of ``b / alpha`` in the basis 1, zeta, zeta^2,
zeta^3 (``zeta^4 = -1``).  Signs are normalised so the tuple represents an
element of PSU(1,1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .hyp import Isometry
from .numeric import DOUBLE, Num
from .quadint import QuadInt

ONE = (1, 0, 0, 0)
ZERO = (0, 0, 0, 0)
# 1 + sqrt 2 and alpha^2 = 2 + 2 sqrt 2, with sqrt 2 = zeta - zeta^3
ONE_PLUS_SQRT2 = (1, 1, 0, -1)
ALPHA_SQ = (2, 2, 0, -2)


def zmul(x, y):
    """Product in Z[zeta] = Z[x]/(x^4 + 1)."""
    x0, x1, x2, x3 = x
    y0, y1, y2, y3 = y
    return (
        x0 * y0 - x1 * y3 - x2 * y2 - x3 * y1,
        x0 * y1 + x1 * y0 - x2 * y3 - x3 * y2,
        x0 * y2 + x1 * y1 + x2 * y0 - x3 * y3,
        x0 * y3 + x1 * y2 + x2 * y1 + x3 * y0,
    )


def zconj(x):
    x0, x1, x2, x3 = x
    return (x0, -x3, -x2, -x1)


def zadd(x, y):
    return tuple(p + q for p, q in zip(x, y))


def zneg(x):
    return tuple(-p for p in x)


def ztimes_zeta(x, k: int = 1):
    for _ in range(k % 8):
        x0, x1, x2, x3 = x
        x = (-x3, x0, x1, x2)
    return x


def _normalise(coords):
    for c in coords:
        if c:
            return coords if c > 0 else tuple(-v for v in coords)
    raise ValueError("zero matrix")


@dataclass(frozen=True)
class Elem:
    """Exact group element (a, b/alpha) with coordinates over Z[zeta]."""

    coords: tuple

    @classmethod
    def make(cls, a, beta) -> "Elem":
        return cls(_normalise(tuple(a) + tuple(beta)))

    @property
    def a(self):
        return self.coords[:4]

    @property
    def beta(self):
        return self.coords[4:]

    def __matmul__(self, other: "Elem") -> "Elem":
        a, b = self.a, self.beta
        c, d = other.a, other.beta
        na = zadd(zmul(a, c), zmul(ALPHA_SQ, zmul(b, zconj(d))))
        nb = zadd(zmul(a, d), zmul(b, zconj(c)))
        return Elem.make(na, nb)

    def inverse(self) -> "Elem":
        return Elem.make(zconj(self.a), zneg(self.beta))

    def is_identity(self) -> bool:
        return self.coords == ONE + ZERO

    @property
    def trace(self) -> QuadInt:
        """Exact trace 2 Re(a), up to the PSU sign ambiguity (made >= 0)."""
        a0, a1, _, a3 = self.a
        t = QuadInt(2 * a0, a1 - a3)
        return abs(t)

    def abs_a_sq(self) -> float:
        re, im = _re_im(self.a)
        return re * re + im * im

    def isometry(self, num: Num = DOUBLE) -> Isometry:
        return _isometry(self.coords, num)

    def conjugate_by_rotation(self, k: int = 1) -> "Elem":
        """R^k g R^-k where R is rotation by pi/4 about the origin."""
        return Elem.make(self.a, ztimes_zeta(self.beta, k))

    def conjugate_by_half_turn(self) -> "Elem":
        """J g J with J(z) = -z."""
        return Elem.make(self.a, zneg(self.beta))


IDENTITY = Elem(ONE + ZERO)

_R = 1 / math.sqrt(2)


def _re_im(x):
    x0, x1, x2, x3 = x
    return x0 + (x1 - x3) * _R, x2 + (x1 + x3) * _R


@lru_cache(maxsize=200_000)
def _isometry(coords, num: Num) -> Isometry:
    zeta = num.expj(num.pi / 4)
    alpha = num.sqrt(2 + 2 * num.sqrt(num.r(2)))
    powers = [num.c(1), zeta, zeta * zeta, zeta * zeta * zeta]
    a = sum((c * z for c, z in zip(coords[:4], powers)), num.c(0))
    b = alpha * sum((c * z for c, z in zip(coords[4:], powers)), num.c(0))
    return Isometry(a, b)


def generator(k: int, inverse: bool = False) -> Elem:
    """g_k translates along the direction k*pi/4, k = 0..3."""
    beta = [0, 0, 0, 0]
    beta[k] = 1
    g = Elem.make(ONE_PLUS_SQRT2, tuple(beta))
    return g.inverse() if inverse else g


# letters A a B b C c D d are codes 0..7: code 2k is g_k, 2k+1 its inverse
LETTERS = "AaBbCcDd"
GENERATORS = tuple(generator(c // 2, bool(c & 1)) for c in range(8))


def word_elem(word) -> Elem:
    out = IDENTITY
    for c in word:
        out = out @ GENERATORS[c]
    return out


# -- vectorised batches -------------------------------------------------------


def _vmul(x, y):
    x0, x1, x2, x3 = x[:, 0], x[:, 1], x[:, 2], x[:, 3]
    y0, y1, y2, y3 = y[:, 0], y[:, 1], y[:, 2], y[:, 3]
    return np.stack(
        [
            x0 * y0 - x1 * y3 - x2 * y2 - x3 * y1,
            x0 * y1 + x1 * y0 - x2 * y3 - x3 * y2,
            x0 * y2 + x1 * y1 + x2 * y0 - x3 * y3,
            x0 * y3 + x1 * y2 + x2 * y1 + x3 * y0,
        ],
        axis=1,
    )


def _vconj(x):
    return np.stack([x[:, 0], -x[:, 3], -x[:, 2], -x[:, 1]], axis=1)


def batch_left_multiply(s: Elem, coords: np.ndarray) -> np.ndarray:
    """Rows of ``coords`` (N x 8) left-multiplied by s, sign-normalised."""
    n = len(coords)
    sa = np.tile(np.array(s.a, dtype=np.int64), (n, 1))
    sb = np.tile(np.array(s.beta, dtype=np.int64), (n, 1))
    alpha_sq = np.tile(np.array(ALPHA_SQ, dtype=np.int64), (n, 1))
    a, b = coords[:, :4], coords[:, 4:]
    na = _vmul(sa, a) + _vmul(alpha_sq, _vmul(sb, _vconj(b)))
    nb = _vmul(sa, b) + _vmul(sb, _vconj(a))
    out = np.concatenate([na, nb], axis=1)
    return batch_normalise(out)


def batch_normalise(coords: np.ndarray) -> np.ndarray:
    nz = coords != 0
    first = np.argmax(nz, axis=1)
    sign = np.sign(coords[np.arange(len(coords)), first])
    return coords * sign[:, None]


def batch_abs_sq(x: np.ndarray) -> np.ndarray:
    re = x[:, 0] + (x[:, 1] - x[:, 3]) * _R
    im = x[:, 2] + (x[:, 1] + x[:, 3]) * _R
    return re * re + im * im


def batch_trace(coords: np.ndarray) -> np.ndarray:
    """|trace| as floats."""
    return np.abs(2 * coords[:, 0] + (coords[:, 1] - coords[:, 3]) * math.sqrt(2))


def ball(radius: float) -> np.ndarray:
    """All elements g with d(0, g.0) <= radius, as an (N, 8) int array.

    Breadth-first by left multiplication: greedy descent in the Dirichlet
    domain at 0 strictly shortens some one-letter suffix, so every element
    of the ball has a parent inside the ball.
    """
    # cosh d(0, g 0) = 2|a|^2 - 1
    bound = (math.cosh(radius) + 1) / 2 * (1 + 1e-12)
    start = np.array([IDENTITY.coords], dtype=np.int64)
    seen = {IDENTITY.coords}
    layers = [start]
    frontier = start
    while len(frontier):
        fresh = []
        for s in GENERATORS:
            cand = batch_left_multiply(s, frontier)
            keep = batch_abs_sq(cand[:, :4]) <= bound
            fresh.append(cand[keep])
        cand = np.unique(np.concatenate(fresh), axis=0)
        rows = [row for row in map(tuple, cand.tolist()) if row not in seen]
        seen.update(rows)
        frontier = np.array(rows, dtype=np.int64).reshape(-1, 8)
        if len(frontier):
            layers.append(frontier)
    return np.concatenate(layers)


_ZETA_POWERS = np.exp(1j * np.pi / 4 * np.arange(4))
_ALPHA = math.sqrt(2 + 2 * math.sqrt(2))


def batch_entries(coords: np.ndarray):
    """Complex matrix entries (a, b) of each row, in double precision."""
    a = coords[:, :4] @ _ZETA_POWERS
    b = _ALPHA * (coords[:, 4:] @ _ZETA_POWERS)
    return a, b
