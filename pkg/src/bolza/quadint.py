"""Exact arithmetic in Z[sqrt 2]."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import total_ordering

SQRT2 = math.sqrt(2.0)


class SnapError(ValueError):
    """No element of Z[sqrt 2] close enough to the given real number."""


def _sign(x: int, y: int) -> int:
    """Exact sign of x + y*sqrt(2)."""
    if x >= 0 and y >= 0:
        return 0 if x == 0 and y == 0 else 1
    if x <= 0 and y <= 0:
        return -1
    if x > 0:  # y < 0
        return 1 if x * x > 2 * y * y else -1
    return 1 if 2 * y * y > x * x else -1


@total_ordering
@dataclass(frozen=True)
class QuadInt:
    p: int
    q: int

    def __add__(self, other: QuadInt | int) -> QuadInt:
        other = _lift(other)
        return QuadInt(self.p + other.p, self.q + other.q)

    __radd__ = __add__

    def __neg__(self) -> QuadInt:
        return QuadInt(-self.p, -self.q)

    def __sub__(self, other: QuadInt | int) -> QuadInt:
        return self + (-_lift(other))

    def __rsub__(self, other: QuadInt | int) -> QuadInt:
        return _lift(other) - self

    def __mul__(self, other: QuadInt | int) -> QuadInt:
        other = _lift(other)
        return QuadInt(self.p * other.p + 2 * self.q * other.q, self.p * other.q + self.q * other.p)

    __rmul__ = __mul__

    def __lt__(self, other: QuadInt | int) -> bool:
        other = _lift(other)
        return _sign(self.p - other.p, self.q - other.q) < 0

    def __float__(self) -> float:
        return self.p + self.q * SQRT2

    def conj(self) -> QuadInt:
        """Galois conjugate p - q sqrt 2."""
        return QuadInt(self.p, -self.q)

    def norm(self) -> int:
        return self.p * self.p - 2 * self.q * self.q

    def __abs__(self) -> QuadInt:
        return -self if _sign(self.p, self.q) < 0 else self

    def __str__(self) -> str:
        if self.q == 0:
            return str(self.p)
        if self.p == 0:
            return f"{self.q}√2"
        return f"{self.p}{self.q:+d}√2"

    def evaluate(self, num=None):
        """Value at the precision of ``num`` (float when omitted)."""
        if num is None:
            return float(self)
        return num.r(self.p) + num.r(self.q) * num.sqrt(num.r(2))


def _lift(x: QuadInt | int) -> QuadInt:
    return x if isinstance(x, QuadInt) else QuadInt(int(x), 0)


def snap(t, tol: float = 1e-6, conj_bound: float = 8.0) -> QuadInt:
    """Nearest p + q sqrt 2 to ``t`` whose Galois conjugate is at most
    ``conj_bound`` in absolute value."""
    t = float(t)
    if abs(t) > 1e6:
        raise SnapError(f"{t} outside the snapping range")
    q_lo = math.floor((t - conj_bound) / (2 * SQRT2)) - 1
    q_hi = math.ceil((t + conj_bound) / (2 * SQRT2)) + 1
    best, best_res = None, math.inf
    for q in range(q_lo, q_hi + 1):
        p = round(t - q * SQRT2)
        res = abs(t - (p + q * SQRT2))
        if res < best_res and abs(p - q * SQRT2) <= conj_bound + 1:
            best, best_res = QuadInt(p, q), res
    if best is None or best_res >= tol:
        raise SnapError(f"{t} is not within {tol} of Z[sqrt 2]")
    return best


def snap_residual(t, z: QuadInt, num=None):
    return abs(t - z.evaluate(num))
