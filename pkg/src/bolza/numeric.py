"""Numeric contexts: IEEE double or mpmath at a chosen mantissa width.

Every geometric routine takes a :class:`Num` and only touches scalars
through it, so one code path serves both precision modes.  Vectorised
helpers return ``complex128`` arrays in double mode and ``object`` arrays of
``mpc`` in high mode.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache

import mpmath
import numpy as np


class NumericError(ArithmeticError):
    """Raised when floating point drift breaks a geometric invariant."""


class PrecisionError(NumericError):
    """A point came too close to the circle at infinity."""


@dataclass(frozen=True)
class Tolerances:
    boundary: float = 1e-12
    merge: float = 1e-9
    vertex: float = 1e-7
    # classify(): slack on |tr| around 2
    trace: float = 1e-9
    # determinant drift tolerated by compose()
    det: float = 1e-9

    def __post_init__(self):
        vals = (self.boundary, self.merge, self.vertex)
        if min(vals) <= 0:
            raise ValueError("tolerances must be positive")
        if not self.boundary < self.merge < self.vertex:
            raise ValueError("expected boundary < merge < vertex")


DOUBLE_TOL = Tolerances()
HIGH_TOL = Tolerances(boundary=1e-30, merge=1e-26, vertex=1e-22, trace=1e-26, det=1e-26)


def _ufunc(fn):
    return np.frompyfunc(fn, 1, 1)


@dataclass(frozen=True)
class Num:
    mode: str = "double"
    bits: int = 53
    tol: Tolerances = field(default=DOUBLE_TOL)

    @property
    def high(self) -> bool:
        return self.mode == "high"

    # -- scalars --------------------------------------------------------
    def c(self, x):
        return mpmath.mpc(x) if self.high else complex(x)

    def r(self, x):
        return mpmath.mpf(x) if self.high else float(x)

    @property
    def pi(self):
        return +mpmath.pi if self.high else math.pi

    def sqrt(self, x):
        return mpmath.sqrt(x) if self.high else math.sqrt(x)

    def csqrt(self, z):
        return mpmath.sqrt(z) if self.high else cmath.sqrt(z)

    def exp(self, x):
        return mpmath.exp(x) if self.high else math.exp(x)

    def log(self, x):
        return mpmath.log(x) if self.high else math.log(x)

    def cos(self, x):
        return mpmath.cos(x) if self.high else math.cos(x)

    def sin(self, x):
        return mpmath.sin(x) if self.high else math.sin(x)

    def acos(self, x):
        return mpmath.acos(x) if self.high else math.acos(x)

    def acosh(self, x):
        return mpmath.acosh(x) if self.high else math.acosh(x)

    def asinh(self, x):
        return mpmath.asinh(x) if self.high else math.asinh(x)

    def atanh(self, x):
        return mpmath.atanh(x) if self.high else math.atanh(x)

    def tanh(self, x):
        return mpmath.tanh(x) if self.high else math.tanh(x)

    def atan2(self, y, x):
        return mpmath.atan2(y, x) if self.high else math.atan2(y, x)

    def arg(self, z):
        return mpmath.arg(z) if self.high else cmath.phase(z)

    def expj(self, theta):
        return mpmath.expj(theta) if self.high else cmath.exp(1j * theta)

    # -- arrays ---------------------------------------------------------
    def array(self, values) -> np.ndarray:
        if self.high:
            out = np.empty(len(values), dtype=object)
            for i, v in enumerate(values):
                out[i] = mpmath.mpc(v)
            return out
        return np.asarray(values, dtype=complex)

    def vreal(self, arr):
        if self.high:
            return _ufunc(lambda z: mpmath.mpf(z.real) if isinstance(z, mpmath.mpc) else mpmath.mpf(z))(arr)
        return np.real(arr)

    def vlog(self, arr):
        return _ufunc(mpmath.log)(arr) if self.high else np.log(arr)

    def vsqrt(self, arr):
        return _ufunc(mpmath.sqrt)(arr) if self.high else np.sqrt(arr)

    def vabs(self, arr):
        return _ufunc(abs)(arr) if self.high else np.abs(arr)

    @staticmethod
    def to_float(arr) -> np.ndarray:
        """Lossy projection to float64, for rounding keys and sorting."""
        arr = np.asarray(arr)
        if arr.dtype == object:
            return np.array([float(x) for x in arr.ravel()], dtype=float).reshape(arr.shape)
        return np.asarray(arr, dtype=float)


DOUBLE = Num()


@lru_cache(maxsize=None)
def high(bits: int = 128) -> Num:
    """High-precision context; mpmath precision is process-global."""
    if bits < 128:
        raise ValueError("high-precision mode needs at least 128 mantissa bits")
    mpmath.mp.prec = bits
    return Num(mode="high", bits=bits, tol=HIGH_TOL)


def context(mode: str = "double", bits: int = 128) -> Num:
    if mode == "double":
        return DOUBLE
    if mode == "high":
        return high(bits)
    raise ValueError(f"unknown precision mode {mode!r}")
