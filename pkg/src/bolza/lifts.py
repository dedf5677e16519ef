"""Lifts of closed geodesics to the disc and their mutual crossings.

A closed geodesic is handled through the tile walk of a representative
whose axis passes through the fundamental octagon F.  Every tile of the walk
carries a chart (octagon coordinates -> frame of the axis, re-centred at the
tile), which gives well conditioned coordinates along the whole period.

Crossings of a lift with the axis are located in the frame: a geodesic with
real endpoints x1, x2 meets the imaginary axis iff x1 * x2 < 0, at height
sqrt(-x1 x2).  Two crossings are identified modulo the deck translation when
their heights agree mod the translation length and the crossing geodesics
agree, which the scale invariant log(-x1 / x2) detects.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Optional

import mpmath
import numpy as np

from .group import Elem
from .hyp import AmbiguityError
from .model import BolzaModel, Walk, bolza


@dataclass
class AxisData:
    """A closed geodesic with its walk and its lifts meeting the octagon."""

    elem: Elem
    walk: Walk
    lifts: np.ndarray  # (m, 2) endpoints in octagon coordinates, repelling first

    @property
    def length(self):
        return self.walk.length


@dataclass(frozen=True)
class Crossing:
    t: object  # position along the first axis, reduced mod its length
    u: object  # (x1 + x2) / |x1 - x2| of the crossing lift, sign = direction
    s: object  # log(-x1 / x2) / 2, the same information, well conditioned at small angles
    tile: int  # index of the walk tile used to find it
    lift: int  # index into the second curve's lift array
    star: int  # index of the star element carrying the lift
    local: object  # crossing height in the tile chart


def _inv_chart_endpoints(m):
    (p, q), (r, s) = m
    return -q / p, -s / r


def axis_data(g: Elem, model: Optional[BolzaModel] = None) -> AxisData:
    """Walk g (which must have its axis through the octagon) and collect the
    lifts of its closed geodesic through the tiles of one period."""
    model = model or bolza()
    walk = model.walk(g.isometry(model.num))
    ends = [_inv_chart_endpoints(m) for _, m in walk.charts]
    arr = np.empty((len(ends), 2), dtype=object if model.num.high else complex)
    for i, (a, b) in enumerate(ends):
        arr[i, 0], arr[i, 1] = a, b
    return AxisData(g, walk, arr)


@lru_cache(maxsize=None)
def _star_arrays(model: BolzaModel):
    dt = object if model.num.high else complex
    a = np.array([s.isometry(model.num).a for s in model.star], dtype=dt)
    b = np.array([s.isometry(model.num).b for s in model.star], dtype=dt)
    return a, b, np.array([x.conjugate() for x in b], dtype=dt), np.array([x.conjugate() for x in a], dtype=dt)


def _stack(model: BolzaModel, walk: Walk, star_count: Optional[int] = None):
    """All products chart_j o star_s as four flat arrays, with index maps."""
    dt = object if model.num.high else complex
    sa, sb, sc, sd = (x[:star_count] for x in _star_arrays(model))
    ch = walk.charts
    p = np.array([m[0][0] for _, m in ch], dtype=dt)[:, None]
    q = np.array([m[0][1] for _, m in ch], dtype=dt)[:, None]
    r = np.array([m[1][0] for _, m in ch], dtype=dt)[:, None]
    s = np.array([m[1][1] for _, m in ch], dtype=dt)[:, None]
    n, k = len(ch), len(sa)
    J = np.repeat(np.arange(n), k)
    K = np.tile(np.arange(k), n)
    return (
        (p * sa + q * sc).ravel(),
        (p * sb + q * sd).ravel(),
        (r * sa + s * sc).ravel(),
        (r * sb + s * sd).ravel(),
        J,
        K,
    )


_SUSPECT = 6.0


def _crossing_tol(model: BolzaModel):
    # positions of vertex crossings seen from two tiles differ by ~1e-7
    return 1e-6 if not model.num.high else 1e-20


def crossings(
    alpha: AxisData, beta: AxisData, model: Optional[BolzaModel] = None, interior_only: bool = False
) -> list:
    """Distinct crossings, over one period of alpha, of the axis of alpha
    with lifts of beta.  When beta is alpha the axis itself is excluded.

    With ``interior_only`` only lifts through the interiors of the walk tiles
    are tried: every crossing found is genuine, but crossings on tile
    boundaries may be missed."""
    return crossings_many(alpha, [beta], model, interior_only)[0]


def crossings_many(
    alpha: AxisData, betas: list, model: Optional[BolzaModel] = None, interior_only: bool = False
) -> list:
    """``crossings`` for several curves at once, one list per curve."""
    model = model or bolza()
    num = model.num
    walk = alpha.walk
    P, Q, R, S, J, K = _stack(model, walk, 1 if interior_only else None)
    if not betas:
        return []
    E = np.concatenate([b.lifts for b in betas])
    owner = np.concatenate([np.full(len(b.lifts), i) for i, b in enumerate(betas)])
    first = np.cumsum([0] + [len(b.lifts) for b in betas])
    e1 = E[:, 0][None, :]
    e2 = E[:, 1][None, :]
    P, Q, R, S = P[:, None], Q[:, None], R[:, None], S[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        if num.high:
            z1 = _safe_div(P * e1 + Q, R * e1 + S)
            z2 = _safe_div(P * e2 + Q, R * e2 + S)
        else:
            z1 = (P * e1 + Q) / (R * e1 + S)
            z2 = (P * e2 + Q) / (R * e2 + S)
        x1, x2 = num.vreal(z1), num.vreal(z2)
        # moduli, not real parts: an endpoint sent to infinity comes back as
        # a huge number of arbitrary phase
        n1, n2 = num.vabs(z1), num.vabs(z2)
        lo = np.minimum(n1, n2)
        hi = np.maximum(n1, n2)
        cap = 1e20 if not num.high else 1e50
        # a lift sharing both endpoints with the axis is the axis itself
        on_axis = np.asarray(hi > lo * cap, dtype=bool)
        hit = np.asarray((x1 * x2) < 0, dtype=bool) & ~on_axis
    rows, cols = np.nonzero(hit)
    out: list = [[] for _ in betas]
    if len(rows) == 0:
        return out
    a, b = x1[rows, cols], x2[rows, cols]
    prod = -(a * b)
    local = num.vlog(prod) / 2
    # keep only detections made from a tile whose closed octagon contains
    # the crossing: that tile's chart is well conditioned there, while a
    # distant chart can misplace a nearly tangent crossing badly
    inside = _in_tile(model, walk, J[rows], local)
    rows, cols, a, b, local = rows[inside], cols[inside], a[inside], b[inside], local[inside]
    if len(rows) == 0:
        return out
    u = (a + b) / num.vabs(b - a)
    shape = num.vlog(-(a / b)) / 2
    offsets = np.array([walk.charts[j][0] for j in J[rows]], dtype=object if num.high else float)
    t_abs = offsets + local
    ell = walk.length
    t_mod = np.array([x % ell for x in t_abs], dtype=object) if num.high else np.mod(t_abs, ell)
    tol = _crossing_tol(model)
    # nearly tangent crossings seen through a distant chart can be off by
    # ~1e-3; inside this band the carriers are compared exactly
    loose = 1e-2 if not num.high else 1e-12
    order = np.argsort(num.to_float(t_mod), kind="stable")
    for idx in order:
        col = int(cols[idx])
        i = int(owner[col])
        beta = betas[i]
        c = Crossing(t_mod[idx], u[idx], shape[idx], int(J[rows[idx]]), col - int(first[i]), int(K[rows[idx]]), local[idx])
        if abs(c.s) > _SUSPECT and beta.elem == alpha.elem:
            # nearly degenerate endpoint ratio: decide exactly whether this
            # lift is the axis, i.e. whether its carrier commutes with g
            e = carrier(alpha, beta, c, model)
            if e @ alpha.elem == alpha.elem @ e:
                continue
        hit = _seen(out[i], c, ell, tol, loose, lambda k: _same_lift(alpha, beta, k, c, model))
        if hit is None:
            out[i].append(c)
        elif abs(c.local) < abs(out[i][hit].local):
            # charts far from the crossing are poorly conditioned; keep the
            # detection made closest to its own tile (t stays put so the
            # list remains sorted)
            out[i][hit] = replace(c, t=out[i][hit].t)
    return out


def carrier(alpha: AxisData, beta: AxisData, c: Crossing, model: BolzaModel) -> Elem:
    """Group element taking the axis of beta to the lift that makes the
    crossing (both in the coordinates where alpha's axis is its own)."""
    return alpha.walk.tiles[c.tile] @ model.star[c.star] @ beta.walk.tiles[c.lift].inverse()


def _same_lift(alpha: AxisData, beta: AxisData, c1: Crossing, c2: Crossing, model: BolzaModel) -> bool:
    """Exact test: the two lifts differ by a power of alpha's translation."""
    e1 = carrier(alpha, beta, c1, model)
    e2 = carrier(alpha, beta, c2, model)
    g, gb = alpha.elem, beta.elem
    gi = g.inverse()
    # carriers found from different tiles sit up to a few periods apart
    left = e1.inverse() @ gi @ gi @ gi
    for _ in range(7):
        h = left @ e2
        if h @ gb == gb @ h:
            return True
        left = left @ g
    return False


def _in_tile(model: BolzaModel, walk: Walk, tiles: np.ndarray, local) -> np.ndarray:
    num = model.num
    dt = object if num.high else complex
    ch = [walk.charts[j][1] for j in tiles]
    p = np.array([m[0][0] for m in ch], dtype=dt)
    q = np.array([m[0][1] for m in ch], dtype=dt)
    r = np.array([m[1][0] for m in ch], dtype=dt)
    s = np.array([m[1][1] for m in ch], dtype=dt)
    w = np.array([num.c(1j) * num.exp(x) for x in local], dtype=dt)
    z = (s * w - q) / (p - r * w)
    rad = num.vabs(z)
    slack = 1e-6 if not num.high else 1e-18
    ok = np.ones(len(z), dtype=bool)
    for g in model.gens:
        img = (g.a * z + g.b) / (g.b.conjugate() * z + g.a.conjugate())
        ok &= np.asarray(rad <= num.vabs(img) + slack, dtype=bool)
    return ok


def _safe_div(num_arr, den_arr):
    out = np.empty(num_arr.shape, dtype=object)
    big = mpmath.mpf(10) ** 60
    for idx in np.ndindex(num_arr.shape):
        d = den_arr[idx]
        out[idx] = num_arr[idx] / d if d != 0 else mpmath.mpc(big, 0)
    return out


def _seen(kept: list, c: Crossing, ell, tol, loose, same) -> Optional[int]:
    """Index of the kept crossing equal to c, or None.  kept is sorted by t.
    Crossings closer than tol in position and shape are the same; within the
    loose band ``same`` decides exactly.  Near the end of the period the
    wrapped-around start is searched as well."""

    def check(k, dt):
        ds = abs(c.s - k.s)
        if dt < tol and ds < tol:
            return True
        return ds < loose and same(k)

    for i in range(len(kept) - 1, -1, -1):
        dt = c.t - kept[i].t
        if dt >= loose:
            break
        if check(kept[i], dt):
            return i
    if ell - c.t < loose:
        for i, k in enumerate(kept):
            dt = k.t + (ell - c.t)
            if dt >= loose:
                break
            if check(k, dt):
                return i
    return None


def crossing_point(alpha: AxisData, c: Crossing, model: Optional[BolzaModel] = None):
    """Disc point (octagon coordinates of the tile) of a crossing."""
    model = model or bolza()
    num = model.num
    (p, q), (r, s) = alpha.walk.charts[c.tile][1]
    w = num.c(1j) * num.exp(c.local)
    # inverse Möbius of the chart
    return (s * w - q) / (-r * w + p)


def self_crossings(alpha: AxisData, model: Optional[BolzaModel] = None) -> int:
    found = crossings(alpha, alpha, model)
    if len(found) % 2:
        raise AmbiguityError("odd number of self-crossing branches; tolerance too loose")
    return len(found) // 2


def is_simple(alpha: AxisData, model: Optional[BolzaModel] = None) -> bool:
    if crossings(alpha, alpha, model, interior_only=True):
        return False
    return self_crossings(alpha, model) == 0
