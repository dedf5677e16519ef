"""Geometric intersection numbers, the complexity table T_k and the set of
non-systolic simple geodesics meeting the systolic graph only at vertices.

Two independent counts are provided.  ``intersection_with_system`` works in
the frame of the curve's axis (sign test on the endpoints of every nearby
lift, see ``lifts``).  ``lift_count`` works directly in the disc: it clips
the lifts of the system to the closed octagon, tests interleaving of
boundary angles tile by tile along one period of the curve and counts the
hits in a closed fundamental window that starts on an edge of the system's
lift, subtracting the doubled endpoint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from .hyp import AmbiguityError, Geodesic, clip_to_polygon, geodesic_cross
from .lifts import crossing_point, crossings_many
from .model import BolzaModel, bolza
from .spectrum import CurveClass

SYSTOLE_HALF = math.acosh(1 + math.sqrt(2))
DEFAULT_KMAX_CAP = 12


@dataclass(frozen=True)
class CrossingRecord:
    member: str  # the class of the system that is crossed
    t: float  # position along the first curve, mod its length
    point: complex  # canonical quotient coordinates
    vertex: bool  # lies on a vertex of the systolic graph


@dataclass
class IntersectionRecord:
    first: str
    second: str
    count: int
    crossings: tuple = field(default=())

    @property
    def vertex_incident(self) -> bool:
        """Every crossing is at a vertex of the systolic graph."""
        return bool(self.crossings) and all(c.vertex for c in self.crossings)

    def __post_init__(self):
        if self.crossings and len(self.crossings) != self.count:
            raise ValueError("count disagrees with the listed crossings")


# -- vertices of the systolic graph -----------------------------------------


@lru_cache(maxsize=None)
def systolic_vertices(model: BolzaModel) -> tuple:
    """Canonical quotient points where two systoles cross."""
    from .systems import systolic_set

    S = systolic_set(model).classes
    axes = [c.axis(model) for c in S]
    found: list = []
    for i, c in enumerate(S):
        for per in crossings_many(axes[i], axes, model):
            for x in per:
                q, _ = model.canonical_point(crossing_point(axes[i], x, model))
                if all(abs(q - p) > model.num.tol.vertex for p in found):
                    found.append(q)
    return tuple(sorted(found, key=model._point_key))


@lru_cache(maxsize=None)
def _vertex_lifts(model: BolzaModel) -> tuple:
    """Copies of the systolic vertices lying in the closed octagon."""
    out: list = []
    for p in systolic_vertices(model):
        for s in model.star:
            q = s.isometry(model.num)(p)
            if model.in_domain(q, slack=model.num.tol.vertex) and all(abs(q - r) > 1e-6 for r in out):
                out.append(q)
    return tuple(out)


def at_systolic_vertex(z, model: BolzaModel) -> bool:
    q, _ = model.reduce_to_domain(z)
    tol = 10 * model.num.tol.vertex
    return any(abs(q - v) < tol for v in _vertex_lifts(model))


# -- frame-based counts ---------------------------------------------------------


def _record(c1: CurveClass, found: list, member: str, model: BolzaModel, with_points: bool) -> tuple:
    if not with_points:
        return ()
    ax = c1.axis(model)
    out = []
    for x in found:
        z = crossing_point(ax, x, model)
        q, _ = model.canonical_point(z)
        out.append(CrossingRecord(member, float(x.t), complex(q), at_systolic_vertex(z, model)))
    return tuple(out)


def intersection_number(
    c1: CurveClass, c2: CurveClass, model: Optional[BolzaModel] = None, with_points: bool = True
) -> IntersectionRecord:
    """Transverse crossings of two distinct closed geodesics on the surface."""
    model = model or bolza()
    if c1.key == c2.key:
        raise ValueError("intersection_number needs two distinct classes")
    found = crossings_many(c1.axis(model), [c2.axis(model)], model)[0]
    return IntersectionRecord(c1.name, c2.name, len(found), _record(c1, found, c2.name, model, with_points))


def system_counts(c: CurveClass, S, model: Optional[BolzaModel] = None, with_points: bool = False) -> list:
    """One IntersectionRecord per member of S."""
    model = model or bolza()
    if c in S:
        raise ValueError(f"{c.name} belongs to the system {S.name}")
    members = list(S.classes)
    per = crossings_many(c.axis(model), [m.axis(model) for m in members], model)
    return [
        IntersectionRecord(c.name, m.name, len(f), _record(c, f, m.name, model, with_points))
        for m, f in zip(members, per)
    ]


def intersection_with_system(c: CurveClass, S, model: Optional[BolzaModel] = None) -> int:
    return sum(r.count for r in system_counts(c, S, model))


def system_record(c: CurveClass, S, model: Optional[BolzaModel] = None) -> IntersectionRecord:
    recs = system_counts(c, S, model, with_points=True)
    pts = tuple(x for r in recs for x in r.crossings)
    return IntersectionRecord(c.name, S.name, len(pts), pts)


def pairwise_matrix(classes: list, model: Optional[BolzaModel] = None) -> list:
    model = model or bolza()
    axes = [c.axis(model) for c in classes]
    out = []
    for i, ax in enumerate(axes):
        per = crossings_many(ax, axes, model)
        out.append([0 if i == j else len(p) for j, p in enumerate(per)])
    return out


# -- lift counting in the disc -------------------------------------------------------


@dataclass
class _DomainLifts:
    members: list
    geodesics: list
    member_of: np.ndarray
    t1: np.ndarray
    t2: np.ndarray


_DOMAIN_LIFT_CACHE: dict = {}


def domain_lifts(S, model: BolzaModel) -> _DomainLifts:
    """Every lift of a member of S meeting the closed octagon."""
    cache_key = (S.name, tuple(S.words), model.num)
    hit = _DOMAIN_LIFT_CACHE.get(cache_key)
    if hit is not None:
        return hit
    geos: list = []
    owner: list = []
    seen: set = set()
    for i, c in enumerate(S.classes):
        ax = c.axis(model)
        for z1, z2 in ax.lifts:
            for s in model.star:
                f = s.isometry(model.num)
                g = Geodesic.from_boundary(f.apply_boundary(z1), f.apply_boundary(z2))
                key = (i, round(float(g.t1), 8), round(float(g.t2), 8))
                if key in seen:
                    continue
                seen.add(key)
                try:
                    if clip_to_polygon(g, model.vertices) is None:
                        continue
                except AmbiguityError:
                    pass  # touches the octagon at a single point
                geos.append(g)
                owner.append(i)
    out = _DomainLifts(
        list(S.classes),
        geos,
        np.array(owner, dtype=int),
        np.array([float(g.t1) for g in geos]),
        np.array([float(g.t2) for g in geos]),
    )
    _DOMAIN_LIFT_CACHE[cache_key] = out
    return out


def _lift_events(c: CurveClass, S, model: BolzaModel) -> list:
    """(t mod length, member, crossing angle) for each point of the lift of
    c meeting a lift of S, one period."""
    D = domain_lifts(S, model)
    ax = c.axis(model)
    walk = ax.walk
    ell = float(walk.length)
    num = model.num
    events: list = []
    for offset, m in walk.charts:
        (p, q), (r, s) = m
        u = Geodesic.from_boundary(-q / p, -s / r)
        u1, u2 = float(u.t1), float(u.t2)
        a_in = (D.t1 > u1) & (D.t1 < u2)
        b_in = (D.t2 > u1) & (D.t2 < u2)
        same = (np.abs(D.t1 - u1) < 1e-9) & (np.abs(D.t2 - u2) < 1e-9)
        for idx in np.nonzero((a_in != b_in) & ~same)[0]:
            hit = geodesic_cross(u, D.geodesics[idx])
            if hit is None:
                continue
            X, angle = hit
            if not model.in_domain(X, slack=num.tol.vertex):
                continue
            w = (p * X + q) / (r * X + s)
            t = (float(offset) + math.log(abs(w))) % ell
            events.append((t, int(D.member_of[idx]), float(angle)))
    events.sort()
    out: list = []
    for e in events:
        if any(_same_event(e, f, ell) for f in out[-8:] + out[:8]):
            continue
        out.append(e)
    return out


def _same_event(e, f, ell, tol=1e-6) -> bool:
    dt = abs(e[0] - f[0])
    dt = min(dt, ell - dt)
    da = abs(e[2] - f[2])
    da = min(da, math.pi - da)
    # the position of a shallow crossing is ill-conditioned like 1/sin
    slack = tol / max(abs(math.sin(e[2])), 1e-4)
    return e[1] == f[1] and dt < slack and da < 1e-5


def lift_count(c: CurveClass, S, model: Optional[BolzaModel] = None) -> int:
    """i(S, c) from one fundamental path-lift of c: start at a point of the
    lift on an edge of p^-1(S), count the points of p^-1(S) on the closed
    lift up to the translate of the start, subtract one."""
    model = model or bolza()
    if c in S:
        raise ValueError(f"{c.name} belongs to the system {S.name}")
    events = _lift_events(c, S, model)
    if not events:
        return 0
    ell = float(c.axis(model).walk.length)
    tol = 1e-6

    def mult(t):
        return sum(1 for e in events if min(abs(e[0] - t), ell - abs(e[0] - t)) < tol)

    start = next((e[0] for e in events if mult(e[0]) == 1), None)
    if start is None:
        # every point is a vertex of the arrangement: move the basepoint off
        # the lifts, the window is then half open and nothing is doubled
        ts: list = []
        for t in sorted(e[0] for e in events):
            if not ts or t - ts[-1] > tol:
                ts.append(t)
        gaps = [(ts[(i + 1) % len(ts)] - ts[i]) % ell or ell for i in range(len(ts))]
        i = int(np.argmax(gaps))
        start = (ts[i] + gaps[i] / 2) % ell
        return sum(1 for e in events if tol < (e[0] - start) % ell < ell - tol)
    count = 0
    for e in events:
        d = (e[0] - start) % ell
        if d < tol or ell - d < tol:
            count += 2  # the closed window holds the start and its translate
        else:
            count += 1
    return count - 1


# -- complexity ----------------------------------------------------------------------


@dataclass
class ComplexityRow:
    k: int
    T_k: int
    certified: bool
    witnesses: list

    def as_dict(self) -> dict:
        return {"k": self.k, "T_k": self.T_k, "certified": self.certified, "witnesses": list(self.witnesses)}


@dataclass
class ComplexitySweep:
    """Simple non-systolic classes with their counts against Sys."""

    L_max: float
    certified: bool
    classes: list
    counts: dict  # name -> i(c, Sys)
    omega1: dict
    omega2: dict


_SWEEPS: dict = {}


def complexity_sweep(L_max: float, model: Optional[BolzaModel] = None) -> ComplexitySweep:
    from .simple import enumerate_simple_classes
    from .spectrum import IncompleteEnumerationError
    from .systems import omega1, omega2, systolic_set

    model = model or bolza()
    key = (round(L_max, 9), model.num)
    if key in _SWEEPS:
        return _SWEEPS[key]
    try:
        en = enumerate_simple_classes(L_max, model, certify=True)
    except (RuntimeError, IncompleteEnumerationError):
        en = enumerate_simple_classes(L_max, model, certify=False)
    Sys, O1 = systolic_set(model), omega1(model)
    o1_names = set(O1.words)
    classes = [c for c in en.classes if c not in Sys]
    counts, c1, c2 = {}, {}, {}
    for c in classes:
        recs = system_counts(c, Sys, model)
        a = sum(r.count for r in recs if r.second in o1_names)
        b = sum(r.count for r in recs if r.second not in o1_names)
        c1[c.name], c2[c.name], counts[c.name] = a, b, a + b
    out = ComplexitySweep(L_max, en.certified, classes, counts, c1, c2)
    _SWEEPS[key] = out
    return out


def complexity_table(
    k_max: int, model: Optional[BolzaModel] = None, cap: int = DEFAULT_KMAX_CAP
) -> list:
    """T_k for k = 1..k_max.  Any simple curve with i(c, Sys) <= k has length
    at most k * arccosh(1 + sqrt 2), so one sweep to k_max times that bound
    finds every witness."""
    if not 1 <= k_max <= cap:
        raise ValueError(f"k_max must lie in 1..{cap}")
    model = model or bolza()
    sweep = complexity_sweep(k_max * SYSTOLE_HALF + 1e-9, model)
    rows = []
    for k in range(1, k_max + 1):
        wit = [c.name for c in sweep.classes if sweep.counts[c.name] <= k]
        rows.append(ComplexityRow(k, len(wit), sweep.certified, wit))
    return rows


def gamma_set(model: Optional[BolzaModel] = None):
    """Non-systolic simple geodesics meeting the systolic graph only at its
    vertices."""
    from .systems import CurveSystem, systolic_set

    model = model or bolza()
    sweep = complexity_sweep(10 * SYSTOLE_HALF + 1e-9, model)
    Sys = systolic_set(model)
    out = []
    for c in sweep.classes:
        rec = system_record(c, Sys, model)
        if rec.vertex_incident:
            out.append(c)
    return CurveSystem("Gamma", out)
