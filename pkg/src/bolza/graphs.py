"""Arrangements of simple closed geodesics on the surface.

Vertices are crossing points, reduced to canonical quotient coordinates.
Every crossing also carries the tangent direction of the curve there,
transported to the canonical chart, so edge-ends around a vertex can be
sorted by angle.  Faces are traced with the rotation system: arriving at a
vertex, leave along the first edge-end clockwise from the one just used,
which keeps the face on the left.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .lifts import crossings_many
from .model import BolzaModel, ConstructionError, bolza
from .numeric import PrecisionError
from .spectrum import CurveClass
from .words import abelianize, conjugacy_key, oriented_key

TWO_PI = 2 * math.pi
_MERGE = 1e-6


@dataclass
class Face:
    half_edges: list
    angles: list  # corner angles, in traversal order
    lengths: list  # side lengths

    @property
    def size(self) -> int:
        return len(self.half_edges)

    @property
    def area(self) -> float:
        return (self.size - 2) * math.pi - sum(self.angles)


@dataclass
class Edge:
    member: str
    start: int
    end: int
    length: float


@dataclass
class SurfaceGraph:
    system: str
    vertices: list  # canonical quotient points
    edges: list
    faces: list
    corner_sums: list = field(default_factory=list)
    degenerate: bool = False

    @property
    def V(self) -> int:
        return len(self.vertices)

    @property
    def E(self) -> int:
        return len(self.edges)

    @property
    def F(self) -> int:
        return len(self.faces)

    @property
    def euler(self) -> int:
        return self.V - self.E + self.F

    @property
    def area(self) -> float:
        return sum(f.area for f in self.faces)

    def to_dot(self) -> str:
        lines = [f'graph "{self.system}" {{']
        for i, z in enumerate(self.vertices):
            x, y = (round(float(v), 6) + 0.0 for v in (z.real, z.imag))
            lines.append(f'  v{i} [label="v{i}" pos="{x:.6f},{y:.6f}"];')
        for e in self.edges:
            lines.append(f'  v{e.start} -- v{e.end} [label="{e.member}" len="{e.length:.6f}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def as_dict(self) -> dict:
        census = face_census(self)
        return {
            "system": self.system,
            "V": self.V,
            "E": self.E,
            "F": self.F,
            "euler": self.euler,
            "area": round(self.area, 9),
            "census": census.as_list(),
            "triangulation": census.triangulation,
            "filling": is_filling_graph(self),
        }


# -- construction -------------------------------------------------------------


def _tangent(chart, local, num) -> complex:
    """Direction of the axis at height exp(local) in the tile's coordinates."""
    (p, q), (r, s) = chart
    w = num.c(1j) * num.exp(local)
    d = (s * p - q * r) / (p - r * w) ** 2
    return complex(d * num.c(1j))


def _events(S, model: BolzaModel) -> list:
    """Per member: sorted (t, point, tangent angle) of its crossing points."""
    num = model.num
    classes = list(S.classes)
    axes = [c.axis(model) for c in classes]
    per_member = []
    for i, ax in enumerate(axes):
        ell = float(ax.length)
        raw = []
        for per in crossings_many(ax, axes, model):
            for x in per:
                chart = ax.walk.charts[x.tile][1]
                (p, q), (r, s) = chart
                w = num.c(1j) * num.exp(x.local)
                z = (s * w - q) / (p - r * w)
                cz, g = model.canonical_point(z)
                dg = g.isometry(num).derivative(z)
                theta = (math.atan2(_tangent(chart, x.local, num).imag, _tangent(chart, x.local, num).real)
                         + float(num.arg(dg))) % TWO_PI
                raw.append((float(x.t) % ell, complex(cz), theta))
        raw.sort(key=lambda e: e[0])
        merged: list = []
        for e in raw:
            if merged and e[0] - merged[-1][0] < _MERGE:
                continue
            if merged and ell - e[0] + merged[0][0] < _MERGE:
                continue
            merged.append(e)
        per_member.append((classes[i].name, ell, merged))
    return per_member


def _vertex_index(points: list, z: complex) -> int:
    for i, p in enumerate(points):
        d = abs(p - z)
        if d < _MERGE:
            return i
        if d < 100 * _MERGE:
            raise PrecisionError("two arrangement vertices are too close to tell apart")
    points.append(z)
    return len(points) - 1


def _angle_gap(a: float, b: float) -> float:
    """Counterclockwise angle from b to a, in (0, 2 pi]."""
    d = (a - b) % TWO_PI
    return d if d > 1e-12 else TWO_PI


def build_arrangement(S, model: Optional[BolzaModel] = None, strict: bool = True) -> SurfaceGraph:
    """Arrangement graph of a system of simple closed geodesics.

    With ``strict`` a graph whose complement is not a union of discs raises
    ConstructionError; otherwise its boundary cycles are returned as faces.
    """
    model = model or bolza()
    for c in S.classes:
        if not c.simple:
            raise ValueError(f"{c.name} is not simple")
    per_member = _events(S, model)
    points: list = []
    edges: list = []
    # half-edge h = (edge, +1) runs start -> end, (edge, -1) runs back
    leaving: dict = {}
    for name, ell, ev in per_member:
        n = len(ev)
        if n == 0:
            continue
        ids = [_vertex_index(points, z) for _, z, _ in ev]
        first = len(edges)
        for i in range(n):
            j = (i + 1) % n
            length = (ev[j][0] - ev[i][0]) % ell or ell
            edges.append(Edge(name, ids[i], ids[j], length))
        for i in range(n):
            theta = ev[i][2]
            leaving.setdefault(ids[i], []).append((theta, (first + i, 1)))
            leaving.setdefault(ids[i], []).append(((theta + math.pi) % TWO_PI, (first + (i - 1) % n, -1)))
    if not edges:
        return SurfaceGraph(S.name, [], [], [], degenerate=True)
    angle_of: dict = {}
    for v, ends in leaving.items():
        ends.sort()
        for theta, h in ends:
            angle_of[h] = theta

    def head(h):
        e = edges[h[0]]
        return e.end if h[1] == 1 else e.start

    def twin(h):
        return (h[0], -h[1])

    def nxt(h):
        phi = angle_of[twin(h)]
        ends = leaving[head(h)]
        # first edge-end clockwise from the one pointing back along h
        best = min(ends, key=lambda te: _angle_gap(phi, te[0]))
        return best[1], _angle_gap(phi, best[0])

    faces: list = []
    used: set = set()
    for e in range(len(edges)):
        for sign in (1, -1):
            h0 = (e, sign)
            if h0 in used:
                continue
            hs, angs, lens = [], [], []
            h = h0
            while h not in used:
                used.add(h)
                hs.append(h)
                lens.append(edges[h[0]].length)
                h, a = nxt(h)
                angs.append(a)
            if h != h0:
                raise ConstructionError("rotation system does not close up")
            # the angle at the head of the last half-edge belongs to the
            # corner before the first one; keep corners aligned with hs
            faces.append(Face(hs, angs[-1:] + angs[:-1], lens))
    sums = []
    for v, ends in leaving.items():
        gaps = [_angle_gap(ends[(i + 1) % len(ends)][0], ends[i][0]) for i in range(len(ends))]
        sums.append(sum(gaps) if len(ends) > 1 else TWO_PI)
    G = SurfaceGraph(S.name, points, edges, faces, sums)
    if strict:
        if G.euler != -2:
            raise ConstructionError(f"arrangement of {S.name} has Euler characteristic {G.euler}")
        if abs(G.area - 4 * math.pi) > 1e-6:
            raise ConstructionError(f"arrangement of {S.name} has total area {G.area}")
    return G


# -- census and filling --------------------------------------------------------


@dataclass
class FaceCensus:
    counts: Counter
    unclassified: int

    @property
    def total(self) -> int:
        return sum(self.counts.values()) + self.unclassified

    @property
    def triangulation(self) -> bool:
        return self.unclassified == 0 and all(len(sig) == 3 for sig in self.counts)

    def as_list(self) -> list:
        return [{"signature": list(sig), "count": n} for sig, n in sorted(self.counts.items())]


def angle_denominator(a: float, tol: float = 1e-6) -> Optional[int]:
    """p with a = pi / p, p in 2..12, or None."""
    for p in range(2, 13):
        if abs(a - math.pi / p) < tol:
            return p
    return None


def face_signature(f: Face, tol: float = 1e-6):
    ps = [angle_denominator(a, tol) for a in f.angles]
    if any(p is None for p in ps):
        return None
    return tuple(sorted(ps, reverse=True))


def face_census(G: SurfaceGraph, tol: float = 1e-6) -> FaceCensus:
    counts: Counter = Counter()
    bad = 0
    for f in G.faces:
        sig = face_signature(f, tol)
        if sig is None:
            bad += 1
        else:
            counts[sig] += 1
    return FaceCensus(counts, bad)


def is_filling_graph(G: SurfaceGraph) -> bool:
    # V - E + (boundary cycles) = -2 exactly when every complementary
    # region is a disc
    return not G.degenerate and G.V - G.E + G.F == -2


def is_filling(S, model: Optional[BolzaModel] = None) -> bool:
    return is_filling_graph(build_arrangement(S, model, strict=False))


# -- hyperelliptic involution ------------------------------------------------------


@dataclass(frozen=True)
class InvolutionRecord:
    word: str
    fixed: bool
    orientation_preserved: bool
    separating: bool

    @property
    def consistent(self) -> bool:
        return self.fixed and self.orientation_preserved == self.separating


def involution_check(c: CurveClass, model: Optional[BolzaModel] = None) -> InvolutionRecord:
    model = model or bolza()
    if not c.simple:
        raise ValueError(f"{c.name} is not simple")
    g = c.elem
    h = g.conjugate_by_half_turn()
    return InvolutionRecord(
        c.name,
        conjugacy_key(h, model) == c.key,
        oriented_key(h, model) == oriented_key(g, model),
        abelianize(c.word) == (0, 0, 0, 0),
    )


def _weierstrass_lifts(model: BolzaModel) -> list:
    """(label, point) for every copy of a Weierstrass point in the closed
    octagon: 0 centre, 1 vertex, 2..5 side midpoints."""
    out = [(0, model.num.c(0))]
    out += [(1, v) for v in model.vertices]
    out += [(2 + k % 4, m) for k, m in enumerate(model.midpoints)]
    return out


def weierstrass_points_on(c: CurveClass, model: Optional[BolzaModel] = None) -> list:
    """Labels of the Weierstrass points lying on the closed geodesic."""
    model = model or bolza()
    walk = c.axis(model).walk
    hits: set = set()
    for _, m in walk.charts:
        (p, q), (r, s) = m
        for label, z in _weierstrass_lifts(model):
            w = (p * z + q) / (r * z + s)
            if abs(w.real) <= 1e-7 * abs(w):
                hits.add(label)
    return sorted(hits)


def triangle_type_fractions(sig) -> tuple:
    return tuple(Fraction(1, p) for p in sig)
