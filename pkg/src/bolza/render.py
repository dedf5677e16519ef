"""Deterministic SVG pictures of the octagon tessellation and curve systems.

Geodesics are circles orthogonal to the unit circle, so every side and every
curve is drawn as an exact SVG elliptical-arc command with equal radii.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .group import GENERATORS, IDENTITY
from .model import BolzaModel, bolza

MAX_DEPTH = 6
PALETTE = {
    "Omega1": "#c0392b",
    "Omega2": "#2471a3",
    "Sys": "#1e8449",
    "SecondSystoles": "#8e44ad",
    "Gamma": "#d68910",
    "custom": "#222222",
}


@dataclass
class RenderSpec:
    systems: list = field(default_factory=lambda: ["Sys"])
    words: list = field(default_factory=list)
    depth: int = 0
    size: int = 800
    colors: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 0 <= self.depth <= MAX_DEPTH:
            raise ValueError(f"tile depth must lie in 0..{MAX_DEPTH}")
        if self.size < 16:
            raise ValueError("image size too small")

    def color(self, name: str) -> str:
        return self.colors.get(name, PALETTE.get(name, PALETTE["custom"]))


class _Canvas:
    def __init__(self, size: int):
        self.size = size
        self.half = size / 2

    def xy(self, z) -> tuple:
        z = complex(z)
        return self.half * (1 + z.real), self.half * (1 - z.imag)

    def pt(self, z) -> str:
        x, y = self.xy(z)
        return f"{x:.3f} {y:.3f}"

    def arc_to(self, p, q) -> str:
        """Path command for the geodesic arc from p to q (disc or boundary)."""
        p, q = complex(p), complex(q)
        cross = p.real * q.imag - p.imag * q.real
        if abs(cross) < 1e-12 * max(1.0, abs(p) * abs(q)):
            return f"L {self.pt(q)}"
        # centre c of the orthogonal circle: <c, p> = (1 + |p|^2)/2, same for q
        a1, b1 = p.real, p.imag
        a2, b2 = q.real, q.imag
        r1, r2 = (1 + abs(p) ** 2) / 2, (1 + abs(q) ** 2) / 2
        det = a1 * b2 - a2 * b1
        c = complex((r1 * b2 - r2 * b1) / det, (a1 * r2 - a2 * r1) / det)
        rad = abs(p - c) * self.half
        # minor arc; counterclockwise in the disc is clockwise on screen
        sweep = 1 if ((p - c).real * (q - c).imag - (p - c).imag * (q - c).real) > 0 else 0
        return f"A {rad:.3f} {rad:.3f} 0 0 {sweep} {self.pt(q)}"


def tiles(depth: int, model: BolzaModel, min_pixels: float = 0.5, size: int = 800) -> list:
    """Group elements of the tiles within ``depth`` side-crossings of the
    octagon, breadth first; tiles smaller than ``min_pixels`` are dropped."""
    num = model.num
    seen = {(0.0, 0.0)}
    out = [IDENTITY]
    frontier = [IDENTITY]
    for _ in range(depth):
        nxt = []
        for h in frontier:
            for g in GENERATORS:
                e = h @ g
                iso = e.isometry(num)
                z = complex(iso(num.c(0)))
                key = (round(z.real, 9), round(z.imag, 9))
                if key in seen:
                    continue
                seen.add(key)
                vs = [complex(iso(v)) for v in model.vertices]
                extent = max(abs(a - b) for a in vs for b in vs) * size / 2
                if extent < min_pixels:
                    continue
                out.append(e)
                nxt.append(e)
        frontier = nxt
    return out


def _tile_path(h, model: BolzaModel, cv: _Canvas) -> str:
    iso = h.isometry(model.num)
    vs = [iso(v) for v in model.vertices]
    parts = [f"M {cv.pt(vs[0])}"]
    for j in range(8):
        parts.append(cv.arc_to(vs[j], vs[(j + 1) % 8]))
    return " ".join(parts) + " Z"


def _nearest_lift(c, model: BolzaModel) -> tuple:
    """Boundary endpoints of the lift of c passing closest to the origin."""
    best = None
    for z1, z2 in c.axis(model).lifts:
        z1, z2 = complex(z1), complex(z2)
        half = abs(math.remainder(math.atan2(z2.imag, z2.real) - math.atan2(z1.imag, z1.real), 2 * math.pi)) / 2
        r = (1 - math.sin(half)) / max(math.cos(half), 1e-300)
        key = (round(r, 9), round(z1.real, 9), round(z1.imag, 9))
        if best is None or key < best[0]:
            best = (key, z1, z2)
    return best[1], best[2]


def _systems(spec: RenderSpec, model: BolzaModel) -> list:
    from . import systems
    from .intersection import gamma_set

    getters = {
        "Sys": systems.systolic_set,
        "Omega1": systems.omega1,
        "Omega2": systems.omega2,
        "SecondSystoles": systems.second_systoles,
        "Gamma": gamma_set,
    }
    out = []
    for name in spec.systems:
        if name not in getters:
            raise ValueError(f"unknown system {name!r}; choose from {sorted(getters)}")
        out.append((name, getters[name](model)))
    if spec.words:
        out.append(("custom", systems.system_from_words("custom", spec.words, model)))
    return out


def render_svg(spec: RenderSpec, model: Optional[BolzaModel] = None) -> str:
    model = model or bolza()
    cv = _Canvas(spec.size)
    s = spec.size
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{s}" height="{s}" viewBox="0 0 {s} {s}">',
        f'<circle cx="{cv.half:.3f}" cy="{cv.half:.3f}" r="{cv.half:.3f}" fill="white" stroke="black" stroke-width="1"/>',
        '<g id="tiles" fill="none" stroke="#999999" stroke-width="0.5">',
    ]
    for h in tiles(spec.depth, model, size=s):
        lines.append(f'<path d="{_tile_path(h, model, cv)}"/>')
    lines.append("</g>")
    lines.append(f'<path id="octagon" d="{_tile_path(IDENTITY, model, cv)}" fill="none" stroke="black" stroke-width="1.5"/>')
    for name, S in _systems(spec, model):
        lines.append(f'<g id="{name}" fill="none" stroke="{spec.color(name)}" stroke-width="1.5">')
        for c in S.classes:
            z1, z2 = _nearest_lift(c, model)
            lines.append(f'<path class="geodesic" data-word="{c.name}" d="M {cv.pt(z1)} {cv.arc_to(z1, z2)}"/>')
        lines.append("</g>")
    lines.append('<g id="weierstrass" fill="black">')
    dots = [model.num.c(0)] + list(model.vertices) + list(model.midpoints)
    for z in dots:
        x, y = cv.xy(z)
        lines.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="3"/>')
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
