"""Closed geodesics up to a length cutoff, their simplicity and the length
spectrum.

Enumeration.  Every closed geodesic has a lift meeting the closed octagon,
so it is the axis of some g whose axis passes within the circumradius R of
the origin.  For such g with translation length l, the origin moves by d
with sinh(d/2) = cosh(delta) sinh(l/2) <= cosh(R) sinh(l/2), delta being the
distance from 0 to the axis.  All those g lie in an explicit ball, which is
enumerated exactly (see ``group.ball``) and filtered; classes are then
identified by their cutting sequences.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from . import group
from .group import Elem, word_elem
from .hyp import Isometry
from .lifts import AxisData, axis_data, self_crossings
from .model import BolzaModel, bolza
from .quadint import QuadInt, snap
from .words import CyclicKey, Word, abelianize, cyclic_period, fmt, inverse, least_rotation

_LENGTH_SLACK = 1e-9


class IncompleteEnumerationError(RuntimeError):
    """Raising the search bound produced classes the first pass missed."""


@dataclass
class CurveClass:
    """Unoriented free-homotopy class of a closed geodesic.

    ``word`` is the canonical cutting sequence; the element it spells has
    its axis through the fundamental octagon."""

    key: CyclicKey
    word: Word
    elem: Elem
    matrix: Isometry
    trace_exact: QuadInt
    trace: float
    length: float
    primitive: bool
    self_intersections: int
    simple: bool
    separating: Optional[bool] = None
    _axis: Optional[AxisData] = field(default=None, repr=False, compare=False)
    _axis_num: object = field(default=None, repr=False, compare=False)

    @property
    def name(self) -> str:
        return fmt(self.word)

    def axis(self, model: Optional[BolzaModel] = None) -> AxisData:
        model = model or bolza()
        if self._axis is None or model.num != self._axis_num:
            self._axis = axis_data(self.elem, model)
            self._axis_num = model.num
        return self._axis


def length_of_trace(t: QuadInt, model: Optional[BolzaModel] = None):
    model = model or bolza()
    num = model.num
    return 2 * num.acosh(t.evaluate(num) / 2)


def snap_trace(t) -> QuadInt:
    return snap(t)


def make_class(key: CyclicKey, model: Optional[BolzaModel] = None, with_self=True) -> CurveClass:
    model = model or bolza()
    g = word_elem(key.word)
    tr = g.trace
    period = cyclic_period(key.word)
    primitive = period == len(key.word)
    c = CurveClass(
        key=key,
        word=key.word,
        elem=g,
        matrix=g.isometry(model.num),
        trace_exact=tr,
        trace=float(tr),
        length=length_of_trace(tr, model),
        primitive=primitive,
        self_intersections=-1,
        simple=False,
    )
    if with_self:
        set_self_intersections(c, model)
    return c


def set_self_intersections(c: CurveClass, model: Optional[BolzaModel] = None) -> CurveClass:
    model = model or bolza()
    if not c.primitive:
        raise ValueError("self-intersection is defined here for primitive classes only")
    c.self_intersections = self_crossings(c.axis(model), model)
    c.simple = c.self_intersections == 0
    c.separating = abelianize(c.word) == (0, 0, 0, 0) if c.simple else None
    return c


def self_intersection(c: CurveClass, model: Optional[BolzaModel] = None) -> int:
    if c.self_intersections < 0:
        set_self_intersections(c, model)
    return c.self_intersections


def class_from_elem(g: Elem, model: Optional[BolzaModel] = None, with_self=True) -> CurveClass:
    from .words import conjugacy_key

    model = model or bolza()
    return make_class(conjugacy_key(g, model), model, with_self)


# -- enumeration ---------------------------------------------------------------


def search_radius(L_max: float) -> float:
    """Ball radius containing every g with length <= L_max whose axis meets
    the closed octagon."""
    R = math.acosh(3 + 2 * math.sqrt(2))
    return 2 * math.asinh(math.cosh(R) * math.sinh(L_max / 2))


def candidates(L_max: float, radius: float) -> np.ndarray:
    """Rows of the ball of the given radius whose axis meets the closed
    octagon and whose translation length is at most L_max."""
    R = math.acosh(3 + 2 * math.sqrt(2))
    B = group.ball(radius)
    tr = group.batch_trace(B)
    bsq = group.batch_abs_sq(B[:, :4]) - 1
    ell = 2 * np.arccosh(np.maximum(tr / 2, 1.0))
    keep = (
        (tr > 2 + 1e-9)
        & (ell <= L_max + _LENGTH_SLACK)
        & (np.sqrt(np.maximum(bsq, 0.0)) <= math.cosh(R) * np.sinh(ell / 2) * (1 + 1e-9) + 1e-12)
    )
    return B[keep]


def _oriented(walk) -> Word:
    return least_rotation(walk.word)


def _keys(rows: np.ndarray, model: BolzaModel) -> dict:
    """Unoriented key -> None for every class represented in rows.  Elements
    conjugate to an already walked one (through a tile of its walk) are
    skipped."""
    seen: set = set()
    keys: dict = {}
    for row in rows:
        coords = tuple(int(v) for v in row)
        if coords in seen:
            continue
        g = Elem(coords)
        walk = model.walk(g.isometry(model.num))
        for h in walk.tiles:
            c = h.inverse() @ g @ h
            seen.add(c.coords)
            seen.add(c.inverse().coords)
        fwd = _oriented(walk)
        if walk.ties:
            back_walk = model.walk(g.inverse().isometry(model.num))
            back = _oriented(back_walk)
        else:
            back = least_rotation(inverse(walk.word))
        key = CyclicKey(back, True) if back < fwd else CyclicKey(fwd, False)
        keys.setdefault(key, None)
    return keys


def _key_worker(args):
    rows, mode, bits = args
    return list(_keys(rows, bolza(mode, bits)))


@dataclass
class Enumeration:
    L_max: float
    radius: float
    classes: list
    certified: bool
    candidates: int

    def __iter__(self):
        return iter(self.classes)

    def __len__(self):
        return len(self.classes)


def _class_sort_key(c: CurveClass):
    return (c.trace_exact, len(c.word), c.word)


def enumerate_classes(
    L_max: float,
    model: Optional[BolzaModel] = None,
    certify: bool = True,
    jobs: int = 1,
    primitive_only: bool = True,
    with_self: bool = True,
) -> Enumeration:
    """Every unoriented primitive class with length <= L_max, once each,
    sorted by exact trace then canonical word."""
    if L_max <= 0:
        raise ValueError("L_max must be positive")
    model = model or bolza()
    radius = search_radius(L_max)
    rows = candidates(L_max, radius)
    keys = _collect(rows, model, jobs)
    certified = False
    if certify:
        wider = candidates(L_max, radius + 2.0)
        known = {tuple(int(v) for v in r) for r in rows}
        extra = np.array([r for r in wider if tuple(int(v) for v in r) not in known], dtype=np.int64)
        if len(extra):
            new = set(_collect(extra.reshape(-1, 8), model, 1)) - set(keys)
            if new:
                raise IncompleteEnumerationError(
                    f"{len(new)} classes appear only when the bound is raised: "
                    + ", ".join(str(k) for k in sorted(new)[:5])
                )
        certified = True
    out = []
    for key in keys:
        if primitive_only and cyclic_period(key.word) < len(key.word):
            continue
        c = make_class(key, model, with_self=False)
        if c.length > L_max + _LENGTH_SLACK:
            continue
        out.append(c)
    if with_self:
        _fill_self(out, model, jobs)
    out.sort(key=_class_sort_key)
    return Enumeration(L_max, radius, out, certified, len(rows))


def _collect(rows: np.ndarray, model: BolzaModel, jobs: int) -> dict:
    if jobs <= 1 or len(rows) < 2000:
        return _keys(rows, model)
    # shards by the first coordinates; duplicates across shards merge by key
    shards = np.array_split(rows, jobs * 4)
    num = model.num
    merged: dict = {}
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        for part in ex.map(_key_worker, [(s, num.mode, num.bits) for s in shards]):
            for k in part:
                merged.setdefault(k, None)
    return {k: None for k in sorted(merged)}


def _self_worker(args):
    words, mode, bits = args
    model = bolza(mode, bits)
    return [self_crossings(axis_data(word_elem(w), model), model) for w in words]


def _fill_self(classes: list, model: BolzaModel, jobs: int):
    if jobs <= 1 or len(classes) < 200:
        for c in classes:
            set_self_intersections(c, model)
        return
    num = model.num
    chunks = [classes[i::jobs] for i in range(jobs)]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        results = list(ex.map(_self_worker, [([c.word for c in ch], num.mode, num.bits) for ch in chunks]))
    for ch, res in zip(chunks, results):
        for c, n in zip(ch, res):
            c.self_intersections = n
            c.simple = n == 0
            c.separating = abelianize(c.word) == (0, 0, 0, 0) if c.simple else None


# -- spectrum table -------------------------------------------------------------


@dataclass
class SpectrumRow:
    length: float
    trace: QuadInt
    mult_total: int
    mult_simple: int
    words: list
    simple_words: list
    label: str = ""

    def as_dict(self) -> dict:
        return {
            "length": round(float(self.length), 9),
            "trace_p": self.trace.p,
            "trace_q": self.trace.q,
            "mult_total": self.mult_total,
            "mult_simple": self.mult_simple,
            "words": list(self.words),
            "label": self.label,
        }


@dataclass
class SpectrumTable:
    L_max: float
    rows: list
    certified: bool

    def simple_lengths(self) -> list:
        return [r.length for r in self.rows if r.mult_simple]

    def row(self, label: str) -> Optional[SpectrumRow]:
        return next((r for r in self.rows if r.label == label), None)


def spectrum_from_classes(classes: Iterable[CurveClass], L_max: float, certified: bool, merge_tol=None) -> SpectrumTable:
    merge_tol = merge_tol or bolza().num.tol.merge
    rows: list = []
    for c in sorted(classes, key=_class_sort_key):
        L = float(c.length)
        if rows and abs(rows[-1].length - L) <= merge_tol:
            r = rows[-1]
        else:
            r = SpectrumRow(L, c.trace_exact, 0, 0, [], [])
            rows.append(r)
        r.mult_total += 1
        r.words.append(c.name)
        if c.simple:
            r.mult_simple += 1
            r.simple_words.append(c.name)
    simple_rows = [r for r in rows if r.mult_simple]
    for i, r in enumerate(simple_rows[:2]):
        r.label = f"l{i + 1}"
    return SpectrumTable(L_max, rows, certified)


def length_spectrum(L_max: float, model: Optional[BolzaModel] = None, jobs: int = 1, certify: bool = True) -> SpectrumTable:
    en = enumerate_classes(L_max, model, certify=certify, jobs=jobs)
    return spectrum_from_classes(en.classes, L_max, en.certified)
