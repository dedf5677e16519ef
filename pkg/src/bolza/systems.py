"""The distinguished curve systems: the 12 systoles split as Omega_1 (4
curves cutting the surface into two right-angled octagons) and Omega_2 (the
other 8), and the 12 second systoles.

Representative words are derived once from the enumeration, then frozen in
``data/curve_systems.json`` together with their certificates.  Loading
re-checks every certificate.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional

from .model import BolzaModel, ConstructionError, bolza
from .quadint import QuadInt
from .spectrum import CurveClass, enumerate_classes, make_class
from .words import conjugacy_key, fmt, parse

DATA_VERSION = 1
DATA_FILE = "curve_systems.json"

SYSTOLE_TRACE = QuadInt(2, 2)
SECOND_SYSTOLE_TRACE = QuadInt(6, 4)


@dataclass
class CurveSystem:
    name: str
    classes: list
    expected: Optional[int] = None

    def __post_init__(self):
        keys = [c.key for c in self.classes]
        if len(set(keys)) != len(keys):
            raise ConstructionError(f"system {self.name} repeats a class")
        if self.expected is not None and len(self.classes) != self.expected:
            raise ConstructionError(f"system {self.name} has {len(self.classes)} classes, expected {self.expected}")

    def __iter__(self):
        return iter(self.classes)

    def __len__(self):
        return len(self.classes)

    def __contains__(self, c) -> bool:
        return any(c.key == d.key for d in self.classes)

    @property
    def words(self) -> list:
        return [c.name for c in self.classes]

    def subset(self, name: str, words: Iterable[str]) -> "CurveSystem":
        wanted = list(words)
        by_name = {c.name: c for c in self.classes}
        return CurveSystem(name, [by_name[w] for w in wanted])

    def union(self, other: "CurveSystem", name: str) -> "CurveSystem":
        return CurveSystem(name, list(self.classes) + [c for c in other.classes if c not in self])


def system_from_words(name: str, words: Iterable[str], model: Optional[BolzaModel] = None, expected=None) -> CurveSystem:
    model = model or bolza()
    classes = [make_class(conjugacy_key(parse(w), model), model) for w in words]
    return CurveSystem(name, classes, expected)


# -- derivation --------------------------------------------------------------


def _derive_systoles(model: BolzaModel) -> list:
    en = enumerate_classes(3.1, model)
    return [c for c in en.classes if c.trace_exact == SYSTOLE_TRACE]


def _derive_second_systoles(model: BolzaModel) -> list:
    from .simple import enumerate_simple_classes

    en = enumerate_simple_classes(5.0, model)
    return [c for c in en.classes if c.trace_exact == SECOND_SYSTOLE_TRACE]


def _is_octagon_decomposition(sub: list, model: BolzaModel) -> bool:
    from .graphs import build_arrangement

    try:
        G = build_arrangement(CurveSystem("candidate", sub), model)
    except ConstructionError:
        return False
    if (G.V, G.E, G.F) != (4, 8, 2):
        return False
    return all(f.size == 8 and all(abs(a - model.num.pi / 2) < 1e-6 for a in f.angles) for f in G.faces)


def _derive_omega1(sys_classes: list, model: BolzaModel) -> list:
    """First 4-subset (in class order) that meets as a 4-cycle, each
    adjacent pair once, and cuts out two right-angled octagons."""
    from .intersection import pairwise_matrix

    M = pairwise_matrix(sys_classes, model)
    n = len(sys_classes)
    for idx in itertools.combinations(range(n), 4):
        degs = [sum(M[i][j] for j in idx) for i in idx]
        if degs != [2, 2, 2, 2]:
            continue
        if any(M[i][j] > 1 for i in idx for j in idx):
            continue
        sub = [sys_classes[i] for i in idx]
        if _is_octagon_decomposition(sub, model):
            return _cycle_order(sub, [[M[i][j] for j in idx] for i in idx])
    raise ConstructionError("no 4 systoles cut the surface into two right-angled octagons")


def _cycle_order(sub: list, M: list) -> list:
    """Order a 4-cycle a, b, c, d so consecutive curves meet."""
    order = [0]
    while len(order) < 4:
        cur = order[-1]
        nxt = next(j for j in range(4) if M[cur][j] and j not in order)
        order.append(nxt)
    return [sub[i] for i in order]


def derive_systems(model: Optional[BolzaModel] = None) -> dict:
    model = model or bolza()
    sys_classes = _derive_systoles(model)
    if len(sys_classes) != 12:
        raise ConstructionError(f"found {len(sys_classes)} systoles")
    om1 = _derive_omega1(sys_classes, model)
    om2 = [c for c in sys_classes if all(c.key != d.key for d in om1)]
    sec = _derive_second_systoles(model)
    return {
        "Sys": [c.name for c in sys_classes],
        "Omega1": [c.name for c in om1],
        "Omega2": [c.name for c in om2],
        "SecondSystoles": [c.name for c in sec],
    }


# -- data file ---------------------------------------------------------------


def _entry(c: CurveClass) -> dict:
    return {
        "name": c.name,
        "word": fmt(c.word),
        "trace_p": c.trace_exact.p,
        "trace_q": c.trace_exact.q,
        "length": round(float(c.length), 12),
        "self_intersections": c.self_intersections,
    }


def certificates(systems: dict, model: Optional[BolzaModel] = None) -> dict:
    from .intersection import pairwise_matrix

    model = model or bolza()
    out: dict = {"version": DATA_VERSION, "systems": {}}
    for name, words in systems.items():
        S = system_from_words(name, words, model)
        out["systems"][name] = {
            "classes": [_entry(c) for c in S.classes],
            "pairwise_intersections": pairwise_matrix(S.classes, model),
        }
    return out


def data_path() -> Path:
    return Path(str(resources.files("bolza") / "data" / DATA_FILE))


def rebuild_certificates(path: Optional[Path] = None, model: Optional[BolzaModel] = None) -> Path:
    model = model or bolza()
    path = path or data_path()
    doc = certificates(derive_systems(model), model)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n", encoding="utf-8")
    _systems.cache_clear()
    return path


def _check(name: str, S: CurveSystem, record: dict, model: BolzaModel):
    from .intersection import pairwise_matrix

    for c, e in zip(S.classes, record["classes"]):
        if fmt(c.word) != e["word"]:
            raise ConstructionError(f"{name}: word {e['word']} is not in canonical form")
        if (c.trace_exact.p, c.trace_exact.q) != (e["trace_p"], e["trace_q"]):
            raise ConstructionError(f"{name}: trace certificate of {e['word']} fails")
        if abs(float(c.length) - e["length"]) > 1e-9:
            raise ConstructionError(f"{name}: length certificate of {e['word']} fails")
        if not c.simple or c.self_intersections != e["self_intersections"]:
            raise ConstructionError(f"{name}: {e['word']} is not simple")
    if pairwise_matrix(S.classes, model) != record["pairwise_intersections"]:
        raise ConstructionError(f"{name}: pairwise intersection certificate fails")


@lru_cache(maxsize=None)
def _systems(model: BolzaModel) -> dict:
    path = data_path()
    expected = {"Sys": 12, "Omega1": 4, "Omega2": 8, "SecondSystoles": 12}
    if path.exists():
        doc = json.loads(path.read_text(encoding="utf-8"))
        if doc.get("version") != DATA_VERSION:
            raise ConstructionError(f"{path} has version {doc.get('version')}, expected {DATA_VERSION}")
        out = {}
        for name, rec in doc["systems"].items():
            S = system_from_words(name, [e["word"] for e in rec["classes"]], model, expected.get(name))
            _check(name, S, rec, model)
            out[name] = S
        return out
    words = derive_systems(model)
    return {name: system_from_words(name, ws, model, expected.get(name)) for name, ws in words.items()}


def systolic_set(model: Optional[BolzaModel] = None) -> CurveSystem:
    return _systems(model or bolza())["Sys"]


def omega1(model: Optional[BolzaModel] = None) -> CurveSystem:
    return _systems(model or bolza())["Omega1"]


def omega2(model: Optional[BolzaModel] = None) -> CurveSystem:
    return _systems(model or bolza())["Omega2"]


def second_systoles(model: Optional[BolzaModel] = None) -> CurveSystem:
    return _systems(model or bolza())["SecondSystoles"]
