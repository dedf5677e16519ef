"""Words in the surface group: Dehn's algorithm, enumeration, abelianisation
and canonical keys for free-homotopy classes.

Letters are integer codes 0..7 for g0, g0^-1, g1, ..., g3^-1 and serialise
as ``A a B b C c D d``.  The code order is the letter order used by keys.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .group import LETTERS, Elem, word_elem
from .model import BolzaModel, bolza, relator

Word = tuple


def parse(text: str) -> Word:
    try:
        return tuple(LETTERS.index(ch) for ch in text.strip())
    except ValueError as exc:
        raise ValueError(f"bad letter in word {text!r}") from exc


def fmt(word: Sequence[int]) -> str:
    return "".join(LETTERS[c] for c in word)


def inverse(word: Sequence[int]) -> Word:
    return tuple(c ^ 1 for c in reversed(word))


def free_reduce(word: Iterable[int]) -> Word:
    out: list[int] = []
    for c in word:
        if out and out[-1] == c ^ 1:
            out.pop()
        else:
            out.append(c)
    return tuple(out)


@lru_cache(maxsize=None)
def _relator_table():
    """Map every subword of length 5..8 of a rotation of r^{+-1} to the
    inverse of its complement."""
    r = relator()
    table: dict[tuple, tuple] = {}
    for base in (r, inverse(r)):
        for i in range(8):
            rot = base[i:] + base[:i]
            for k in range(5, 9):
                table.setdefault(rot[:k], inverse(rot[k:]))
    return table


def _find_long_piece(word: Word):
    table = _relator_table()
    n = len(word)
    for k in range(min(8, n), 4, -1):
        for i in range(n - k + 1):
            sub = word[i : i + k]
            if sub in table:
                return i, k, table[sub]
    return None


def dehn_reduce(word: Sequence[int]) -> Word:
    """Freely reduce, then repeatedly swap any subword longer than half a
    relator for the shorter complement (longest first, leftmost first)."""
    w = free_reduce(word)
    while True:
        hit = _find_long_piece(w)
        if hit is None:
            return w
        i, k, rep = hit
        w = free_reduce(w[:i] + rep + w[i + k :])


def is_dehn_reduced(word: Sequence[int]) -> bool:
    w = tuple(word)
    return free_reduce(w) == w and _find_long_piece(w) is None


def cyclic_dehn_reduce(word: Sequence[int]) -> Word:
    """Dehn reduction of the cyclic word (wrapping subwords included)."""
    w = dehn_reduce(word)
    while True:
        while len(w) >= 2 and w[0] == w[-1] ^ 1:
            w = w[1:-1]
        n = len(w)
        if n == 0:
            return w
        doubled = w + w[: min(n, 8)]
        hit = None
        table = _relator_table()
        for k in range(min(8, n), 4, -1):
            for i in range(n):
                sub = doubled[i : i + k]
                if len(sub) == k and sub in table:
                    hit = (i, k, table[sub])
                    break
            if hit:
                break
        if hit is None:
            return w
        i, k, rep = hit
        rot = w[i:] + w[:i]
        w = dehn_reduce(rep + rot[k:])


def represents_identity(word: Sequence[int]) -> bool:
    return dehn_reduce(word) == ()


def enumerate_words(max_len: int) -> Iterator[Word]:
    """All Dehn-reduced words of length 1..max_len, by length then letter
    order."""
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    table = _relator_table()
    layer: list[Word] = [()]
    for n in range(1, max_len + 1):
        nxt = []
        for w in layer:
            for c in range(8):
                if w and w[-1] == c ^ 1:
                    continue
                cand = w + (c,)
                if any(cand[-k:] in table for k in range(5, min(8, n) + 1)):
                    continue
                nxt.append(cand)
        yield from nxt
        layer = nxt


def abelianize(word: Sequence[int]) -> tuple:
    v = [0, 0, 0, 0]
    for c in word:
        v[c // 2] += -1 if c & 1 else 1
    return tuple(v)


# -- cyclic words and keys ---------------------------------------------------


def least_rotation(word: Sequence[int]) -> Word:
    w = tuple(word)
    if not w:
        return w
    return min(w[i:] + w[:i] for i in range(len(w)))


def cyclic_period(word: Sequence[int]) -> int:
    """Smallest p dividing len(word) with word invariant under rotation by p."""
    w = tuple(word)
    n = len(w)
    for p in range(1, n + 1):
        if n % p == 0 and w[p:] + w[:p] == w:
            return p
    return n


def is_proper_power(word: Sequence[int]) -> bool:
    return cyclic_period(word) < len(word)


@dataclass(frozen=True, order=True)
class CyclicKey:
    """Canonical cyclic word of an unoriented free-homotopy class.

    ``flipped`` records whether the canonical word reads the class against
    the orientation of the representative it was computed from."""

    word: Word
    flipped: bool = field(default=False, compare=False)

    def __str__(self) -> str:
        return fmt(self.word)


def cutting_word(g: Elem, model: BolzaModel | None = None) -> Word:
    model = model or bolza()
    return model.walk_elem(g).word


def oriented_key(g: Elem, model: BolzaModel | None = None) -> Word:
    return least_rotation(cutting_word(g, model))


def conjugacy_key(w: Sequence[int] | Elem, model: BolzaModel | None = None) -> CyclicKey:
    """Key equal for two elements iff they are conjugate up to inversion.

    The canonical cyclic word is the cutting sequence of the closed geodesic
    through the octagon tiling (axis nudged to its left at tile vertices),
    minimised over rotations and over both orientations."""
    model = model or bolza()
    g = w if isinstance(w, Elem) else word_elem(dehn_reduce(w))
    if g.is_identity():
        raise ValueError("the identity has no conjugacy key")
    fwd = oriented_key(g, model)
    back = oriented_key(g.inverse(), model)
    if back < fwd:
        return CyclicKey(back, True)
    return CyclicKey(fwd, False)
