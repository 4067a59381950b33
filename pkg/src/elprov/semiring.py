"""Words, monomials and finite languages over provenance variables.

A word is a tuple of variable names; ``()`` is the empty word. Two products
are supported: the commutative idempotent one of the trio semiring, where a
monomial is the sorted set of its variables, and the left-absorbing one,
where repeated variables keep only their first occurrence.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import AbstractSet, Iterable

Word = tuple[str, ...]
FiniteLanguage = frozenset  # of Word

EPSILON: Word = ()


class Mode(enum.Enum):
    TRIO = "trio"
    LAP = "lap"  # left-absorbing product


def canonical_word(word: Iterable[str], mode: Mode) -> Word:
    if mode is Mode.TRIO:
        return tuple(sorted(set(word)))
    return tuple(dict.fromkeys(word))


@dataclass(frozen=True)
class Monomial:
    canonical: Word
    mode: Mode

    @property
    def is_unit(self) -> bool:
        return not self.canonical

    def __str__(self):
        return render_word(self.canonical)

    def __len__(self):
        return len(self.canonical)

    def __lt__(self, other):
        return self.canonical < other.canonical


def canonicalize(word: Iterable[str], mode: Mode) -> Monomial:
    return Monomial(canonical_word(word, mode), mode)


def render_word(word: Word) -> str:
    return "*".join(word) if word else "1"


def lang_concat(a: AbstractSet[Word], b: AbstractSet[Word]) -> FiniteLanguage:
    return frozenset(x + y for x in a for y in b)


def lang_union(a: AbstractSet[Word], b: AbstractSet[Word]) -> FiniteLanguage:
    return frozenset(a) | frozenset(b)


def canonical_image(lang: Iterable[Word], mode: Mode) -> frozenset[Word]:
    return frozenset(canonical_word(w, mode) for w in lang)


def k_equivalent(a: Iterable[Word], b: Iterable[Word], mode: Mode = Mode.TRIO) -> bool:
    return canonical_image(a, mode) == canonical_image(b, mode)
