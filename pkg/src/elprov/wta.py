"""The weighted tree automaton whose runs are derivations of a subsumption.

States are normal-form axioms plus the padding state ``BOX``. A transition is
a head state with exactly five children; every transition has weight {ε}, so
the weight of a run is the left-to-right concatenation of the exit weights
at its leaves.

Transitions are generated per head, on demand. ``transitions_for_head``
instantiates the ten derivation schemas over the whole signature;
``productive_transitions`` drops those whose conjunction or qualified
existential leaves are absent from the TBox (such leaves have weight ∅, so
the transition can never contribute).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .semiring import EPSILON, FiniteLanguage, Word
from .syntax import (
    HEAD_TYPES,
    TOP,
    UNIT,
    AnnotatedTBox,
    AtomicGCI,
    ConjGCI,
    ExistGCI,
    QualExistGCI,
    RangeRestr,
    RoleIncl,
)

MAX_RUN_DEPTH = 6


class _Box:
    __slots__ = ()

    def __repr__(self):
        return "BOX"

    def __str__(self):
        return "□"

    def pretty(self):
        return "□"

    def __reduce__(self):
        return "BOX"


BOX = _Box()


class Transition(NamedTuple):
    head: object
    children: tuple

    def __str__(self):
        return f"{self.head} <- {','.join(str(c) for c in self.children)}"


def is_head(q) -> bool:
    return isinstance(q, HEAD_TYPES)


def is_tautology(q) -> bool:
    """X ⊑ X and X ⊑ ⊤ for a concept name or ⊤. Role and range axioms never are."""
    return isinstance(q, AtomicGCI) and (q.lhs == q.rhs or q.rhs == TOP)


def exit_weight(q, tbox: AnnotatedTBox) -> FiniteLanguage:
    if q is BOX:
        return frozenset({EPSILON})
    words = set()
    ann = tbox.annotation(q)
    if ann is not None:
        words.add(EPSILON if ann == UNIT else (ann,))
    if is_tautology(q):
        words.add(EPSILON)
    return frozenset(words)


def _pad(*children) -> tuple:
    return tuple(children) + (BOX,) * (5 - len(children))


def _names(tbox: AnnotatedTBox):
    return sorted(tbox.concepts) + [TOP], sorted(tbox.roles)


def transitions_for_head(q, tbox: AnnotatedTBox) -> list[Transition]:
    """Every schema instance with head ``q``, quantifying over the full signature."""
    if not is_head(q):
        raise ValueError(f"{q} cannot head a transition")
    concepts, roles = _names(tbox)
    out: list[tuple] = []
    if isinstance(q, RoleIncl):
        r1, r3 = q.sub, q.sup
        out += [_pad(RoleIncl(r1, r2), RoleIncl(r2, r3)) for r2 in roles]
    elif isinstance(q, RangeRestr):
        r, a = q.role, q.rhs
        out += [_pad(RoleIncl(r, s), RangeRestr(s, a)) for s in roles]
        c = a
        for b1 in concepts:
            for b2 in concepts:
                for c1 in concepts:
                    for c2 in concepts:
                        out.append((RangeRestr(r, b1), RangeRestr(r, b2), AtomicGCI(b1, c1),
                                    AtomicGCI(b2, c2), ConjGCI(c1, c2, c)))
    elif isinstance(q, ExistGCI):
        a = q.lhs
        out += [_pad(ExistGCI(a, r), RoleIncl(r, q.role)) for r in roles]
        out += [_pad(AtomicGCI(a, b), ExistGCI(b, q.role)) for b in concepts]
    else:
        a, c = q.lhs, q.rhs
        out += [_pad(AtomicGCI(a, b), AtomicGCI(b, c)) for b in concepts]
        out += [_pad(AtomicGCI(a, b1), AtomicGCI(a, b2), ConjGCI(b1, b2, c))
                for b1 in concepts for b2 in concepts]
        for b in concepts:
            out.append(_pad(ConjGCI(a, b, c), AtomicGCI(TOP, b)))
            out.append(_pad(ConjGCI(b, a, c), AtomicGCI(TOP, b)))
        d = c
        for s in roles:
            for r in roles:
                for b in concepts:
                    for cc in concepts:
                        out.append((ExistGCI(a, s), RangeRestr(s, b), AtomicGCI(b, cc),
                                    RoleIncl(s, r), QualExistGCI(r, cc, d)))
        out += [_pad(ExistGCI(a, r), AtomicGCI(TOP, b), QualExistGCI(r, b, c))
                for r in roles for b in concepts]
    return [Transition(q, kids) for kids in dict.fromkeys(out)]


def productive_transitions(q, tbox: AnnotatedTBox) -> list[Transition]:
    """Like ``transitions_for_head`` but only instances whose leaf-only children are TBox axioms."""
    if not is_head(q):
        raise ValueError(f"{q} cannot head a transition")
    concepts, roles = _names(tbox)
    conjs = tbox.axioms(ConjGCI)
    quals = tbox.axioms(QualExistGCI)
    out: list[tuple] = []
    if isinstance(q, RoleIncl):
        out += [_pad(RoleIncl(q.sub, r2), RoleIncl(r2, q.sup)) for r2 in roles]
    elif isinstance(q, RangeRestr):
        r = q.role
        out += [_pad(RoleIncl(r, s), RangeRestr(s, q.rhs)) for s in roles]
        for conj in conjs:
            if conj.rhs != q.rhs:
                continue
            for b1 in concepts:
                for b2 in concepts:
                    out.append((RangeRestr(r, b1), RangeRestr(r, b2), AtomicGCI(b1, conj.left),
                                AtomicGCI(b2, conj.right), conj))
    elif isinstance(q, ExistGCI):
        a = q.lhs
        out += [_pad(ExistGCI(a, r), RoleIncl(r, q.role)) for r in roles]
        out += [_pad(AtomicGCI(a, b), ExistGCI(b, q.role)) for b in concepts]
    else:
        a, c = q.lhs, q.rhs
        out += [_pad(AtomicGCI(a, b), AtomicGCI(b, c)) for b in concepts]
        for conj in conjs:
            if conj.rhs != c:
                continue
            out.append(_pad(AtomicGCI(a, conj.left), AtomicGCI(a, conj.right), conj))
        for conj in conjs:
            if conj.rhs != c:
                continue
            if conj.left == a:
                out.append(_pad(conj, AtomicGCI(TOP, conj.right)))
            if conj.right == a:
                out.append(_pad(conj, AtomicGCI(TOP, conj.left)))
        for qual in quals:
            if qual.rhs != c:
                continue
            for s in roles:
                for b in concepts:
                    out.append((ExistGCI(a, s), RangeRestr(s, b), AtomicGCI(b, qual.filler),
                                RoleIncl(s, qual.role), qual))
        for qual in quals:
            if qual.rhs == c:
                out.append(_pad(ExistGCI(a, qual.role), AtomicGCI(TOP, qual.filler), qual))
    return [Transition(q, kids) for kids in dict.fromkeys(out)]


def head_states(tbox: AnnotatedTBox) -> list:
    """All states of the four head shapes over the TBox signature, in a fixed order."""
    concepts, roles = _names(tbox)
    states: list = [AtomicGCI(a, b) for a in concepts for b in concepts]
    states += [ExistGCI(a, r) for a in concepts for r in roles]
    states += [RoleIncl(r, s) for r in roles for s in roles]
    states += [RangeRestr(r, a) for r in roles for a in concepts]
    return states


def enumerate_runs(goal, depth: int, tbox: AnnotatedTBox, cap: int = MAX_RUN_DEPTH) -> FiniteLanguage:
    """Weights of all runs of height at most ``depth`` rooted at ``goal``.

    Brute-force ground truth: expands ``transitions_for_head`` top-down
    without canonicalizing, so the result is a language, not a monomial set.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    if depth > cap:
        raise ValueError(f"run depth {depth} exceeds cap {cap}; enumeration is exponential")
    memo: dict = {}

    def runs(q, d) -> frozenset[Word]:
        key = (q, d)
        if key in memo:
            return memo[key]
        words = set(exit_weight(q, tbox))
        if d > 0 and is_head(q):
            for t in transitions_for_head(q, tbox):
                partial = {EPSILON}
                for child in t.children:
                    sub = runs(child, d - 1)
                    partial = {w + v for w in partial for v in sub}
                    if not partial:
                        break
                words |= partial
        memo[key] = frozenset(words)
        return memo[key]

    return runs(goal, depth)


@dataclass(frozen=True)
class Wta:
    """The automaton for one goal; all goals over a TBox share transitions and exit weights."""

    tbox: AnnotatedTBox
    initial: object

    def exit_weight(self, q) -> FiniteLanguage:
        return exit_weight(q, self.tbox)

    def transitions(self, q) -> list[Transition]:
        return transitions_for_head(q, self.tbox)

    def runs(self, depth: int) -> FiniteLanguage:
        return enumerate_runs(self.initial, depth, self.tbox)
