"""Epsilon-free NFAs over provenance variables and call triggers."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Hashable, Iterable, Sequence, Union


@dataclass(frozen=True, order=True)
class Call:
    """Call trigger: reading it runs automaton ``target`` of the enclosing ARA."""

    target: int

    def __str__(self):
        return f"call:{self.target}"


Symbol = Union[str, Call]


@dataclass(frozen=True)
class Nfa:
    states: frozenset[int]
    alphabet: frozenset
    transitions: frozenset[tuple[int, Symbol, int]]
    initial: frozenset[int]
    final: frozenset[int]

    def __post_init__(self):
        for name in ("states", "alphabet", "transitions", "initial", "final"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        if not self.initial <= self.states or not self.final <= self.states:
            raise ValueError("initial and final states must be declared states")
        for p, sym, q in self.transitions:
            if p not in self.states or q not in self.states:
                raise ValueError(f"transition {(p, sym, q)} uses an undeclared state")
            if sym not in self.alphabet:
                raise ValueError(f"transition {(p, sym, q)} uses a symbol outside the alphabet")

    @classmethod
    def build(cls, transitions: Iterable[tuple[int, Symbol, int]], initial, final,
              states: Iterable[int] = (), alphabet: Iterable = ()) -> "Nfa":
        """Infer states and alphabet from the transitions (plus any extras given)."""
        transitions = frozenset(transitions)
        states = set(states) | set(initial) | set(final)
        alphabet = set(alphabet)
        for p, sym, q in transitions:
            states.update((p, q))
            alphabet.add(sym)
        return cls(frozenset(states), frozenset(alphabet), transitions,
                   frozenset(initial), frozenset(final))

    def __len__(self):
        return len(self.states)

    @cached_property
    def out(self) -> dict[int, list[tuple[Symbol, int]]]:
        table = defaultdict(list)
        for p, sym, q in sorted(self.transitions, key=_transition_key):
            table[p].append((sym, q))
        return dict(table)

    @cached_property
    def step(self) -> dict[tuple[int, Symbol], tuple[int, ...]]:
        table = defaultdict(list)
        for p, sym, q in self.transitions:
            table[p, sym].append(q)
        return {k: tuple(sorted(v)) for k, v in table.items()}

    @cached_property
    def calls(self) -> frozenset[int]:
        return frozenset(sym.target for sym in self.alphabet if isinstance(sym, Call))

    @property
    def base_alphabet(self) -> frozenset[str]:
        return frozenset(sym for sym in self.alphabet if not isinstance(sym, Call))

    def accepts(self, word: Sequence[str]) -> bool:
        current = set(self.initial)
        for sym in word:
            if isinstance(sym, Call) or sym not in self.alphabet:
                return False
            current = {q for p in current for q in self.step.get((p, sym), ())}
            if not current:
                return False
        return not current.isdisjoint(self.final)

    def renumber(self, offset: int) -> "Nfa":
        return self.relabel(lambda s: s + offset)

    def relabel(self, state_map=None, symbol_map=None) -> "Nfa":
        fs = state_map or (lambda s: s)
        fa = symbol_map or (lambda a: a)
        return Nfa(
            frozenset(fs(s) for s in self.states),
            frozenset(fa(a) for a in self.alphabet),
            frozenset((fs(p), fa(a), fs(q)) for p, a, q in self.transitions),
            frozenset(fs(s) for s in self.initial),
            frozenset(fs(s) for s in self.final),
        )

    def to_dot(self, name: str = "nfa") -> str:
        lines = [f"digraph {name} {{", "  rankdir=LR;"]
        lines += _dot_body(self, "  ")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _transition_key(t):
    p, sym, q = t
    return (p, isinstance(sym, Call), str(sym), q)


def _dot_body(nfa: Nfa, indent: str) -> list[str]:
    lines = []
    for s in sorted(nfa.states):
        shape = "doublecircle" if s in nfa.final else "circle"
        lines.append(f'{indent}s{s} [label="{s}", shape={shape}];')
    for s in sorted(nfa.initial):
        lines.append(f'{indent}init_s{s} [shape=point]; init_s{s} -> s{s};')
    for p, sym, q in sorted(nfa.transitions, key=_transition_key):
        lines.append(f'{indent}s{p} -> s{q} [label="{sym}"];')
    return lines


def ordered_prefix_nfa(prefix: Sequence[str], alphabet: Iterable[str]) -> Nfa:
    """Words over ``alphabet`` whose distinct symbols first appear as ``prefix`` followed by anything.

    State j means "the first j symbols of the prefix have been seen, in order".
    Before the prefix is complete only already-seen symbols may repeat; at the
    last state every alphabet symbol loops.
    """
    prefix = tuple(prefix)
    if len(set(prefix)) != len(prefix):
        raise ValueError(f"ordering has repeated symbols: {prefix}")
    alphabet = set(alphabet) | set(prefix)
    k = len(prefix)
    trans = set()
    for j in range(k):
        trans.update((j, prefix[i], j) for i in range(j))
        trans.add((j, prefix[j], j + 1))
    trans.update((k, a, k) for a in alphabet)
    return Nfa(frozenset(range(k + 1)), frozenset(alphabet), frozenset(trans),
               frozenset({0}), frozenset({k}))


def ordered_language_nfa(ordering: Sequence[str]) -> Nfa:
    """Words using exactly the symbols of ``ordering``, first occurring in that order.

    Accepts σ1+ σ2 (σ1∪σ2)* ... σk (σ1∪...∪σk)*; for the empty ordering, only ε.
    """
    return ordered_prefix_nfa(ordering, ordering)


def word_nfa(words: Iterable[Sequence[Hashable]], offset: int = 0) -> Nfa:
    """A trie-shaped NFA for a finite set of words."""
    trans = set()
    final = set()
    nodes = {(): offset}
    for w in sorted(set(map(tuple, words)), key=lambda w: (len(w), [str(a) for a in w])):
        for i in range(len(w)):
            if w[: i + 1] not in nodes:
                nodes[w[: i + 1]] = offset + len(nodes)
            trans.add((nodes[w[:i]], w[i], nodes[w[: i + 1]]))
        final.add(nodes[w])
    return Nfa.build(trans, {offset}, final, states=nodes.values())
