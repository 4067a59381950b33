import random

import pytest
from hypothesis import strategies as st

from elprov.ara import Ara, expanded_size
from elprov.families import example_tbox, random_tbox
from elprov.nfa import Call, Nfa
from elprov.syntax import TOP, AtomicGCI, ExistGCI


@pytest.fixture
def ex1():
    return example_tbox()


def queryable_goals(tbox):
    concepts = sorted(tbox.concepts) + [TOP]
    goals = [AtomicGCI(a, b) for a in concepts for b in concepts]
    goals += [ExistGCI(a, r) for a in concepts for r in sorted(tbox.roles)]
    return goals


@st.composite
def tboxes(draw, max_axioms=6):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_tbox(random.Random(seed), max_axioms=max_axioms)


def word(*letters):
    """'x','v','y' -> ('x','v','y'); a single string is split into characters."""
    if len(letters) == 1:
        return tuple(letters[0])
    return tuple(letters)


def bounded_language(ara: Ara, max_len: int) -> dict[int, set]:
    """Words of length <= max_len accepted by each automaton, by direct search."""
    langs: dict[int, set] = {}
    for i, auto in enumerate(ara.automata):
        accepted = set()
        frontier = {(s, ()) for s in auto.initial}
        seen = set(frontier)
        while frontier:
            nxt = set()
            for s, w in frontier:
                if s in auto.final:
                    accepted.add(w)
                for p, sym, q in auto.transitions:
                    if p != s:
                        continue
                    pieces = langs[sym.target] if isinstance(sym, Call) else {(sym,)}
                    for piece in pieces:
                        if len(w) + len(piece) <= max_len and (q, w + piece) not in seen:
                            seen.add((q, w + piece))
                            nxt.add((q, w + piece))
            frontier = nxt
        langs[i] = accepted
    return langs


def random_ara(rng: random.Random, max_expanded: int = 200, alphabet: str = "ab") -> Ara:
    """A random well-formed ARA whose inlined NFA has at most ``max_expanded`` states."""
    while True:
        automata = []
        offset = 0
        for i in range(rng.randint(1, 4)):
            states = list(range(offset, offset + rng.randint(1, 4)))
            offset += len(states)
            symbols = list(alphabet) + [Call(j) for j in range(i)]
            trans = {(rng.choice(states), rng.choice(symbols), rng.choice(states))
                     for _ in range(rng.randint(0, 6))}
            initial = set(rng.sample(states, rng.randint(1, min(2, len(states)))))
            final = set(rng.sample(states, rng.randint(0, min(2, len(states)))))
            automata.append(Nfa.build(trans, initial, final, states=states))
        ara = Ara(tuple(automata), rng.randrange(len(automata)))
        if expanded_size(ara) <= max_expanded:
            return ara


ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
