"""Benchmark TBoxes and a random generator for cross-checking the engines."""
from __future__ import annotations

import random

from .syntax import (
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


def example_tbox() -> AnnotatedTBox:
    """{B⊓C⊑D: u, ⊤⊑B: v, A⊑C: w, A⊑∃R: x, ∃R.B⊑B: y}."""
    return AnnotatedTBox((
        (ConjGCI("B", "C", "D"), "u"),
        (AtomicGCI(TOP, "B"), "v"),
        (AtomicGCI("A", "C"), "w"),
        (ExistGCI("A", "R"), "x"),
        (QualExistGCI("R", "B", "B"), "y"),
    ))


def chain_tbox() -> AnnotatedTBox:
    """{A⊑B: m, B⊑C: n}; order-sensitive under the left-absorbing product."""
    return AnnotatedTBox(((AtomicGCI("A", "B"), "m"), (AtomicGCI("B", "C"), "n")))


def sword_tbox(n: int) -> AnnotatedTBox:
    """Level i offers two routes A{i-1} → A{i}: via B{i} (u{i}, v{i}) or via C{i} (w{i}, x{i})."""
    if n < 1:
        raise ValueError("n must be at least 1")
    entries = []
    for i in range(1, n + 1):
        entries += [
            (AtomicGCI(f"A{i - 1}", f"B{i}"), f"u{i}"),
            (AtomicGCI(f"A{i - 1}", f"C{i}"), f"w{i}"),
            (AtomicGCI(f"B{i}", f"A{i}"), f"v{i}"),
            (AtomicGCI(f"C{i}", f"A{i}"), f"x{i}"),
        ]
    return AnnotatedTBox(tuple(entries))


def sword_selection(choices) -> tuple[str, ...]:
    """Monomial word for a route: choices[i-1] false picks u_i v_i, true picks w_i x_i."""
    word = []
    for i, via_c in enumerate(choices, start=1):
        word += [f"w{i}", f"x{i}"] if via_c else [f"u{i}", f"v{i}"]
    return tuple(word)


def random_tbox(rng: random.Random, max_axioms: int = 8, max_concepts: int = 4,
                max_roles: int = 2, unit_prob: float = 0.15) -> AnnotatedTBox:
    """A random normal-form TBox with distinct variables (some axioms annotated 1)."""
    concepts = [f"C{i}" for i in range(rng.randint(1, max_concepts))]
    roles = [f"R{i}" for i in range(rng.randint(0, max_roles))]
    pool = concepts + [TOP]

    def conc():
        return rng.choice(pool)

    makers = [lambda: AtomicGCI(conc(), conc()), lambda: ConjGCI(conc(), conc(), conc())]
    if roles:
        makers += [
            lambda: ExistGCI(conc(), rng.choice(roles)),
            lambda: QualExistGCI(rng.choice(roles), conc(), conc()),
            lambda: RangeRestr(rng.choice(roles), conc()),
            lambda: RoleIncl(rng.choice(roles), rng.choice(roles)),
        ]
    weights = [4, 2] + ([2, 2, 1, 1] if roles else [])
    axioms: dict = {}
    target = rng.randint(1, max_axioms)
    for _ in range(target * 4):
        if len(axioms) >= target:
            break
        ax = rng.choices(makers, weights)[0]()
        axioms.setdefault(ax, None)
    entries = []
    for k, ax in enumerate(axioms):
        entries.append((ax, UNIT if rng.random() < unit_prob else f"v{k}"))
    return AnnotatedTBox(tuple(entries))
