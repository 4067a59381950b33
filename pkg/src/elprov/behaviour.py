"""Behaviour of the derivation automaton: saturation, ARA stack, entailment.

``saturate`` iterates wt_{i+1}(q) = wt_i(q) ∪ ⋃ wt_i(q1)···wt_i(q5) over
canonical monomial sets until an iteration adds nothing. It is exact but may
produce exponentially many monomials, and serves as the oracle for the
ARA route.

``build_ara_stack`` mirrors the same recurrence with one small NFA per
(iteration, state) that calls the automata of the previous iteration, so the
behaviour language is represented in polynomial size. ``entails`` decides a
monomial query either by table lookup or by intersecting that ARA with the
ordered languages of the monomial's orderings.
"""
from __future__ import annotations

import dataclasses
import enum
import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .ara import Ara, intersect_empty, membership
from .nfa import Call, Nfa, ordered_language_nfa, ordered_prefix_nfa
from .semiring import EPSILON, Mode, Monomial, Word, canonical_word, render_word
from .syntax import QUERY_TYPES, UNIT, AnnotatedTBox
from .wta import BOX, exit_weight, head_states, is_head, productive_transitions


class Engine(enum.Enum):
    SATURATION = "saturation"
    ARA = "ara"


class TruncatedError(RuntimeError):
    pass


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class EngineConfig:
    mode: Mode = Mode.TRIO
    engine: Engine = Engine.ARA
    max_iterations: int | None = None
    max_set_size: int | None = 2_000_000
    prune_orderings: bool = True
    # answer a query on the axioms annotated with its variables or 1 only
    restrict_to_query: bool = True


# ---------------------------------------------------------------------------
# monomial encodings used inside the fixpoint

class _TrioAlgebra:
    """Monomials as bitmasks over the sorted variable list; product is OR."""

    one = 0

    def __init__(self, variables: Iterable[str]):
        self.names = sorted(variables)
        self.bit = {v: 1 << i for i, v in enumerate(self.names)}

    def encode(self, word: Word) -> int:
        m = 0
        for v in word:
            m |= self.bit[v]
        return m

    def decode(self, m: int) -> Word:
        return tuple(v for i, v in enumerate(self.names) if m >> i & 1)

    @staticmethod
    def mul(a: int, b: int) -> int:
        return a | b


class _LapAlgebra:
    """First-occurrence words, each variable stored as its bit so a word's support is ``sum(word)``."""

    one: tuple = ()

    def __init__(self, variables: Iterable[str]):
        self.names = sorted(variables)
        self.bit = {v: 1 << i for i, v in enumerate(self.names)}

    def encode(self, word: Word) -> tuple[int, ...]:
        return tuple(self.bit[v] for v in canonical_word(word, Mode.LAP))

    def decode(self, m: tuple[int, ...]) -> Word:
        return tuple(self.names[b.bit_length() - 1] for b in m)

    @staticmethod
    def mul(a: tuple, b: tuple) -> tuple:
        seen = sum(a)
        return a + tuple(x for x in b if not x & seen)


def _algebra(mode: Mode, tbox: AnnotatedTBox):
    return _TrioAlgebra(tbox.variables) if mode is Mode.TRIO else _LapAlgebra(tbox.variables)


# ---------------------------------------------------------------------------
# state space

def relevant_states(tbox: AnnotatedTBox, goals: Iterable | None = None):
    """Head states (backward-reachable from ``goals``, or all) with their productive transitions.

    Returns (ordered states including leaves and BOX, {head: [children tuples without BOX]}).
    """
    if goals is None:
        heads = head_states(tbox)
    else:
        heads = []
        seen = set()
        stack = [g for g in goals if is_head(g)]
        for g in stack:
            seen.add(g)
        while stack:
            q = stack.pop()
            heads.append(q)
            for t in productive_transitions(q, tbox):
                for c in t.children:
                    if is_head(c) and c not in seen:
                        seen.add(c)
                        stack.append(c)
    trans = {}
    leaves = {}
    for q in heads:
        kids_list = []
        for t in productive_transitions(q, tbox):
            kids = tuple(c for c in t.children if c is not BOX)
            kids_list.append(kids)
            for c in kids:
                if not is_head(c):
                    leaves[c] = None
        trans[q] = kids_list
    head_set = set(heads)
    ordered: list = [BOX]
    ordered += [ax for ax, _ in tbox if ax in head_set or ax in leaves]
    listed = set(ordered)
    ordered += [q for q in leaves if q not in listed]
    ordered += [q for q in heads if q not in listed]
    if goals is not None:
        ordered += [g for g in goals if g not in listed and not is_head(g)]
    return ordered, trans


@dataclass
class BehaviourTable:
    """Per-iteration canonical monomial sets. Row i is wt_i up to canonical form."""

    mode: Mode
    states: list
    deltas: list[dict]  # deltas[i][q]: encoded monomials first present at iteration i
    truncated: bool
    _algebra: object = field(repr=False, default=None)

    @cached_property
    def state_set(self) -> frozenset:
        return frozenset(self.states)

    @property
    def iterations(self) -> int:
        """Index of the last computed row."""
        return len(self.deltas) - 1

    @property
    def stable_at(self) -> int | None:
        """First row equal to its predecessor (None if the cap stopped iteration first)."""
        return None if self.truncated else self.iterations

    @property
    def fixpoint_index(self) -> int:
        if self.truncated:
            raise TruncatedError("saturation hit its iteration cap before stabilising")
        return max(self.iterations - 1, 0)

    def _encoded(self, i: int, q) -> set:
        out = set()
        for row in self.deltas[: min(i, self.iterations) + 1]:
            out |= row.get(q, frozenset())
        return out

    def at(self, i: int, q) -> frozenset[Word]:
        return frozenset(self._algebra.decode(m) for m in self._encoded(i, q))

    def monomials_at(self, i: int, q) -> frozenset[Monomial]:
        return frozenset(Monomial(w, self.mode) for w in self.at(i, q))

    def final(self, q) -> frozenset[Word]:
        return self.at(self.iterations, q)

    def row(self, i: int) -> dict:
        return {q: self.at(i, q) for q in self.states}

    def contains(self, q, word: Word, i: int | None = None) -> bool:
        enc = self._algebra.encode(word)
        i = self.iterations if i is None else i
        return any(enc in row.get(q, ()) for row in self.deltas[: min(i, self.iterations) + 1])

    def to_tsv(self, states: Sequence | None = None) -> str:
        states = self.states if states is None else states
        lines = ["\t".join(["iteration"] + [_state_name(q) for q in states])]
        for i in range(self.iterations + 1):
            cells = [str(i)]
            for q in states:
                words = sorted(self.at(i, q))
                cells.append("{" + ", ".join(render_word(w) for w in words) + "}" if words else "∅")
            lines.append("\t".join(cells))
        return "\n".join(lines) + "\n"


def _state_name(q) -> str:
    return q.pretty()


def _product(sets: Sequence, alg) -> set:
    acc = {alg.one}
    if isinstance(alg, _TrioAlgebra):
        for s in sets:
            acc = {a | b for a in acc for b in s}
        return acc
    for s in sets:
        # the tail a word contributes depends only on the support of what precedes it
        tails: dict[int, set] = {}
        out = set()
        for a in acc:
            seen = sum(a)
            tail = tails.get(seen)
            if tail is None:
                tail = tails[seen] = {tuple(x for x in b if not x & seen) for b in s}
            out.update([a + t for t in tail])
        acc = out
    return acc


def saturate(tbox: AnnotatedTBox, mode: Mode = Mode.TRIO, cap: int | None = None,
             goals: Iterable | None = None, budget: int | None = None) -> BehaviourTable:
    """Run the fixpoint over canonical monomial sets until no state changes (or ``cap`` rows).

    Semi-naive: a transition is re-evaluated only for child combinations that
    involve at least one monomial new in the previous row.
    """
    alg = _algebra(mode, tbox)
    states, trans = relevant_states(tbox, goals)
    idx = {q: k for k, q in enumerate(states)}
    rules = [(idx[q], [tuple(idx[c] for c in kids) for kids in kids_list])
             for q, kids_list in trans.items()]
    table = [{alg.encode(w) for w in exit_weight(q, tbox)} for q in states]
    delta = {k: set(v) for k, v in enumerate(table) if v}

    def snapshot(d):
        return {states[k]: frozenset(v) for k, v in d.items()}

    deltas = [snapshot(delta)]
    i = 0
    while delta:
        if cap is not None and i >= cap:
            return BehaviourTable(mode, states, deltas, True, alg)
        old = {k: table[k] - v for k, v in delta.items()}
        new: dict = {}
        for q, kids_list in rules:
            target = table[q]
            for kids in kids_list:
                if not any(c in delta for c in kids):
                    continue
                if not all(table[c] for c in kids):
                    continue
                for j, c in enumerate(kids):
                    if c not in delta:
                        continue
                    sets = [old.get(k, table[k]) for k in kids[:j]]
                    sets.append(delta[c])
                    sets += [table[k] for k in kids[j + 1:]]
                    fresh = _product(sets, alg) - target
                    if fresh:
                        new.setdefault(q, set()).update(fresh)
        for q, ms in new.items():
            table[q] |= ms
            if budget is not None and len(table[q]) > budget:
                raise BudgetExceeded(f"monomial set for {_state_name(states[q])} exceeds {budget}")
        delta = new
        deltas.append(snapshot(new))
        i += 1
    return BehaviourTable(mode, states, deltas, False, alg)


def iterate_languages(tbox: AnnotatedTBox, iterations: int, goals: Iterable | None = None) -> list[dict]:
    """Raw wt_0..wt_iterations as languages (no canonicalization). Exponential; for testing."""
    states, trans = relevant_states(tbox, goals)
    rows = [{q: frozenset(exit_weight(q, tbox)) for q in states}]
    for _ in range(iterations):
        prev = rows[-1]
        row = {}
        for q in states:
            words = set(prev[q])
            for kids in trans.get(q, ()):
                partial = {EPSILON}
                for c in kids:
                    partial = {w + v for w in partial for v in prev[c]}
                    if not partial:
                        break
                words |= partial
            row[q] = frozenset(words)
        rows.append(row)
    return rows


def iteration_bounds(tbox: AnnotatedTBox) -> dict[str, int]:
    """Worst-case iteration caps: |Q|·|T| with Q all normal-form axioms, and |T|^4."""
    c = len(tbox.concepts) + 1
    r = len(tbox.roles)
    q = c * c + c * r + c ** 3 + r * c * c + r * c + r * r
    return {"states_times_axioms": q * len(tbox), "quartic": len(tbox) ** 4}


# ---------------------------------------------------------------------------
# ARA stack

@dataclass
class AraStack:
    ara: Ara
    index: dict  # (iteration, state) -> automaton index
    iterations: int
    goal: object

    @property
    def size(self) -> int:
        return self.ara.size


def _exit_nfa(words, start: int) -> Nfa:
    trans = set()
    final = set()
    for w in words:
        if not w:
            final.add(start)
        else:
            trans.add((start, w[0], start + 1))
            final.add(start + 1)
    states = {start} | ({start + 1} if trans else set())
    return Nfa.build(trans, {start}, final, states=states)


def ara_stack(tbox: AnnotatedTBox, goal, iterations: int) -> AraStack:
    """Automata A_i^q for i ≤ iterations, restricted to what the goal's root can reach.

    A_0^q recognises exit_weight(q). A_{i+1}^q shares one initial and one
    final state between a bypass call to A_i^q and, per transition, a chain
    calling the children's automata in order (at most four fresh states).
    Leaf shapes have constant languages, so they are always called at level 0.
    Calls into automata with empty language are left out.
    """
    if iterations < 0:
        raise ValueError("iterations must be non-negative")
    states, trans = relevant_states(tbox, [goal])
    heads = [q for q in states if is_head(q)]

    nonempty = [{q: bool(exit_weight(q, tbox)) for q in states if q is not BOX}]
    for _ in range(iterations):
        prev = nonempty[-1]
        row = dict(prev)
        for q in heads:
            if not row[q]:
                row[q] = any(all(prev[c] for c in kids) for kids in trans[q])
        nonempty.append(row)

    def level_of(c, i):
        return (i, c) if is_head(c) else (0, c)

    needed: list[dict] = [dict() for _ in range(iterations + 1)]
    needed[iterations][goal] = None
    for i in range(iterations, 0, -1):
        prev = nonempty[i - 1]
        for q in needed[i]:
            if prev[q]:
                needed[i - 1][q] = None
            for kids in trans.get(q, ()):
                if all(prev[c] for c in kids):
                    for c in kids:
                        lvl, _ = level_of(c, i - 1)
                        needed[lvl][c] = None

    automata: list[Nfa] = []
    labels: list[str] = []
    index: dict = {}
    counter = 0

    def add(key, nfa):
        nonlocal counter
        index[key] = len(automata)
        automata.append(nfa)
        labels.append(f"A_{key[0]}^{{{key[1].pretty()}}}")
        counter += len(nfa)

    for q in needed[0]:
        add((0, q), _exit_nfa(sorted(exit_weight(q, tbox)), counter))
    for i in range(1, iterations + 1):
        prev = nonempty[i - 1]
        for q in needed[i]:
            s, t = counter, counter + 1
            fresh = counter + 2
            edges = set()
            if prev[q]:
                edges.add((s, Call(index[i - 1, q]), t))
            for kids in trans.get(q, ()):
                if not all(prev[c] for c in kids):
                    continue
                path = [s] + list(range(fresh, fresh + len(kids) - 1)) + [t]
                fresh += len(kids) - 1
                for k, c in enumerate(kids):
                    edges.add((path[k], Call(index[level_of(c, i - 1)]), path[k + 1]))
            add((i, q), Nfa.build(edges, {s}, {t}, states=range(s, fresh)))
    root = index[iterations, goal]
    return AraStack(Ara(tuple(automata), root, tuple(labels)), index, iterations, goal)


def build_ara_stack(tbox: AnnotatedTBox, goal, iterations: int) -> Ara:
    return ara_stack(tbox, goal, iterations).ara


# ---------------------------------------------------------------------------
# queries

@dataclass
class Entailment:
    goal: object
    monomial: Monomial
    entailed: bool
    engine: Engine
    mode: Mode
    iterations: int
    witness_word: Word | None = None
    witness_ordering: tuple[str, ...] | None = None
    orderings_checked: int = 0
    prefix_checks: int = 0


def _check_goal(goal):
    if not isinstance(goal, QUERY_TYPES):
        raise ValueError(f"{goal} is not a queryable goal (need A ⊑ B or A ⊑ ∃R)")


class Reasoner:
    """Answers queries against one TBox, caching saturation tables and behaviour ARAs per goal."""

    def __init__(self, tbox: AnnotatedTBox, config: EngineConfig | None = None):
        self.tbox = tbox
        self.config = config or EngineConfig()
        self._tables: dict = {}
        self._aras: dict = {}
        self._restricted: dict = {}

    def table(self, goal, mode: Mode | None = None) -> BehaviourTable:
        mode = mode or self.config.mode
        key = (goal, mode)
        if key not in self._tables:
            # a table over a superset of the goal's relevant states answers it too
            needed = set(relevant_states(self.tbox, [goal])[0])
            for (_, m), t in self._tables.items():
                if m is mode and needed <= t.state_set:
                    self._tables[key] = t
                    break
            else:
                self._tables[key] = saturate(self.tbox, mode, self.config.max_iterations, [goal],
                                             self.config.max_set_size)
        table = self._tables[key]
        if table.truncated:
            raise TruncatedError(
                f"no fixpoint within {self.config.max_iterations} iterations; raise the cap")
        return table

    def stack(self, goal) -> AraStack:
        if goal not in self._aras:
            n = self.table(goal).fixpoint_index
            self._aras[goal] = ara_stack(self.tbox, goal, n)
        return self._aras[goal]

    def behaviour_ara(self, goal) -> Ara:
        return self.stack(goal).ara

    def monomials(self, goal) -> list[Monomial]:
        _check_goal(goal)
        table = self.table(goal)
        return sorted(Monomial(w, table.mode) for w in table.final(goal))

    def entails(self, goal, m: Sequence[str]) -> Entailment:
        _check_goal(goal)
        cfg = self.config
        mono = Monomial(canonical_word(m, cfg.mode), cfg.mode)
        if not set(mono.canonical) <= self.tbox.variables:
            return Entailment(goal, mono, False, cfg.engine, cfg.mode, 0)
        if cfg.restrict_to_query:
            return self.restricted(mono.canonical)._decide(goal, mono)
        return self._decide(goal, mono)

    def restricted(self, variables: Iterable[str]) -> "Reasoner":
        """Reasoner over the axioms annotated with one of ``variables`` or the unit.

        A word whose monomial uses only these variables can only come from
        runs whose leaves are such axioms or tautologies, so queries over
        them have the same answer on the smaller TBox.
        """
        keep = frozenset(variables)
        if keep not in self._restricted:
            sub = AnnotatedTBox(tuple((ax, a) for ax, a in self.tbox if a == UNIT or a in keep))
            cfg = dataclasses.replace(self.config, restrict_to_query=False)
            self._restricted[keep] = Reasoner(sub, cfg)
        return self._restricted[keep]

    def _decide(self, goal, mono: Monomial) -> Entailment:
        cfg = self.config
        if cfg.engine is Engine.SATURATION:
            table = self.table(goal)
            ok = table.contains(goal, mono.canonical)
            return Entailment(goal, mono, ok, cfg.engine, cfg.mode, table.fixpoint_index)

        stack = self.stack(goal)
        ara = stack.ara
        result = Entailment(goal, mono, False, cfg.engine, cfg.mode, stack.iterations)
        sigma = mono.canonical
        if not sigma:
            result.orderings_checked = 1
            if membership(ara, ()):
                result.entailed, result.witness_word, result.witness_ordering = True, (), ()
            return result
        if cfg.mode is Mode.LAP:
            result.orderings_checked = 1
            w = intersect_empty(ara, ordered_language_nfa(sigma))
            if w is not None:
                result.entailed, result.witness_word, result.witness_ordering = True, w, sigma
            return result
        found = (_search_pruned(ara, sigma, result) if cfg.prune_orderings
                 else _search_all(ara, sigma, result))
        if found is not None:
            result.entailed = True
            result.witness_ordering, result.witness_word = found
        return result


def _search_all(ara: Ara, symbols: Word, stats: Entailment):
    for order in itertools.permutations(sorted(symbols)):
        stats.orderings_checked += 1
        w = intersect_empty(ara, ordered_language_nfa(order))
        if w is not None:
            return order, w
    return None


def _search_pruned(ara: Ara, symbols: Word, stats: Entailment):
    """Lexicographic ordering search that abandons a prefix once no word can start that way.

    A prefix check asks whether some accepted word over the monomial's
    symbols has its first occurrences beginning with the prefix; every full
    ordering extending a failed prefix would fail too, so the first success
    is the same as in plain lexicographic enumeration.
    """
    alphabet = sorted(symbols)

    def go(prefix: tuple, remaining: list):
        if not remaining:
            stats.orderings_checked += 1
            w = intersect_empty(ara, ordered_language_nfa(prefix))
            return None if w is None else (prefix, w)
        stats.prefix_checks += 1
        if intersect_empty(ara, ordered_prefix_nfa(prefix, alphabet)) is None:
            return None
        for k, s in enumerate(remaining):
            hit = go(prefix + (s,), remaining[:k] + remaining[k + 1:])
            if hit is not None:
                return hit
        return None

    return go((), alphabet)


def behaviour_ara(tbox: AnnotatedTBox, goal, config: EngineConfig | None = None) -> Ara:
    return Reasoner(tbox, config).behaviour_ara(goal)


def entails(tbox: AnnotatedTBox, goal, m: Sequence[str], config: EngineConfig | None = None) -> Entailment:
    return Reasoner(tbox, config).entails(goal, m)


def monomials(tbox: AnnotatedTBox, goal, mode: Mode = Mode.TRIO,
              max_iterations: int | None = None) -> list[Monomial]:
    return Reasoner(tbox, EngineConfig(mode=mode, max_iterations=max_iterations)).monomials(goal)
