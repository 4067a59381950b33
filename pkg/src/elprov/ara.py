"""Acyclic recursive automata (hierarchical state machines).

An ARA is a list of NFAs in topological order: automaton ``i`` may read the
call trigger ``Call(j)`` only for ``j < i``, which runs automaton ``j`` from
one of its initial states to one of its final states over a factor of the
input. The designated ``root`` decides acceptance.
"""
from __future__ import annotations

import heapq
import json
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .nfa import Call, Nfa
from .semiring import Word


class IllFormedAra(ValueError):
    pass


class SizeBlowupError(RuntimeError):
    """Inlining would produce more states than allowed."""

    def __init__(self, needed: int, cap: int):
        self.needed = needed
        self.cap = cap
        super().__init__(f"inlined NFA needs {needed} states, cap is {cap}")


@dataclass(frozen=True)
class Ara:
    automata: tuple[Nfa, ...]
    root: int
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "automata", tuple(self.automata))
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))

    @classmethod
    def from_nfa(cls, nfa: Nfa, label: str | None = None) -> "Ara":
        return cls((nfa,), 0, None if label is None else (label,))

    @property
    def size(self) -> int:
        return sum(len(a) for a in self.automata)

    @cached_property
    def alphabet(self) -> frozenset[str]:
        out: set[str] = set()
        for a in self.automata:
            out |= a.base_alphabet
        return frozenset(out)

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else f"A{i}"

    def reachable(self) -> list[int]:
        """Indices of automata reachable from the root through calls, ascending."""
        seen = {self.root}
        stack = [self.root]
        while stack:
            i = stack.pop()
            for j in self.automata[i].calls:
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
        return sorted(seen)


def well_formed(ara: Ara) -> bool:
    n = len(ara.automata)
    if not 0 <= ara.root < n:
        return False
    seen: set[int] = set()
    for i, a in enumerate(ara.automata):
        if not seen.isdisjoint(a.states):
            return False
        seen |= a.states
        if any(not 0 <= j < i for j in a.calls):
            return False
    return True


def _require_well_formed(ara: Ara):
    if not well_formed(ara):
        raise IllFormedAra("ARA violates disjointness or call ordering")


def membership(ara: Ara, word: Sequence[str], stats: dict | None = None) -> bool:
    """Whether the root accepts ``word``.

    For each (automaton, start position) pair actually requested, a forward
    sweep records which states are reachable at each later position; a call
    edge consults the callee's set of end positions from the current one.
    Each (automaton, start, end, state) cell is settled once.
    """
    _require_well_formed(ara)
    word = tuple(word)
    n = len(word)
    memo: dict[tuple[int, int], frozenset[int]] = {}
    cells = 0

    def ends(i: int, a: int) -> frozenset[int]:
        nonlocal cells
        key = (i, a)
        if key in memo:
            return memo[key]
        auto = ara.automata[i]
        reach: dict[int, set[int]] = {a: set(auto.initial)}
        positions = [a]
        result = set()
        while positions:
            b = heapq.heappop(positions)
            here = reach[b]
            frontier = list(here)
            while frontier:
                s = frontier.pop()
                for sym, t in auto.out.get(s, ()):
                    if isinstance(sym, Call):
                        for e in ends(sym.target, b):
                            if e not in reach:
                                reach[e] = set()
                                heapq.heappush(positions, e)
                            if t not in reach[e]:
                                reach[e].add(t)
                                if e == b:
                                    frontier.append(t)
                    elif b < n and word[b] == sym:
                        if b + 1 not in reach:
                            reach[b + 1] = set()
                            heapq.heappush(positions, b + 1)
                        reach[b + 1].add(t)
            cells += len(here)
            if not here.isdisjoint(auto.final):
                result.add(b)
        memo[key] = frozenset(result)
        return memo[key]

    accepted = n in ends(ara.root, 0)
    if stats is not None:
        stats["cells"] = cells
        stats["subproblems"] = len(memo)
        stats["bound"] = ara.size ** 2 * (n + 1) ** 2
    return accepted


def expanded_size(ara: Ara) -> int:
    sizes: dict[int, int] = {}
    for i in ara.reachable():
        auto = ara.automata[i]
        sizes[i] = len(auto) + sum(sizes[sym.target] for _, sym, _ in auto.transitions
                                   if isinstance(sym, Call))
    return sizes[ara.root]


def inline_expand(ara: Ara, size_cap: int = 100_000) -> Nfa:
    """Flatten by splicing a fresh copy of the callee over every call edge."""
    _require_well_formed(ara)
    needed = expanded_size(ara)
    if needed > size_cap:
        raise SizeBlowupError(needed, size_cap)

    counter = 0
    base: list[tuple[int, str, int]] = []
    eps: defaultdict[int, list[int]] = defaultdict(list)

    def expand(i: int):
        nonlocal counter
        auto = ara.automata[i]
        local = {}
        for s in sorted(auto.states):
            local[s] = counter
            counter += 1
        for p, sym, q in sorted(auto.transitions, key=lambda t: (t[0], str(t[1]), t[2])):
            if isinstance(sym, Call):
                inits, finals = expand(sym.target)
                for x in inits:
                    eps[local[p]].append(x)
                for y in finals:
                    eps[y].append(local[q])
            else:
                base.append((local[p], sym, local[q]))
        return [local[s] for s in sorted(auto.initial)], [local[s] for s in sorted(auto.final)]

    inits, finals = expand(ara.root)
    final_set = set(finals)
    out: defaultdict[int, list[tuple[str, int]]] = defaultdict(list)
    for p, sym, q in base:
        out[p].append((sym, q))

    trans = set()
    new_final = set()
    for s in range(counter):
        closure = {s}
        stack = [s]
        while stack:
            for t in eps.get(stack.pop(), ()):
                if t not in closure:
                    closure.add(t)
                    stack.append(t)
        if not closure.isdisjoint(final_set):
            new_final.add(s)
        for c in closure:
            for sym, q in out.get(c, ()):
                trans.add((s, sym, q))
    return Nfa.build(trans, inits, new_final, states=range(counter), alphabet=ara.alphabet)


def _merge(parts: Sequence[Ara]):
    automata: list[Nfa] = []
    labels: list[str] = []
    roots: list[int] = []
    next_state = 0
    for k, part in enumerate(parts):
        base = len(automata)
        for i, auto in enumerate(part.automata):
            dense = {s: next_state + r for r, s in enumerate(sorted(auto.states))}
            next_state += len(dense)
            automata.append(auto.relabel(
                dense.__getitem__,
                lambda a, base=base: Call(a.target + base) if isinstance(a, Call) else a))
            labels.append(f"{k}.{part.label(i)}")
        roots.append(part.root + base)
    return automata, labels, roots, next_state


def concat(parts: Sequence[Ara]) -> Ara:
    automata, labels, roots, s0 = _merge(parts)
    trans = {(s0 + k, Call(r), s0 + k + 1) for k, r in enumerate(roots)}
    states = range(s0, s0 + len(roots) + 1)
    automata.append(Nfa.build(trans, {s0}, {s0 + len(roots)}, states=states))
    labels.append("concat")
    return Ara(tuple(automata), len(automata) - 1, tuple(labels))


def union(parts: Sequence[Ara]) -> Ara:
    automata, labels, roots, s0 = _merge(parts)
    trans = {(s0, Call(r), s0 + 1) for r in roots}
    automata.append(Nfa.build(trans, {s0}, {s0 + 1}, states=(s0, s0 + 1)))
    labels.append("union")
    return Ara(tuple(automata), len(automata) - 1, tuple(labels))


def intersect_empty(ara: Ara, nfa: Nfa) -> Word | None:
    """A shortest word in L(ara) ∩ L(nfa), or None if the intersection is empty.

    Summary-based product search: for automaton j entered with the NFA in
    state s, ``summary(j, s)`` maps every NFA state t reachable by a word the
    automaton accepts to the shortlex-least such word. Call edges reuse the
    callee's summaries. Shortlex order is preserved by concatenation, so
    Dijkstra over (length, word) keys yields the least witness.
    """
    _require_well_formed(ara)
    if nfa.calls:
        raise ValueError("the NFA must not contain call triggers")
    memo: dict[tuple[int, int], dict[int, Word]] = {}

    def summary(j: int, s: int) -> dict[int, Word]:
        key = (j, s)
        if key in memo:
            return memo[key]
        auto = ara.automata[j]
        best: dict[tuple[int, int], tuple[int, Word]] = {}
        heap = []
        for p in sorted(auto.initial):
            best[p, s] = (0, ())
            heap.append((0, (), p, s))
        heapq.heapify(heap)
        done = set()
        result: dict[int, Word] = {}
        while heap:
            length, w, p, x = heapq.heappop(heap)
            if (p, x) in done:
                continue
            done.add((p, x))
            if p in auto.final and x not in result:
                result[x] = w
            for sym, p2 in auto.out.get(p, ()):
                if isinstance(sym, Call):
                    moves = summary(sym.target, x).items()
                else:
                    moves = (((y, (sym,)) for y in nfa.step.get((x, sym), ())))
                for y, piece in moves:
                    node = (p2, y)
                    if node in done:
                        continue
                    cand = (length + len(piece), w + piece)
                    if node not in best or cand < best[node]:
                        best[node] = cand
                        heapq.heappush(heap, (cand[0], cand[1], p2, y))
        memo[key] = result
        return result

    found = []
    for s in sorted(nfa.initial):
        for t, w in summary(ara.root, s).items():
            if t in nfa.final:
                found.append((len(w), w))
    return min(found)[1] if found else None


def power_family(n: int) -> Ara:
    """n automata of three states each; automaton i accepts a^(2^i) by calling i-1 twice."""
    if n < 1:
        raise ValueError("n must be at least 1")
    automata = []
    for i in range(1, n + 1):
        p, q, r = 3 * (i - 1), 3 * (i - 1) + 1, 3 * (i - 1) + 2
        sym = "a" if i == 1 else Call(i - 2)
        automata.append(Nfa(frozenset({p, q, r}), frozenset({sym}),
                            frozenset({(p, sym, q), (q, sym, r)}), frozenset({p}), frozenset({r})))
    return Ara(tuple(automata), n - 1, tuple(f"A{i}" for i in range(1, n + 1)))


# ---------------------------------------------------------------------------
# export

def _sym_json(sym):
    return {"call": sym.target} if isinstance(sym, Call) else sym


def _sym_from_json(obj):
    return Call(int(obj["call"])) if isinstance(obj, dict) else str(obj)


def to_json(ara: Ara) -> dict:
    comps = []
    for i, auto in enumerate(ara.automata):
        comps.append({
            "index": i,
            "label": ara.label(i),
            "states": sorted(auto.states),
            "alphabet": sorted((_sym_json(a) for a in auto.alphabet), key=json.dumps),
            "initial": sorted(auto.initial),
            "final": sorted(auto.final),
            "transitions": [[p, _sym_json(a), q] for p, a, q in
                            sorted(auto.transitions, key=lambda t: (t[0], json.dumps(_sym_json(t[1])), t[2]))],
        })
    return {"root": ara.root, "size": ara.size, "automata": comps}


def from_json(data: dict) -> Ara:
    automata = []
    labels = []
    for comp in data["automata"]:
        automata.append(Nfa(
            frozenset(comp["states"]),
            frozenset(_sym_from_json(a) for a in comp.get("alphabet", [])) |
            frozenset(_sym_from_json(a) for _, a, _ in comp["transitions"]),
            frozenset((p, _sym_from_json(a), q) for p, a, q in comp["transitions"]),
            frozenset(comp["initial"]),
            frozenset(comp["final"]),
        ))
        labels.append(comp.get("label", f"A{len(labels)}"))
    return Ara(tuple(automata), int(data["root"]), tuple(labels))


def to_dot(ara: Ara, name: str = "ara") -> str:
    lines = [f"digraph {name} {{", "  rankdir=LR;", "  compound=true;"]
    for i in ara.reachable():
        auto = ara.automata[i]
        marker = " (root)" if i == ara.root else ""
        label = ara.label(i).replace('"', r'\"')
        lines.append(f"  subgraph cluster_{i} {{")
        lines.append(f'    label="{i}: {label}{marker}";')
        for s in sorted(auto.states):
            shape = "doublecircle" if s in auto.final else "circle"
            lines.append(f'    s{s} [label="{s}", shape={shape}];')
        for s in sorted(auto.initial):
            lines.append(f"    init_s{s} [shape=point]; init_s{s} -> s{s};")
        for p, sym, q in sorted(auto.transitions, key=lambda t: (t[0], str(t[1]), t[2])):
            lines.append(f'    s{p} -> s{q} [label="{sym}"];')
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"
