"""Annotated ELHr TBoxes in restricted normal form, and their text format.

Concepts are plain strings; the top concept is the reserved string ``TOP``.
Annotations are strings too: a provenance variable name, or ``UNIT`` ("1").

File format, one axiom per line (``#`` lines and blank lines are skipped)::

    A <= B : u              # A ⊑ B
    A <= ex R : x           # A ⊑ ∃R
    B & C <= D : u          # B ⊓ C ⊑ D
    ex R . B <= B : y       # ∃R.B ⊑ B
    ran(R) <= A : 1         # ran(R) ⊑ A
    R [= S : z              # R ⊑ S
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Union

TOP = "top"
UNIT = "1"
KEYWORDS = frozenset({"top", "ex", "ran"})
NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


class TBoxError(ValueError):
    """Malformed TBox or query text. ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NotNormalFormError(TBoxError):
    pass


def _concept(c: str) -> str:
    return "⊤" if c == TOP else c


@dataclass(frozen=True)
class AtomicGCI:
    lhs: str
    rhs: str

    def __str__(self):
        return f"{self.lhs} <= {self.rhs}"

    def pretty(self):
        return f"{_concept(self.lhs)}⊑{_concept(self.rhs)}"


@dataclass(frozen=True)
class ExistGCI:
    lhs: str
    role: str

    def __str__(self):
        return f"{self.lhs} <= ex {self.role}"

    def pretty(self):
        return f"{_concept(self.lhs)}⊑∃{self.role}"


@dataclass(frozen=True)
class ConjGCI:
    """``left ⊓ right ⊑ rhs``; conjunct order is significant."""

    left: str
    right: str
    rhs: str

    def __str__(self):
        return f"{self.left} & {self.right} <= {self.rhs}"

    def pretty(self):
        return f"{_concept(self.left)}⊓{_concept(self.right)}⊑{_concept(self.rhs)}"


@dataclass(frozen=True)
class QualExistGCI:
    """``∃role.filler ⊑ rhs``."""

    role: str
    filler: str
    rhs: str

    def __str__(self):
        return f"ex {self.role} . {self.filler} <= {self.rhs}"

    def pretty(self):
        return f"∃{self.role}.{_concept(self.filler)}⊑{_concept(self.rhs)}"


@dataclass(frozen=True)
class RangeRestr:
    role: str
    rhs: str

    def __str__(self):
        return f"ran({self.role}) <= {self.rhs}"

    def pretty(self):
        return f"ran({self.role})⊑{_concept(self.rhs)}"


@dataclass(frozen=True)
class RoleIncl:
    sub: str
    sup: str

    def __str__(self):
        return f"{self.sub} [= {self.sup}"

    def pretty(self):
        return f"{self.sub}⊑{self.sup}"


Axiom = Union[AtomicGCI, ExistGCI, ConjGCI, QualExistGCI, RangeRestr, RoleIncl]
AXIOM_TYPES = (AtomicGCI, ExistGCI, ConjGCI, QualExistGCI, RangeRestr, RoleIncl)
# shapes that can head a derivation step; the other two only occur as leaves
HEAD_TYPES = (AtomicGCI, ExistGCI, RoleIncl, RangeRestr)
QUERY_TYPES = (AtomicGCI, ExistGCI)


def axiom_key(ax) -> tuple:
    """Total order over axioms of mixed shape (used wherever output must be deterministic)."""
    return (AXIOM_TYPES.index(type(ax)),) + tuple(getattr(ax, f) for f in ax.__dataclass_fields__)


def concepts_of(ax) -> set[str]:
    if isinstance(ax, AtomicGCI):
        names = {ax.lhs, ax.rhs}
    elif isinstance(ax, ExistGCI):
        names = {ax.lhs}
    elif isinstance(ax, ConjGCI):
        names = {ax.left, ax.right, ax.rhs}
    elif isinstance(ax, QualExistGCI):
        names = {ax.filler, ax.rhs}
    elif isinstance(ax, RangeRestr):
        names = {ax.rhs}
    else:
        names = set()
    names.discard(TOP)
    return names


def roles_of(ax) -> set[str]:
    if isinstance(ax, (ExistGCI, QualExistGCI, RangeRestr)):
        return {ax.role}
    if isinstance(ax, RoleIncl):
        return {ax.sub, ax.sup}
    return set()


@dataclass(frozen=True)
class Signature:
    concepts: frozenset[str]
    roles: frozenset[str]
    variables: frozenset[str]


@dataclass(frozen=True)
class AnnotatedTBox:
    entries: tuple[tuple[Axiom, str], ...] = ()
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        entries = tuple((ax, ann) for ax, ann in self.entries)
        object.__setattr__(self, "entries", entries)
        index: dict = {}
        owner: dict[str, Axiom] = {}
        for ax, ann in entries:
            if not isinstance(ax, AXIOM_TYPES):
                raise TBoxError(f"not an axiom: {ax!r}")
            if ax in index:
                raise TBoxError(f"duplicate axiom: {ax}")
            if ann != UNIT:
                if not NAME_RE.match(ann) or ann in KEYWORDS:
                    raise TBoxError(f"bad annotation {ann!r} on {ax}")
                if ann in owner:
                    raise TBoxError(f"annotation variable {ann} used on both {owner[ann]} and {ax}")
                owner[ann] = ax
            index[ax] = ann
        object.__setattr__(self, "_index", index)
        sig = self.signature
        clash = (sig.concepts & sig.roles) | (sig.concepts & sig.variables) | (sig.roles & sig.variables)
        if clash:
            raise TBoxError(f"names used in more than one namespace: {', '.join(sorted(clash))}")

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __contains__(self, ax):
        return ax in self._index

    def annotation(self, ax) -> str | None:
        return self._index.get(ax)

    @cached_property
    def signature(self) -> Signature:
        concepts, roles = set(), set()
        for ax, _ in self.entries:
            concepts |= concepts_of(ax)
            roles |= roles_of(ax)
        variables = {ann for _, ann in self.entries if ann != UNIT}
        return Signature(frozenset(concepts), frozenset(roles), frozenset(variables))

    @property
    def concepts(self) -> frozenset[str]:
        return self.signature.concepts

    @property
    def roles(self) -> frozenset[str]:
        return self.signature.roles

    @property
    def variables(self) -> frozenset[str]:
        return self.signature.variables

    def axioms(self, kind=None) -> list:
        return [ax for ax, _ in self.entries if kind is None or isinstance(ax, kind)]

    def to_text(self) -> str:
        return "".join(f"{ax} : {ann}\n" for ax, ann in self.entries)


def signature(tbox: AnnotatedTBox) -> tuple[frozenset[str], frozenset[str], frozenset[str]]:
    sig = tbox.signature
    return sig.concepts, sig.roles, sig.variables


# ---------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(r"\s*(?:(<=|\[=|[&.()])|([A-Za-z][A-Za-z0-9_]*)|(\S))")


def _tokenize(text: str, line: int | None) -> list[str]:
    tokens = []
    for m in _TOKEN_RE.finditer(text):
        if m.group(3):
            raise TBoxError(f"unexpected character {m.group(3)!r}", line)
        tok = m.group(1) or m.group(2)
        if tok:
            tokens.append(tok)
    return tokens


# concept expression trees produced by the generic parser:
#   str (name or TOP) | ("and", [exprs]) | ("ex", role, expr | None) | ("ran", role)


class _Parser:
    def __init__(self, tokens, line):
        self.toks = tokens
        self.pos = 0
        self.line = line

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None:
            raise TBoxError("unexpected end of axiom", self.line)
        if expected is not None and tok != expected:
            raise TBoxError(f"expected {expected!r}, got {tok!r}", self.line)
        self.pos += 1
        return tok

    def name(self, what):
        tok = self.take()
        if not NAME_RE.match(tok) or tok in KEYWORDS:
            raise TBoxError(f"expected {what} name, got {tok!r}", self.line)
        return tok

    def conj(self):
        parts = [self.atom()]
        while self.peek() == "&":
            self.take()
            parts.append(self.atom())
        return parts[0] if len(parts) == 1 else ("and", parts)

    def atom(self):
        tok = self.peek()
        if tok == "top":
            self.take()
            return TOP
        if tok == "ex":
            self.take()
            role = self.name("role")
            if self.peek() == ".":
                self.take()
                return ("ex", role, self.atom())
            return ("ex", role, None)
        if tok == "ran":
            self.take()
            self.take("(")
            role = self.name("role")
            self.take(")")
            return ("ran", role)
        if tok == "(":
            self.take()
            inner = self.conj()
            self.take(")")
            return inner
        return self.name("concept")


def _is_conc(e) -> bool:
    return isinstance(e, str)


def parse_axiom(text: str, line: int | None = None) -> Axiom:
    tokens = _tokenize(text, line)
    if not tokens:
        raise TBoxError("empty axiom", line)
    if "[=" in tokens:
        if len(tokens) != 3 or tokens[1] != "[=":
            raise TBoxError("role inclusion must read 'R [= S'", line)
        p = _Parser(tokens, line)
        sub = p.name("role")
        p.take("[=")
        return RoleIncl(sub, p.name("role"))
    p = _Parser(tokens, line)
    lhs = p.conj()
    p.take("<=")
    rhs = p.conj()
    if p.peek() is not None:
        raise TBoxError(f"trailing input {p.peek()!r}", line)

    if isinstance(rhs, tuple):
        if rhs[0] == "and":
            raise NotNormalFormError("conjunction on right-hand side is not normal form", line)
        if rhs[0] == "ran":
            raise NotNormalFormError("ran(R) may only occur on the left-hand side", line)
        if rhs[2] is not None:
            raise NotNormalFormError("qualified existential on right-hand side is not normal form", line)
    if _is_conc(lhs):
        return AtomicGCI(lhs, rhs) if _is_conc(rhs) else ExistGCI(lhs, rhs[1])
    if not _is_conc(rhs):
        raise NotNormalFormError("only a concept name or top may follow this left-hand side", line)
    kind = lhs[0]
    if kind == "and":
        if len(lhs[1]) == 2 and all(_is_conc(c) for c in lhs[1]):
            return ConjGCI(lhs[1][0], lhs[1][1], rhs)
        raise NotNormalFormError("left-hand conjunction must have exactly two atomic conjuncts", line)
    if kind == "ran":
        return RangeRestr(lhs[1], rhs)
    if kind == "ex":
        if lhs[2] is None:
            raise NotNormalFormError("unqualified existential on the left; write 'ex R . top'", line)
        if not _is_conc(lhs[2]):
            raise NotNormalFormError("existential filler must be a concept name or top", line)
        return QualExistGCI(lhs[1], lhs[2], rhs)
    raise NotNormalFormError("unsupported axiom shape", line)  # pragma: no cover


def _split_annotation(text: str, line: int | None) -> tuple[str, str]:
    if ":" not in text:
        raise TBoxError("missing ' : annotation'", line)
    body, ann = text.rsplit(":", 1)
    return body.strip(), ann.strip()


def parse_tbox(text: str) -> AnnotatedTBox:
    entries = []
    seen_ax: dict = {}
    seen_var: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        body, ann = _split_annotation(stripped, lineno)
        if ann != UNIT and (not NAME_RE.match(ann) or ann in KEYWORDS):
            raise TBoxError(f"annotation must be a variable name or 1, got {ann!r}", lineno)
        ax = parse_axiom(body, lineno)
        if ax in seen_ax:
            raise TBoxError(f"duplicate axiom {ax} (first on line {seen_ax[ax]})", lineno)
        if ann != UNIT and ann in seen_var:
            raise TBoxError(f"annotation variable {ann} already used on line {seen_var[ann]}", lineno)
        seen_ax[ax] = lineno
        if ann != UNIT:
            seen_var[ann] = lineno
        entries.append((ax, ann))
    return AnnotatedTBox(tuple(entries))


def parse_monomial(text: str) -> tuple[str, ...]:
    text = text.strip()
    if text == UNIT:
        return ()
    parts = [p.strip() for p in text.split("*")]
    for p in parts:
        if not NAME_RE.match(p) or p in KEYWORDS:
            raise TBoxError(f"bad monomial {text!r}")
    return tuple(parts)


def parse_goal(text: str) -> Axiom:
    ax = parse_axiom(text)
    if not isinstance(ax, QUERY_TYPES):
        raise TBoxError(f"goal {ax} is not queryable (use 'A <= B' or 'A <= ex R')")
    return ax


def parse_query(text: str) -> tuple[Axiom, tuple[str, ...]]:
    body, mono = _split_annotation(text.strip(), None)
    return parse_goal(body), parse_monomial(mono)


def make_tbox(entries: Iterable[tuple[Axiom, str]]) -> AnnotatedTBox:
    return AnnotatedTBox(tuple(entries))
