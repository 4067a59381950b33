"""Provenance-annotated subsumption in ELHr via weighted tree automata and ARAs."""
from .semiring import Mode, Monomial, canonicalize, render_word
from .syntax import AnnotatedTBox, parse_goal, parse_query, parse_tbox
from .behaviour import Engine, EngineConfig, Reasoner, entails, monomials, saturate

__all__ = [
    "AnnotatedTBox", "Engine", "EngineConfig", "Mode", "Monomial", "Reasoner",
    "canonicalize", "entails", "monomials", "parse_goal", "parse_query",
    "parse_tbox", "render_word", "saturate",
]
