import itertools
import random

import pytest
from hypothesis import given, settings

from elprov.ara import inline_expand, intersect_empty, membership, well_formed
from elprov.behaviour import (
    BudgetExceeded,
    Engine,
    EngineConfig,
    Reasoner,
    TruncatedError,
    ara_stack,
    entails,
    iterate_languages,
    iteration_bounds,
    monomials,
    saturate,
)
from elprov.families import chain_tbox, example_tbox, random_tbox, sword_selection, sword_tbox
from elprov.semiring import EPSILON, Mode, canonical_image, canonical_word
from elprov.syntax import TOP, AnnotatedTBox, AtomicGCI, ConjGCI, ExistGCI
from elprov.wta import enumerate_runs

from conftest import queryable_goals, tboxes, word

T = example_tbox()
AD, AB, CD = AtomicGCI("A", "D"), AtomicGCI("A", "B"), AtomicGCI("C", "D")


def test_saturation_example_cells():
    table = saturate(T, Mode.TRIO)
    assert table.at(0, AD) == frozenset()
    assert table.at(1, AB) == {word("v"), word("vxy")}
    assert table.at(1, CD) == {word("uv")}
    assert table.at(2, AD) == {word("uvw"), word("uvwxy")}
    assert table.at(3, AD) == table.at(2, AD)
    assert table.final(AD) == {word("uvw"), word("uvwxy")}
    for ax, ann in T:
        assert table.at(0, ax) == {(ann,)}


def test_saturation_keeps_growing_elsewhere():
    # A ⊑ B picks up longer derivations after the first row
    table = saturate(T, Mode.TRIO)
    assert word("vw") in table.at(2, AB)
    assert table.at(1, AtomicGCI("A", TOP)) == {EPSILON, word("w")}
    assert table.stable_at == 4 and table.fixpoint_index == 3


def test_cycle_terminates():
    tb = AnnotatedTBox(((AtomicGCI("A", "B"), "u"), (AtomicGCI("B", "A"), "v")))
    assert [str(m) for m in monomials(tb, AB)] == ["u", "u*v"]
    # every derivation starts at the axiom with left-hand side A
    assert [str(m) for m in monomials(tb, AB, Mode.LAP)] == ["u", "u*v"]


def test_empty_tbox():
    table = saturate(AnnotatedTBox(()), Mode.TRIO)
    assert table.stable_at == 1
    assert table.final(AtomicGCI(TOP, TOP)) == {EPSILON}


def test_truncation():
    table = saturate(T, Mode.TRIO, cap=1)
    assert table.truncated and table.stable_at is None
    with pytest.raises(TruncatedError):
        table.fixpoint_index
    with pytest.raises(TruncatedError):
        Reasoner(T, EngineConfig(max_iterations=1, restrict_to_query=False)).entails(AD, "uvw")


def test_budget():
    with pytest.raises(BudgetExceeded):
        saturate(sword_tbox(4), Mode.TRIO, budget=4)


def test_tsv():
    tsv = saturate(T, Mode.TRIO).to_tsv([AB, CD, AD])
    lines = tsv.splitlines()
    assert lines[0] == "iteration\tA⊑B\tC⊑D\tA⊑D"
    assert lines[1] == "0\t∅\t∅\t∅"
    assert lines[2] == "1\t{v, v*x*y}\t{u*v}\t∅"


def test_iteration_bounds():
    b = iteration_bounds(T)
    assert saturate(T, Mode.TRIO).iterations <= min(b.values())


def test_stack_levels():
    one = ara_stack(T, CD, 1)
    assert well_formed(one.ara)
    flat = inline_expand(one.ara)
    assert [w for w in itertools.product("uvwxy", repeat=2) if flat.accepts(w)] == [("u", "v")]
    assert not flat.accepts(()) and not flat.accepts("u")
    assert intersect_empty(ara_stack(T, AD, 1).ara, inline_expand(ara_stack(T, AD, 1).ara)) is None


def test_stack_accepts_example_words():
    ara = Reasoner(T).behaviour_ara(AD)
    for w in ("wuv", "vwu", "xvywu"):
        assert membership(ara, w)
    ab = Reasoner(T).behaviour_ara(AB)
    assert membership(ab, "v") and membership(ab, "xvy")
    assert not membership(ara, "uvw")


def test_stack_rejects_negative_height():
    with pytest.raises(ValueError):
        ara_stack(T, AD, -1)


@pytest.mark.parametrize("engine", list(Engine))
def test_example_queries(engine):
    cfg = EngineConfig(engine=engine)
    assert entails(T, AD, "uvw", cfg).entailed
    assert entails(T, AD, "wvu", cfg).entailed
    assert entails(T, AD, "uvwxy", cfg).entailed
    assert not entails(T, AD, "u", cfg).entailed
    assert not entails(T, AD, "uvwx", cfg).entailed
    assert not entails(T, AD, "z", cfg).entailed


def test_witness_is_lexicographically_first():
    res = entails(T, AD, "uvw")
    assert res.witness_ordering == ("v", "w", "u")
    assert res.witness_word == word("vwu")
    assert membership(Reasoner(T).behaviour_ara(AD), res.witness_word)
    plain = entails(T, AD, "uvw", EngineConfig(prune_orderings=False))
    assert (plain.witness_ordering, plain.witness_word) == (res.witness_ordering, res.witness_word)
    assert plain.orderings_checked == 4 and plain.prefix_checks == 0


def test_left_absorbing_single_check():
    tb = chain_tbox()
    cfg = EngineConfig(mode=Mode.LAP)
    yes, no = entails(tb, AtomicGCI("A", "C"), "mn", cfg), entails(tb, AtomicGCI("A", "C"), "nm", cfg)
    assert yes.entailed and not no.entailed
    assert yes.orderings_checked == no.orderings_checked == 1
    assert yes.witness_word == word("mn")
    trio = entails(tb, AtomicGCI("A", "C"), "nm")
    assert trio.entailed


def test_unit_monomial():
    tb = AnnotatedTBox(((AtomicGCI("A", "B"), "1"), (AtomicGCI("B", "C"), "n")))
    assert entails(tb, AtomicGCI("A", "B"), ()).entailed
    assert not entails(tb, AtomicGCI("A", "C"), ()).entailed
    assert entails(tb, AtomicGCI("A", "C"), "n").entailed
    assert entails(tb, AtomicGCI("A", "A"), ()).entailed


def test_goal_must_be_queryable():
    with pytest.raises(ValueError):
        entails(T, ConjGCI("B", "C", "D"), "u")


def test_existential_goal():
    assert [str(m) for m in monomials(T, ExistGCI("A", "R"))] == ["x"]
    assert entails(T, ExistGCI("A", "R"), "x").entailed
    assert not entails(T, ExistGCI("C", "R"), "x").entailed


@pytest.mark.parametrize("choices", [(False, True, False), (True, True, True), (False, False, False)])
def test_sword_selections(choices):
    tb = sword_tbox(3)
    goal = AtomicGCI("A0", "A3")
    assert entails(tb, goal, sword_selection(choices)).entailed
    bad = list(sword_selection(choices))
    bad[1] = "x1" if bad[1] == "v1" else "v1"
    assert not entails(tb, goal, bad).entailed


def test_sword_counts():
    assert len(monomials(sword_tbox(4), AtomicGCI("A0", "A4"))) == 16


def test_restriction_keeps_witness_valid():
    r = Reasoner(T)
    res = r.entails(AD, "uvw")
    assert membership(r.behaviour_ara(AD), res.witness_word)


@settings(max_examples=40, deadline=None)
@given(tboxes(max_axioms=6))
def test_restriction_is_sound(tb):
    # answers on the query's sub-TBox equal answers read off the full fixpoint
    rng = random.Random(len(tb))
    full = {mode: Reasoner(tb, EngineConfig(mode=mode, engine=Engine.SATURATION,
                                            restrict_to_query=False)) for mode in Mode}
    part = {mode: Reasoner(tb, EngineConfig(mode=mode, engine=Engine.SATURATION)) for mode in Mode}
    variables = sorted(tb.variables)
    for goal in queryable_goals(tb):
        for mode in Mode:
            for k in range(min(3, len(variables)) + 1):
                for m in itertools.permutations(rng.sample(variables, k)):
                    assert full[mode].entails(goal, m).entailed == part[mode].entails(goal, m).entailed


@settings(max_examples=30, deadline=None)
@given(tboxes(max_axioms=6))
def test_engines_agree(tb):
    variables = sorted(tb.variables)[:3]
    for mode in Mode:
        sat = Reasoner(tb, EngineConfig(mode=mode, engine=Engine.SATURATION))
        ara = Reasoner(tb, EngineConfig(mode=mode, engine=Engine.ARA))
        for goal in queryable_goals(tb):
            for k in range(len(variables) + 1):
                for m in itertools.permutations(variables, k):
                    a, b = sat.entails(goal, m), ara.entails(goal, m)
                    assert a.entailed == b.entailed, (str(goal), m, mode)
                    if b.entailed:
                        assert canonical_word(b.witness_word, mode) == a.monomial.canonical
                        assert membership(ara.restricted(a.monomial.canonical).behaviour_ara(goal),
                                          b.witness_word)


@settings(max_examples=40, deadline=None)
@given(tboxes(max_axioms=5))
def test_saturation_is_canonical_image_of_languages(tb):
    rows = iterate_languages(tb, 3)
    for mode in Mode:
        table = saturate(tb, mode)
        for d in range(4):
            for q, lang in rows[d].items():
                assert canonical_image(lang, mode) == table.at(d, q)


def test_runs_and_table_agree_on_example():
    table = saturate(T, Mode.TRIO)
    for goal in queryable_goals(T):
        assert canonical_image(enumerate_runs(goal, 3, T), Mode.TRIO) == table.at(3, goal)


def test_random_generator_respects_bounds():
    rng = random.Random(0)
    for _ in range(50):
        tb = random_tbox(rng)
        assert 1 <= len(tb) <= 8 and len(tb.concepts) <= 4 and len(tb.roles) <= 2
