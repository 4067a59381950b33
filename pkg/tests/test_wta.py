import pytest
from hypothesis import given, settings

from elprov.behaviour import iterate_languages, saturate
from elprov.families import example_tbox
from elprov.semiring import EPSILON, Mode, canonical_image, canonical_word
from elprov.syntax import (
    TOP,
    AnnotatedTBox,
    AtomicGCI,
    ConjGCI,
    ExistGCI,
    QualExistGCI,
    RangeRestr,
    RoleIncl,
)
from elprov.wta import (
    BOX,
    Transition,
    Wta,
    enumerate_runs,
    exit_weight,
    head_states,
    is_head,
    productive_transitions,
    transitions_for_head,
)

from conftest import tboxes, word

T = example_tbox()


def matches_schema(t: Transition) -> bool:
    """Pattern-match a transition against the ten derivation schemas."""
    h, (k1, k2, k3, k4, k5) = t.head, t.children
    pad2 = k3 is BOX and k4 is BOX and k5 is BOX
    pad3 = k4 is BOX and k5 is BOX
    if isinstance(h, RoleIncl):
        return (pad2 and isinstance(k1, RoleIncl) and isinstance(k2, RoleIncl)
                and k1.sub == h.sub and k1.sup == k2.sub and k2.sup == h.sup)
    if isinstance(h, RangeRestr):
        if pad2 and isinstance(k1, RoleIncl) and isinstance(k2, RangeRestr):
            return k1.sub == h.role and k2.role == k1.sup and k2.rhs == h.rhs
        return (isinstance(k1, RangeRestr) and isinstance(k2, RangeRestr) and isinstance(k3, AtomicGCI)
                and isinstance(k4, AtomicGCI) and isinstance(k5, ConjGCI)
                and k1.role == k2.role == h.role and k3.lhs == k1.rhs and k4.lhs == k2.rhs
                and (k5.left, k5.right) == (k3.rhs, k4.rhs) and k5.rhs == h.rhs)
    if isinstance(h, ExistGCI):
        if not pad2:
            return False
        if isinstance(k1, ExistGCI) and isinstance(k2, RoleIncl):
            return k1.lhs == h.lhs and k2.sub == k1.role and k2.sup == h.role
        return (isinstance(k1, AtomicGCI) and isinstance(k2, ExistGCI)
                and k1.lhs == h.lhs and k2.lhs == k1.rhs and k2.role == h.role)
    a, c = h.lhs, h.rhs
    if pad2 and isinstance(k1, AtomicGCI) and isinstance(k2, AtomicGCI):
        return k1.lhs == a and k1.rhs == k2.lhs and k2.rhs == c
    if pad3 and isinstance(k1, AtomicGCI) and isinstance(k2, AtomicGCI) and isinstance(k3, ConjGCI):
        return k1.lhs == a and k2.lhs == a and (k3.left, k3.right, k3.rhs) == (k1.rhs, k2.rhs, c)
    if pad2 and isinstance(k1, ConjGCI) and isinstance(k2, AtomicGCI):
        # either conjunct may be the head's left-hand side
        return (k1.rhs == c and k2.lhs == TOP
                and ((k1.left, k1.right) == (a, k2.rhs) or (k1.right, k1.left) == (a, k2.rhs)))
    if (isinstance(k1, ExistGCI) and isinstance(k2, RangeRestr) and isinstance(k3, AtomicGCI)
            and isinstance(k4, RoleIncl) and isinstance(k5, QualExistGCI)):
        return (k1.lhs == a and k2.role == k1.role and k3.lhs == k2.rhs and k4.sub == k1.role
                and k5.role == k4.sup and k5.filler == k3.rhs and k5.rhs == c)
    if (pad3 and isinstance(k1, ExistGCI) and isinstance(k2, AtomicGCI)
            and isinstance(k3, QualExistGCI)):
        return (k1.lhs == a and k2.lhs == TOP and k3.role == k1.role
                and k3.filler == k2.rhs and k3.rhs == c)
    return False


def test_exit_weights():
    assert exit_weight(ConjGCI("B", "C", "D"), T) == {word("u")}
    assert exit_weight(AtomicGCI("A", TOP), T) == {EPSILON}
    assert exit_weight(AtomicGCI(TOP, TOP), T) == {EPSILON}
    assert exit_weight(AtomicGCI("D", "D"), T) == {EPSILON}
    assert exit_weight(AtomicGCI("A", "B"), T) == frozenset()
    assert exit_weight(BOX, T) == {EPSILON}
    assert exit_weight(RoleIncl("R", "R"), T) == frozenset()


def test_exit_weight_unit_and_annotated_tautology():
    tb = AnnotatedTBox(((AtomicGCI("A", "B"), "1"), (AtomicGCI("A", TOP), "z")))
    assert exit_weight(AtomicGCI("A", "B"), tb) == {EPSILON}
    assert exit_weight(AtomicGCI("A", TOP), tb) == {EPSILON, ("z",)}


def test_schema_instances_present():
    kids = {t.children for t in transitions_for_head(AtomicGCI("A", "B"), T)}
    assert (AtomicGCI("A", TOP), AtomicGCI(TOP, "B"), BOX, BOX, BOX) in kids
    assert (ExistGCI("A", "R"), AtomicGCI(TOP, "B"), QualExistGCI("R", "B", "B"), BOX, BOX) in kids
    swapped = {t.children for t in transitions_for_head(AtomicGCI("C", "D"), T)}
    assert (ConjGCI("B", "C", "D"), AtomicGCI(TOP, "B"), BOX, BOX, BOX) in swapped


def test_single_role_inclusion_schema():
    tb = AnnotatedTBox(((ExistGCI("A", "R"), "x"),))
    ts = transitions_for_head(RoleIncl("R", "R"), tb)
    assert [t.children for t in ts] == [(RoleIncl("R", "R"), RoleIncl("R", "R"), BOX, BOX, BOX)]
    assert str(ts[0]) == "R [= R <- R [= R,R [= R,□,□,□"


def test_non_head_rejected():
    with pytest.raises(ValueError):
        transitions_for_head(ConjGCI("B", "C", "D"), T)
    with pytest.raises(ValueError):
        productive_transitions(QualExistGCI("R", "B", "B"), T)


@pytest.mark.parametrize("goal, depth, expected", [
    (AtomicGCI("A", "D"), 2, {word("wuv"), word("vwu"), word("xvywu")}),
    (AtomicGCI("A", "B"), 1, {word("v"), word("xvy")}),
    (AtomicGCI("A", "D"), 0, set()),
    (AtomicGCI("A", "D"), 1, set()),
    (AtomicGCI("C", "D"), 1, {word("uv")}),
])
def test_runs_example(goal, depth, expected):
    assert enumerate_runs(goal, depth, T) == expected


def test_depth_cap():
    with pytest.raises(ValueError):
        enumerate_runs(AtomicGCI("A", "D"), 7, T)
    with pytest.raises(ValueError):
        enumerate_runs(AtomicGCI("A", "D"), -1, T)


def test_example_runs_are_entailed_monomials():
    # every run of height <= 3 yields a monomial of the fixpoint
    final = saturate(T, Mode.TRIO).final(AtomicGCI("A", "D"))
    assert final == {word("uvw"), word("uvwxy")}
    runs = enumerate_runs(AtomicGCI("A", "D"), 3, T)
    assert runs and canonical_image(runs, Mode.TRIO) <= final


def test_example_monotone_in_depth():
    for q in head_states(T):
        prev = frozenset()
        for d in range(4):
            cur = enumerate_runs(q, d, T)
            assert prev <= cur
            prev = cur


@settings(max_examples=40, deadline=None)
@given(tboxes(max_axioms=5))
def test_monotone_in_depth_random(tb):
    for q in head_states(tb)[:12]:
        prev = frozenset()
        for d in range(4):
            cur = enumerate_runs(q, d, tb)
            assert prev <= cur
            prev = cur


@settings(max_examples=60, deadline=None)
@given(tboxes())
def test_transitions_match_schemas(tb):
    for q in head_states(tb):
        assert is_head(q)
        for t in transitions_for_head(q, tb):
            assert len(t.children) == 5 and t.head is not BOX
            assert matches_schema(t), str(t)


@settings(max_examples=60, deadline=None)
@given(tboxes())
def test_productive_is_full_minus_dead_leaves(tb):
    for q in head_states(tb):
        full = set(transitions_for_head(q, tb))
        prod = set(productive_transitions(q, tb))
        assert prod <= full
        for t in full - prod:
            assert any(isinstance(c, (ConjGCI, QualExistGCI)) and c not in tb for c in t.children)


@settings(max_examples=40, deadline=None)
@given(tboxes(max_axioms=6))
def test_runs_equal_iteration_languages(tb):
    rows = iterate_languages(tb, 3)
    for q in head_states(tb):
        for d in range(4):
            assert enumerate_runs(q, d, tb) == rows[d][q], (str(q), d)


def test_wta_facade():
    a = Wta(T, AtomicGCI("A", "B"))
    assert a.runs(1) == {word("v"), word("xvy")}
    assert a.exit_weight(AtomicGCI("A", "C")) == {word("w")}
    assert len(a.transitions(AtomicGCI("A", "B"))) > 0


def test_canonical_run_monomials_match_table():
    # the weights of all runs agree with the canonical fixpoint up to the same height
    table = saturate(T, Mode.TRIO)
    lap = saturate(T, Mode.LAP)
    for q in head_states(T):
        for d in range(4):
            runs = enumerate_runs(q, d, T)
            assert canonical_image(runs, Mode.TRIO) == table.at(d, q)
            assert {canonical_word(w, Mode.LAP) for w in runs} == lap.at(d, q)
