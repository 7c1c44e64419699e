from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import degree_recount
from tourpart.gen import gen_random, gen_regular
from tourpart.mpt import (
    InvalidInstance,
    MptInstance,
    MptParseError,
    Tournament,
    degree_profile,
    induce_transversal,
    irregularity,
    parse,
    serialize,
    validate,
)


def test_single_arc_is_valid():
    assert validate({"c": 2, "r": 1, "arcs": [(0, 1)]}).ok


def test_duplicated_arc():
    rep = validate({"c": 2, "r": 1, "arcs": [(0, 1), (1, 0)]})
    assert not rep.ok and rep.kind == "duplicated arc"


def test_missing_arc():
    rep = validate({"c": 3, "r": 1, "arcs": [(0, 1), (1, 2)]})
    assert not rep.ok and rep.kind == "missing arc"
    assert rep.pair == (0, 2)


def test_same_part_and_layout_errors():
    assert validate({"c": 2, "r": 2, "arcs": [(0, 1)]}).kind == "same-part arc"
    assert validate({"c": 2, "r": 2, "parts": [0, 0, 0, 1], "arcs": []}).kind == "unbalanced part"
    assert validate({"c": 2, "r": 2, "parts": [0, 1, 0, 1], "arcs": []}).kind == "bad-layout"
    assert validate({"c": 2, "r": 1, "arcs": [(0, 5)]}).kind == "bad-vertex"
    with pytest.raises(InvalidInstance):
        MptInstance.from_arcs(2, 1, [])


def test_matrix_validation():
    bad = np.array([[0, 1], [1, 0]])
    assert validate({"c": 2, "r": 1, "matrix": bad}).kind == "duplicated arc"
    assert validate({"c": 2, "r": 1, "matrix": np.zeros((2, 2))}).kind == "missing arc"


def test_cycle_profile(cycle3):
    d = degree_profile(cycle3, 0)
    assert (d.d_plus, d.d_minus) == (1, 1)
    assert d.part_plus == {1: 1, 2: 0}


def test_profile_matches_recount():
    inst = gen_random(3, 5, 11)
    for x in range(inst.n):
        d = degree_profile(inst, x)
        plus, minus = degree_recount(inst, x)
        assert d.part_plus == {i: plus.get(i, 0) for i in range(inst.c) if i != d.part}
        assert d.part_minus == {i: minus.get(i, 0) for i in range(inst.c) if i != d.part}
        assert sum(d.part_plus.values()) == d.d_plus
        assert d.d_plus + d.d_minus == inst.r * (inst.c - 1)


def test_irregularity_regular_and_transitive(transitive3):
    irr = irregularity(gen_regular(2, 10, 0))
    assert irr.i_g == 0 and irr.alpha == irr.beta == 1
    t = irregularity(transitive3)
    assert (t.Delta, t.delta, t.alpha, t.beta) == (2, 0, 2, 0)


def test_irregularity_brute_force():
    inst = gen_random(2, 4, 3)
    plus, minus, semis = [], [], []
    for x in range(inst.n):
        d = degree_profile(inst, x)
        plus += d.part_plus.values()
        minus += d.part_minus.values()
        semis += [d.d_plus, d.d_minus]
    irr = irregularity(inst)
    assert irr.Delta == max(semis) and irr.delta == min(semis)
    assert (irr.Delta_V_plus, irr.delta_V_plus) == (max(plus), min(plus))
    assert (irr.Delta_V_minus, irr.delta_V_minus) == (max(minus), min(minus))
    assert irr.mu == max(max(plus) - min(plus), max(minus) - min(minus))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(2, 8), st.integers(0, 10**6))
def test_irregularity_invariants(r, c, seed):
    inst = gen_random(r, c, seed)
    irr = irregularity(inst)
    assert irr.alpha + irr.beta == 2
    assert 0 <= irr.beta <= 1 <= irr.alpha <= 2
    assert 0 <= irr.mu <= r and irr.i_g >= 0
    assert int(inst.out_degree.sum()) == r * r * c * (c - 1) // 2
    for x in range(inst.n):
        d = degree_profile(inst, x)
        assert irr.delta_V_plus <= d.dv_plus_min <= d.dv_plus_max <= irr.Delta_V_plus
        assert isinstance(irr.alpha, Fraction)


def test_transversals(cycle3):
    t = induce_transversal(cycle3, (0, 1, 2))
    assert np.array_equal(t.adj, cycle3.adj)
    pair = MptInstance.from_arcs(2, 3, [(u, v) if (u + v) % 2 else (v, u) for u in range(3) for v in range(3, 6)])
    for u in range(3):
        for v in range(3, 6):
            assert induce_transversal(pair, (u, v)).adj[0, 1] == pair.arc(u, v)
    inst = gen_random(2, 3, 5)
    t = induce_transversal(inst, (0, 2, 4))
    for a, u in enumerate((0, 2, 4)):
        for b, v in enumerate((0, 2, 4)):
            assert t.adj[a, b] == inst.arc(u, v)
    with pytest.raises(ValueError):
        induce_transversal(inst, (0, 1, 4))


def test_tournament_from_matrix_rejects_non_tournament():
    with pytest.raises(ValueError):
        Tournament.from_matrix([[0, 1], [1, 0]])


def test_round_trip_cycle(cycle3):
    text = serialize(cycle3)
    assert text == "mpt 3 1\n.10\n0.1\n10.\n"
    assert serialize(parse(text)) == text


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 4), st.integers(2, 7), st.integers(0, 2**32))
def test_round_trip_random(r, c, seed):
    inst = gen_random(r, c, seed)
    back = parse(serialize(inst))
    assert back == inst and back.comments == inst.comments


@pytest.mark.parametrize(
    "text, fragment, line",
    [
        ("mpt 2 1\n.1\n1.\n", "duplicated arc", 2),
        ("mpt 2 1\n.0\n0.\n", "missing arc", 2),
        ("mpt 2 2\n.111\n1.11\n00..\n00..\n", "arc inside a part", 2),
        ("mpt 2 1\n..\n0.\n", "'.' between different parts", 2),
        ("mpx 2 1\n.1\n0.\n", "header", 1),
        ("mpt 2 1\n.1\n", "expected 2 matrix rows", 3),
        ("mpt 2 1\n.1\n0.\nextra\n", "trailing", 4),
        ("mpt 2 1\n.x\n0.\n", "unexpected character", 2),
    ],
)
def test_parse_errors(text, fragment, line):
    with pytest.raises(MptParseError) as e:
        parse(text)
    assert fragment in e.value.message
    assert e.value.line == line


def test_parse_error_offset():
    with pytest.raises(MptParseError) as e:
        parse("mpt 2 1\n.1\n1.\n")
    assert (e.value.column, e.value.offset) == (2, 9)


def test_relabel_parts():
    inst = gen_random(2, 4, 9)
    back = inst.relabel_parts([2, 0, 3, 1]).relabel_parts([1, 3, 0, 2])
    assert back == inst
