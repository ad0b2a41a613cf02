import pytest

from veriforge.errors import DanglingState, InconsistentOutputs, MalformedDiagram
from veriforge.symbolic import parse_state_diagram, state_diagram_to_block

TWO_STATE = "A[out=0]--[x=0]->B\nA[out=0]--[x=1]->A\nB[out=1]--[x=0]->A\nB[out=1]--[x=1]->B"


def test_parse_two_state_diagram():
    d = parse_state_diagram(TWO_STATE)
    assert d.states == {"A": {"out": "0"}, "B": {"out": "1"}}
    assert len(d.transitions) == 4
    assert d.initial_state == "A"
    assert d.transitions[0].condition == "x = 0"


def test_self_loop_single_state():
    d = parse_state_diagram("S[out=1]--[1]->S")
    assert list(d.states) == ["S"]
    assert d.transitions[0].condition == "1"


def test_conflicting_outputs_rejected():
    with pytest.raises(InconsistentOutputs):
        parse_state_diagram("A[out=0]--[x=0]->B\nA[out=1]--[x=1]->A\nB[out=1]--[x=0]->A")


def test_dangling_target_rejected():
    with pytest.raises(DanglingState):
        parse_state_diagram("A[out=0]--[x=0]->B")


def test_unparseable_line_rejected():
    with pytest.raises(MalformedDiagram):
        parse_state_diagram("A[out=0] -> B on x")


def test_differing_output_sets_rejected():
    with pytest.raises(InconsistentOutputs):
        parse_state_diagram("A[out=0]--[x=0]->B\nB[out=1,err=0]--[x=1]->A")


def test_double_equals_and_long_arrow():
    d = parse_state_diagram("A[out=0]--[in==0]-->B\nB[out=1]--[in==1]-->A")
    assert d.transitions[0].condition == "in = 0"


def test_multi_output_states():
    d = parse_state_diagram("A[out=0,err=1]--[go=1]->B\nB[out=1,err=0]--[go=0]->A")
    assert d.states["A"] == {"out": "0", "err": "1"}
    assert d.output_names == ("out", "err")


def test_boolean_expression_condition_preserved():
    d = parse_state_diagram("A[out=0]--[a & ~b]->B\nB[out=1]--[1]->A")
    assert d.transitions[0].condition == "a & ~b"


def test_round_trip():
    d = parse_state_diagram(TWO_STATE)
    assert parse_state_diagram(state_diagram_to_block(d)) == d
