import pytest

from veriforge.errors import MissingSignature
from veriforge.symbolic import (
    ensure_module_header,
    find_module_header,
    header_port_directions,
    infer_signature,
    parse_state_diagram,
    parse_truth_table,
    parse_waveform,
    render_signature,
    render_uniform_instruction,
)
from veriforge.symbolic.types import Direction, IoSignature, Port


def test_existing_header_unchanged():
    text = "Implement it.\nmodule top_module(input a, input b, output out);\n"
    assert ensure_module_header(text) == text


def test_append_from_signature():
    sig = IoSignature("adder", (Port(Direction.INPUT, "a", 4), Port(Direction.OUTPUT, "s", 5)))
    out = ensure_module_header("Add the things.", io_signature=sig)
    assert "module adder(input [3:0] a, output [4:0] s);" in out


def test_infer_from_truth_table():
    table = parse_truth_table("a | b | out\n0|0|0\n1|1|1")
    ui = render_uniform_instruction(table)
    out = ensure_module_header(ui.text, spec=table)
    assert "module top_module(input a, input b, output out);" in out


def test_infer_from_waveform_uses_name_heuristic():
    wave = parse_waveform("a: 0 1\nout: 1 0")
    sig = infer_signature(wave)
    assert sig.ports == (Port(Direction.INPUT, "a"), Port(Direction.OUTPUT, "out"))


def test_infer_from_state_diagram():
    diagram = parse_state_diagram("A[out=0]--[x=0]->B\nB[out=1]--[x=1]->A")
    sig = infer_signature(diagram)
    assert Port(Direction.INPUT, "x") in sig.ports
    assert Port(Direction.OUTPUT, "out") in sig.ports


def test_missing_signature_raises():
    with pytest.raises(MissingSignature):
        ensure_module_header("free text with no structure")


def test_idempotent():
    table = parse_truth_table("a | out\n0|0\n1|1")
    once = ensure_module_header("Implement the identity.", spec=table)
    assert ensure_module_header(once, spec=table) == once


def test_find_header_multiline():
    text = "module m(\n  input wire clk,\n  output reg [7:0] q\n);"
    sig = find_module_header(text)
    assert sig is not None
    assert sig.module_name == "m"
    assert sig.ports[1].width == 8


def test_find_header_rejects_incomplete():
    assert find_module_header("module m(input a, output") is None
    assert find_module_header("module m") is None


def test_header_port_directions():
    dirs = header_port_directions("module m(input a, output out);")
    assert dirs == {"a": Direction.INPUT, "out": Direction.OUTPUT}


def test_render_signature_widths():
    sig = IoSignature("m", (Port(Direction.INPUT, "d", 8), Port(Direction.OUTPUT, "q", 1)))
    assert render_signature(sig) == "module m(input [7:0] d, output q);"
