import pytest

from veriforge.errors import EmptyWaveform, MalformedWaveform
from veriforge.symbolic import parse_waveform, waveform_to_block
from veriforge.symbolic.types import Direction

TIMED_BLOCK = "a: 0 1 1 0\nb: 1 0 1 0\nout: 1 0 0 1\ntime(ns): 0 10 20 30"


def test_parse_timed_waveform():
    w = parse_waveform(TIMED_BLOCK)
    assert [s.name for s in w.signals] == ["a", "b", "out"]
    assert all(len(s.values) == 4 for s in w.signals)
    assert w.time_axis == (0, 10, 20, 30)
    assert w.time_unit == "ns"


def test_minimal_two_line_chart():
    w = parse_waveform("a: 0\nout: 0")
    assert len(w.signals) == 2
    assert w.time_axis is None


def test_length_mismatch_rejected():
    with pytest.raises(MalformedWaveform):
        parse_waveform("a: 0 1\nb: 0")


def test_time_axis_must_increase():
    with pytest.raises(MalformedWaveform):
        parse_waveform("a: 0 1\ntime(ns): 10 10")
    with pytest.raises(MalformedWaveform):
        parse_waveform("a: 0 1\ntime(ns): 20 10")


def test_time_axis_length_must_match():
    with pytest.raises(MalformedWaveform):
        parse_waveform("a: 0 1\ntime(ns): 0 10 20")


def test_empty_block():
    with pytest.raises(EmptyWaveform):
        parse_waveform("\n \n")


def test_non_bit_value_rejected():
    with pytest.raises(MalformedWaveform):
        parse_waveform("a: 0 2\nb: 0 1")


def test_directions_unknown_without_context():
    w = parse_waveform("a: 0 1\nout: 1 0")
    assert all(s.direction is Direction.UNKNOWN for s in w.signals)


def test_directions_from_port_context():
    dirs = {"a": Direction.INPUT, "out": Direction.OUTPUT}
    w = parse_waveform("a: 0 1\nout: 1 0", port_directions=dirs)
    assert w.signals[0].direction is Direction.INPUT
    assert w.signals[1].direction is Direction.OUTPUT


def test_ellipsis_tolerated():
    w = parse_waveform("a: 0 1 1 0...\ntime(ns): 0 10 20 30 ...")
    assert w.signals[0].values == ("0", "1", "1", "0")
    assert w.time_axis == (0, 10, 20, 30)


def test_round_trip():
    w = parse_waveform(TIMED_BLOCK)
    assert parse_waveform(waveform_to_block(w)) == w


def test_round_trip_no_time_axis():
    w = parse_waveform("s1: 0 x 1\ns2: 1 1 0")
    assert parse_waveform(waveform_to_block(w)) == w
