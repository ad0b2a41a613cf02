"""Waveform-chart block parsing and serialization.

Surface syntax is one line per signal, ``name: v v v ...``.  A line whose
name is ``time`` (optionally ``time(ns)`` or another unit) becomes the time
axis instead of a signal.
"""

from __future__ import annotations

import re
from typing import Mapping, Optional

from ..errors import EmptyWaveform, MalformedWaveform
from .types import Direction, Waveform, WaveSignal
from .util import strip_ellipsis

_LINE = re.compile(r"^\s*(?P<name>[A-Za-z_]\w*)(?:\((?P<unit>\w+)\))?\s*:\s*(?P<values>\S.*)$")

# Names treated as outputs when no port context is available.  Used by the
# rendering and header-inference layers; the parser itself records UNKNOWN.
_OUTPUT_NAME = re.compile(r"^(out\w*|y|z)$", re.IGNORECASE)


def guess_direction(name: str) -> Direction:
    return Direction.OUTPUT if _OUTPUT_NAME.match(name) else Direction.INPUT


def parse_waveform(block: str, port_directions: Optional[Mapping[str, Direction]] = None) -> Waveform:
    """Parse one waveform block.

    ``port_directions`` supplies signal directions when the surrounding
    prompt carried a module header; without it directions stay UNKNOWN.
    """
    lines = [strip_ellipsis(ln) for ln in block.splitlines()]
    lines = [ln for ln in lines if ln.strip()]
    if not lines:
        raise EmptyWaveform("no content in waveform block")

    signals: list[WaveSignal] = []
    time_axis: Optional[tuple[int, ...]] = None
    time_unit = "ns"
    for ln in lines:
        m = _LINE.match(ln)
        if not m:
            raise MalformedWaveform(f"line {ln.strip()!r} is not 'name: values'")
        name = m.group("name")
        tokens = m.group("values").split()
        if name.lower() == "time":
            if time_axis is not None:
                raise MalformedWaveform("multiple time-axis lines")
            try:
                stamps = tuple(int(t) for t in tokens)
            except ValueError:
                raise MalformedWaveform("time axis values must be integers") from None
            if any(b <= a for a, b in zip(stamps, stamps[1:])):
                raise MalformedWaveform("time axis must strictly increase")
            time_axis = stamps
            if m.group("unit"):
                time_unit = m.group("unit")
            continue
        values = []
        for t in tokens:
            if t in ("0", "1"):
                values.append(t)
            elif t in ("x", "X", "-"):
                values.append("x")
            else:
                raise MalformedWaveform(f"signal {name}: value {t!r} is not a bit")
        direction = Direction.UNKNOWN
        if port_directions and name in port_directions:
            direction = port_directions[name]
        signals.append(WaveSignal(name=name, values=tuple(values), direction=direction))

    if not signals:
        raise EmptyWaveform("waveform block declares no signals")
    if len({s.name for s in signals}) != len(signals):
        raise MalformedWaveform("duplicate signal name")
    length = len(signals[0].values)
    if any(len(s.values) != length for s in signals):
        raise MalformedWaveform("signal value lists differ in length")
    if time_axis is not None and len(time_axis) != length:
        raise MalformedWaveform("time axis length does not match signal values")

    return Waveform(signals=tuple(signals), time_axis=time_axis, time_unit=time_unit)


def waveform_to_block(wave: Waveform) -> str:
    lines = [f"{sig.name}: " + " ".join(sig.values) for sig in wave.signals]
    if wave.time_axis is not None:
        lines.append(f"time({wave.time_unit}): " + " ".join(str(t) for t in wave.time_axis))
    return "\n".join(lines)
