"""Structured representations of the three symbolic prompt modalities.

The parsers normalize cell values to single characters: "0", "1" and "x"
(don't-care).  Input columns of a truth table may also carry "x" cells; the
structural invariants treat them as literal values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union

BIT_CHARS = ("0", "1", "x")


class Modality(Enum):
    NATURAL_LANGUAGE_ONLY = "natural_language_only"
    TRUTH_TABLE = "truth_table"
    WAVEFORM = "waveform"
    STATE_DIAGRAM = "state_diagram"
    MIXED = "mixed"


class Direction(Enum):
    INPUT = "input"
    OUTPUT = "output"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Span:
    """Half-open character range of one symbolic block inside a prompt."""

    start: int
    end: int
    kind: Modality


@dataclass(frozen=True)
class ModalityDetection:
    kind: Modality
    spans: tuple[Span, ...]

    def __post_init__(self):
        prev_end = -1
        for span in self.spans:
            if span.start < prev_end:
                raise ValueError("spans overlap or are unsorted")
            prev_end = span.end
        kinds = {s.kind for s in self.spans}
        if not self.spans:
            assert self.kind is Modality.NATURAL_LANGUAGE_ONLY
        elif len(kinds) >= 2:
            assert self.kind is Modality.MIXED
        else:
            assert self.kind in kinds


Row = tuple[tuple[str, ...], tuple[str, ...]]


@dataclass(frozen=True)
class TruthTable:
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    rows: tuple[Row, ...]

    def __post_init__(self):
        if not self.inputs or not self.outputs:
            raise ValueError("truth table needs at least one input and one output")
        seen: set[tuple[str, ...]] = set()
        for in_bits, out_bits in self.rows:
            if len(in_bits) != len(self.inputs) or len(out_bits) != len(self.outputs):
                raise ValueError("row width does not match signal lists")
            for bit in (*in_bits, *out_bits):
                if bit not in BIT_CHARS:
                    raise ValueError(f"invalid cell {bit!r}")
            if in_bits in seen:
                raise ValueError(f"duplicate input row {''.join(in_bits)}")
            seen.add(in_bits)


@dataclass(frozen=True)
class WaveSignal:
    name: str
    values: tuple[str, ...]
    direction: Direction = Direction.UNKNOWN


@dataclass(frozen=True)
class Waveform:
    signals: tuple[WaveSignal, ...]
    time_axis: Optional[tuple[int, ...]] = None
    time_unit: str = "ns"

    def __post_init__(self):
        if not self.signals:
            raise ValueError("waveform needs at least one signal")
        length = len(self.signals[0].values)
        for sig in self.signals:
            if len(sig.values) != length:
                raise ValueError("signal value lists differ in length")
            for bit in sig.values:
                if bit not in BIT_CHARS:
                    raise ValueError(f"invalid waveform value {bit!r}")
        if self.time_axis is not None:
            if len(self.time_axis) != length:
                raise ValueError("time axis length does not match signal values")
            if any(b >= a for a, b in zip(self.time_axis[1:], self.time_axis)):
                raise ValueError("time axis must strictly increase")


@dataclass(frozen=True)
class Transition:
    source: str
    condition: str
    target: str


@dataclass(frozen=True)
class StateDiagram:
    # state name -> output assignments, in order of first appearance
    states: dict[str, dict[str, str]]
    transitions: tuple[Transition, ...]
    initial_state: Optional[str] = None

    def __post_init__(self):
        declared_outputs: Optional[frozenset[str]] = None
        for name, assigns in self.states.items():
            keys = frozenset(assigns)
            if declared_outputs is None:
                declared_outputs = keys
            elif keys != declared_outputs:
                raise ValueError(f"state {name} does not assign every declared output")
        for t in self.transitions:
            if t.source not in self.states or t.target not in self.states:
                raise ValueError(f"transition {t.source}->{t.target} references unknown state")

    @property
    def output_names(self) -> tuple[str, ...]:
        first = next(iter(self.states.values()), {})
        return tuple(first)


SymbolicSpec = Union[TruthTable, Waveform, StateDiagram]


@dataclass(frozen=True)
class UniformInstruction:
    """Natural-language rendering of one parsed symbolic block."""

    text: str
    source_modality: Modality
    parse: Optional[SymbolicSpec] = None


@dataclass(frozen=True)
class Port:
    direction: Direction
    name: str
    width: int = 1


@dataclass(frozen=True)
class IoSignature:
    module_name: str
    ports: tuple[Port, ...] = field(default_factory=tuple)
