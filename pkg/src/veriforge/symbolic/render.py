"""Render parsed symbolic blocks into the uniform instruction format.

The exact surface text (section headers, clause wording, spacing) is pinned
by the golden fixtures in the test suite; do not restyle it.
"""

from __future__ import annotations

from ..errors import VeriforgeError
from .types import (
    Direction,
    Modality,
    StateDiagram,
    SymbolicSpec,
    TruthTable,
    UniformInstruction,
    Waveform,
)
from .waveforms import guess_direction

_GRAY = {1: ("0", "1"), 2: ("00", "01", "11", "10")}


def _variables_line(names_with_dirs: list[tuple[str, Direction]]) -> str:
    parts = [f"{i}. {name}({d.value})" for i, (name, d) in enumerate(names_with_dirs, start=1)]
    return "Variables: " + "; ".join(parts)


def _out_clause(name: str, bit: str) -> str:
    if bit == "x":
        return f"{name} can be any value"
    return f"{name} ={bit}"


def render_truth_table(table: TruthTable) -> str:
    names = [(n, Direction.INPUT) for n in table.inputs]
    names += [(n, Direction.OUTPUT) for n in table.outputs]
    lines = [_variables_line(names), "Rules:"]
    for i, (in_bits, out_bits) in enumerate(table.rows, start=1):
        conds = ", ".join(f"{n}={b}" for n, b in zip(table.inputs, in_bits))
        outs = ", ".join(_out_clause(n, b) for n, b in zip(table.outputs, out_bits))
        lines.append(f"{i}. If {conds}, then {outs};")
    return "\n".join(lines)


def render_waveform(wave: Waveform) -> str:
    names = []
    for sig in wave.signals:
        d = sig.direction if sig.direction is not Direction.UNKNOWN else guess_direction(sig.name)
        names.append((sig.name, d))
    lines = [_variables_line(names), "Rules:"]
    length = len(wave.signals[0].values)
    for col in range(length):
        assigns = ", ".join(f"{sig.name}={sig.values[col]}" for sig in wave.signals)
        if wave.time_axis is not None:
            lines.append(f"When time is {wave.time_axis[col]}{wave.time_unit}, {assigns};")
        else:
            lines.append(f"When index is {col}, {assigns};")
    return "\n".join(lines)


def render_state_diagram(diagram: StateDiagram) -> str:
    state_parts = [
        f"{i}. state {name}(" + ", ".join(f"{k}={v}" for k, v in outs.items()) + ")"
        for i, (name, outs) in enumerate(diagram.states.items(), start=1)
    ]
    lines = ["States&Outputs: " + "; ".join(state_parts), "State transition:"]
    counter = 0
    for name in diagram.states:
        edges = [t for t in diagram.transitions if t.source == name]
        if not edges:
            continue
        counter += 1
        clauses = "; ".join(
            f"If {t.condition}, then transit to state {t.target}" for t in edges
        )
        lines.append(f"{counter}. From state {name}: {clauses}")
    return "\n".join(lines)


def render_kmap_grid(table: TruthTable) -> str:
    """Karnaugh-map view of a single-output table for 2-4 inputs.

    Rows take the first half of the input variables, columns the rest; both
    axes use Gray ordering so adjacent cells differ in one variable.
    """
    n = len(table.inputs)
    if n not in (2, 3, 4) or len(table.outputs) != 1:
        raise VeriforgeError("K-map grid rendering needs 2-4 inputs and a single output")
    by_index = {}
    for in_bits, out_bits in table.rows:
        by_index[int("".join(in_bits), 2)] = out_bits[0]
    n_row_vars = n // 2
    row_vars, col_vars = table.inputs[:n_row_vars], table.inputs[n_row_vars:]
    row_codes, col_codes = _GRAY[len(row_vars)], _GRAY[len(col_vars)]

    corner = "".join(row_vars) + "\\" + "".join(col_vars)
    width = max(len(corner), len(row_codes[-1]))
    cell_w = max(len(c) for c in col_codes)
    header = corner.ljust(width) + " | " + " | ".join(c.center(cell_w) for c in col_codes)
    lines = [f"K-map (rows: {' '.join(row_vars)}; columns: {' '.join(col_vars)}):", header]
    for rc in row_codes:
        cells = []
        for cc in col_codes:
            idx = int(rc + cc, 2)
            cells.append(by_index[idx].center(cell_w))
        lines.append(rc.ljust(width) + " | " + " | ".join(cells))
    return "\n".join(lines)


def render_uniform_instruction(spec: SymbolicSpec) -> UniformInstruction:
    if isinstance(spec, TruthTable):
        return UniformInstruction(render_truth_table(spec), Modality.TRUTH_TABLE, spec)
    if isinstance(spec, Waveform):
        return UniformInstruction(render_waveform(spec), Modality.WAVEFORM, spec)
    if isinstance(spec, StateDiagram):
        return UniformInstruction(render_state_diagram(spec), Modality.STATE_DIAGRAM, spec)
    raise TypeError(f"not a symbolic spec: {type(spec).__name__}")
