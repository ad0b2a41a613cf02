"""Truth-table block parsing and serialization.

Accepted surface syntax: one header row naming the signals, then one row per
input combination.  Cells are separated either by ``|`` or by runs of two or
more spaces.  Don't-care cells may be written ``X``, ``x`` or ``-``.

Column roles: the last column is the single output unless header cells carry
explicit ``name(input)`` / ``name(output)`` markers.
"""

from __future__ import annotations

import re

from ..errors import EmptyTable, MalformedTable
from .types import Direction, TruthTable
from .util import strip_ellipsis

_DIRECTION_MARK = re.compile(r"^(?P<name>[A-Za-z_]\w*)\s*\(\s*(?P<dir>input|output)\s*\)$", re.IGNORECASE)
_NAME = re.compile(r"^[A-Za-z_]\w*$")

DONT_CARE_ALIASES = {"x", "X", "-"}


def _split_cells(line: str) -> list[str]:
    line = line.strip().strip("|")
    if "|" in line:
        cells = [c.strip() for c in line.split("|")]
    else:
        cells = [c.strip() for c in re.split(r"\s{2,}", line.strip())]
    return [c for c in cells if c != ""]


def _normalize_bit(cell: str) -> str:
    if cell in ("0", "1"):
        return cell
    if cell in DONT_CARE_ALIASES:
        return "x"
    raise MalformedTable(f"cell {cell!r} is not a single bit or don't-care")


def parse_truth_table(block: str) -> TruthTable:
    lines = [strip_ellipsis(ln) for ln in block.splitlines()]
    lines = [ln for ln in lines if ln.strip()]
    if not lines:
        raise EmptyTable("no content in truth-table block")
    header = _split_cells(lines[0])
    if len(header) < 2:
        raise MalformedTable("header must name at least two columns")

    names: list[str] = []
    marks: list[Direction | None] = []
    for cell in header:
        m = _DIRECTION_MARK.match(cell)
        if m:
            names.append(m.group("name"))
            marks.append(Direction(m.group("dir").lower()))
        elif _NAME.match(cell):
            names.append(cell)
            marks.append(None)
        else:
            raise MalformedTable(f"header cell {cell!r} is not a signal name")
    if len(set(names)) != len(names):
        raise MalformedTable("duplicate signal name in header")

    if any(marks):
        if not all(marks):
            raise MalformedTable("direction markers must annotate every column or none")
        input_idx = [i for i, d in enumerate(marks) if d is Direction.INPUT]
        output_idx = [i for i, d in enumerate(marks) if d is Direction.OUTPUT]
    else:
        input_idx = list(range(len(names) - 1))
        output_idx = [len(names) - 1]
    if not input_idx or not output_idx:
        raise MalformedTable("table needs at least one input and one output column")

    data = lines[1:]
    if not data:
        raise EmptyTable("truth table has a header but no rows")

    rows = []
    seen: set[tuple[str, ...]] = set()
    for ln in data:
        cells = _split_cells(ln)
        if len(cells) != len(names):
            raise MalformedTable(f"row {ln.strip()!r} has {len(cells)} cells, expected {len(names)}")
        bits = [_normalize_bit(c) for c in cells]
        in_bits = tuple(bits[i] for i in input_idx)
        out_bits = tuple(bits[i] for i in output_idx)
        if in_bits in seen:
            raise MalformedTable(f"duplicate input row {''.join(in_bits)}")
        seen.add(in_bits)
        rows.append((in_bits, out_bits))

    return TruthTable(
        inputs=tuple(names[i] for i in input_idx),
        outputs=tuple(names[i] for i in output_idx),
        rows=tuple(rows),
    )


def truth_table_to_block(table: TruthTable) -> str:
    """Serialize back to the pipe-separated surface syntax.

    Direction markers are emitted whenever the column layout alone would not
    identify the outputs (more than one output column), so the result always
    re-parses to an identical table.
    """
    annotate = len(table.outputs) != 1
    if annotate:
        header = [f"{n}(input)" for n in table.inputs] + [f"{n}(output)" for n in table.outputs]
    else:
        header = list(table.inputs) + list(table.outputs)
    lines = [" | ".join(header)]
    for in_bits, out_bits in table.rows:
        lines.append(" | ".join((*in_bits, *out_bits)))
    return "\n".join(lines)
