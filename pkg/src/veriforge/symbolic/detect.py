"""Lexical detection of symbolic blocks inside a free-text prompt.

Detection is purely structural: column-separated rows under a header form a
truth table, groups of ``name: bits`` lines form a waveform chart, and
``--[...]->`` arrow lines form a state diagram.  Everything else is prose.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import ParseError
from .diagrams import _EDGE, parse_state_diagram
from .tables import _NAME, _split_cells, parse_truth_table
from .util import strip_ellipsis
from .waveforms import _LINE as _WAVE_LINE
from .waveforms import parse_waveform
from .types import Modality, ModalityDetection, Span

_BIT_CELL = re.compile(r"^[01xX-]$")


@dataclass
class _Line:
    start: int
    end: int  # end of content, excluding the newline
    kind: str  # diagram | wave | table_row | table_header | blank | prose
    cells: int = 0


def _classify(text: str) -> tuple[str, int]:
    stripped = strip_ellipsis(text)
    if not stripped.strip():
        return "blank", 0
    if _EDGE.match(stripped):
        return "diagram", 0
    m = _WAVE_LINE.match(stripped)
    if m:
        tokens = m.group("values").split()
        if m.group("name").lower() == "time":
            if all(re.fullmatch(r"\d+", t) for t in tokens):
                return "wave", 0
        elif all(_BIT_CELL.match(t) for t in tokens):
            return "wave", 0
    cells = _split_cells(stripped)
    if len(cells) >= 2 and ("|" in stripped or re.search(r"\s{2,}", stripped.strip())):
        if all(_BIT_CELL.match(c) for c in cells):
            return "table_row", len(cells)
        if all(_NAME.match(c) or re.match(r"^[A-Za-z_]\w*\((input|output)\)$", c, re.I) for c in cells):
            return "table_header", len(cells)
    return "prose", 0


def _lines_of(prompt: str) -> list[_Line]:
    lines = []
    pos = 0
    for raw in prompt.splitlines(keepends=True):
        content = raw.rstrip("\r\n")
        kind, cells = _classify(content)
        lines.append(_Line(start=pos, end=pos + len(content), kind=kind, cells=cells))
        pos += len(raw)
    return lines


PARSERS = {
    Modality.TRUTH_TABLE: parse_truth_table,
    Modality.WAVEFORM: parse_waveform,
    Modality.STATE_DIAGRAM: parse_state_diagram,
}


def detect_modality(prompt: str, validate: bool = True) -> ModalityDetection:
    """Classify a prompt and locate every symbolic block.

    Spans are character offsets into ``prompt``.  With ``validate=True``
    (the default) a candidate block is only reported when its parser accepts
    it, so every returned span is guaranteed to parse; with ``validate=False``
    structurally matched blocks are kept even if deep parsing would fail,
    which lets callers route broken blocks to a fallback interpreter.
    """
    lines = _lines_of(prompt)
    spans: list[Span] = []
    i = 0
    while i < len(lines):
        ln = lines[i]
        if ln.kind == "diagram":
            j = i
            while j + 1 < len(lines) and lines[j + 1].kind == "diagram":
                j += 1
            spans.append(Span(ln.start, lines[j].end, Modality.STATE_DIAGRAM))
            i = j + 1
        elif ln.kind == "wave":
            j = i
            while j + 1 < len(lines) and lines[j + 1].kind == "wave":
                j += 1
            if j > i:  # single name:bits lines are too prose-like to trust
                spans.append(Span(ln.start, lines[j].end, Modality.WAVEFORM))
            i = j + 1
        elif ln.kind == "table_header":
            j = i
            while j + 1 < len(lines) and lines[j + 1].kind == "table_row" and lines[j + 1].cells == ln.cells:
                j += 1
            if j > i:
                spans.append(Span(ln.start, lines[j].end, Modality.TRUTH_TABLE))
            i = j + 1
        else:
            i += 1

    if validate:
        kept = []
        for span in spans:
            try:
                PARSERS[span.kind](prompt[span.start:span.end])
            except ParseError:
                continue
            kept.append(span)
        spans = kept

    kinds = {s.kind for s in spans}
    if not spans:
        kind = Modality.NATURAL_LANGUAGE_ONLY
    elif len(kinds) == 1:
        kind = next(iter(kinds))
    else:
        kind = Modality.MIXED
    return ModalityDetection(kind=kind, spans=tuple(spans))
