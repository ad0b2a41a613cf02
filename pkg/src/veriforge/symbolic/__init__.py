"""Deterministic parsing of symbolic prompt modalities and their uniform rendering."""

from .detect import detect_modality
from .diagrams import parse_state_diagram, state_diagram_to_block
from .header import (
    ensure_module_header,
    find_module_header,
    header_port_directions,
    infer_signature,
    render_signature,
)
from .render import (
    render_kmap_grid,
    render_state_diagram,
    render_truth_table,
    render_uniform_instruction,
    render_waveform,
)
from .tables import parse_truth_table, truth_table_to_block
from .types import (
    Direction,
    IoSignature,
    Modality,
    ModalityDetection,
    Port,
    Span,
    StateDiagram,
    SymbolicSpec,
    Transition,
    TruthTable,
    UniformInstruction,
    Waveform,
    WaveSignal,
)
from .waveforms import guess_direction, parse_waveform, waveform_to_block

__all__ = [
    "Direction",
    "IoSignature",
    "Modality",
    "ModalityDetection",
    "Port",
    "Span",
    "StateDiagram",
    "SymbolicSpec",
    "Transition",
    "TruthTable",
    "UniformInstruction",
    "Waveform",
    "WaveSignal",
    "detect_modality",
    "ensure_module_header",
    "find_module_header",
    "guess_direction",
    "header_port_directions",
    "infer_signature",
    "parse_state_diagram",
    "parse_truth_table",
    "parse_waveform",
    "render_kmap_grid",
    "render_signature",
    "render_state_diagram",
    "render_truth_table",
    "render_uniform_instruction",
    "render_waveform",
    "state_diagram_to_block",
    "truth_table_to_block",
    "waveform_to_block",
]
