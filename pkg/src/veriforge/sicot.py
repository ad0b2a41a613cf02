"""Prompt refinement pipeline: detect symbolic blocks, interpret them, and
complete the module header.

Regular modalities (truth tables, waveform charts) always go through the
deterministic parsers.  State diagrams can be routed to an LLM interpreter,
and a fallback policy consults the LLM only when deterministic parsing
fails.  Under the default DETERMINISTIC_ONLY policy the whole pipeline is a
pure function of the prompt and makes no network calls.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional

from .errors import ConfigError, InterpretationFailed, MissingSignature, ParseError
from .llm import LlmClient
from .symbolic.detect import PARSERS, detect_modality
from .symbolic.header import ensure_module_header, find_module_header, header_port_directions
from .symbolic.render import render_uniform_instruction
from .symbolic.types import IoSignature, Modality, Span, SymbolicSpec, UniformInstruction
from .symbolic.waveforms import parse_waveform

DIAGRAM_TEMPLATE = "state_diagram_interpret.v1"
GENERIC_TEMPLATE = "symbolic_interpret.v1"


class RoutePolicy(Enum):
    DETERMINISTIC_ONLY = "deterministic"
    LLM_FOR_STATE_DIAGRAMS = "llm-state-diagrams"
    LLM_FALLBACK = "llm-fallback"


class Route(Enum):
    PARSER = "parser"
    LLM_INTERPRETER = "llm_interpreter"
    PASSTHROUGH = "passthrough"


@dataclass(frozen=True)
class CoTPrompt:
    original: str
    interpreted_blocks: tuple[UniformInstruction, ...]
    final_text: str
    route_log: tuple[tuple[Span, Route], ...]


def _llm_interpret(client: Optional[LlmClient], span: Span, block: str) -> UniformInstruction:
    if client is None:
        raise ConfigError("route policy requires an LLM interpreter but none was configured")
    template = DIAGRAM_TEMPLATE if span.kind is Modality.STATE_DIAGRAM else GENERIC_TEMPLATE
    text = client.complete_text(template, {"block": block}).strip()
    return UniformInstruction(text=text, source_modality=span.kind, parse=None)


def _parse_block(span: Span, block: str, port_dirs) -> SymbolicSpec:
    if span.kind is Modality.WAVEFORM:
        return parse_waveform(block, port_directions=port_dirs or None)
    return PARSERS[span.kind](block)


def interpret(
    prompt: str,
    interpreter: Optional[LlmClient] = None,
    policy: RoutePolicy = RoutePolicy.DETERMINISTIC_ONLY,
    io_signature: Optional[IoSignature] = None,
    require_header: bool = False,
    passthrough_on_error: bool = False,
) -> CoTPrompt:
    """Translate a raw prompt into a refined instruction prompt.

    Text outside detected symbolic blocks is preserved byte-for-byte.  The
    module-header check runs last: an existing header is kept, otherwise one
    is appended from ``io_signature`` or inferred from the first parsed
    block.  When neither is possible the prompt is returned unchanged unless
    ``require_header`` is set, in which case MissingSignature is raised.
    """
    if not prompt:
        raise ValueError("prompt must be non-empty")
    detection = detect_modality(prompt, validate=False)
    port_dirs = header_port_directions(prompt)

    blocks: list[UniformInstruction] = []
    route_log: list[tuple[Span, Route]] = []
    pieces: list[str] = []
    cursor = 0
    first_parse: Optional[SymbolicSpec] = None

    for span in detection.spans:
        block_text = prompt[span.start : span.end]
        ui: Optional[UniformInstruction] = None
        route = Route.PARSER
        if policy is RoutePolicy.LLM_FOR_STATE_DIAGRAMS and span.kind is Modality.STATE_DIAGRAM:
            ui = _llm_interpret(interpreter, span, block_text)
            route = Route.LLM_INTERPRETER
        else:
            try:
                spec = _parse_block(span, block_text, port_dirs)
                ui = render_uniform_instruction(spec)
                if first_parse is None:
                    first_parse = spec
            except ParseError as exc:
                if policy is RoutePolicy.LLM_FALLBACK and interpreter is not None:
                    ui = _llm_interpret(interpreter, span, block_text)
                    route = Route.LLM_INTERPRETER
                elif passthrough_on_error:
                    ui = UniformInstruction(text=block_text, source_modality=span.kind, parse=None)
                    route = Route.PASSTHROUGH
                else:
                    raise InterpretationFailed(
                        f"{span.kind.value} block at offset {span.start} failed to parse "
                        f"({exc}) and no fallback route is configured"
                    ) from exc
        pieces.append(prompt[cursor : span.start])
        pieces.append(ui.text)
        blocks.append(ui)
        route_log.append((span, route))
        cursor = span.end
    pieces.append(prompt[cursor:])
    final_text = "".join(pieces)

    if find_module_header(final_text) is None:
        try:
            final_text = ensure_module_header(final_text, io_signature=io_signature, spec=first_parse)
        except MissingSignature:
            if require_header:
                raise

    return CoTPrompt(
        original=prompt,
        interpreted_blocks=tuple(blocks),
        final_text=final_text,
        route_log=tuple(route_log),
    )


def interpret_batch(
    prompts: Iterable[str],
    interpreter: Optional[LlmClient] = None,
    policy: RoutePolicy = RoutePolicy.DETERMINISTIC_ONLY,
    workers: int = 1,
    **kwargs,
) -> list[CoTPrompt]:
    """Interpret a batch of prompts; results come back in input order."""
    prompts = list(prompts)
    if workers <= 1:
        return [interpret(p, interpreter, policy, **kwargs) for p in prompts]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda p: interpret(p, interpreter, policy, **kwargs), prompts))
