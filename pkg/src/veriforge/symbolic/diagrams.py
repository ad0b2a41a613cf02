"""State-diagram block parsing and serialization.

Grammar, one edge per line::

    STATE[out=BIT{,out2=BIT}]--[COND]->STATE

COND is ``name=bit``, ``name==bit``, or free boolean-expression text over the
input names.  ``->`` and ``-->`` arrowheads are both accepted, as is arbitrary
whitespace between elements.
"""

from __future__ import annotations

import re

from ..errors import DanglingState, InconsistentOutputs, MalformedDiagram
from .types import StateDiagram, Transition
from .util import strip_ellipsis

_EDGE = re.compile(
    r"^\s*(?P<src>[A-Za-z_]\w*)\s*\[(?P<outs>[^\]]*)\]\s*--\s*\[(?P<cond>[^\]]*)\]\s*-*>\s*(?P<dst>[A-Za-z_]\w*)\s*$"
)
_ASSIGN = re.compile(r"^(?P<name>[A-Za-z_]\w*)\s*=\s*(?P<bit>[01])$")
_EQ_COND = re.compile(r"^(?P<name>[A-Za-z_]\w*)\s*==?\s*(?P<bit>[01])$")


def _parse_outputs(text: str, line: str) -> dict[str, str]:
    assigns: dict[str, str] = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            raise MalformedDiagram(f"empty output assignment in {line.strip()!r}")
        m = _ASSIGN.match(part)
        if not m:
            raise MalformedDiagram(f"bad output assignment {part!r} in {line.strip()!r}")
        name = m.group("name")
        if name in assigns:
            raise MalformedDiagram(f"output {name} assigned twice in {line.strip()!r}")
        assigns[name] = m.group("bit")
    return assigns


def normalize_condition(cond: str) -> str:
    """Collapse ``name=bit`` / ``name==bit`` to the canonical ``name = bit``."""
    cond = cond.strip()
    m = _EQ_COND.match(cond)
    if m:
        return f"{m.group('name')} = {m.group('bit')}"
    return " ".join(cond.split())


def parse_state_diagram(block: str) -> StateDiagram:
    lines = [strip_ellipsis(ln) for ln in block.splitlines()]
    lines = [ln for ln in lines if ln.strip()]
    if not lines:
        raise MalformedDiagram("no content in state-diagram block")

    states: dict[str, dict[str, str]] = {}
    transitions: list[Transition] = []
    for ln in lines:
        m = _EDGE.match(ln)
        if not m:
            raise MalformedDiagram(f"unparseable edge line {ln.strip()!r}")
        src = m.group("src")
        outs = _parse_outputs(m.group("outs"), ln)
        cond = normalize_condition(m.group("cond"))
        if not cond:
            raise MalformedDiagram(f"empty condition in {ln.strip()!r}")
        if src in states:
            if states[src] != outs:
                raise InconsistentOutputs(
                    f"state {src} declared with conflicting outputs: {states[src]} vs {outs}"
                )
        else:
            states[src] = outs
        transitions.append(Transition(source=src, condition=cond, target=m.group("dst")))

    for t in transitions:
        if t.target not in states:
            raise DanglingState(f"transition target {t.target} never declared with outputs")

    declared = {frozenset(v) for v in states.values()}
    if len(declared) > 1:
        raise InconsistentOutputs("states declare differing output-name sets")

    initial = next(iter(states))
    return StateDiagram(states=states, transitions=tuple(transitions), initial_state=initial)


def state_diagram_to_block(diagram: StateDiagram) -> str:
    def compact(cond: str) -> str:
        m = re.match(r"^([A-Za-z_]\w*) = ([01])$", cond)
        return f"{m.group(1)}={m.group(2)}" if m else cond

    lines = []
    for t in diagram.transitions:
        outs = ",".join(f"{k}={v}" for k, v in diagram.states[t.source].items())
        lines.append(f"{t.source}[{outs}]--[{compact(t.condition)}]->{t.target}")
    return "\n".join(lines)
