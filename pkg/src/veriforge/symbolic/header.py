"""Module-header detection, rendering, inference and completion."""

from __future__ import annotations

import re
from typing import Optional

from ..errors import MissingSignature
from .types import (
    Direction,
    IoSignature,
    Port,
    StateDiagram,
    SymbolicSpec,
    TruthTable,
    Waveform,
)
from .waveforms import guess_direction

_MODULE = re.compile(
    r"\bmodule\s+(?P<name>[A-Za-z_]\w*)\s*(?:#\s*\([^)]*\)\s*)?\((?P<ports>[^()]*)\)\s*;",
    re.DOTALL,
)
_PORT_DECL = re.compile(
    r"^(?P<dir>input|output|inout)\s*(?:(?:wire|reg|logic)\s+)?"
    r"(?:\[\s*(?P<msb>\d+)\s*:\s*(?P<lsb>\d+)\s*\]\s*)?(?P<name>[A-Za-z_]\w*)$"
)
_BARE_NAME = re.compile(r"^[A-Za-z_]\w*$")
_IDENT = re.compile(r"[A-Za-z_]\w*")


def find_module_header(text: str) -> Optional[IoSignature]:
    """Return the first syntactically complete module header, if any.

    Both ANSI headers (directions in the port list) and non-ANSI headers
    (bare port names) count as complete.
    """
    for m in _MODULE.finditer(text):
        ports_text = m.group("ports").strip()
        ports: list[Port] = []
        ok = True
        if ports_text:
            for chunk in ports_text.split(","):
                chunk = " ".join(chunk.split())
                pm = _PORT_DECL.match(chunk)
                if pm:
                    width = 1
                    if pm.group("msb") is not None:
                        width = abs(int(pm.group("msb")) - int(pm.group("lsb"))) + 1
                    ports.append(Port(Direction(pm.group("dir")), pm.group("name"), width))
                elif _BARE_NAME.match(chunk):
                    ports.append(Port(Direction.UNKNOWN, chunk))
                else:
                    ok = False
                    break
        if ok:
            return IoSignature(module_name=m.group("name"), ports=tuple(ports))
    return None


def header_port_directions(text: str) -> dict[str, Direction]:
    sig = find_module_header(text)
    if sig is None:
        return {}
    return {p.name: p.direction for p in sig.ports if p.direction is not Direction.UNKNOWN}


def render_signature(sig: IoSignature) -> str:
    decls = []
    for p in sig.ports:
        d = p.direction.value if p.direction is not Direction.UNKNOWN else "input"
        if p.width > 1:
            decls.append(f"{d} [{p.width - 1}:0] {p.name}")
        else:
            decls.append(f"{d} {p.name}")
    return f"module {sig.module_name}(" + ", ".join(decls) + ");"


def infer_signature(spec: SymbolicSpec, module_name: str = "top_module") -> IoSignature:
    """Derive a 1-bit-per-signal header from a parsed symbolic block."""
    ports: list[Port] = []
    if isinstance(spec, TruthTable):
        ports += [Port(Direction.INPUT, n) for n in spec.inputs]
        ports += [Port(Direction.OUTPUT, n) for n in spec.outputs]
    elif isinstance(spec, Waveform):
        for sig in spec.signals:
            d = sig.direction if sig.direction is not Direction.UNKNOWN else guess_direction(sig.name)
            ports.append(Port(d, sig.name))
    elif isinstance(spec, StateDiagram):
        seen: list[str] = []
        for t in spec.transitions:
            for ident in _IDENT.findall(t.condition):
                if ident not in seen:
                    seen.append(ident)
        ports += [Port(Direction.INPUT, n) for n in seen]
        ports += [Port(Direction.OUTPUT, n) for n in spec.output_names]
    else:
        raise TypeError(f"not a symbolic spec: {type(spec).__name__}")
    return IoSignature(module_name=module_name, ports=tuple(ports))


def ensure_module_header(
    instruction: str,
    io_signature: Optional[IoSignature] = None,
    spec: Optional[SymbolicSpec] = None,
) -> str:
    """Append a module header unless the instruction already carries one.

    Resolution order: an existing header wins, then the explicit signature,
    then a signature inferred from the parsed symbolic block.  Idempotent by
    construction: the appended header satisfies the same completeness check.
    """
    if find_module_header(instruction) is not None:
        return instruction
    sig = io_signature
    if sig is None and spec is not None:
        sig = infer_signature(spec)
    if sig is None:
        raise MissingSignature("no module header present, none supplied, none inferable")
    return instruction.rstrip("\n") + "\n\n```verilog\n" + render_signature(sig) + "\n```\n"
