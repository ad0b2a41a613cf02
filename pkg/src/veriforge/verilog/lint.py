"""Bundled syntax checker for Verilog source files.

This is the fallback compile-verification backend used when no external
Verilog compiler is configured: it accepts a file when the structural parser
does, and additionally rejects duplicate module names and duplicate port
names.  It performs no elaboration or type checking.

Usable as a command: ``veriforge-lint file.v [...]`` (or
``python -m veriforge.verilog.lint``), exit status 0 iff every file passes.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ..errors import TokenizeError, VerilogSyntaxError
from .parser import parse_source


def syntax_check(source: str) -> list[str]:
    """Return a list of diagnostics; empty means the source passed."""
    try:
        modules = parse_source(source)
    except (VerilogSyntaxError, TokenizeError) as exc:
        return [str(exc)]
    issues = []
    if not modules:
        issues.append("no module declaration found")
    seen = set()
    for mod in modules:
        if mod.name in seen:
            issues.append(f"line {mod.line}: duplicate module name {mod.name!r}")
        seen.add(mod.name)
        port_names = [p.name for p in mod.ports]
        if len(set(port_names)) != len(port_names):
            issues.append(f"line {mod.line}: duplicate port name in module {mod.name!r}")
    return issues


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(prog="veriforge-lint", description=__doc__.splitlines()[0])
    ap.add_argument("files", nargs="+", help="Verilog source files to check")
    args = ap.parse_args(argv)
    status = 0
    for path in args.files:
        try:
            source = Path(path).read_text()
        except OSError as exc:
            print(f"{path}: Error: {exc}", file=sys.stderr)
            status = 1
            continue
        issues = syntax_check(source)
        for issue in issues:
            print(f"{path}: Error: {issue}")
        if issues:
            status = 1
    return status


if __name__ == "__main__":
    sys.exit(main())
