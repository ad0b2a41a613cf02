"""External tool invocation: command templates, timeouts, auto-detection.

Compiler and simulator commands are configured as templates with
``{placeholder}`` fields (``{src}``, ``{tb}``, ``{scenario}``, ``{workdir}``,
``{python}``, ``{devnull}``).  A template may chain several commands with
`` && ``; execution stops at the first failure.  No shell is involved.

When nothing is configured, detection prefers an installed Icarus Verilog or
Verilator and otherwise falls back to the bundled structural checker and
scenario simulator, so pipelines remain runnable on machines without an HDL
toolchain.
"""

from __future__ import annotations

import os
import shlex
import shutil
import subprocess
import sys
from dataclasses import dataclass

from .errors import CompilerNotFound, SimulatorNotFound

BUNDLED_COMPILE_CMD = "{python} -m veriforge.verilog.lint {src}"
BUNDLED_SIM_CMD = "{python} -m veriforge.verilog.sim {src} --scenario {scenario}"

IVERILOG_COMPILE_CMD = "iverilog -t null {src}"
VERILATOR_COMPILE_CMD = "verilator --lint-only {src}"
IVERILOG_SIM_CMD = "iverilog -o {workdir}/sim.vvp {src} {tb} && vvp {workdir}/sim.vvp"


@dataclass(frozen=True)
class RunResult:
    ok: bool
    output: str
    exit_code: int


class CommandRunner:
    def __init__(self, template: str, timeout_s: float = 10.0, missing_error=CompilerNotFound):
        self.template = template
        self.timeout_s = timeout_s
        self.missing_error = missing_error

    def run(self, substitutions: dict[str, str]) -> RunResult:
        subs = {"python": sys.executable, "devnull": os.devnull, **substitutions}
        outputs = []
        for segment in self.template.split("&&"):
            try:
                argv = [part.format(**subs) for part in shlex.split(segment.strip())]
            except KeyError as exc:
                raise ValueError(f"command template needs unknown placeholder {exc}") from exc
            if not argv:
                continue
            try:
                proc = subprocess.run(
                    argv,
                    capture_output=True,
                    text=True,
                    timeout=self.timeout_s,
                    cwd=substitutions.get("workdir"),
                )
            except FileNotFoundError as exc:
                raise self.missing_error(f"command not found: {argv[0]}") from exc
            except subprocess.TimeoutExpired:
                outputs.append(f"timeout after {self.timeout_s}s: {' '.join(argv)}")
                return RunResult(ok=False, output="\n".join(outputs), exit_code=124)
            outputs.append(proc.stdout + proc.stderr)
            if proc.returncode != 0:
                return RunResult(ok=False, output="\n".join(outputs), exit_code=proc.returncode)
        return RunResult(ok=True, output="\n".join(outputs), exit_code=0)


def resolve_compile_command(configured: str | None = None) -> str:
    if configured:
        return configured
    if shutil.which("iverilog"):
        return IVERILOG_COMPILE_CMD
    if shutil.which("verilator"):
        return VERILATOR_COMPILE_CMD
    return BUNDLED_COMPILE_CMD


def resolve_sim_command(configured: str | None = None) -> str:
    if configured:
        return configured
    if shutil.which("iverilog") and shutil.which("vvp"):
        return IVERILOG_SIM_CMD
    return BUNDLED_SIM_CMD


def compile_runner(configured: str | None = None, timeout_s: float = 10.0) -> CommandRunner:
    return CommandRunner(resolve_compile_command(configured), timeout_s, CompilerNotFound)


def sim_runner(configured: str | None = None, timeout_s: float = 30.0) -> CommandRunner:
    return CommandRunner(resolve_sim_command(configured), timeout_s, SimulatorNotFound)
