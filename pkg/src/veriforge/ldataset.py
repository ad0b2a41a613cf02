"""Logic-enhanced dataset generation.

Random single-output truth tables (optionally with don't-care rows) are
turned into instruction-code pairs of two flavors: ConciseExpression pairs
implement the exact minimum sum-of-products expression, while
FaithfulImplementation pairs mirror the table row by row with an explicit
default arm.  Each pair ships with an exhaustive testbench (Verilog source
plus a scenario file for the bundled simulator) and a sidecar metadata
record holding the seed and parameters needed to regenerate it.

Instruction evolution rewrites instruction text through an LLM under a hard
word-budget: rewrites that add or remove more than ``max_word_delta`` words
(counted as a minimal word-level edit script) are rejected and the original
text kept.
"""

from __future__ import annotations

import json
import logging
import random
import tempfile
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Callable, Optional

from .commands import CommandRunner
from .errors import IncompatibleTemplate, LlmError
from .kdataset import InstructionCodePair, Stage, VerificationResult, verify_compiles
from .llm import LlmClient
from .logic import LogicExpr, minimize_sop, to_verilog
from .symbolic.render import render_kmap_grid, render_truth_table
from .symbolic.types import TruthTable

log = logging.getLogger(__name__)

EVOLVE_TEMPLATE = "evolve_instruction.v1"
INPUT_NAMES = "abcdef"


class Flavor(Enum):
    CONCISE_EXPRESSION = "concise_expression"
    FAITHFUL_IMPLEMENTATION = "faithful_implementation"


@dataclass(frozen=True)
class LogicProblem:
    inputs: tuple[str, ...]
    table: TruthTable
    flavor: Flavor
    minimal: Optional[LogicExpr]
    seed: int

    def __post_init__(self):
        if self.flavor is Flavor.CONCISE_EXPRESSION and self.minimal is None:
            raise ValueError("concise-expression problems must carry the minimized expression")


def gen_random_truth_table(n_inputs: int, dont_care_fraction: float, seed: int) -> TruthTable:
    """Full-coverage random table; deterministic for a given seed."""
    if not 2 <= n_inputs <= 6:
        raise ValueError("n_inputs must be in [2, 6]")
    if not 0 <= dont_care_fraction < 1:
        raise ValueError("dont_care_fraction must be in [0, 1)")
    rng = random.Random(seed)
    names = tuple(INPUT_NAMES[:n_inputs])
    rows = []
    for index in range(2**n_inputs):
        out = "1" if rng.random() < 0.5 else "0"
        if rng.random() < dont_care_fraction:
            out = "x"
        rows.append((tuple(format(index, f"0{n_inputs}b")), (out,)))
    return TruthTable(inputs=names, outputs=("out",), rows=tuple(rows))


def make_problem(n_inputs: int, dont_care_fraction: float, seed: int, flavor: Flavor) -> LogicProblem:
    table = gen_random_truth_table(n_inputs, dont_care_fraction, seed)
    minimal = minimize_sop(table) if flavor is Flavor.CONCISE_EXPRESSION else None
    return LogicProblem(table.inputs, table, flavor, minimal, seed)


# -- templates ----------------------------------------------------------------


def _header(problem: LogicProblem, reg_out: bool) -> str:
    ports = ", ".join(f"input {n}" for n in problem.inputs)
    out = "output reg out" if reg_out else "output out"
    return f"module top_module({ports}, {out});"


def _fenced(header: str) -> str:
    return f"```verilog\n{header}\n```"


def _instruction_rules(problem: LogicProblem, sentence: str) -> str:
    body = render_truth_table(problem.table)
    return f"{sentence}\n\n{body}\n\n{_fenced(_header(problem, reg_out=False))}\n"


def _instruction_kmap(problem: LogicProblem, sentence: str) -> str:
    grid = render_kmap_grid(problem.table)
    note = "Cells marked x are don't-care and may take either value."
    return f"{sentence}\n\n{grid}\n\n{note}\n\n{_fenced(_header(problem, reg_out=False))}\n"


_CONCISE_SENTENCE = (
    "Implement the Boolean function defined below. Derive the most concise "
    "logical expression you can and implement it with combinational logic."
)
_FAITHFUL_SENTENCE = (
    "Implement combinational logic that matches the mapping below exactly, "
    "covering every input combination, including a default assignment so no "
    "case is left unhandled."
)


def _code_concise_assign(problem: LogicProblem) -> str:
    expr = to_verilog(problem.minimal)
    return f"{_header(problem, reg_out=False)}\n  assign out = {expr};\nendmodule\n"


def _code_concise_always(problem: LogicProblem) -> str:
    expr = to_verilog(problem.minimal)
    return (
        f"{_header(problem, reg_out=True)}\n"
        "  always @(*) begin\n"
        f"    out = {expr};\n"
        "  end\n"
        "endmodule\n"
    )


def _code_faithful_case(problem: LogicProblem) -> str:
    n = len(problem.inputs)
    selector = "{" + ", ".join(problem.inputs) + "}"
    lines = [
        _header(problem, reg_out=True),
        "  always @(*) begin",
        f"    case ({selector})",
    ]
    for in_bits, out_bits in problem.table.rows:
        if out_bits[0] == "x":
            continue
        lines.append(f"      {n}'b{''.join(in_bits)}: out = 1'b{out_bits[0]};")
    lines.append("      default: out = 1'b0;")
    lines.append("    endcase")
    lines.append("  end")
    lines.append("endmodule")
    return "\n".join(lines) + "\n"


def _code_faithful_ifchain(problem: LogicProblem) -> str:
    lines = [_header(problem, reg_out=True), "  always @(*) begin"]
    first = True
    for in_bits, out_bits in problem.table.rows:
        if out_bits[0] == "x":
            continue
        cond = " && ".join(f"{n} == 1'b{b}" for n, b in zip(problem.inputs, in_bits))
        word = "if" if first else "else if"
        lines.append(f"    {word} ({cond}) out = 1'b{out_bits[0]};")
        first = False
    lines.append("    else out = 1'b0;")
    lines.append("  end")
    lines.append("endmodule")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class LTemplate:
    id: str
    flavor: Flavor
    render_instruction: Callable[[LogicProblem], str]
    render_code: Callable[[LogicProblem], str]
    max_inputs: int = 6


TEMPLATES: dict[str, LTemplate] = {
    t.id: t
    for t in (
        LTemplate(
            "concise-assign",
            Flavor.CONCISE_EXPRESSION,
            lambda p: _instruction_rules(p, _CONCISE_SENTENCE),
            _code_concise_assign,
        ),
        LTemplate(
            "concise-always",
            Flavor.CONCISE_EXPRESSION,
            lambda p: _instruction_rules(p, _CONCISE_SENTENCE),
            _code_concise_always,
        ),
        LTemplate(
            "concise-kmap-assign",
            Flavor.CONCISE_EXPRESSION,
            lambda p: _instruction_kmap(p, _CONCISE_SENTENCE),
            _code_concise_assign,
            max_inputs=4,
        ),
        LTemplate(
            "faithful-case",
            Flavor.FAITHFUL_IMPLEMENTATION,
            lambda p: _instruction_rules(p, _FAITHFUL_SENTENCE),
            _code_faithful_case,
        ),
        LTemplate(
            "faithful-ifchain",
            Flavor.FAITHFUL_IMPLEMENTATION,
            lambda p: _instruction_rules(p, _FAITHFUL_SENTENCE),
            _code_faithful_ifchain,
        ),
    )
}

# the default generation cycle alternates flavors, giving a 50/50 mix
DEFAULT_TEMPLATE_CYCLE = ("concise-assign", "faithful-case", "concise-always", "faithful-ifchain")


def instantiate_templates(problem: LogicProblem, template_id: str) -> InstructionCodePair:
    if template_id not in TEMPLATES:
        raise IncompatibleTemplate(f"unknown template {template_id!r}")
    template = TEMPLATES[template_id]
    if template.flavor is not problem.flavor:
        raise IncompatibleTemplate(
            f"template {template_id!r} expects {template.flavor.value}, problem is {problem.flavor.value}"
        )
    if len(problem.inputs) > template.max_inputs:
        raise IncompatibleTemplate(
            f"template {template_id!r} supports at most {template.max_inputs} inputs"
        )
    return InstructionCodePair(
        id=f"logic-{template_id}-n{len(problem.inputs)}-s{problem.seed}",
        instruction=template.render_instruction(problem),
        code=template.render_code(problem),
        stage=Stage.LOGIC,
    )


# -- testbench generation ------------------------------------------------------


def gen_testbench(problem: LogicProblem, module_name: str = "top_module") -> tuple[str, dict]:
    """Exhaustive checker for the problem's defined rows.

    Returns Verilog testbench source (for external simulators) and the
    equivalent scenario dict (for the bundled simulator); both drive every
    defined input combination and compare the output.
    """
    inputs = problem.inputs
    regs = "; ".join(f"reg {n}" for n in inputs)
    conns = ", ".join(f".{n}({n})" for n in inputs)
    lines = [
        "module tb;",
        f"  {regs}; wire out;",
        f"  {module_name} dut({conns}, .out(out));",
        "  integer errors;",
        "  initial begin",
        "    errors = 0;",
    ]
    steps = []
    for in_bits, out_bits in problem.table.rows:
        if out_bits[0] == "x":
            continue
        sets = "; ".join(f"{n} = 1'b{b}" for n, b in zip(inputs, in_bits))
        lines.append(f"    {sets}; #1;")
        lines.append(
            f'    if (out !== 1\'b{out_bits[0]}) begin errors = errors + 1; '
            f'$display("MISMATCH inputs={"".join(in_bits)} out=%b expected={out_bits[0]}", out); end'
        )
        steps.append(
            {
                "set": {n: int(b) for n, b in zip(inputs, in_bits)},
                "expect": {"out": int(out_bits[0])},
            }
        )
    lines += [
        '    if (errors == 0) $display("ALL_CHECKS_PASSED");',
        "    $finish;",
        "  end",
        "endmodule",
    ]
    scenario = {"module": module_name, "steps": steps}
    return "\n".join(lines) + "\n", scenario


def validate_pair(
    pair: InstructionCodePair,
    problem: LogicProblem,
    compiler: CommandRunner,
    simulator: Optional[CommandRunner] = None,
) -> tuple[VerificationResult, list[str]]:
    """Compile the pair and, when a simulator is configured, run its
    exhaustive testbench; returns (compile result, mismatch lines)."""
    compile_result = verify_compiles(pair.code, compiler)
    mismatches: list[str] = []
    if simulator is not None and compile_result.ok:
        tb_source, scenario = gen_testbench(problem)
        with tempfile.TemporaryDirectory(prefix="veriforge-sim-") as workdir:
            src = Path(workdir) / "dut.v"
            tb = Path(workdir) / "tb.v"
            scenario_path = Path(workdir) / "scenario.json"
            src.write_text(pair.code)
            tb.write_text(tb_source)
            scenario_path.write_text(json.dumps(scenario))
            result = simulator.run(
                {"src": str(src), "tb": str(tb), "scenario": str(scenario_path), "workdir": workdir}
            )
        if not result.ok or "MISMATCH" in result.output:
            mismatches = [ln for ln in result.output.splitlines() if "MISMATCH" in ln] or [
                f"simulation failed (exit {result.exit_code})"
            ]
    return compile_result, mismatches


# -- instruction evolution ------------------------------------------------------


def check_word_delta(original: str, evolved: str) -> int:
    """Insertions plus deletions in a minimal word-level edit script.

    Substitution counts as one insertion plus one deletion; tokens are
    whitespace-delimited words.
    """
    a = original.split()
    b = evolved.split()
    la, lb = len(a), len(b)
    # delta = la + lb - 2 * LCS(a, b)
    prev = [0] * (lb + 1)
    for i in range(1, la + 1):
        cur = [0] * (lb + 1)
        for j in range(1, lb + 1):
            if a[i - 1] == b[j - 1]:
                cur[j] = prev[j - 1] + 1
            else:
                cur[j] = max(prev[j], cur[j - 1])
        prev = cur
    return la + lb - 2 * prev[lb]


def evolve_instruction(
    instruction: str,
    evolver: LlmClient,
    max_word_delta: int = 10,
    max_retries: int = 2,
) -> str:
    """LLM rewrite accepted only within the word budget; otherwise the
    original text is returned and the rejection logged."""
    if not instruction:
        raise ValueError("instruction must be non-empty")
    last_delta = None
    for attempt in range(max_retries + 1):
        try:
            candidate = evolver.complete_text(EVOLVE_TEMPLATE, {"instruction": instruction})
        except LlmError as exc:
            log.warning("evolver failed (attempt %d): %s", attempt + 1, exc)
            continue
        delta = check_word_delta(instruction, candidate)
        if delta <= max_word_delta:
            return candidate
        last_delta = delta
    log.warning(
        "instruction evolution rejected after %d attempt(s)%s; keeping original",
        max_retries + 1,
        f" (last word delta {last_delta})" if last_delta is not None else "",
    )
    return instruction


# -- pipeline -------------------------------------------------------------------


def generate_l_records(
    count: int,
    n_inputs: int,
    dont_care_fraction: float,
    seed: int,
    compiler: CommandRunner,
    template_ids: tuple[str, ...] = DEFAULT_TEMPLATE_CYCLE,
    evolver: Optional[LlmClient] = None,
    max_word_delta: int = 10,
) -> tuple[list[InstructionCodePair], list[LogicProblem], list[dict]]:
    """Generate ``count`` verified logic pairs plus regeneration metadata.

    Problem ``i`` uses seed ``seed + i`` and the template cycle in order, so
    (seed, parameters) fully determine every record.
    """
    from .kdataset import verify_pair

    records: list[InstructionCodePair] = []
    problems: list[LogicProblem] = []
    sidecar: list[dict] = []
    for i in range(count):
        template = TEMPLATES[template_ids[i % len(template_ids)]]
        problem = make_problem(n_inputs, dont_care_fraction, seed + i, template.flavor)
        pair = instantiate_templates(problem, template.id)
        if evolver is not None:
            evolved = evolve_instruction(pair.instruction, evolver, max_word_delta)
            pair = InstructionCodePair(
                id=pair.id, instruction=evolved, code=pair.code, stage=pair.stage
            )
        pair = verify_pair(pair, compiler)
        records.append(pair)
        problems.append(problem)
        sidecar.append(
            {
                "id": pair.id,
                "seed": problem.seed,
                "n_inputs": n_inputs,
                "dont_care_fraction": dont_care_fraction,
                "template_id": template.id,
                "flavor": template.flavor.value,
            }
        )
    return records, problems, sidecar
