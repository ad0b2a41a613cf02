"""Hallucination label schema and the curated regression corpus.

Labels classify common failure modes of LLM-generated Verilog into three
categories, each with fixed subtypes.  The bundled regression corpus holds
one complete prompt/incorrect-code example per subtype together with the
check that rejects it (a compile check for syntax subtypes, a simulation
scenario otherwise); validating the corpus runs every case through the
evaluation harness and demands that it fails.

No automatic classification of arbitrary model output is attempted: labels
are assigned by corpus curation and test fixtures.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from importlib import resources as importlib_resources
from pathlib import Path
from typing import Optional

from .commands import CommandRunner
from .errors import CorpusInvalid
from .evalharness import BenchTask, TaskKind, run_task


class Category(Enum):
    SYMBOLIC = "Symbolic"
    KNOWLEDGE = "Knowledge"
    LOGICAL = "Logical"


class Subtype(Enum):
    STATE_DIAGRAM_MISINTERPRETATION = "StateDiagramMisinterpretation"
    WAVEFORM_CHART_MISINTERPRETATION = "WaveformChartMisinterpretation"
    TRUTH_TABLE_MISINTERPRETATION = "TruthTableMisinterpretation"
    DIGITAL_DESIGN_CONVENTION_MISAPPLICATION = "DigitalDesignConventionMisapplication"
    VERILOG_SYNTAX_MISAPPLICATION = "VerilogSyntaxMisapplication"
    VERILOG_SPECIFIC_ATTRIBUTE_MISUNDERSTANDING = "VerilogSpecificAttributeMisunderstanding"
    INCORRECT_LOGICAL_EXPRESSION = "IncorrectLogicalExpression"
    INCORRECT_CORNER_CASE_HANDLING = "IncorrectCornerCaseHandling"
    INSTRUCTIONAL_LOGIC_FAILURE = "InstructionalLogicFailure"


SUBTYPE_CATEGORY: dict[Subtype, Category] = {
    Subtype.STATE_DIAGRAM_MISINTERPRETATION: Category.SYMBOLIC,
    Subtype.WAVEFORM_CHART_MISINTERPRETATION: Category.SYMBOLIC,
    Subtype.TRUTH_TABLE_MISINTERPRETATION: Category.SYMBOLIC,
    Subtype.DIGITAL_DESIGN_CONVENTION_MISAPPLICATION: Category.KNOWLEDGE,
    Subtype.VERILOG_SYNTAX_MISAPPLICATION: Category.KNOWLEDGE,
    Subtype.VERILOG_SPECIFIC_ATTRIBUTE_MISUNDERSTANDING: Category.KNOWLEDGE,
    Subtype.INCORRECT_LOGICAL_EXPRESSION: Category.LOGICAL,
    Subtype.INCORRECT_CORNER_CASE_HANDLING: Category.LOGICAL,
    Subtype.INSTRUCTIONAL_LOGIC_FAILURE: Category.LOGICAL,
}


@dataclass(frozen=True)
class HallucinationLabel:
    category: Category
    subtype: Subtype

    def __post_init__(self):
        if SUBTYPE_CATEGORY[self.subtype] is not self.category:
            raise ValueError(
                f"subtype {self.subtype.value} belongs to {SUBTYPE_CATEGORY[self.subtype].value}, "
                f"not {self.category.value}"
            )

    @classmethod
    def for_subtype(cls, subtype: Subtype) -> "HallucinationLabel":
        return cls(category=SUBTYPE_CATEGORY[subtype], subtype=subtype)

    def to_json(self) -> dict:
        return {"category": self.category.value, "subtype": self.subtype.value}

    @classmethod
    def from_json(cls, record: dict) -> "HallucinationLabel":
        return cls(category=Category(record["category"]), subtype=Subtype(record["subtype"]))


@dataclass(frozen=True)
class CaseCheck:
    mode: str  # syntax | functional
    scenario: Optional[dict] = None

    def __post_init__(self):
        if self.mode not in ("syntax", "functional"):
            raise ValueError(f"unknown check mode {self.mode!r}")
        if self.mode == "functional" and self.scenario is None:
            raise ValueError("functional checks need a scenario")


@dataclass(frozen=True)
class RegressionCase:
    label: HallucinationLabel
    prompt: str
    incorrect_code: str
    analysis: str
    check: CaseCheck

    def to_bench_task(self) -> BenchTask:
        if self.check.mode == "syntax":
            return BenchTask(
                id=self.label.subtype.value, prompt=self.prompt, kind=TaskKind.SYNTAX_ONLY
            )
        return BenchTask(
            id=self.label.subtype.value,
            prompt=self.prompt,
            kind=TaskKind.FUNCTIONAL,
            scenario=self.check.scenario,
        )


def bundled_corpus_path() -> Path:
    return Path(str(importlib_resources.files("veriforge") / "resources" / "taxonomy" / "corpus.jsonl"))


def load_corpus(path: str | Path | None = None) -> list[RegressionCase]:
    """Load and structurally validate a regression corpus.

    Requires at least one case per subtype (hence >= 9 cases overall).
    """
    path = Path(path) if path is not None else bundled_corpus_path()
    if not path.exists():
        raise CorpusInvalid(f"corpus file {path} does not exist")
    cases: list[RegressionCase] = []
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        if not line.strip():
            continue
        record = json.loads(line)
        if "_meta" in record:
            continue
        try:
            label = HallucinationLabel.from_json(record)
            check_record = record.get("check", {"mode": "syntax"})
            check = CaseCheck(mode=check_record["mode"], scenario=check_record.get("scenario"))
            case = RegressionCase(
                label=label,
                prompt=record["prompt"],
                incorrect_code=record["incorrect_code"],
                analysis=record["analysis"],
                check=check,
            )
        except (KeyError, ValueError) as exc:
            raise CorpusInvalid(f"{path.name}:{lineno}: {exc}") from exc
        cases.append(case)
    covered = {c.label.subtype for c in cases}
    missing = set(Subtype) - covered
    if missing:
        raise CorpusInvalid(
            "corpus lacks cases for subtypes: " + ", ".join(sorted(s.value for s in missing))
        )
    if len(cases) < 9:
        raise CorpusInvalid(f"corpus has {len(cases)} cases; at least 9 required")
    return cases


def validate_corpus(
    cases: list[RegressionCase],
    compiler: CommandRunner,
    simulator: CommandRunner,
) -> None:
    """Self-check: every case's incorrect code must fail its designated check."""
    unexpectedly_passing = []
    for case in cases:
        result = run_task(
            case.to_bench_task(), [case.incorrect_code], compiler=compiler, simulator=simulator
        )
        if result.c != 0:
            unexpectedly_passing.append(case.label.subtype.value)
    if unexpectedly_passing:
        raise CorpusInvalid(
            "incorrect code unexpectedly passed its check for: " + ", ".join(unexpectedly_passing)
        )


def save_corpus(cases: list[RegressionCase], path: str | Path, meta: Optional[dict] = None) -> None:
    path = Path(path)
    with open(path, "w") as fh:
        if meta is not None:
            fh.write(json.dumps({"_meta": meta}, sort_keys=True) + "\n")
        for case in cases:
            record = {
                **case.label.to_json(),
                "prompt": case.prompt,
                "incorrect_code": case.incorrect_code,
                "analysis": case.analysis,
                "check": {"mode": case.check.mode},
            }
            if case.check.scenario is not None:
                record["check"]["scenario"] = case.check.scenario
            fh.write(json.dumps(record, sort_keys=True, ensure_ascii=False) + "\n")
