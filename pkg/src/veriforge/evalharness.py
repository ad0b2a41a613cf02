"""Benchmark evaluation: syntax/functional checks and pass@k.

pass@k for one task with n trials and c passes is
``1 - C(n-c, k) / C(n, k)``, computed in a numerically stable product form.
Tasks are evaluated by compiling each candidate and, for functional tasks,
running its testbench or checker command; a candidate passes when the
command exits 0 and no failure token appears in the output.
"""

from __future__ import annotations

import json
import tempfile
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .commands import CommandRunner
from .errors import InvalidCounts, MixedN, SimulatorNotFound

DEFAULT_FAIL_TOKENS = ("MISMATCH", "Error", "ERROR")


@dataclass(frozen=True)
class EvalCounts:
    n: int
    c: int
    k: int

    def __post_init__(self):
        if not (0 <= self.c <= self.n):
            raise InvalidCounts(f"need 0 <= c <= n, got c={self.c}, n={self.n}")
        if not (1 <= self.k <= self.n):
            raise InvalidCounts(f"need 1 <= k <= n, got k={self.k}, n={self.n}")


def pass_at_k(counts: EvalCounts) -> float:
    """Probability that at least one of k sampled trials passes."""
    n, c, k = counts.n, counts.c, counts.k
    if c == 0:
        return 0.0
    if n - c < k:
        return 1.0
    prob_all_fail = 1.0
    for i in range(k):
        prob_all_fail *= (n - c - i) / (n - i)
    return 1.0 - prob_all_fail


class TaskKind(Enum):
    SYNTAX_ONLY = "syntax_only"
    FUNCTIONAL = "functional"


@dataclass(frozen=True)
class BenchTask:
    id: str
    prompt: str
    kind: TaskKind
    testbench: Optional[str] = None  # Verilog testbench source
    scenario: Optional[dict] = None  # bundled-simulator stimulus
    checker_cmd: Optional[str] = None  # overrides the simulator command

    def __post_init__(self):
        if self.kind is TaskKind.FUNCTIONAL and not (
            self.testbench or self.scenario or self.checker_cmd
        ):
            raise ValueError(f"functional task {self.id} needs a testbench, scenario or checker")


@dataclass(frozen=True)
class CandidateResult:
    ok: bool
    phase: str  # compile | simulate
    output: str


@dataclass(frozen=True)
class TaskResult:
    task_id: str
    n: int
    c: int
    candidates: tuple[CandidateResult, ...]


def run_task(
    task: BenchTask,
    candidates: Sequence[str],
    compiler: CommandRunner,
    simulator: Optional[CommandRunner] = None,
    fail_tokens: Sequence[str] = DEFAULT_FAIL_TOKENS,
) -> TaskResult:
    """Evaluate every candidate completion against one task.

    Each candidate runs in an isolated workspace.  Timeouts and nonzero
    exits count as failures for that candidate only.
    """
    results = []
    for code in candidates:
        results.append(_check_candidate(task, code, compiler, simulator, fail_tokens))
    return TaskResult(
        task_id=task.id,
        n=len(results),
        c=sum(r.ok for r in results),
        candidates=tuple(results),
    )


def _check_candidate(
    task: BenchTask,
    code: str,
    compiler: CommandRunner,
    simulator: Optional[CommandRunner],
    fail_tokens: Sequence[str],
) -> CandidateResult:
    with tempfile.TemporaryDirectory(prefix="veriforge-eval-") as workdir:
        src = Path(workdir) / "candidate.v"
        src.write_text(code)
        subs = {"src": str(src), "workdir": workdir}
        compile_result = compiler.run(subs)
        if not compile_result.ok:
            return CandidateResult(ok=False, phase="compile", output=compile_result.output)
        if task.kind is TaskKind.SYNTAX_ONLY:
            return CandidateResult(ok=True, phase="compile", output=compile_result.output)

        if task.testbench is not None:
            tb = Path(workdir) / "tb.v"
            tb.write_text(task.testbench)
            subs["tb"] = str(tb)
        if task.scenario is not None:
            scenario = Path(workdir) / "scenario.json"
            scenario.write_text(json.dumps(task.scenario))
            subs["scenario"] = str(scenario)
        if task.checker_cmd is not None:
            runner = CommandRunner(
                task.checker_cmd,
                simulator.timeout_s if simulator else 30.0,
                SimulatorNotFound,
            )
        elif simulator is not None:
            runner = simulator
        else:
            raise SimulatorNotFound(f"functional task {task.id} needs a simulator command")
        try:
            sim_result = runner.run(subs)
        except ValueError as exc:
            raise SimulatorNotFound(
                f"task {task.id}: simulator command is incompatible with the task's "
                f"artifacts ({exc}); the bundled simulator needs a scenario file, "
                f"Verilog testbenches need an external simulator"
            ) from exc
        ok = sim_result.ok and not any(tok in sim_result.output for tok in fail_tokens)
        return CandidateResult(ok=ok, phase="simulate", output=sim_result.output)


# -- aggregation ----------------------------------------------------------------


@dataclass(frozen=True)
class TaskReport:
    task_id: str
    n: int
    c: int
    pass_at: dict[int, float]


@dataclass(frozen=True)
class PassAtKReport:
    tasks: tuple[TaskReport, ...]
    means: dict[int, float]
    metadata: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "metadata": self.metadata,
            "aggregate": {f"pass@{k}": v for k, v in sorted(self.means.items())},
            "tasks": [
                {
                    "task_id": t.task_id,
                    "n": t.n,
                    "c": t.c,
                    **{f"pass@{k}": v for k, v in sorted(t.pass_at.items())},
                }
                for t in self.tasks
            ],
        }


def aggregate(
    results: Iterable[TaskResult],
    ks: Sequence[int] = (1, 5),
    metadata: Optional[dict] = None,
) -> PassAtKReport:
    """Per-task and mean pass@k over tasks sharing one trial count."""
    results = list(results)
    if not results:
        raise MixedN("no task results to aggregate (empty input)")
    ns = {r.n for r in results}
    if len(ns) != 1:
        raise MixedN(f"tasks have differing trial counts: {sorted(ns)}")
    (n,) = ns
    for k in ks:
        if not 1 <= k <= n:
            raise InvalidCounts(f"k={k} out of range for n={n}")
    tasks = []
    for r in results:
        pass_at = {k: pass_at_k(EvalCounts(n=r.n, c=r.c, k=k)) for k in ks}
        tasks.append(TaskReport(task_id=r.task_id, n=r.n, c=r.c, pass_at=pass_at))
    means = {k: sum(t.pass_at[k] for t in tasks) / len(tasks) for k in ks}
    return PassAtKReport(tasks=tuple(tasks), means=means, metadata=dict(metadata or {}))


# -- benchmark layout adapters ---------------------------------------------------


def load_verilogeval_tasks(directory: str | Path) -> list[BenchTask]:
    """Flat layout: ``<task>_prompt.txt`` plus optional ``<task>_tb.v`` and/or
    ``<task>_scenario.json``.

    Tasks carrying neither a testbench nor a scenario are syntax-only.
    """
    directory = Path(directory)
    tasks = []
    for prompt_path in sorted(directory.glob("*_prompt.txt")):
        task_id = prompt_path.name[: -len("_prompt.txt")]
        tb_path = directory / f"{task_id}_tb.v"
        scenario_path = directory / f"{task_id}_scenario.json"
        testbench = tb_path.read_text() if tb_path.exists() else None
        scenario = json.loads(scenario_path.read_text()) if scenario_path.exists() else None
        functional = testbench is not None or scenario is not None
        tasks.append(
            BenchTask(
                id=task_id,
                prompt=prompt_path.read_text(),
                kind=TaskKind.FUNCTIONAL if functional else TaskKind.SYNTAX_ONLY,
                testbench=testbench,
                scenario=scenario,
            )
        )
    return tasks


def load_rtllm_tasks(directory: str | Path) -> list[BenchTask]:
    """Directory-per-task layout: ``design_description.txt`` plus a
    ``*tb*.v`` / ``testbench*.v`` file and/or ``scenario.json`` in the task
    directory."""
    directory = Path(directory)
    tasks = []
    for task_dir in sorted(p for p in directory.iterdir() if p.is_dir()):
        desc = task_dir / "design_description.txt"
        if not desc.exists():
            continue
        tb_candidates = sorted(
            p for p in task_dir.rglob("*.v") if "tb" in p.name.lower() or "testbench" in p.name.lower()
        )
        testbench = tb_candidates[0].read_text() if tb_candidates else None
        scenario_path = task_dir / "scenario.json"
        scenario = json.loads(scenario_path.read_text()) if scenario_path.exists() else None
        functional = testbench is not None or scenario is not None
        tasks.append(
            BenchTask(
                id=task_dir.name,
                prompt=desc.read_text(),
                kind=TaskKind.FUNCTIONAL if functional else TaskKind.SYNTAX_ONLY,
                testbench=testbench,
                scenario=scenario,
            )
        )
    return tasks


def load_candidates(path: str | Path) -> dict[str, list[str]]:
    """Candidates JSONL (``task_id``, ``completion``, ``trial_index``) grouped
    per task and ordered by trial index."""
    grouped: dict[str, list[tuple[int, str]]] = {}
    for line in Path(path).read_text().splitlines():
        if not line.strip():
            continue
        record = json.loads(line)
        if "_meta" in record:
            continue
        entries = grouped.setdefault(record["task_id"], [])
        trial = int(record.get("trial_index", len(entries)))
        entries.append((trial, record["completion"]))
    return {
        task_id: [completion for _, completion in sorted(entries)]
        for task_id, entries in grouped.items()
    }
