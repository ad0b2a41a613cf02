"""Knowledge-enhanced dataset generation.

Flow: raw Verilog corpus -> vanilla instruction-code pairs (described by an
LLM) -> topic/attribute analysis -> exemplar-guided rewriting, one augmented
pair per matched exemplar -> compile verification.  Only records that pass
verification are emitted; failures are kept as data with diagnostics so runs
are auditable.  Given a deterministic (mock) client and a fixed input order
the pipeline output is byte-identical across runs.
"""

from __future__ import annotations

import json
import logging
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import Callable, Iterable, Iterator, Optional

from .commands import CommandRunner, RunResult
from .errors import LlmError, TokenizeError
from .llm import LlmClient
from .topics import Exemplar, analyze, match_exemplars
from .verilog.lexer import tokenize

log = logging.getLogger(__name__)

DESCRIBE_TEMPLATE = "describe_code.v1"
REWRITE_TEMPLATE = "rewrite_instruction.v1"


class Stage(Enum):
    VANILLA = "vanilla"
    KNOWLEDGE_AUGMENTED = "knowledge_augmented"
    LOGIC = "logic"


class VerifyState(Enum):
    UNVERIFIED = "Unverified"
    COMPILE_OK = "CompileOk"
    COMPILE_FAIL = "CompileFail"


@dataclass(frozen=True)
class VerificationResult:
    ok: bool
    diagnostics: str
    exit_code: int

    def __post_init__(self):
        assert self.ok == (self.exit_code == 0)


@dataclass(frozen=True)
class InstructionCodePair:
    id: str
    instruction: str
    code: str
    stage: Stage
    exemplar_id: Optional[str] = None
    verify: VerifyState = VerifyState.UNVERIFIED
    verify_message: str = ""

    def __post_init__(self):
        if self.stage is Stage.KNOWLEDGE_AUGMENTED and not self.exemplar_id:
            raise ValueError("knowledge-augmented pairs must reference an exemplar")

    def to_json(self) -> dict:
        record = {
            "id": self.id,
            "instruction": self.instruction,
            "code": self.code,
            "stage": self.stage.value,
            "exemplar_id": self.exemplar_id,
            "verify": self.verify.value,
        }
        if self.verify is VerifyState.COMPILE_FAIL:
            record["verify_message"] = self.verify_message
        return record

    @classmethod
    def from_json(cls, record: dict) -> "InstructionCodePair":
        return cls(
            id=record["id"],
            instruction=record["instruction"],
            code=record["code"],
            stage=Stage(record["stage"]),
            exemplar_id=record.get("exemplar_id"),
            verify=VerifyState(record.get("verify", "Unverified")),
            verify_message=record.get("verify_message", ""),
        )


@dataclass(frozen=True)
class SkipRecord:
    source: str
    reason: str


# -- operations ---------------------------------------------------------------


def build_vanilla_pairs(
    corpus: Iterable[tuple[str, str]],
    describer: LlmClient,
    on_skip: Optional[Callable[[SkipRecord], None]] = None,
) -> Iterator[InstructionCodePair]:
    """Yield one vanilla pair per (id, code) corpus item.

    Items that fail tokenization or whose description call fails are skipped
    with a logged reason; the pipeline continues.
    """
    for item_id, code in corpus:
        try:
            tokenize(code)
        except TokenizeError as exc:
            _skip(on_skip, item_id, f"tokenization failed: {exc}")
            continue
        try:
            instruction = describer.complete_text(DESCRIBE_TEMPLATE, {"code": code}).strip()
        except LlmError as exc:
            _skip(on_skip, item_id, f"describer failed: {exc}")
            continue
        yield InstructionCodePair(id=item_id, instruction=instruction, code=code, stage=Stage.VANILLA)


def _skip(on_skip, source: str, reason: str):
    log.warning("skipping %s: %s", source, reason)
    if on_skip is not None:
        on_skip(SkipRecord(source=source, reason=reason))


def augment_pair(
    pair: InstructionCodePair,
    exemplar: Exemplar,
    rewriter: LlmClient,
) -> InstructionCodePair:
    """Rewrite a vanilla pair's instruction in the style of one exemplar.

    When a pair matches several exemplars, call this once per exemplar; each
    call yields a distinct augmented record.  The code is never touched.
    """
    if pair.stage is not Stage.VANILLA:
        raise ValueError(f"augment_pair needs a vanilla pair, got stage {pair.stage.value}")
    instruction = rewriter.complete_text(
        REWRITE_TEMPLATE,
        {"instruction": pair.instruction, "exemplar_instruction": exemplar.instruction},
    ).strip()
    return InstructionCodePair(
        id=f"{pair.id}+{exemplar.id}",
        instruction=instruction,
        code=pair.code,
        stage=Stage.KNOWLEDGE_AUGMENTED,
        exemplar_id=exemplar.id,
    )


def verify_compiles(code: str, compiler: CommandRunner) -> VerificationResult:
    """Syntax-check one code blob with the configured external compiler."""
    with tempfile.TemporaryDirectory(prefix="veriforge-compile-") as workdir:
        src = Path(workdir) / "candidate.v"
        src.write_text(code)
        result: RunResult = compiler.run({"src": str(src), "workdir": workdir})
    return VerificationResult(ok=result.ok, diagnostics=result.output, exit_code=result.exit_code)


def verify_pair(pair: InstructionCodePair, compiler: CommandRunner) -> InstructionCodePair:
    result = verify_compiles(pair.code, compiler)
    if result.ok:
        return replace(pair, verify=VerifyState.COMPILE_OK, verify_message="")
    return replace(pair, verify=VerifyState.COMPILE_FAIL, verify_message=result.diagnostics.strip())


# -- pipeline -----------------------------------------------------------------


def read_corpus_dir(corpus_dir: str | Path) -> list[tuple[str, str]]:
    """Stable-ordered (id, code) list for every ``*.v`` file under a directory."""
    corpus_dir = Path(corpus_dir)
    items = []
    for path in sorted(corpus_dir.rglob("*.v")):
        item_id = path.relative_to(corpus_dir).as_posix()[: -len(".v")]
        items.append((item_id, path.read_text()))
    return items


def generate_k_records(
    corpus: Iterable[tuple[str, str]],
    exemplars: list[Exemplar],
    client: LlmClient,
    compiler: CommandRunner,
    workers: int = 1,
    on_skip: Optional[Callable[[SkipRecord], None]] = None,
) -> tuple[list[InstructionCodePair], dict[str, int]]:
    """Run the full K-pipeline; returns all records (verified) plus counters.

    Records keep input order, each vanilla pair immediately followed by its
    augmented variants, so output is reproducible for a fixed corpus order.
    """
    stats = {
        "items": 0,
        "skipped": 0,
        "vanilla": 0,
        "exemplar_matches": 0,
        "augmented": 0,
        "augment_failures": 0,
        "compile_ok": 0,
        "compile_fail": 0,
    }

    def count_skip(record: SkipRecord):
        stats["skipped"] += 1
        if on_skip is not None:
            on_skip(record)

    pending: list[InstructionCodePair] = []
    for item in corpus:
        stats["items"] += 1
        for pair in build_vanilla_pairs([item], client, on_skip=count_skip):
            stats["vanilla"] += 1
            pending.append(pair)
            profile = analyze(pair.code)
            matched = match_exemplars(profile, exemplars)
            stats["exemplar_matches"] += len(matched)
            for exemplar in matched:
                try:
                    pending.append(augment_pair(pair, exemplar, client))
                    stats["augmented"] += 1
                except LlmError as exc:
                    stats["augment_failures"] += 1
                    _skip(on_skip, f"{pair.id}+{exemplar.id}", f"rewriter failed: {exc}")

    if workers <= 1:
        verified = [verify_pair(p, compiler) for p in pending]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            verified = list(pool.map(lambda p: verify_pair(p, compiler), pending))
    for pair in verified:
        key = "compile_ok" if pair.verify is VerifyState.COMPILE_OK else "compile_fail"
        stats[key] += 1
    return verified, stats


def write_dataset(
    records: Iterable[InstructionCodePair],
    path: str | Path,
    meta: Optional[dict] = None,
    include_failures: bool = False,
) -> int:
    """Write records as JSON Lines; only CompileOk records unless asked.

    Returns the number of data records written.  A ``{"_meta": ...}`` header
    line is prepended when metadata is supplied.
    """
    path = Path(path)
    written = 0
    with open(path, "w") as fh:
        if meta is not None:
            fh.write(json.dumps({"_meta": meta}, sort_keys=True) + "\n")
        for record in records:
            if not include_failures and record.verify is not VerifyState.COMPILE_OK:
                continue
            fh.write(json.dumps(record.to_json(), sort_keys=True, ensure_ascii=False) + "\n")
            written += 1
    return written


def read_dataset(path: str | Path) -> list[InstructionCodePair]:
    records = []
    for line in Path(path).read_text().splitlines():
        if not line.strip():
            continue
        payload = json.loads(line)
        if "_meta" in payload:
            continue
        records.append(InstructionCodePair.from_json(payload))
    return records
