import json
from importlib import resources as importlib_resources
from pathlib import Path

import pytest

from veriforge.commands import (
    BUNDLED_COMPILE_CMD,
    BUNDLED_SIM_CMD,
    CommandRunner,
)
from veriforge.errors import SimulatorNotFound
from veriforge.llm import CallableBackend, LlmClient, MockBackend

DATA_DIR = Path(__file__).parent / "data"


def resource_dir(*parts: str) -> Path:
    return Path(str(importlib_resources.files("veriforge").joinpath("resources", *parts)))


@pytest.fixture(scope="session")
def compiler() -> CommandRunner:
    return CommandRunner(BUNDLED_COMPILE_CMD, timeout_s=30.0)


@pytest.fixture(scope="session")
def simulator() -> CommandRunner:
    return CommandRunner(BUNDLED_SIM_CMD, timeout_s=30.0, missing_error=SimulatorNotFound)


@pytest.fixture(scope="session")
def mini_corpus_dir() -> Path:
    return resource_dir("minicorpus")


@pytest.fixture(scope="session")
def exemplar_dir() -> Path:
    return resource_dir("exemplars")


def mock_client(fixtures: dict[str, str], **kwargs) -> LlmClient:
    return LlmClient(MockBackend(fixtures), **kwargs)


def callable_client(fn, **kwargs) -> LlmClient:
    return LlmClient(CallableBackend(fn), **kwargs)


@pytest.fixture
def k_fixtures() -> dict[str, str]:
    return {
        "describe_code.v1": "Implement the Verilog module shown below exactly. Source: {code}",
        "rewrite_instruction.v1": "Engineer-styled rewrite: {instruction}",
    }


def load_topic_corpus() -> list[dict]:
    return [json.loads(line) for line in (DATA_DIR / "topic_corpus.jsonl").read_text().splitlines()]
