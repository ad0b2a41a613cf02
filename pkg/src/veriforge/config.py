"""Run configuration: plain-text ``key = value`` files plus flag overrides.

Recognized keys::

    compiler.cmd         command template for compile verification
    compiler.timeout_s   per-invocation timeout (default 10)
    sim.cmd              command template for simulation
    sim.timeout_s        per-invocation timeout (default 30)
    llm.endpoint         chat-completion base URL
    llm.model            model name sent to the endpoint
    llm.max_inflight     bounded request concurrency (default 4)
    llm.audit_log        JSONL file recording request/response pairs
    llm.api_key_env      env var holding the API key (default VERIFORGE_API_KEY)
    eval.fail_tokens     comma-separated failure tokens (default MISMATCH,Error,ERROR)
    paths.exemplars      exemplar store directory
    workers              parallel workers for pipelines
    seed                 base random seed

Lines starting with ``#`` are comments; unknown keys are rejected so typos
fail fast.  Flags win over file values.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Optional

from .errors import ConfigError
from .llm import HttpBackend, LlmClient, MockBackend


@dataclass(frozen=True)
class RunConfig:
    compiler_cmd: Optional[str] = None
    compiler_timeout_s: float = 10.0
    sim_cmd: Optional[str] = None
    sim_timeout_s: float = 30.0
    llm_endpoint: Optional[str] = None
    llm_model: Optional[str] = None
    llm_max_inflight: int = 4
    llm_audit_log: Optional[str] = None
    llm_api_key_env: str = "VERIFORGE_API_KEY"
    fail_tokens: tuple[str, ...] = ("MISMATCH", "Error", "ERROR")
    exemplar_dir: Optional[str] = None
    workers: int = 1
    seed: int = 0


_KEY_FIELDS = {
    "compiler.cmd": ("compiler_cmd", str),
    "compiler.timeout_s": ("compiler_timeout_s", float),
    "sim.cmd": ("sim_cmd", str),
    "sim.timeout_s": ("sim_timeout_s", float),
    "llm.endpoint": ("llm_endpoint", str),
    "llm.model": ("llm_model", str),
    "llm.max_inflight": ("llm_max_inflight", int),
    "llm.audit_log": ("llm_audit_log", str),
    "llm.api_key_env": ("llm_api_key_env", str),
    "eval.fail_tokens": ("fail_tokens", lambda v: tuple(t.strip() for t in v.split(",") if t.strip())),
    "paths.exemplars": ("exemplar_dir", str),
    "workers": ("workers", int),
    "seed": ("seed", int),
}


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file {path} does not exist")
    values = {}
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path.name}:{lineno}: expected 'key = value'")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        raw = raw.strip()
        if key not in _KEY_FIELDS:
            raise ConfigError(f"{path.name}:{lineno}: unknown key {key!r}")
        field_name, convert = _KEY_FIELDS[key]
        try:
            values[field_name] = convert(raw)
        except ValueError as exc:
            raise ConfigError(f"{path.name}:{lineno}: bad value for {key}: {exc}") from exc
    return RunConfig(**values)


def validate_paths(config: RunConfig) -> None:
    if config.exemplar_dir and not Path(config.exemplar_dir).is_dir():
        raise ConfigError(f"paths.exemplars directory {config.exemplar_dir} does not exist")
    if config.llm_audit_log and not Path(config.llm_audit_log).parent.is_dir():
        raise ConfigError(f"llm.audit_log parent directory does not exist")


def override(config: RunConfig, **kwargs) -> RunConfig:
    changes = {k: v for k, v in kwargs.items() if v is not None}
    return replace(config, **changes) if changes else config


def config_hash(config: RunConfig) -> str:
    payload = "\n".join(f"{f.name}={getattr(config, f.name)!r}" for f in fields(config))
    return hashlib.sha256(payload.encode()).hexdigest()[:12]


def make_llm_client(config: RunConfig, mock_fixtures: Optional[str | Path] = None) -> LlmClient:
    """Mock fixtures (when given) take priority; otherwise an HTTP backend is
    built from llm.endpoint and llm.model."""
    if mock_fixtures is not None:
        backend = MockBackend.from_file(mock_fixtures)
    elif config.llm_endpoint and config.llm_model:
        backend = HttpBackend(
            endpoint=config.llm_endpoint,
            model=config.llm_model,
            api_key_env=config.llm_api_key_env,
        )
    else:
        raise ConfigError(
            "no LLM configured: set llm.endpoint and llm.model, or pass --mock-llm fixtures"
        )
    return LlmClient(
        backend,
        max_inflight=config.llm_max_inflight,
        audit_log=config.llm_audit_log,
    )
