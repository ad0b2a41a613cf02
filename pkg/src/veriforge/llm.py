"""Provider-agnostic LLM client with versioned prompt templates.

One interface serves every pipeline role (prompt interpreter, code describer,
instruction rewriter, instruction evolver).  Backends:

* HttpBackend    — chat-completion call against any compatible endpoint
* MockBackend    — deterministic fixture map, a pure function of
                   (template_id, substitutions); lets every pipeline run
                   end-to-end with zero network access
* ReplayBackend  — replays a recorded audit log

Request/response pairs can be appended to a JSON Lines audit log; feeding
that log back through ReplayBackend reproduces pipeline output exactly.
"""

from __future__ import annotations

import json
import string
import threading
import time
import urllib.error
import urllib.request
from dataclasses import dataclass, field
from importlib import resources as importlib_resources
from pathlib import Path
from typing import Callable, Optional, Protocol

from .errors import AuthError, LlmError, NetworkError, RateLimited, TemplateError


@dataclass(frozen=True)
class CompletionRequest:
    template_id: str
    substitutions: dict[str, str] = field(default_factory=dict)
    temperature: float = 0.2
    max_tokens: int = 1024


@dataclass(frozen=True)
class CompletionResult:
    text: str
    prompt_tokens: int = 0
    completion_tokens: int = 0
    latency_s: float = 0.0


class TemplateRegistry:
    """Named, versioned prompt templates with ``{placeholder}`` substitution."""

    def __init__(self, templates: Optional[dict[str, str]] = None):
        self._templates = dict(templates or {})

    @classmethod
    def bundled(cls) -> "TemplateRegistry":
        templates = {}
        root = importlib_resources.files("veriforge") / "resources" / "templates"
        for entry in root.iterdir():
            if entry.name.endswith(".txt"):
                templates[entry.name[: -len(".txt")]] = entry.read_text()
        return cls(templates)

    def add(self, template_id: str, text: str):
        self._templates[template_id] = text

    def placeholders(self, template_id: str) -> set[str]:
        text = self._template(template_id)
        return {name for _, name, _, _ in string.Formatter().parse(text) if name}

    def render(self, template_id: str, substitutions: dict[str, str]) -> str:
        text = self._template(template_id)
        missing = self.placeholders(template_id) - set(substitutions)
        if missing:
            raise TemplateError(f"template {template_id!r} missing substitutions: {sorted(missing)}")
        return text.format(**substitutions)

    def _template(self, template_id: str) -> str:
        if template_id not in self._templates:
            raise TemplateError(f"unknown template {template_id!r}")
        return self._templates[template_id]


class Backend(Protocol):
    def send(
        self,
        template_id: str,
        prompt: str,
        substitutions: dict[str, str],
        temperature: float,
        max_tokens: int,
    ) -> CompletionResult: ...


class MockBackend:
    """Fixture-driven backend: response = fixtures[template_id] with the
    request substitutions spliced into any ``{placeholder}`` it contains."""

    def __init__(self, fixtures: dict[str, str]):
        self.fixtures = dict(fixtures)

    @classmethod
    def from_file(cls, path: str | Path) -> "MockBackend":
        return cls(json.loads(Path(path).read_text()))

    def send(self, template_id, prompt, substitutions, temperature, max_tokens):
        if template_id not in self.fixtures:
            raise LlmError(f"mock has no fixture for template {template_id!r}")
        text = self.fixtures[template_id]
        for key, value in substitutions.items():
            text = text.replace("{" + key + "}", str(value))
        return CompletionResult(text=text)


class CallableBackend:
    """Adapter for tests: any (template_id, substitutions) -> str callable."""

    def __init__(self, fn: Callable[[str, dict[str, str]], str]):
        self.fn = fn

    def send(self, template_id, prompt, substitutions, temperature, max_tokens):
        return CompletionResult(text=self.fn(template_id, substitutions))


def _audit_key(template_id: str, substitutions: dict[str, str]) -> str:
    return template_id + "\x1f" + json.dumps(substitutions, sort_keys=True, ensure_ascii=False)


class ReplayBackend:
    """Replays responses recorded in an audit log, keyed by request content."""

    def __init__(self, audit_path: str | Path):
        self.responses: dict[str, str] = {}
        for line in Path(audit_path).read_text().splitlines():
            if not line.strip():
                continue
            entry = json.loads(line)
            self.responses[_audit_key(entry["template_id"], entry["substitutions"])] = entry["response"]

    def send(self, template_id, prompt, substitutions, temperature, max_tokens):
        key = _audit_key(template_id, substitutions)
        if key not in self.responses:
            raise LlmError(f"audit log has no response for template {template_id!r} with these inputs")
        return CompletionResult(text=self.responses[key])


class HttpBackend:
    """Single chat-completion wire shape against an OpenAI-compatible URL."""

    def __init__(
        self,
        endpoint: str,
        model: str,
        api_key_env: str = "VERIFORGE_API_KEY",
        timeout_s: float = 60.0,
    ):
        self.endpoint = endpoint.rstrip("/")
        self.model = model
        self.api_key_env = api_key_env
        self.timeout_s = timeout_s

    def send(self, template_id, prompt, substitutions, temperature, max_tokens):
        import os

        api_key = os.environ.get(self.api_key_env)
        if not api_key:
            raise AuthError(f"environment variable {self.api_key_env} is not set")
        body = json.dumps(
            {
                "model": self.model,
                "messages": [{"role": "user", "content": prompt}],
                "temperature": temperature,
                "max_tokens": max_tokens,
            }
        ).encode()
        req = urllib.request.Request(
            self.endpoint + "/chat/completions",
            data=body,
            headers={
                "Content-Type": "application/json",
                "Authorization": f"Bearer {api_key}",
            },
        )
        start = time.monotonic()
        try:
            with urllib.request.urlopen(req, timeout=self.timeout_s) as resp:
                payload = json.loads(resp.read().decode())
        except urllib.error.HTTPError as exc:
            if exc.code in (401, 403):
                raise AuthError(f"HTTP {exc.code} from endpoint") from exc
            if exc.code == 429:
                raise RateLimited("HTTP 429 from endpoint") from exc
            raise NetworkError(f"HTTP {exc.code} from endpoint") from exc
        except urllib.error.URLError as exc:
            raise NetworkError(str(exc)) from exc
        try:
            text = payload["choices"][0]["message"]["content"]
        except (KeyError, IndexError) as exc:
            raise NetworkError(f"malformed response payload: {payload!r}") from exc
        usage = payload.get("usage", {})
        return CompletionResult(
            text=text,
            prompt_tokens=usage.get("prompt_tokens", 0),
            completion_tokens=usage.get("completion_tokens", 0),
            latency_s=time.monotonic() - start,
        )


class LlmClient:
    """Thread-safe handle with bounded concurrency, retries and audit logging."""

    def __init__(
        self,
        backend: Backend,
        registry: Optional[TemplateRegistry] = None,
        max_inflight: int = 4,
        retries: int = 2,
        backoff_s: float = 0.5,
        audit_log: Optional[str | Path] = None,
    ):
        self.backend = backend
        self.registry = registry or TemplateRegistry.bundled()
        self.retries = retries
        self.backoff_s = backoff_s
        self.audit_log = Path(audit_log) if audit_log else None
        self._gate = threading.BoundedSemaphore(max_inflight)
        self._audit_lock = threading.Lock()

    def complete(self, request: CompletionRequest) -> CompletionResult:
        prompt = self.registry.render(request.template_id, request.substitutions)
        attempt = 0
        while True:
            try:
                with self._gate:
                    result = self.backend.send(
                        request.template_id,
                        prompt,
                        request.substitutions,
                        request.temperature,
                        request.max_tokens,
                    )
                break
            except (RateLimited, NetworkError):
                if attempt >= self.retries:
                    raise
                time.sleep(self.backoff_s * (2**attempt))
                attempt += 1
        if self.audit_log is not None:
            entry = {
                "template_id": request.template_id,
                "substitutions": request.substitutions,
                "temperature": request.temperature,
                "response": result.text,
            }
            with self._audit_lock:
                with open(self.audit_log, "a") as fh:
                    fh.write(json.dumps(entry, sort_keys=True, ensure_ascii=False) + "\n")
        return result

    def complete_text(self, template_id: str, substitutions: dict[str, str], **kwargs) -> str:
        return self.complete(CompletionRequest(template_id, substitutions, **kwargs)).text
