import json
import threading

import pytest

from veriforge.errors import AuthError, LlmError, NetworkError, TemplateError
from veriforge.llm import (
    CallableBackend,
    CompletionRequest,
    HttpBackend,
    LlmClient,
    MockBackend,
    ReplayBackend,
    TemplateRegistry,
)


def test_bundled_registry_has_pipeline_templates():
    registry = TemplateRegistry.bundled()
    for template_id in (
        "state_diagram_interpret.v1",
        "symbolic_interpret.v1",
        "describe_code.v1",
        "rewrite_instruction.v1",
        "evolve_instruction.v1",
    ):
        assert registry.placeholders(template_id)


def test_render_missing_substitution_fails_before_send():
    registry = TemplateRegistry({"t.v1": "Hello {name}, you are {role}."})
    calls = []
    client = LlmClient(CallableBackend(lambda t, s: calls.append(t) or "x"), registry=registry)
    with pytest.raises(TemplateError):
        client.complete(CompletionRequest("t.v1", {"name": "a"}))
    assert calls == []


def test_unknown_template_rejected():
    registry = TemplateRegistry({})
    client = LlmClient(MockBackend({}), registry=registry)
    with pytest.raises(TemplateError):
        client.complete(CompletionRequest("nope.v1", {}))


def test_mock_backend_is_pure_function_of_inputs():
    backend = MockBackend({"t.v1": "echo {x}"})
    a = backend.send("t.v1", "prompt", {"x": "1"}, 0.2, 10)
    b = backend.send("t.v1", "prompt-different", {"x": "1"}, 0.9, 99)
    assert a.text == b.text == "echo 1"


def test_mock_fixture_missing_template():
    client = LlmClient(MockBackend({}), registry=TemplateRegistry({"t.v1": "hi"}))
    with pytest.raises(LlmError):
        client.complete(CompletionRequest("t.v1", {}))


def test_retries_on_transient_then_succeeds():
    attempts = []

    class Flaky:
        def send(self, template_id, prompt, subs, temperature, max_tokens):
            attempts.append(1)
            if len(attempts) < 3:
                raise NetworkError("transient")
            from veriforge.llm import CompletionResult

            return CompletionResult(text="ok")

    client = LlmClient(Flaky(), registry=TemplateRegistry({"t.v1": "x"}), retries=3, backoff_s=0.0)
    assert client.complete(CompletionRequest("t.v1", {})).text == "ok"
    assert len(attempts) == 3


def test_retry_budget_exhausted():
    class Dead:
        def send(self, *args):
            raise NetworkError("down")

    client = LlmClient(Dead(), registry=TemplateRegistry({"t.v1": "x"}), retries=1, backoff_s=0.0)
    with pytest.raises(NetworkError):
        client.complete(CompletionRequest("t.v1", {}))


def test_auth_error_not_retried(monkeypatch):
    monkeypatch.delenv("VERIFORGE_API_KEY", raising=False)
    backend = HttpBackend(endpoint="http://localhost:1", model="m")
    client = LlmClient(backend, registry=TemplateRegistry({"t.v1": "x"}), retries=5, backoff_s=0.0)
    with pytest.raises(AuthError):
        client.complete(CompletionRequest("t.v1", {}))


def test_audit_log_and_replay(tmp_path):
    audit = tmp_path / "audit.jsonl"
    registry = TemplateRegistry({"t.v1": "value {x}"})
    client = LlmClient(MockBackend({"t.v1": "resp-{x}"}), registry=registry, audit_log=audit)
    first = [client.complete_text("t.v1", {"x": str(i)}) for i in range(3)]

    replay = LlmClient(ReplayBackend(audit), registry=registry)
    second = [replay.complete_text("t.v1", {"x": str(i)}) for i in range(3)]
    assert first == second

    entries = [json.loads(l) for l in audit.read_text().splitlines()]
    assert len(entries) == 3
    assert entries[0]["template_id"] == "t.v1"

    with pytest.raises(LlmError):
        replay.complete_text("t.v1", {"x": "unseen"})


def test_bounded_concurrency():
    active = []
    peak = []
    lock = threading.Lock()

    def fn(template_id, subs):
        with lock:
            active.append(1)
            peak.append(len(active))
        import time

        time.sleep(0.01)
        with lock:
            active.pop()
        return "ok"

    client = LlmClient(
        CallableBackend(fn), registry=TemplateRegistry({"t.v1": "x"}), max_inflight=2
    )
    threads = [
        threading.Thread(target=lambda: client.complete_text("t.v1", {})) for _ in range(8)
    ]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert max(peak) <= 2
