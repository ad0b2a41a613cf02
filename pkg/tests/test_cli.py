import json
from pathlib import Path

import pytest

from conftest import resource_dir
from veriforge.cli import main
from veriforge.commands import BUNDLED_COMPILE_CMD, BUNDLED_SIM_CMD
from veriforge.config import RunConfig, config_hash, load_config, make_llm_client, override
from veriforge.errors import ConfigError

AND_SCENARIO = {
    "module": "top_module",
    "steps": [
        {"set": {"a": 0, "b": 0}, "expect": {"out": 0}},
        {"set": {"a": 0, "b": 1}, "expect": {"out": 0}},
        {"set": {"a": 1, "b": 0}, "expect": {"out": 0}},
        {"set": {"a": 1, "b": 1}, "expect": {"out": 1}},
    ],
}


@pytest.fixture
def fixtures_file(tmp_path) -> Path:
    path = tmp_path / "fixtures.json"
    path.write_text(
        json.dumps(
            {
                "describe_code.v1": "Implement this module. Source: {code}",
                "rewrite_instruction.v1": "Styled: {instruction}",
                "evolve_instruction.v1": "{instruction}",
            }
        )
    )
    return path


@pytest.fixture
def config_file(tmp_path) -> Path:
    path = tmp_path / "run.cfg"
    path.write_text(
        "# test configuration\n"
        f"compiler.cmd = {BUNDLED_COMPILE_CMD}\n"
        f"sim.cmd = {BUNDLED_SIM_CMD}\n"
        "workers = 2\n"
        "seed = 7\n"
    )
    return path


def write_jsonl(path: Path, records: list[dict]):
    path.write_text("\n".join(json.dumps(r) for r in records) + "\n")


def read_jsonl(path: Path):
    lines = [json.loads(l) for l in path.read_text().splitlines() if l.strip()]
    meta = lines[0]["_meta"] if lines and "_meta" in lines[0] else None
    return meta, [l for l in lines if "_meta" not in l]


# -- config ------------------------------------------------------------------


def test_config_parsing(config_file):
    config = load_config(config_file)
    assert config.workers == 2
    assert config.seed == 7
    assert config.compiler_cmd == BUNDLED_COMPILE_CMD


def test_config_unknown_key_rejected(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("no.such.key = 1\n")
    with pytest.raises(ConfigError):
        load_config(path)


def test_config_override_and_hash():
    base = RunConfig()
    changed = override(base, seed=9)
    assert changed.seed == 9
    assert config_hash(base) != config_hash(changed)
    assert config_hash(base) == config_hash(RunConfig())


def test_make_llm_client_requires_configuration():
    with pytest.raises(ConfigError):
        make_llm_client(RunConfig())


# -- sicot --------------------------------------------------------------------


def test_cmd_sicot_fsm(tmp_path):
    prompts = tmp_path / "prompts.jsonl"
    write_jsonl(
        prompts,
        [{"prompt": "Implement the FSM.\nA[out=0]--[x=0]->B\nA[out=0]--[x=1]->A\nB[out=1]--[x=0]->A\nB[out=1]--[x=1]->B"}],
    )
    out = tmp_path / "cot.jsonl"
    assert main(["sicot", "--in", str(prompts), "--out", str(out)]) == 0
    meta, records = read_jsonl(out)
    assert meta["command"] == "sicot"
    assert "State transition" in records[0]["cot_prompt"]
    assert records[0]["routes"][0]["route"] == "parser"


def test_cmd_sicot_empty_input(tmp_path):
    prompts = tmp_path / "empty.jsonl"
    prompts.write_text("")
    out = tmp_path / "out.jsonl"
    assert main(["sicot", "--in", str(prompts), "--out", str(out)]) == 0
    _, records = read_jsonl(out)
    assert records == []


def test_cmd_sicot_unreadable_input(tmp_path):
    assert main(["sicot", "--in", str(tmp_path / "missing.jsonl"), "--out", str(tmp_path / "o")]) != 0


def test_cmd_sicot_failed_record_nonzero_exit(tmp_path):
    prompts = tmp_path / "prompts.jsonl"
    write_jsonl(prompts, [{"prompt": "FSM:\nA[out=0]--[x=0]->B\nA[out=1]--[x=1]->A\nB[out=1]--[x=1]->A"}])
    out = tmp_path / "cot.jsonl"
    assert main(["sicot", "--in", str(prompts), "--out", str(out)]) == 1
    _, records = read_jsonl(out)
    assert "error" in records[0]


# -- gen-k ----------------------------------------------------------------------


def test_cmd_gen_k_round_trip(tmp_path, fixtures_file, config_file):
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    (corpus / "cnt.v").write_text(
        "module cnt(input clk, input rst, output reg [3:0] q);\n"
        "always @(posedge clk) begin if (rst) q <= 0; else q <= q + 1; end\nendmodule\n"
    )
    (corpus / "plain.v").write_text("module plain(input a, output b);\nassign b = a;\nendmodule\n")
    out1 = tmp_path / "k1.jsonl"
    out2 = tmp_path / "k2.jsonl"
    argv = ["gen-k", "--corpus", str(corpus), "--out", "", "--mock-llm", str(fixtures_file),
            "--config", str(config_file)]
    argv[4] = str(out1)
    assert main(argv) == 0
    argv[4] = str(out2)
    assert main(argv) == 0
    assert out1.read_text() == out2.read_text()
    meta, records = read_jsonl(out1)
    assert meta["stats"]["vanilla"] == 2
    assert all(r["verify"] == "CompileOk" for r in records)
    # counter file matched counter + sync_reset + pos_edge exemplar tags
    augmented = [r for r in records if r["stage"] == "knowledge_augmented"]
    assert len(augmented) == meta["stats"]["augmented"] > 0


# -- gen-l ----------------------------------------------------------------------


def test_cmd_gen_l_deterministic_and_sidecar(tmp_path, config_file):
    out1 = tmp_path / "l1.jsonl"
    out2 = tmp_path / "l2.jsonl"
    base = ["gen-l", "--count", "4", "--inputs", "2", "--out", "", "--seed", "7",
            "--config", str(config_file)]
    base[6] = str(out1)
    assert main(base) == 0
    base[6] = str(out2)
    assert main(base) == 0
    assert out1.read_text() == out2.read_text()
    sidecar = json.loads((tmp_path / "l1.jsonl.meta.json").read_text())
    assert len(sidecar["records"]) == 4
    assert all("seed" in r for r in sidecar["records"])


def test_cmd_gen_l_testbench_dir(tmp_path, config_file):
    out = tmp_path / "l.jsonl"
    tb_dir = tmp_path / "tbs"
    assert main(["gen-l", "--count", "2", "--inputs", "2", "--out", str(out),
                 "--seed", "3", "--config", str(config_file), "--testbench-dir", str(tb_dir)]) == 0
    assert len(list(tb_dir.glob("*.tb.v"))) == 2
    assert len(list(tb_dir.glob("*.scenario.json"))) == 2


def test_cmd_gen_l_rejects_unknown_template(tmp_path, config_file):
    assert main(["gen-l", "--count", "1", "--out", str(tmp_path / "x.jsonl"),
                 "--config", str(config_file), "--templates", "nope"]) == 1


# -- eval -------------------------------------------------------------------------


def test_cmd_eval_report_csv_figures(tmp_path, config_file):
    tasks = tmp_path / "tasks"
    tasks.mkdir()
    (tasks / "and2_prompt.txt").write_text("Implement an AND gate named top_module.")
    (tasks / "and2_scenario.json").write_text(json.dumps(AND_SCENARIO))
    good = "module top_module(input a, input b, output out);\n assign out = a & b;\nendmodule\n"
    wrong = "module top_module(input a, input b, output out);\n assign out = a | b;\nendmodule\n"
    cands = tmp_path / "cands.jsonl"
    write_jsonl(
        cands,
        [{"task_id": "and2", "completion": good if i < 3 else wrong, "trial_index": i} for i in range(10)],
    )
    report_path = tmp_path / "report.json"
    csv_path = tmp_path / "summary.csv"
    figs = tmp_path / "figs"
    assert main(["eval", "--tasks", str(tasks), "--candidates", str(cands),
                 "--out", str(report_path), "--csv", str(csv_path), "--figures", str(figs),
                 "--config", str(config_file)]) == 0
    report = json.loads(report_path.read_text())
    assert report["aggregate"]["pass@1"] == pytest.approx(0.3)
    assert report["aggregate"]["pass@5"] == pytest.approx(11 / 12)
    assert csv_path.exists()
    assert sorted(p.name for p in figs.iterdir()) == [
        "pass_at_k_aggregate.png",
        "pass_at_k_per_task.png",
    ]


# -- analyze ------------------------------------------------------------------------


def test_cmd_analyze_json(tmp_path, capsys):
    src = resource_dir("minicorpus") / "clkdiv10.v"
    assert main(["analyze", str(src), "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert "clock_divider" in payload["topics"]
    assert payload["syntax_issues"] == []


def test_unknown_flag_fails_fast():
    with pytest.raises(SystemExit) as exc:
        main(["sicot", "--in", "x", "--out", "y", "--bogus-flag"])
    assert exc.value.code == 2


def test_help_available():
    with pytest.raises(SystemExit) as exc:
        main(["--help"])
    assert exc.value.code == 0
