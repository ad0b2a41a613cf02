"""Command-line entry point.

Subcommands: ``sicot`` (prompt refinement), ``gen-k`` (knowledge-enhanced
dataset), ``gen-l`` (logic-enhanced dataset), ``eval`` (pass@k benchmark
run), ``analyze`` (topic/attribute report for one source file).  Every
output carries a metadata header with the tool version, seed and config
hash; reruns with identical inputs, seed and a mock LLM are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from importlib import resources as importlib_resources
from pathlib import Path

from . import __version__
from .commands import compile_runner, sim_runner
from .config import RunConfig, config_hash, load_config, make_llm_client, override, validate_paths
from .errors import VeriforgeError
from .evalharness import aggregate, load_candidates, load_rtllm_tasks, load_verilogeval_tasks, run_task
from .kdataset import generate_k_records, read_corpus_dir, write_dataset
from .ldataset import DEFAULT_TEMPLATE_CYCLE, TEMPLATES, gen_testbench, generate_l_records
from .reporting import render_figures, write_csv_summary, write_report_json
from .sicot import RoutePolicy, interpret
from .topics import analyze, load_exemplar_store
from .verilog.lint import syntax_check

log = logging.getLogger("veriforge")


def _bundled_exemplar_dir() -> str:
    return str(importlib_resources.files("veriforge") / "resources" / "exemplars")


def _meta(args, config: RunConfig, command: str) -> dict:
    return {
        "tool": "veriforge",
        "version": __version__,
        "command": command,
        "seed": config.seed,
        "config_hash": config_hash(config),
    }


def _build_config(args) -> RunConfig:
    config = load_config(args.config) if args.config else RunConfig()
    config = override(config, seed=args.seed, workers=args.workers)
    validate_paths(config)
    return config


def _common_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="plain-text key=value configuration file")
    parser.add_argument("--seed", type=int, default=None, help="base random seed")
    parser.add_argument("--workers", type=int, default=None, help="parallel workers")
    parser.add_argument(
        "--mock-llm",
        metavar="FIXTURES",
        help="JSON fixture map template_id->response; replaces the HTTP backend",
    )


def _write_jsonl(path: str, meta: dict, records: list[dict]) -> None:
    with open(path, "w") as fh:
        fh.write(json.dumps({"_meta": meta}, sort_keys=True) + "\n")
        for record in records:
            fh.write(json.dumps(record, sort_keys=True, ensure_ascii=False) + "\n")


# -- subcommands ----------------------------------------------------------------


def cmd_sicot(args) -> int:
    config = _build_config(args)
    policy = RoutePolicy(args.policy)
    client = None
    if policy is not RoutePolicy.DETERMINISTIC_ONLY:
        client = make_llm_client(config, args.mock_llm)
    records = []
    failures = 0
    for line in Path(args.input).read_text().splitlines():
        if not line.strip():
            continue
        payload = json.loads(line)
        if "_meta" in payload:
            continue
        prompt = payload["prompt"]
        try:
            result = interpret(
                prompt,
                interpreter=client,
                policy=policy,
                require_header=args.require_header,
                passthrough_on_error=args.passthrough_on_error,
            )
            records.append(
                {
                    "prompt": prompt,
                    "cot_prompt": result.final_text,
                    "routes": [
                        {
                            "start": span.start,
                            "end": span.end,
                            "kind": span.kind.value,
                            "route": route.value,
                        }
                        for span, route in result.route_log
                    ],
                }
            )
        except VeriforgeError as exc:
            failures += 1
            records.append({"prompt": prompt, "error": str(exc)})
    _write_jsonl(args.out, _meta(args, config, "sicot"), records)
    if failures:
        log.error("%d record(s) failed interpretation", failures)
    return 1 if failures else 0


def cmd_gen_k(args) -> int:
    config = _build_config(args)
    client = make_llm_client(config, args.mock_llm)
    compiler = compile_runner(config.compiler_cmd, config.compiler_timeout_s)
    exemplar_dir = args.exemplars or config.exemplar_dir or _bundled_exemplar_dir()
    store = load_exemplar_store(exemplar_dir, verify=lambda code: verify_ok(code, compiler))
    corpus = read_corpus_dir(args.corpus)
    skips: list[dict] = []
    records, stats = generate_k_records(
        corpus,
        store,
        client,
        compiler,
        workers=config.workers,
        on_skip=lambda s: skips.append({"source": s.source, "reason": s.reason}),
    )
    meta = _meta(args, config, "gen-k")
    meta["stats"] = stats
    written = write_dataset(records, args.out, meta=meta, include_failures=args.include_failures)
    if args.skips:
        _write_jsonl(args.skips, _meta(args, config, "gen-k-skips"), skips)
    log.info("wrote %d records (%s)", written, stats)
    return 0


def verify_ok(code: str, compiler) -> bool:
    from .kdataset import verify_compiles

    return verify_compiles(code, compiler).ok


def cmd_gen_l(args) -> int:
    config = _build_config(args)
    compiler = compile_runner(config.compiler_cmd, config.compiler_timeout_s)
    evolver = make_llm_client(config, args.mock_llm) if args.evolve else None
    template_ids = tuple(args.templates) if args.templates else DEFAULT_TEMPLATE_CYCLE
    for template_id in template_ids:
        if template_id not in TEMPLATES:
            raise VeriforgeError(
                f"unknown template {template_id!r}; available: {sorted(TEMPLATES)}"
            )
    records, problems, sidecar = generate_l_records(
        count=args.count,
        n_inputs=args.inputs,
        dont_care_fraction=args.dc_fraction,
        seed=config.seed,
        compiler=compiler,
        template_ids=template_ids,
        evolver=evolver,
        max_word_delta=args.max_word_delta,
    )
    meta = _meta(args, config, "gen-l")
    meta["params"] = {
        "count": args.count,
        "n_inputs": args.inputs,
        "dont_care_fraction": args.dc_fraction,
        "templates": list(template_ids),
    }
    write_dataset(records, args.out, meta=meta)
    sidecar_path = args.sidecar or f"{args.out}.meta.json"
    Path(sidecar_path).write_text(
        json.dumps({"meta": meta, "records": sidecar}, indent=2, sort_keys=True) + "\n"
    )
    if args.testbench_dir:
        tb_dir = Path(args.testbench_dir)
        tb_dir.mkdir(parents=True, exist_ok=True)
        for record, problem in zip(records, problems):
            tb_source, scenario = gen_testbench(problem)
            (tb_dir / f"{record.id}.tb.v").write_text(tb_source)
            (tb_dir / f"{record.id}.scenario.json").write_text(
                json.dumps(scenario, sort_keys=True) + "\n"
            )
    return 0


def cmd_eval(args) -> int:
    config = _build_config(args)
    compiler = compile_runner(config.compiler_cmd, config.compiler_timeout_s)
    simulator = sim_runner(config.sim_cmd, config.sim_timeout_s)
    loader = load_verilogeval_tasks if args.layout == "verilogeval" else load_rtllm_tasks
    tasks = loader(args.tasks)
    candidate_map = load_candidates(args.candidates)
    results = []
    for task in tasks:
        if task.id not in candidate_map:
            log.warning("no candidates for task %s; skipping", task.id)
            continue
        results.append(
            run_task(
                task,
                candidate_map[task.id],
                compiler=compiler,
                simulator=simulator,
                fail_tokens=config.fail_tokens,
            )
        )
    metadata = _meta(args, config, "eval")
    if args.model_id:
        metadata["model_id"] = args.model_id
    if args.temperature is not None:
        metadata["temperature"] = args.temperature
    if results:
        metadata["n"] = results[0].n
    report = aggregate(results, ks=args.k, metadata=metadata)
    write_report_json(report, args.out)
    if args.csv:
        write_csv_summary(report, args.csv)
    if args.figures:
        for path in render_figures(report, args.figures):
            log.info("figure: %s", path)
    for k in sorted(report.means):
        print(f"pass@{k}: {report.means[k]:.4f}")
    return 0


def cmd_analyze(args) -> int:
    source = Path(args.source).read_text()
    issues = syntax_check(source)
    profile = analyze(source)
    if args.json:
        print(
            json.dumps(
                {
                    "topics": sorted(t.value for t in profile.topics),
                    "attributes": sorted(a.value for a in profile.attributes),
                    "evidence": [
                        {"tag": e.tag, "finding": e.finding, "line": e.line}
                        for e in profile.evidence
                    ],
                    "syntax_issues": issues,
                },
                indent=2,
                sort_keys=True,
            )
        )
        return 0
    print(f"topics:     {', '.join(sorted(t.value for t in profile.topics))}")
    print(f"attributes: {', '.join(sorted(a.value for a in profile.attributes)) or '(none)'}")
    print("evidence:")
    for e in profile.evidence:
        print(f"  line {e.line:4d}  [{e.tag}] {e.finding}")
    if issues:
        print("syntax issues:")
        for issue in issues:
            print(f"  {issue}")
    return 0


# -- parser wiring ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="veriforge",
        description="Symbolic HDL prompt interpretation, dataset synthesis and pass@k evaluation.",
    )
    parser.add_argument("--version", action="version", version=f"veriforge {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sicot", help="refine prompts by interpreting symbolic blocks")
    _common_flags(p)
    p.add_argument("--in", dest="input", required=True, help="JSONL input with a 'prompt' field")
    p.add_argument("--out", required=True, help="JSONL output path")
    p.add_argument(
        "--policy",
        choices=[policy.value for policy in RoutePolicy],
        default=RoutePolicy.DETERMINISTIC_ONLY.value,
    )
    p.add_argument("--require-header", action="store_true", help="fail records lacking any module header")
    p.add_argument(
        "--passthrough-on-error",
        action="store_true",
        help="keep unparseable blocks verbatim instead of failing the record",
    )
    p.set_defaults(func=cmd_sicot)

    p = sub.add_parser("gen-k", help="generate the knowledge-enhanced dataset")
    _common_flags(p)
    p.add_argument("--corpus", required=True, help="directory of .v source files")
    p.add_argument("--exemplars", help="exemplar store directory (default: bundled seed store)")
    p.add_argument("--out", required=True, help="JSONL output path")
    p.add_argument("--skips", help="JSONL file recording skipped items")
    p.add_argument(
        "--include-failures", action="store_true", help="also write records that failed verification"
    )
    p.set_defaults(func=cmd_gen_k)

    p = sub.add_parser("gen-l", help="generate the logic-enhanced dataset")
    _common_flags(p)
    p.add_argument("--count", type=int, required=True, help="number of records")
    p.add_argument("--inputs", type=int, default=3, help="truth-table input count (2-6)")
    p.add_argument("--dc-fraction", type=float, default=0.0, help="don't-care probability per row")
    p.add_argument("--out", required=True, help="JSONL output path")
    p.add_argument("--sidecar", help="metadata sidecar path (default: <out>.meta.json)")
    p.add_argument("--templates", nargs="+", help=f"template cycle (default {DEFAULT_TEMPLATE_CYCLE})")
    p.add_argument("--evolve", action="store_true", help="rewrite instructions through the LLM")
    p.add_argument("--max-word-delta", type=int, default=10)
    p.add_argument("--testbench-dir", help="also emit per-record testbenches and scenarios")
    p.set_defaults(func=cmd_gen_l)

    p = sub.add_parser("eval", help="run benchmark tasks and report pass@k")
    _common_flags(p)
    p.add_argument("--tasks", required=True, help="benchmark task directory")
    p.add_argument("--layout", choices=["verilogeval", "rtllm"], default="verilogeval")
    p.add_argument("--candidates", required=True, help="JSONL with task_id/completion/trial_index")
    p.add_argument("--out", required=True, help="report JSON path")
    p.add_argument("--csv", help="CSV summary path")
    p.add_argument("--figures", help="directory for rendered figures")
    p.add_argument("-k", type=int, action="append", dest="k", help="pass@k values (default 1 and 5)")
    p.add_argument("--model-id", help="recorded in report metadata")
    p.add_argument("--temperature", type=float, help="recorded in report metadata")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("analyze", help="print the topic/attribute profile of one file")
    _common_flags(p)
    p.add_argument("source", help="Verilog source file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_analyze)

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "eval" and not args.k:
        args.k = [1, 5]
    try:
        return args.func(args)
    except VeriforgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
