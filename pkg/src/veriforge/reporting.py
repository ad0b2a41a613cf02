"""Evaluation report output: JSON, CSV summary, and rendered figures."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .evalharness import PassAtKReport


def write_report_json(report: PassAtKReport, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n")
    return path


def write_csv_summary(report: PassAtKReport, path: str | Path) -> Path:
    path = Path(path)
    ks = sorted(report.means)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["task_id", "n", "c", *[f"pass@{k}" for k in ks]])
        for task in report.tasks:
            writer.writerow([task.task_id, task.n, task.c, *[f"{task.pass_at[k]:.6f}" for k in ks]])
        writer.writerow(["MEAN", "", "", *[f"{report.means[k]:.6f}" for k in ks]])
    return path


def render_figures(report: PassAtKReport, outdir: str | Path) -> list[Path]:
    """Render pass@k bar charts next to the delimited output.

    Produces a per-task grouped chart and an aggregate chart; returns the
    written file paths.
    """
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    ks = sorted(report.means)
    paths = []

    fig, ax = plt.subplots(figsize=(max(6.0, 0.6 * len(report.tasks) + 2), 4.0))
    positions = range(len(report.tasks))
    bar_width = 0.8 / max(len(ks), 1)
    for j, k in enumerate(ks):
        offsets = [p + j * bar_width for p in positions]
        ax.bar(offsets, [t.pass_at[k] for t in report.tasks], bar_width, label=f"pass@{k}")
    ax.set_xticks([p + bar_width * (len(ks) - 1) / 2 for p in positions])
    ax.set_xticklabels([t.task_id for t in report.tasks], rotation=45, ha="right", fontsize=8)
    ax.set_ylim(0, 1.05)
    ax.set_ylabel("pass@k")
    ax.set_title("Per-task pass@k")
    ax.legend()
    fig.tight_layout()
    per_task = outdir / "pass_at_k_per_task.png"
    fig.savefig(per_task, dpi=150)
    plt.close(fig)
    paths.append(per_task)

    fig, ax = plt.subplots(figsize=(4.0, 4.0))
    ax.bar([f"pass@{k}" for k in ks], [report.means[k] for k in ks], color="tab:blue")
    ax.set_ylim(0, 1.05)
    ax.set_ylabel("mean over tasks")
    ax.set_title("Aggregate pass@k")
    for i, k in enumerate(ks):
        ax.text(i, report.means[k] + 0.02, f"{report.means[k]:.3f}", ha="center", fontsize=9)
    fig.tight_layout()
    aggregate = outdir / "pass_at_k_aggregate.png"
    fig.savefig(aggregate, dpi=150)
    plt.close(fig)
    paths.append(aggregate)
    return paths
