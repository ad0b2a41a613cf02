import csv
import json

from veriforge.evalharness import TaskResult, aggregate
from veriforge.reporting import render_figures, write_csv_summary, write_report_json


def sample_report():
    results = [TaskResult("alpha", 10, 3, ()), TaskResult("beta", 10, 10, ())]
    return aggregate(results, ks=[1, 5], metadata={"n": 10})


def test_report_json_written(tmp_path):
    path = write_report_json(sample_report(), tmp_path / "report.json")
    payload = json.loads(path.read_text())
    assert payload["aggregate"]["pass@1"] == (0.3 + 1.0) / 2


def test_csv_summary_layout(tmp_path):
    path = write_csv_summary(sample_report(), tmp_path / "summary.csv")
    rows = list(csv.reader(path.read_text().splitlines()))
    assert rows[0] == ["task_id", "n", "c", "pass@1", "pass@5"]
    assert rows[1][0] == "alpha"
    assert rows[-1][0] == "MEAN"


def test_figures_rendered(tmp_path):
    paths = render_figures(sample_report(), tmp_path / "figs")
    names = sorted(p.name for p in paths)
    assert names == ["pass_at_k_aggregate.png", "pass_at_k_per_task.png"]
    for p in paths:
        assert p.exists() and p.stat().st_size > 1000
