import argparse
import json

import pytest

import main
import run_notifier
import settings
from report_logger import read_run_log


@pytest.fixture(autouse=True)
def run_log(tmp_path, monkeypatch):
    path = tmp_path / "runs.csv"
    monkeypatch.setattr(settings, "RUN_LOG_FILE", str(path))
    return path


def test_parse_window():
    assert main.parse_window("-9,9,0,4") == (-9, 9, 0, 4)
    for bad in ["-8,9,0,4", "9,-9,0,4", "1,2,3", "a,b,c,d"]:
        with pytest.raises(argparse.ArgumentTypeError):
            main.parse_window(bad)


def test_targets_report(tmp_path, run_log):
    out = tmp_path / "targets.json"
    assert main.main(["--out", str(out), "targets", "--lambda", "5,0"]) == main.EXIT_OK
    doc = json.loads(out.read_text())
    assert doc["header"]["command"] == "targets"
    assert doc["header"]["count"] == 8
    assert all(row["ok"] for row in doc["rows"])
    runs = read_run_log(str(run_log))
    assert runs[-1]["status"] == "ok"
    assert runs[-1]["exit_code"] == "0"


def test_even_weight_is_rejected(run_log):
    assert main.main(["targets", "--lambda", "2,0"]) == main.EXIT_DISAGREE
    assert read_run_log(str(run_log))[-1]["status"] == "rejected"


def test_small_window_exits_with_window_code(run_log):
    code = main.main(["--window=-3,3,0,2", "--n", "2", "ext", "--mu", "1,0"])
    assert code == main.EXIT_WINDOW
    assert read_run_log(str(run_log))[-1]["status"] == "window"


def test_relations_csv(tmp_path):
    out = tmp_path / "relations.csv"
    assert main.main(["--format", "csv", "--out", str(out), "relations", "--amax", "3"]) == main.EXIT_OK
    text = out.read_text()
    assert text.startswith("# b0: 0")
    assert "gauge difference equation" in text


def test_export_quiver_reads_back(tmp_path):
    first = tmp_path / "quiver.json"
    second = tmp_path / "again.json"
    assert main.main(["--window=-3,3,0,1", "--out", str(first), "export-quiver"]) == main.EXIT_OK
    doc = json.loads(first.read_text())
    assert doc["version"] == 1
    assert len(doc["vertices"]) == 8
    assert main.main(["--out", str(second), "export-quiver", "--presentation", str(first)]) == main.EXIT_OK
    again = json.loads(second.read_text())
    assert again["arrows"] == doc["arrows"]
    assert again["relations"] == doc["relations"]


def test_dump_module(tmp_path):
    out = tmp_path / "module.json"
    assert main.main(["--out", str(out), "dump-module", "--lambda", "1,0"]) == main.EXIT_OK
    doc = json.loads(out.read_text())
    assert doc["kind"] == "verma"
    assert doc["weight"] == [1, 0]


def test_dropped_relation_is_a_disagreement():
    code = main.main(["--n", "2", "--format", "md", "koszul", "--amax", "5", "--drop-relation", "qp"])
    assert code == main.EXIT_DISAGREE


def test_notify_sends_summary(monkeypatch):
    sent = []

    def record(*outcome):
        sent.append(run_notifier.summary_line(*outcome))

    monkeypatch.setattr(run_notifier, "send_run_summary", record)
    assert main.main(["--notify", "targets", "--lambda", "2,0"]) == main.EXIT_DISAGREE
    assert sent and sent[0].startswith("[FAIL] pe2 targets")


def test_notify_failure_does_not_change_exit_code(monkeypatch):
    def broken(*outcome):
        raise RuntimeError("no network")

    monkeypatch.setattr(run_notifier, "send_run_summary", broken)
    assert main.main(["--notify", "targets", "--lambda", "2,0"]) == main.EXIT_DISAGREE


def test_ext_saves_the_resolution(tmp_path):
    out = tmp_path / "ext.json"
    saved = tmp_path / "resolution.json"
    argv = ["--n", "1", "--out", str(out), "ext", "--mu", "5,0", "--save-resolution", str(saved)]
    assert main.main(argv) == main.EXIT_OK
    rows = json.loads(out.read_text())["rows"]
    assert sorted(r["lambda"] for r in rows if r["n"] == 1) == ["-7,0", "3,1", "7,1"]
    doc = json.loads(saved.read_text())
    assert doc["mu"] == [5, 0]
    assert [len(s["projectives"]) for s in doc["steps"]] == [1, 3]


def test_targets_at_minus_three(tmp_path):
    out = tmp_path / "targets.json"
    assert main.main(["--out", str(out), "targets", "--lambda=-3,0"]) == main.EXIT_OK
    assert json.loads(out.read_text())["header"]["count"] == 11
