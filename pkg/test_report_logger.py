import json

import pytest

import report_logger
import settings
from report_logger import log_run, provenance, read_run_log, render, write_report

ROWS = [
    {"mu": "3,0", "n": 1, "ok": True},
    {"mu": "1,0", "n": 0, "ok": False},
]


def test_provenance_header():
    header = provenance("ext", (-9, 9, 0, 4), 0, 3, mu="1,0")
    assert header == {
        "command": "ext",
        "window": [-9, 9, 0, 4],
        "b0": 0,
        "n": 3,
        "schema_version": report_logger.REPORT_SCHEMA_VERSION,
        "mu": "1,0",
    }
    assert provenance("targets")["window"] is None


def test_render_json_is_deterministic():
    header = provenance("ext", None, 0, 1)
    text = render(ROWS, header, "json")
    doc = json.loads(text)
    assert doc["header"]["command"] == "ext"
    assert doc["rows"] == ROWS
    assert render(ROWS, header, "json") == text


def test_render_json_sorted_rows():
    doc = json.loads(render(ROWS, provenance("ext"), "json", sort_by=["mu"]))
    assert [r["mu"] for r in doc["rows"]] == ["1,0", "3,0"]


def test_render_csv_has_comment_header():
    text = render(ROWS, provenance("ext", None, 0, 1), "csv")
    lines = text.splitlines()
    assert lines[0] == "# b0: 0"
    assert '# command: "ext"' in lines
    assert "mu,n,ok" in lines
    assert '"3,0",1,True' in lines


def test_render_markdown_with_appendix():
    text = render(ROWS, provenance("ext"), "md", appendix="### n = 0")
    assert text.startswith("# ext\n")
    assert "| mu" in text
    assert text.rstrip().endswith("### n = 0")


def test_render_empty_and_invalid():
    assert json.loads(render([], provenance("ext"), "json"))["rows"] == []
    assert "_no rows_" in render([], provenance("ext"), "md")
    with pytest.raises(ValueError):
        render(ROWS, provenance("ext"), "xml")


def test_write_report(tmp_path, capsys):
    write_report("hello\n")
    assert capsys.readouterr().out == "hello\n"
    out = tmp_path / "report.json"
    write_report("{}\n", str(out))
    assert out.read_text() == "{}\n"


def test_run_log_appends_rows(tmp_path):
    path = str(tmp_path / "runs.csv")
    log_run("ext", {"n": 3}, "ok", 0, 12, log_file=path)
    log_run("koszul", {"n": 2}, "disagreement", 2, 5, log_file=path)
    rows = read_run_log(path)
    assert [r["command"] for r in rows] == ["ext", "koszul"]
    assert rows[1]["exit_code"] == "2"
    assert json.loads(rows[0]["config"]) == {"n": 3}


def test_run_log_disabled(tmp_path, monkeypatch):
    monkeypatch.setattr(settings, "RUN_LOG_FILE", "")
    log_run("ext", {}, "ok", 0, 1)
    assert list(tmp_path.iterdir()) == []
