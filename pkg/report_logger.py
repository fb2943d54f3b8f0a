# === report_logger.py (report rendering + run journal) ===
import csv
import json
import os
from datetime import datetime

import pandas as pd

import settings

REPORT_SCHEMA_VERSION = 1
FORMATS = ("json", "csv", "md")

RUN_LOG_HEADER = ["timestamp", "command", "config", "status", "exit_code", "rows"]


def provenance(command, window=None, b0=0, n=None, **extra):
    header = {
        "command": command,
        "window": list(window) if window else None,
        "b0": b0,
        "n": n,
        "schema_version": REPORT_SCHEMA_VERSION,
    }
    header.update(extra)
    return header


def to_frame(rows, sort_by=None):
    df = pd.DataFrame(rows)
    if sort_by and not df.empty:
        df = df.sort_values(list(sort_by), kind="mergesort").reset_index(drop=True)
    return df


def render(rows, header, fmt="json", sort_by=None, appendix=""):
    """Deterministic text for a report: provenance header, then the rows."""
    if fmt not in FORMATS:
        raise ValueError(f"unknown report format {fmt!r}, expected one of {FORMATS}")
    df = to_frame(rows, sort_by)
    if fmt == "json":
        records = json.loads(df.to_json(orient="records")) if not df.empty else []
        return json.dumps({"header": header, "rows": records}, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        lines = [f"# {key}: {json.dumps(value)}" for key, value in sorted(header.items())]
        body = df.to_csv(index=False) if not df.empty else ""
        return "\n".join(lines) + "\n" + body
    lines = [f"# {header['command']}", ""]
    lines += [f"- {key}: {value}" for key, value in sorted(header.items()) if key != "command"]
    lines.append("")
    lines.append(df.to_markdown(index=False) if not df.empty else "_no rows_")
    if appendix:
        lines += ["", appendix]
    return "\n".join(lines) + "\n"


def write_report(text, out=None):
    if not out:
        print(text, end="")
        return
    with open(out, mode="w", newline="") as f:
        f.write(text)
    settings.log("INFO", f"report written to {out}")


def log_run(command, config, status, exit_code, rows, log_file=None):
    """Append one row per CLI run; an empty path disables the journal."""
    path = settings.RUN_LOG_FILE if log_file is None else log_file
    if not path:
        return
    row = {
        "timestamp": datetime.now().strftime("%Y-%m-%d %H:%M:%S"),
        "command": command,
        "config": json.dumps(config, sort_keys=True),
        "status": status,
        "exit_code": exit_code,
        "rows": rows,
    }
    file_exists = os.path.isfile(path)
    with open(path, mode="a", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=RUN_LOG_HEADER)
        if not file_exists:
            writer.writeheader()
        writer.writerow(row)


def read_run_log(log_file=None):
    path = settings.RUN_LOG_FILE if log_file is None else log_file
    with open(path, mode="r", newline="") as f:
        return list(csv.DictReader(f))
