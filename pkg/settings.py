# === settings.py (workbench configuration + console logging) ===
import os
import sys

from dotenv import load_dotenv

load_dotenv()  # read .env file if present


def _int_env(name, default):
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        print(f"[WARN] {name}={raw!r} is not an integer, using {default}", file=sys.stderr)
        return default


def _flag_env(name):
    return os.getenv(name, "0").strip().lower() in ("1", "true", "yes")


# -------------------------------
# Module truncation
# -------------------------------
DEPTH_PAD = _int_env("PE2_DEPTH_PAD", 12)

# -------------------------------
# Run settings
# -------------------------------
DEFAULT_JOBS = max(1, _int_env("PE2_JOBS", 1))
DEFAULT_FORMAT = os.getenv("PE2_FORMAT", "json")
RUN_LOG_FILE = os.getenv("PE2_RUN_LOG", "run_log.csv")

DEBUG_PRINT = _flag_env("PE2_DEBUG")

# -------------------------------
# Run summaries (--notify)
# -------------------------------
TELEGRAM_BOT_TOKEN = os.getenv("TELEGRAM_BOT_TOKEN")
TELEGRAM_CHAT_ID = os.getenv("TELEGRAM_CHAT_ID")
NOTIFY_QUIET = _flag_env("PE2_NOTIFY_QUIET")  # only runs that did not pass
NOTIFY_RETRIES = max(1, _int_env("PE2_NOTIFY_RETRIES", 3))
NOTIFY_RETRY_DELAY = max(0, _int_env("PE2_NOTIFY_RETRY_DELAY", 5))  # seconds

ALWAYS_SHOWN = ("WARN", "ERROR", "OK")


def log(tag, message):
    """Tagged console line on stderr; INFO/DEBUG only when DEBUG_PRINT is on."""
    if tag not in ALWAYS_SHOWN and not DEBUG_PRINT:
        return
    print(f"[{tag}] {message}", file=sys.stderr)
