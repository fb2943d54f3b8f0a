# === run_notifier.py (one-line run summaries over the Telegram Bot API) ===
import time

import requests

import settings

API_URL = "https://api.telegram.org/bot{token}/sendMessage"

EXIT_TAGS = {0: "[OK]", 3: "[WINDOW]"}


def summary_line(command, status, exit_code, rows):
    tag = EXIT_TAGS.get(exit_code, "[FAIL]")
    return f"{tag} pe2 {command}: {status}, {rows} rows, exit {exit_code}"


def _post(url, payload):
    try:
        response = requests.post(url, json=payload, timeout=10)
    except requests.RequestException as e:
        settings.log("WARN", f"notifier: {e}")
        return False
    if response.status_code != 200:
        settings.log("WARN", f"notifier status {response.status_code}: {response.text}")
        return False
    return True


def send_run_summary(command, status, exit_code, rows, token=None, chat_id=None):
    """
    Posts the summary of one CLI run, retrying NOTIFY_RETRIES times.
    Returns False when the summary was skipped or every attempt failed.
    """
    token = token or settings.TELEGRAM_BOT_TOKEN
    chat_id = chat_id or settings.TELEGRAM_CHAT_ID
    if not token or not chat_id:
        settings.log("WARN", "TELEGRAM_BOT_TOKEN / TELEGRAM_CHAT_ID not set, summary not sent")
        return False
    if settings.NOTIFY_QUIET and exit_code == 0:
        settings.log("INFO", f"quiet mode: {command} passed, no summary sent")
        return False

    url = API_URL.format(token=token)
    payload = {"chat_id": chat_id, "text": summary_line(command, status, exit_code, rows)}
    for attempt in range(1, settings.NOTIFY_RETRIES + 1):
        if _post(url, payload):
            settings.log("INFO", f"run summary sent on attempt {attempt}")
            return True
        if attempt < settings.NOTIFY_RETRIES:
            time.sleep(settings.NOTIFY_RETRY_DELAY)
    settings.log("WARN", f"notifier gave up after {settings.NOTIFY_RETRIES} attempts")
    return False
