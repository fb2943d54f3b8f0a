import pytest
import requests

import run_notifier
import settings
from run_notifier import send_run_summary, summary_line


class FakeResponse:
    def __init__(self, status_code, text=""):
        self.status_code = status_code
        self.text = text


@pytest.fixture(autouse=True)
def no_delay(monkeypatch):
    monkeypatch.setattr(settings, "NOTIFY_RETRY_DELAY", 0)
    monkeypatch.setattr(settings, "NOTIFY_QUIET", False)


def test_summary_line_tags():
    assert summary_line("ext", "ok", 0, 4) == "[OK] pe2 ext: ok, 4 rows, exit 0"
    assert summary_line("ext", "window", 3, 0).startswith("[WINDOW]")
    assert summary_line("koszul", "disagreement", 2, 9).startswith("[FAIL]")


def test_missing_credentials(monkeypatch):
    monkeypatch.setattr(settings, "TELEGRAM_BOT_TOKEN", None)
    monkeypatch.setattr(settings, "TELEGRAM_CHAT_ID", None)
    assert send_run_summary("ext", "ok", 0, 4) is False


def test_quiet_mode_only_reports_runs_that_did_not_pass(monkeypatch):
    calls = []
    monkeypatch.setattr(settings, "NOTIFY_QUIET", True)
    monkeypatch.setattr(run_notifier.requests, "post", lambda *a, **k: calls.append(k) or FakeResponse(200))
    assert send_run_summary("ext", "ok", 0, 4, token="t", chat_id="c") is False
    assert calls == []
    assert send_run_summary("ext", "window", 3, 0, token="t", chat_id="c") is True
    assert calls[0]["json"]["text"].startswith("[WINDOW]")


def test_sends_summary(monkeypatch):
    sent = {}

    def fake_post(url, json=None, timeout=None):
        sent["url"], sent["payload"] = url, json
        return FakeResponse(200)

    monkeypatch.setattr(run_notifier.requests, "post", fake_post)
    assert send_run_summary("ext", "ok", 0, 4, token="abc", chat_id="42") is True
    assert sent["url"] == "https://api.telegram.org/botabc/sendMessage"
    assert sent["payload"] == {"chat_id": "42", "text": "[OK] pe2 ext: ok, 4 rows, exit 0"}


def test_retries_then_gives_up(monkeypatch):
    attempts = []

    def failing_post(*args, **kwargs):
        attempts.append(1)
        raise requests.ConnectionError("down")

    monkeypatch.setattr(run_notifier.requests, "post", failing_post)
    assert send_run_summary("koszul", "disagreement", 2, 9, token="t", chat_id="c") is False
    assert len(attempts) == settings.NOTIFY_RETRIES


def test_non_200_is_retried(monkeypatch):
    codes = iter([500, 200])
    monkeypatch.setattr(run_notifier.requests, "post", lambda *a, **k: FakeResponse(next(codes), "err"))
    assert send_run_summary("ext", "ok", 0, 4, token="t", chat_id="c") is True
