import logging

import pytest

from app.config import Settings, settings
from app.core.monitoring import JSONLogFormatter, setup_logging, track_performance


def test_report_digits_follow_embedding_width(monkeypatch):
    assert settings.report_digits == 12
    monkeypatch.setattr(settings, "EMBED_WIDTH", "1/1000000")
    assert settings.report_digits == 6


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("CANDIDATE_CAP", "1234")
    monkeypatch.setenv("EMBED_WIDTH", "1/100")
    configured = Settings()
    assert configured.CANDIDATE_CAP == 1234
    assert configured.report_digits == 2


def test_setup_logging_is_idempotent():
    root = logging.getLogger()
    setup_logging("info")
    setup_logging("info")
    ours = [h for h in root.handlers if isinstance(h.formatter, JSONLogFormatter)]
    assert len(ours) == 1
    assert root.level == logging.INFO
    setup_logging()


def test_slow_computations_are_logged(monkeypatch, caplog):
    monkeypatch.setattr(settings, "SLOW_COMPUTATION_SECONDS", -1.0)
    with caplog.at_level(logging.WARNING, logger="performance"):
        with track_performance("lattice_points"):
            pass
    assert "Slow computation: lattice_points" in caplog.text


def test_fast_computations_are_quiet(caplog):
    with caplog.at_level(logging.WARNING, logger="performance"):
        with track_performance("noop"):
            pass
    assert caplog.text == ""


def test_track_performance_reraises(monkeypatch, caplog):
    monkeypatch.setattr(settings, "SLOW_COMPUTATION_SECONDS", -1.0)
    with pytest.raises(RuntimeError):
        with track_performance("failing"):
            raise RuntimeError("boom")
    assert "failing" in caplog.text


def test_debug_setting_lowers_the_default_level(monkeypatch):
    root = logging.getLogger()
    monkeypatch.setattr(settings, "DEBUG", True)
    setup_logging()
    assert root.level == logging.DEBUG
    setup_logging("warning")
    assert root.level == logging.WARNING
    monkeypatch.setattr(settings, "DEBUG", False)
    setup_logging()
    assert root.level == getattr(logging, settings.LOG_LEVEL.upper())
