import logging

import pytest

from hpdegrees.config import Settings, configure_logging, settings, validate_settings


def test_defaults():
    assert settings.pmax == 13
    assert settings.scan_guard == 2**24
    assert settings.output_format == "human"


def test_env_prefix(monkeypatch):
    monkeypatch.setenv("HPDEGREES_JOBS", "4")
    assert Settings().jobs == 4


def test_validate_settings_lists_bad_fields(monkeypatch):
    monkeypatch.setattr(settings, "jobs", 0)
    monkeypatch.setattr(settings, "output_format", "xml")
    with pytest.raises(RuntimeError, match="JOBS, OUTPUT_FORMAT"):
        validate_settings()


def test_configure_logging_sets_level():
    configure_logging("debug")
    assert logging.getLogger().level == logging.DEBUG
    configure_logging("warning")
