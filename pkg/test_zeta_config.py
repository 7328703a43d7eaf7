"""
Tests for the tolerance registry and environment settings
"""

import logging

import pytest
import structlog

import wirtinger_constants
from zeta_config import (DEFAULT_PRIME_CUTOFF, TOLERANCE_SETTINGS, configure_logging, default_tolerances,
                         get_prime_cutoff, get_threads, get_tolerance_config, list_available_settings,
                         parse_tolerance_override)


def test_default_tolerances_cover_registry():
    defaults = default_tolerances()
    assert set(defaults) == set(TOLERANCE_SETTINGS)
    assert defaults["quadrature_tol"] == 1e-10
    assert defaults["margin_floor"] == 1e-8
    assert defaults["prime_cutoff"] == 1_000_000


def test_get_tolerance_config_unknown():
    assert get_tolerance_config("refine_tol")["default"] == 1e-9
    with pytest.raises(ValueError, match="Unknown tolerance"):
        get_tolerance_config("no_such_setting")


def test_parse_tolerance_override():
    assert parse_tolerance_override("quadrature_tol=1e-12") == {"quadrature_tol": 1e-12}
    override = parse_tolerance_override(" prime_cutoff = 1e5 ")
    assert override == {"prime_cutoff": 100000}
    assert isinstance(override["prime_cutoff"], int)


@pytest.mark.parametrize("text", ["quadrature_tol", "quadrature_tol=-1", "nope=1", "refine_tol=abc"])
def test_parse_tolerance_override_rejects(text):
    with pytest.raises(ValueError):
        parse_tolerance_override(text)


def test_get_threads(monkeypatch):
    monkeypatch.delenv("ZETA_GAPS_THREADS", raising=False)
    assert get_threads() == 1
    assert get_threads(4) == 4
    monkeypatch.setenv("ZETA_GAPS_THREADS", "3")
    assert get_threads() == 3
    assert get_threads(2) == 2
    monkeypatch.setenv("ZETA_GAPS_THREADS", "many")
    with pytest.raises(ValueError):
        get_threads()


def test_get_prime_cutoff(monkeypatch):
    monkeypatch.delenv("ZETA_GAPS_PRIME_CUTOFF", raising=False)
    assert get_prime_cutoff() == DEFAULT_PRIME_CUTOFF
    monkeypatch.setenv("ZETA_GAPS_PRIME_CUTOFF", "5000")
    assert get_prime_cutoff() == 5000


def test_configure_logging_levels(monkeypatch):
    monkeypatch.delenv("LOG_LEVEL", raising=False)
    configure_logging()
    assert logging.getLogger().level == logging.WARNING
    configure_logging("debug")
    assert logging.getLogger().level == logging.DEBUG
    monkeypatch.setenv("LOG_LEVEL", "ERROR")
    configure_logging()
    assert logging.getLogger().level == logging.ERROR


def test_list_available_settings(capsys):
    list_available_settings()
    out = capsys.readouterr().out
    for name in TOLERANCE_SETTINGS:
        assert f"Setting: {name}" in out


def test_library_events_stay_off_stdout(capsys):
    logging.getLogger().setLevel(logging.WARNING)
    assert structlog.is_configured()
    wirtinger_constants.i_integral(1)
    structlog.get_logger("gap_bounds").debug("quadrature_converged", panels=3)
    assert capsys.readouterr().out == ""
