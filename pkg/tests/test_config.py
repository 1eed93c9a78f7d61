# tests/test_config.py
import pytest

from arbor.config import get_settings, override_settings, reset_settings
from arbor.errors import InvalidArgumentError


def test_defaults():
    settings = get_settings()
    assert settings.max_leaves == 8
    assert settings.max_partition_ground == 12
    assert settings.max_degree == 12
    assert settings.max_cells == 2_000_000
    assert settings.log_level == "WARNING"


def test_reads_environment(monkeypatch):
    monkeypatch.setenv("ARBOR_MAX_LEAVES", "5")
    monkeypatch.setenv("ARBOR_MAX_CELLS", "100")
    reset_settings()
    settings = get_settings()
    assert settings.max_leaves == 5
    assert settings.max_cells == 100


def test_settings_are_cached(monkeypatch):
    first = get_settings()
    monkeypatch.setenv("ARBOR_MAX_LEAVES", "3")
    assert get_settings() is first


def test_invalid_environment_is_an_invalid_argument(monkeypatch):
    monkeypatch.setenv("ARBOR_MAX_DEGREE", "lots")
    reset_settings()
    with pytest.raises(InvalidArgumentError):
        get_settings()


def test_override_ignores_unset_flags():
    settings = override_settings(max_leaves=4, max_degree=None)
    assert settings.max_leaves == 4
    assert settings.max_degree == 12
    assert get_settings() is settings


def test_override_validates():
    with pytest.raises(InvalidArgumentError):
        override_settings(max_leaves=0)
