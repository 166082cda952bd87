import logging
import pytest
from functions import settings
from services.exceptions import ConfigurationError


def test_face_cap_default(monkeypatch):
    monkeypatch.delenv('ALCOVE_FACE_CAP', raising=False)
    assert settings.face_cap() == settings.DEFAULT_FACE_CAP


def test_face_cap_from_environment(monkeypatch):
    monkeypatch.setenv('ALCOVE_FACE_CAP', '5_000')
    assert settings.face_cap() == 5000


@pytest.mark.parametrize('value', ['many', '0', '-3'])
def test_invalid_face_cap(monkeypatch, value):
    monkeypatch.setenv('ALCOVE_FACE_CAP', value)
    with pytest.raises(ConfigurationError):
        settings.face_cap()


def test_log_level(monkeypatch):
    monkeypatch.setenv('ALCOVE_LOG_LEVEL', 'debug')
    assert settings.log_level() == logging.DEBUG
    monkeypatch.setenv('ALCOVE_LOG_LEVEL', 'chatty')
    with pytest.raises(ConfigurationError):
        settings.log_level()


def test_fixtures_dir(monkeypatch, tmp_path):
    monkeypatch.delenv('ALCOVE_FIXTURES_DIR', raising=False)
    assert settings.fixtures_dir() == settings.base_path / 'tests' / 'fixtures'
    monkeypatch.setenv('ALCOVE_FIXTURES_DIR', str(tmp_path))
    assert settings.fixtures_dir() == tmp_path
