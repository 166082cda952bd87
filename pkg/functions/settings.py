import os
import logging
from pathlib import Path
from dotenv import load_dotenv
from functions.base_path import base_path
from services.exceptions import ConfigurationError

load_dotenv()

DEFAULT_FACE_CAP = 1_000_000
DEFAULT_LOG_LEVEL = 'WARNING'


def face_cap() -> int:
    """
    Upper bound on the number of faces a face lattice may reach, from ALCOVE_FACE_CAP.

    :raises ConfigurationError: The value is not a positive integer.
    """
    raw = os.getenv('ALCOVE_FACE_CAP')
    if not raw:
        return DEFAULT_FACE_CAP
    try:
        cap = int(raw.replace('_', ''))
    except ValueError as error:
        raise ConfigurationError(f'ALCOVE_FACE_CAP must be an integer, got {raw!r}') from error
    if cap < 1:
        raise ConfigurationError(f'ALCOVE_FACE_CAP must be at least 1, got {cap}')
    return cap


def log_level() -> int:
    name = os.getenv('ALCOVE_LOG_LEVEL', DEFAULT_LOG_LEVEL).upper()
    level = logging.getLevelName(name)
    if not isinstance(level, int):
        raise ConfigurationError(f'ALCOVE_LOG_LEVEL {name!r} is not a logging level')
    return level


def fixtures_dir() -> Path:
    """Directory of golden fixtures; relative values are taken from the project root"""
    path = Path(os.getenv('ALCOVE_FIXTURES_DIR') or 'tests/fixtures')
    return path if path.is_absolute() else base_path / path
