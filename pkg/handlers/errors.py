import re
import sys
import logging
import traceback
from services.exceptions import (
    AlcoveError, ConfigurationError, DomainError, FaceCapExceededError, UsageError, VerificationError,
)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_VERIFICATION = 2
EXIT_FACE_CAP = 3
EXIT_USAGE = 64
EXIT_UNEXPECTED = 70

# Most specific first
EXIT_CODES = (
    (UsageError, EXIT_USAGE),
    (FaceCapExceededError, EXIT_FACE_CAP),
    (VerificationError, EXIT_VERIFICATION),
    (ConfigurationError, EXIT_DOMAIN),
    (DomainError, EXIT_DOMAIN),
)

# Output pipe closed by the reader (e.g. `| head`); nothing worth a traceback
IGNORE_ERRORS_PATTERN = '|'.join([
    'BrokenPipeError',
    'Broken pipe',
])


def extract_error_details() -> tuple[str, list[str]]:
    """
    Extracts detailed information about the current exception.

    :return: A tuple containing the formatted traceback and its raw lines.
    :rtype: tuple[str, list[str]]
    """
    exc_type, exc_value, exc_traceback = sys.exc_info()
    error_raw = traceback.format_exception(exc_type, exc_value, exc_traceback)
    return ''.join(error_raw), error_raw


def exit_code_for(error: BaseException) -> int:
    for error_type, code in EXIT_CODES:
        if isinstance(error, error_type):
            return code
    return EXIT_UNEXPECTED


def errors_handler(error: BaseException) -> int:
    """
    Handles an exception raised while running a command.

    Known errors are reported in one line on stderr; anything else is logged
    with its traceback. Must be called from inside the except block.

    :param error: The exception being handled.
    :type error: BaseException
    :return: Process exit code.
    :rtype: int
    """
    code = exit_code_for(error)
    if isinstance(error, AlcoveError):
        logging.warning(f' {type(error).__name__}: {error}')
        print(f'error: {error}', file=sys.stderr)
        return code

    error_text, error_raw = extract_error_details()
    if re.search(IGNORE_ERRORS_PATTERN, error_text):
        return code
    logging.error(f' Unexpected error {error_raw[-1].strip() if error_raw else error}\n{error_text}')
    print(f'internal error: {error}', file=sys.stderr)
    return code
