import pytest
from handlers import errors
from handlers.loops import SKIPPED_CAP, TaskHandlers, sweep
from services.exceptions import (
    BalanceError, ConfigurationError, DomainError, FaceCapExceededError, UsageError, VerificationError,
)


@pytest.mark.parametrize('error, code', [
    (UsageError('x'), errors.EXIT_USAGE),
    (FaceCapExceededError(10), errors.EXIT_FACE_CAP),
    (VerificationError('x'), errors.EXIT_VERIFICATION),
    (ConfigurationError('x'), errors.EXIT_DOMAIN),
    (BalanceError('x'), errors.EXIT_DOMAIN),
    (KeyError('x'), errors.EXIT_UNEXPECTED),
])
def test_exit_code_for(error, code):
    assert errors.exit_code_for(error) == code


def test_known_errors_are_reported_in_one_line(capsys):
    assert errors.errors_handler(DomainError('rank 0 is not valid')) == errors.EXIT_DOMAIN
    assert 'error: rank 0 is not valid' in capsys.readouterr().err


def test_unexpected_errors(capsys):
    try:
        raise RuntimeError('boom')
    except RuntimeError as error:
        assert errors.errors_handler(error) == errors.EXIT_UNEXPECTED
    assert 'internal error: boom' in capsys.readouterr().err


def test_broken_pipe_is_silent(capsys):
    try:
        raise BrokenPipeError('Broken pipe')
    except BrokenPipeError as error:
        assert errors.errors_handler(error) == errors.EXIT_UNEXPECTED
    assert 'internal error' not in capsys.readouterr().err


def test_run_task():
    def verdict(value):
        return value

    def too_large():
        raise FaceCapExceededError(5, 'K(A7)')

    assert TaskHandlers.run_task(verdict, value=True) == 'true'
    assert TaskHandlers.run_task(verdict, value=False) == 'false'
    assert TaskHandlers.run_task(too_large) == SKIPPED_CAP


def test_sweep_of_d():
    document = sweep('D', (4, 6))
    assert [row.type for row in document.rows] == ['D4', 'D5', 'D6']
    assert [row.alcove_aut_order for row in document.rows] == [24, 8, 8]
    assert [row.omega_order for row in document.rows] == [4, 4, 4]


def test_sweep_of_e():
    document = sweep('E', (6, 8))
    assert [row.omega_order for row in document.rows] == [3, 2, 1]
    assert [row.diagram_order for row in document.rows] == [2, 1, 1]


def test_sweep_runs_checks():
    document = sweep('A', (2, 3), ('fund', 'strat'))
    assert [row.fund_domain for row in document.rows] == ['true', 'true']
    assert [row.stratified for row in document.rows] == ['true', 'false']


def test_sweep_marks_checks_over_the_face_cap(monkeypatch):
    monkeypatch.setenv('ALCOVE_FACE_CAP', '5')
    document = sweep('A', (3, 3), ('strat',))
    assert document.rows[0].stratified == SKIPPED_CAP


@pytest.mark.parametrize('family, ranks', [('A', (4, 2)), ('D', (3, 4)), ('E', (5, 6))])
def test_sweep_rejects_invalid_ranges(family, ranks):
    with pytest.raises(DomainError):
        sweep(family, ranks)
