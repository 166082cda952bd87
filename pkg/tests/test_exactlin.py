import pytest
import sympy
from fractions import Fraction
from services.exceptions import DimensionMismatchError, DomainError
from services.exactlin import (
    Constraint, affine_solution_space, determinant, from_sympy, integer_row, inverse, lp_feasible, lp_maximize,
    mat_mul, matrix, nullspace, rank, solve_linear, to_fraction, to_sympy, unique_solution, vector,
)


def test_solve_linear_unique():
    solution = solve_linear(matrix([[2, 1], [1, 3]]), vector([3, 5]))
    assert solution.status == 'unique'
    assert solution.point == (Fraction(4, 5), Fraction(7, 5))


def test_solve_linear_inconsistent():
    solution = solve_linear(matrix([[1, 1], [2, 2]]), vector([1, 3]))
    assert solution.status == 'no_solution'
    assert not solution.solvable


def test_solve_linear_kernel_spans_solutions():
    a = matrix([[1, 1, 1]])
    solution = solve_linear(a, vector([1]))
    assert solution.status == 'underdetermined'
    assert len(solution.kernel) == 2
    for direction in solution.kernel:
        assert sum(direction) == 0


def test_solve_linear_rejects_ragged_system():
    with pytest.raises(DimensionMismatchError):
        solve_linear(matrix([[1, 2]]), vector([1, 2]))


def test_integer_row_clears_denominators():
    assert integer_row([Fraction(1, 2), Fraction(2, 3), 1]) == [3, 4, 6]


def test_inverse_and_determinant():
    a = matrix([[2, -1, 0], [-1, 2, -1], [0, -1, 2]])
    assert determinant(a) == 4
    assert mat_mul(a, inverse(a)) == matrix([[1, 0, 0], [0, 1, 0], [0, 0, 1]])


def test_determinant_with_row_swap_and_fractions():
    assert determinant(matrix([[0, Fraction(1, 2)], [3, 1]])) == Fraction(-3, 2)
    assert determinant(matrix([[1, 2], [2, 4]])) == 0


def test_singular_inverse_raises():
    with pytest.raises(DomainError):
        inverse(matrix([[1, 2], [2, 4]]))


def test_rank_and_nullspace():
    a = matrix([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    assert rank(a) == 2
    (kernel,) = nullspace(a)
    assert all(sum(x * y for x, y in zip(row, kernel)) == 0 for row in a)


def test_lp_maximize_on_triangle():
    constraints = [Constraint((1, 0), 0), Constraint((0, 1), 0), Constraint((1, 1), 1, '<=')]
    result = lp_maximize(constraints, vector([2, 1]))
    assert result.status == 'optimal'
    assert result.value == 2
    assert result.point == (1, 0)


def test_lp_maximize_unbounded():
    result = lp_maximize([Constraint((1, 0), 0), Constraint((0, 1), 0)], vector([1, 1]))
    assert result.status == 'unbounded'


def test_lp_maximize_rejects_strict_constraints():
    with pytest.raises(DomainError):
        lp_maximize([Constraint((1,), 0, '>')], vector([1]))


def test_lp_feasible_strict_separation():
    assert not lp_feasible([Constraint((1,), 0, '>'), Constraint((1,), 0, '<')], dim=1)
    result = lp_feasible([Constraint((1, 1), 1, '<'), Constraint((1, -1), 0, '>')], dim=2)
    assert result.feasible
    x, y = result.point
    assert x + y < 1 and x > y


def test_lp_feasible_touching_segments_have_no_common_interior():
    # [0, 1] and [1, 2] meet in a point only
    constraints = [Constraint((1,), 0, '>'), Constraint((1,), 1, '<'), Constraint((1,), 1, '>'), Constraint((1,), 2, '<')]
    assert not lp_feasible(constraints, dim=1)


def test_constraint_normalized():
    constraint = Constraint((1, -2), 3, '<').normalized()
    assert constraint == Constraint((-1, 2), -3, '>')


def test_affine_solution_space():
    space = affine_solution_space(matrix([[1, -1, 0]]), vector([2]))
    assert space.dim == 2
    assert space.at((5, 7))[0] - space.at((5, 7))[1] == 2
    assert affine_solution_space(matrix([[1, 1], [1, 1]]), vector([0, 1])) is None


def test_unique_solution_of_integer_rows():
    assert unique_solution([[2, 1, 3], [1, 3, 5]], 2) == (Fraction(4, 5), Fraction(7, 5))
    assert unique_solution([[1, 1, 1], [2, 2, 2]], 2) is None
    assert unique_solution([[1, 1, 1], [2, 2, 3]], 2) is None


def test_sympy_conversions_stay_exact():
    a = matrix([[Fraction(1, 3), -2], [0, Fraction(5, 7)]])
    assert from_sympy(to_sympy(a)) == a
    assert to_fraction(sympy.Rational(-3, 4)) == Fraction(-3, 4)
    assert to_fraction(sympy.Integer(6)) == 6
    assert to_sympy([], 3).shape == (0, 3)


def test_empty_system_is_underdetermined():
    solution = solve_linear((), (), num_columns=2)
    assert solution.status == 'underdetermined'
    assert solution.point == (0, 0)
    assert solution.kernel == matrix([[1, 0], [0, 1]])
