import math
import sympy
from fractions import Fraction
from typing import Iterable, Optional, Sequence
from dataclasses import dataclass, field
from services.exceptions import DimensionMismatchError, DomainError, VerificationError

Rational = Fraction
RatVec = tuple[Fraction, ...]
RatMat = tuple[RatVec, ...]

RELATIONS = ('>=', '>', '=', '<=', '<')


def rat(value) -> Fraction:
    """Coerces an int, str ("p/q") or Fraction into a Fraction"""
    return value if isinstance(value, Fraction) else Fraction(value)


def vector(values: Iterable) -> RatVec:
    return tuple(rat(value) for value in values)


def matrix(rows: Iterable[Iterable]) -> RatMat:
    return tuple(vector(row) for row in rows)


def zero_vector(n: int) -> RatVec:
    return (Fraction(0),) * n


def unit_vector(n: int, i: int) -> RatVec:
    return tuple(Fraction(int(k == i)) for k in range(n))


def identity(n: int) -> RatMat:
    return tuple(unit_vector(n, i) for i in range(n))


def _check_same_length(x: Sequence, y: Sequence) -> None:
    if len(x) != len(y):
        raise DimensionMismatchError(f'dimensions {len(x)} and {len(y)} do not match')


def add(x: RatVec, y: RatVec) -> RatVec:
    _check_same_length(x, y)
    return tuple(a + b for a, b in zip(x, y))


def sub(x: RatVec, y: RatVec) -> RatVec:
    _check_same_length(x, y)
    return tuple(a - b for a, b in zip(x, y))


def scale(c, x: RatVec) -> RatVec:
    c = rat(c)
    return tuple(c * a for a in x)


def dot(x: Sequence, y: Sequence) -> Fraction:
    _check_same_length(x, y)
    return sum((a * b for a, b in zip(x, y)), Fraction(0))


def is_zero(x: Sequence) -> bool:
    return all(a == 0 for a in x)


def transpose(m: RatMat) -> RatMat:
    return tuple(zip(*m)) if m else ()


def mat_vec(m: RatMat, x: RatVec) -> RatVec:
    return tuple(dot(row, x) for row in m)


def mat_mul(a: RatMat, b: RatMat) -> RatMat:
    columns = transpose(b)
    return tuple(tuple(dot(row, column) for column in columns) for row in a)


def mat_sub(a: RatMat, b: RatMat) -> RatMat:
    return tuple(sub(row_a, row_b) for row_a, row_b in zip(a, b))


def gram_inner(gram: RatMat, x: RatVec, y: RatVec) -> Fraction:
    """
    Evaluates xᵀ G y.

    :param gram: Gram matrix of the basis the coordinates refer to.
    :type gram: RatMat
    :param x: Left vector.
    :type x: RatVec
    :param y: Right vector.
    :type y: RatVec
    :return: The exact value of the bilinear form.
    :rtype: Fraction
    """
    if len(x) != len(gram) or len(y) != len(gram):
        raise DimensionMismatchError(f'vectors of size {len(x)}, {len(y)} against a rank {len(gram)} form')
    return dot(x, mat_vec(gram, y))


def inner(rs, x: RatVec, y: RatVec) -> Fraction:
    """
    Inner product of two vectors given in the simple-root basis of a root system.

    :param rs: Root system supplying the Gram matrix of its simple roots.
    :type rs: RootSystem
    :param x: Coordinates in the α-basis.
    :type x: RatVec
    :param y: Coordinates in the α-basis.
    :type y: RatVec
    :return: (x, y)
    :rtype: Fraction
    """
    return gram_inner(rs.gram, x, y)


def integer_row(values: Sequence) -> list[int]:
    """Scales a row of rationals by the lcm of its denominators"""
    values = [rat(value) for value in values]
    denominator = math.lcm(*(value.denominator for value in values))
    return [value.numerator * (denominator // value.denominator) for value in values]


def to_sympy(a: Sequence[Sequence], num_columns: Optional[int] = None) -> sympy.Matrix:
    """Exact sympy matrix of rationals; num_columns is needed only when a has no rows"""
    n = num_columns if num_columns is not None else (len(a[0]) if a else 0)
    entries = [sympy.Rational(value.numerator, value.denominator) for row in a for value in map(rat, row)]
    return sympy.Matrix(len(a), n, entries)


def to_fraction(value) -> Fraction:
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


def from_sympy(m: sympy.Matrix) -> RatMat:
    return tuple(tuple(to_fraction(m[i, j]) for j in range(m.cols)) for i in range(m.rows))


@dataclass(frozen=True)
class LinearSolution:
    """
    Outcome of solve_linear.

    status is 'unique', 'underdetermined' or 'no_solution'. For solvable systems
    point is a particular solution (free variables set to 0) and kernel a basis
    of the solution space directions.
    """
    status: str
    point: Optional[RatVec] = None
    kernel: tuple[RatVec, ...] = ()
    rank: int = 0

    @property
    def solvable(self) -> bool:
        return self.status != 'no_solution'


def solve_linear(a: RatMat, b: RatVec, num_columns: Optional[int] = None) -> LinearSolution:
    """
    Solves A x = b exactly from the reduced row echelon form of [A | b].

    :param a: Coefficient matrix (m × n).
    :type a: RatMat
    :param b: Right-hand side of length m.
    :type b: RatVec
    :param num_columns: n, needed only when A has no rows.
    :type num_columns: int, optional
    :return: Status-valued solution with particular point and kernel basis.
    :rtype: LinearSolution
    """
    n = num_columns if num_columns is not None else (len(a[0]) if a else 0)
    if len(a) != len(b) or any(len(row) != n for row in a):
        raise DimensionMismatchError(f'system of {len(a)} rows, {len(b)} right-hand sides and {n} columns')

    if a:
        reduced, pivots = to_sympy(a, n).row_join(to_sympy([[value] for value in b])).rref()
    else:
        reduced, pivots = sympy.zeros(0, n + 1), ()
    if n in pivots:
        return LinearSolution(status='no_solution', rank=len(pivots) - 1)

    point = [Fraction(0)] * n
    for r, c in enumerate(pivots):
        point[c] = to_fraction(reduced[r, n])

    kernel = []
    for free in (c for c in range(n) if c not in pivots):
        direction = [Fraction(0)] * n
        direction[free] = Fraction(1)
        for r, c in enumerate(pivots):
            direction[c] = -to_fraction(reduced[r, free])
        kernel.append(tuple(direction))

    status = 'underdetermined' if kernel else 'unique'
    return LinearSolution(status=status, point=tuple(point), kernel=tuple(kernel), rank=len(pivots))


def unique_solution(rows: list[list[int]], num_columns: int) -> Optional[RatVec]:
    """
    Square system given as augmented integer rows [a_1 … a_n | b].

    :return: The unique solution, or None when the system is singular or inconsistent.
    :rtype: RatVec, optional
    """
    reduced, pivots = sympy.Matrix(rows).rref()
    if pivots != tuple(range(num_columns)):
        return None
    return tuple(to_fraction(reduced[r, num_columns]) for r in range(num_columns))


def rank(a: RatMat) -> int:
    return to_sympy(a).rank() if a else 0


def nullspace(a: RatMat, num_columns: Optional[int] = None) -> tuple[RatVec, ...]:
    n = num_columns if num_columns is not None else len(a[0])
    if not a:
        return identity(n)
    return tuple(tuple(to_fraction(value) for value in column) for column in to_sympy(a, n).nullspace())


def inverse(a: RatMat) -> RatMat:
    """
    Inverts a square matrix.

    :raises DomainError: The matrix is singular.
    """
    m = to_sympy(a)
    if m.rank() < len(a):
        raise DomainError('matrix is singular')
    return from_sympy(m.inv())


def determinant(a: RatMat) -> Fraction:
    if not a:
        return Fraction(1)
    return to_fraction(to_sympy(a).det(method='bareiss'))


@dataclass(frozen=True)
class Constraint:
    """Linear constraint normal·x (relation) offset with a plain coordinate dot product"""
    normal: RatVec
    offset: Fraction
    relation: str = '>='

    def __post_init__(self):
        if self.relation not in RELATIONS:
            raise DomainError(f'unknown relation {self.relation!r}')
        object.__setattr__(self, 'normal', vector(self.normal))
        object.__setattr__(self, 'offset', rat(self.offset))

    def holds(self, x: RatVec) -> bool:
        value = dot(self.normal, x)
        return {
            '>=': value >= self.offset,
            '>': value > self.offset,
            '=': value == self.offset,
            '<=': value <= self.offset,
            '<': value < self.offset,
        }[self.relation]

    def normalized(self) -> 'Constraint':
        """Rewrites ≤ and < as ≥ and > by negation"""
        if self.relation == '<=':
            return Constraint(scale(-1, self.normal), -self.offset, '>=')
        if self.relation == '<':
            return Constraint(scale(-1, self.normal), -self.offset, '>')
        return self


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    point: Optional[RatVec] = None

    def __bool__(self) -> bool:
        return self.feasible


@dataclass(frozen=True)
class LPResult:
    status: str  # 'optimal', 'unbounded' or 'infeasible'
    point: Optional[RatVec] = None
    value: Optional[Fraction] = None


class SimplexTableau:
    """
    Dense simplex tableau for max c·z subject to A z = b, z ≥ 0.

    Phase one minimizes the sum of artificial variables, phase two optimizes
    the requested objective. Bland's rule (lowest index entering, lowest basic
    index on ratio ties) guarantees termination.

    :param rows: Equality constraint rows over num_columns variables.
    :type rows: list[list[Fraction]]
    :param rhs: Right-hand sides.
    :type rhs: list[Fraction]
    :param num_columns: Number of structural variables.
    :type num_columns: int
    """

    def __init__(self, rows: list[list[Fraction]], rhs: list[Fraction], num_columns: int):
        self.num_columns = num_columns
        self.table: list[list[Fraction]] = []
        m = len(rows)
        for i, (row, b) in enumerate(zip(rows, rhs)):
            sign = -1 if b < 0 else 1
            artificial = [Fraction(int(k == i)) for k in range(m)]
            self.table.append([sign * a for a in row] + artificial + [sign * b])
        self.basis = [num_columns + i for i in range(m)]
        self.width = num_columns + m

    def _pivot(self, r: int, c: int, objective: list[Fraction]) -> None:
        head = self.table[r]
        p = head[c]
        head = [a / p for a in head]
        self.table[r] = head
        for i, row in enumerate(self.table):
            f = row[c]
            if i != r and f != 0:
                self.table[i] = [a - f * b for a, b in zip(row, head)]
        f = objective[c]
        if f != 0:
            objective[:] = [a - f * b for a, b in zip(objective, head)]
        self.basis[r] = c

    def _reduced_costs(self, cost: list[Fraction]) -> list[Fraction]:
        z = list(cost) + [Fraction(0)]
        for i, row in enumerate(self.table):
            weight = cost[self.basis[i]]
            if weight != 0:
                z = [a - weight * b for a, b in zip(z, row)]
        return z

    def _iterate(self, z: list[Fraction], eligible: int) -> bool:
        """Runs Bland pivots; False when the objective is unbounded"""
        while True:
            entering = next((j for j in range(eligible) if z[j] > 0), None)
            if entering is None:
                return True
            best = None
            for i, row in enumerate(self.table):
                if row[entering] > 0:
                    key = (row[-1] / row[entering], self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return False
            self._pivot(best[1], entering, z)

    def _drop_artificials(self) -> None:
        r = 0
        while r < len(self.table):
            if self.basis[r] >= self.num_columns:
                c = next((j for j in range(self.num_columns) if self.table[r][j] != 0), None)
                if c is None:
                    del self.table[r]
                    del self.basis[r]
                    continue
                self._pivot(r, c, [Fraction(0)] * (self.width + 1))
            r += 1

    def maximize(self, objective: list[Fraction]) -> tuple[str, Optional[list[Fraction]]]:
        """
        Solves the program.

        :param objective: Cost coefficients of the structural variables.
        :type objective: list[Fraction]
        :return: Status and the structural variable values when optimal.
        :rtype: tuple[str, list[Fraction] | None]
        """
        phase_one = [Fraction(0)] * self.num_columns + [Fraction(-1)] * (self.width - self.num_columns)
        z = self._reduced_costs(phase_one)
        self._iterate(z, self.width)
        if z[-1] > 0:
            return 'infeasible', None

        self._drop_artificials()
        z = self._reduced_costs(list(objective) + [Fraction(0)] * (self.width - self.num_columns))
        if not self._iterate(z, self.num_columns):
            return 'unbounded', None

        values = [Fraction(0)] * self.num_columns
        for i, b in enumerate(self.basis):
            if b < self.num_columns:
                values[b] = self.table[i][-1]
        return 'optimal', values


def _dimension_of(constraints: Sequence[Constraint], dim: Optional[int]) -> int:
    sizes = {len(constraint.normal) for constraint in constraints}
    if dim is not None:
        sizes.add(dim)
    if len(sizes) > 1:
        raise DimensionMismatchError(f'constraints of mixed dimensions {sorted(sizes)}')
    if not sizes:
        raise DomainError('dimension of an empty constraint list must be given')
    return sizes.pop()


def _standard_form(constraints: Sequence[Constraint], dim: int, with_gap: bool):
    """
    Builds equality rows over [x⁺ | x⁻ | slacks | t | u] with x = x⁺ − x⁻.

    Strict rows read a·x − t − s = b, the gap t is capped by t + u = 1.
    """
    normalized = [constraint.normalized() for constraint in constraints]
    inequalities = [i for i, c in enumerate(normalized) if c.relation != '=']
    slack_column = {row: 2 * dim + k for k, row in enumerate(inequalities)}
    gap_column = 2 * dim + len(inequalities)
    num_columns = gap_column + (2 if with_gap else 0)

    rows, rhs = [], []
    for i, constraint in enumerate(normalized):
        row = [Fraction(0)] * num_columns
        for k, a in enumerate(constraint.normal):
            row[k] = a
            row[dim + k] = -a
        if i in slack_column:
            row[slack_column[i]] = Fraction(-1)
        if constraint.relation == '>':
            row[gap_column] = Fraction(-1)
        rows.append(row)
        rhs.append(constraint.offset)
    if with_gap:
        row = [Fraction(0)] * num_columns
        row[gap_column] = row[gap_column + 1] = Fraction(1)
        rows.append(row)
        rhs.append(Fraction(1))
    return rows, rhs, num_columns, gap_column


def _recover_point(values: list[Fraction], dim: int) -> RatVec:
    return tuple(values[k] - values[dim + k] for k in range(dim))


def lp_maximize(constraints: Sequence[Constraint], objective: RatVec, dim: Optional[int] = None) -> LPResult:
    """
    Maximizes objective·x over non-strict constraints.

    :raises DomainError: A strict constraint was given.
    """
    dim = _dimension_of(constraints, dim if dim is not None else len(objective))
    if any(constraint.relation in ('>', '<') for constraint in constraints):
        raise DomainError('lp_maximize accepts only non-strict constraints')
    rows, rhs, num_columns, _ = _standard_form(constraints, dim, with_gap=False)
    cost = [Fraction(0)] * num_columns
    for k, c in enumerate(objective):
        cost[k], cost[dim + k] = rat(c), -rat(c)
    status, values = SimplexTableau(rows, rhs, num_columns).maximize(cost)
    if status != 'optimal':
        return LPResult(status=status)
    point = _recover_point(values, dim)
    return LPResult(status='optimal', point=point, value=dot(vector(objective), point))


def lp_feasible(constraints: Sequence[Constraint], dim: Optional[int] = None) -> FeasibilityResult:
    """
    Decides whether a system of linear (in)equalities has a rational solution.

    Strict inequalities are relaxed with a shared gap variable t ∈ [0, 1] that
    is maximized; the system is feasible iff the optimum is positive.

    :param constraints: Constraints sharing one dimension.
    :type constraints: Sequence[Constraint]
    :param dim: Ambient dimension, required when constraints is empty.
    :type dim: int, optional
    :return: Feasibility with an exact witness point.
    :rtype: FeasibilityResult
    """
    dim = _dimension_of(constraints, dim)
    with_gap = any(constraint.relation in ('>', '<') for constraint in constraints)
    rows, rhs, num_columns, gap_column = _standard_form(constraints, dim, with_gap)
    cost = [Fraction(0)] * num_columns
    if with_gap:
        cost[gap_column] = Fraction(1)

    status, values = SimplexTableau(rows, rhs, num_columns).maximize(cost)
    if status != 'optimal' or (with_gap and values[gap_column] <= 0):
        return FeasibilityResult(feasible=False)

    point = _recover_point(values, dim)
    if not all(constraint.holds(point) for constraint in constraints):
        raise VerificationError('simplex witness violates a constraint')
    return FeasibilityResult(feasible=True, point=point)


@dataclass(frozen=True)
class AffineSubspace:
    """point + span(directions); directions are linearly independent"""
    point: RatVec
    directions: tuple[RatVec, ...] = field(default=())

    @property
    def dim(self) -> int:
        return len(self.directions)

    def at(self, parameters: Sequence) -> RatVec:
        result = self.point
        for coefficient, direction in zip(parameters, self.directions):
            result = add(result, scale(coefficient, direction))
        return result


def affine_solution_space(a: RatMat, b: RatVec, num_columns: Optional[int] = None) -> Optional[AffineSubspace]:
    """Solution set of A x = b as an affine subspace, None if empty"""
    solution = solve_linear(a, b, num_columns=num_columns)
    if not solution.solvable:
        return None
    return AffineSubspace(point=solution.point, directions=solution.kernel)
