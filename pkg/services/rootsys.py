import logging
from functools import cached_property
from fractions import Fraction
from typing import Optional
from dataclasses import dataclass, field
from services.exceptions import DomainError
from services.exactlin import RatMat, RatVec, add, gram_inner, inverse, matrix, scale, solve_linear, vector

# Node order follows Bourbaki's plates:
#   E6–E8  1 - 3 - 4 - 5 - 6 (- 7 (- 8)), with 2 attached to 4
#   F4     1 - 2 => 3 - 4, α1, α2 long
#   G2     1 <= 2, α1 short
RANK_BOUNDS = {'A': (1, None), 'B': (2, None), 'C': (3, None), 'D': (4, None), 'E': (6, 8), 'F': (4, 4), 'G': (2, 2)}

CLASSICAL_POSITIVE_ROOT_COUNTS = {'E6': 36, 'E7': 63, 'E8': 120, 'F4': 24, 'G2': 6}


@dataclass(frozen=True, order=True)
class RootSystemId:
    """Family letter and rank of an irreducible reduced root system"""
    family: str
    rank: int

    def __post_init__(self):
        if self.family not in RANK_BOUNDS:
            raise DomainError(f'unknown family {self.family!r}')
        low, high = RANK_BOUNDS[self.family]
        if not isinstance(self.rank, int) or self.rank < low or (high is not None and self.rank > high):
            raise DomainError(f'invalid rank {self.rank} for family {self.family}')

    @classmethod
    def parse(cls, text: str) -> 'RootSystemId':
        """Parses names such as 'E6' or 'A12'"""
        text = text.strip().upper()
        if len(text) < 2 or not text[1:].isdigit():
            raise DomainError(f'cannot parse root system name {text!r}')
        return cls(text[0], int(text[1:]))

    def __str__(self):
        return f'{self.family}{self.rank}'


def _edges(family: str, n: int) -> dict[tuple[int, int], Fraction]:
    """Off-diagonal inner products of simple roots, 1-based, long roots of squared length 2"""
    edges = {}
    if family in ('A', 'B'):
        edges = {(i, i + 1): Fraction(-1) for i in range(1, n)}
    elif family == 'C':
        edges = {(i, i + 1): Fraction(-1, 2) for i in range(1, n - 1)}
        edges[(n - 1, n)] = Fraction(-1)
    elif family == 'D':
        edges = {(i, i + 1): Fraction(-1) for i in range(1, n - 1)}
        edges[(n - 2, n)] = Fraction(-1)
    elif family == 'E':
        edges = {(1, 3): Fraction(-1), (2, 4): Fraction(-1)}
        edges.update({(i, i + 1): Fraction(-1) for i in range(3, n)})
    elif family == 'F':
        edges = {(1, 2): Fraction(-1), (2, 3): Fraction(-1), (3, 4): Fraction(-1, 2)}
    elif family == 'G':
        edges = {(1, 2): Fraction(-1)}
    return edges


def _squared_lengths(family: str, n: int) -> list[Fraction]:
    if family == 'B':
        return [Fraction(2)] * (n - 1) + [Fraction(1)]
    if family == 'C':
        return [Fraction(1)] * (n - 1) + [Fraction(2)]
    if family == 'F':
        return [Fraction(2), Fraction(2), Fraction(1), Fraction(1)]
    if family == 'G':
        return [Fraction(2, 3), Fraction(2)]
    return [Fraction(2)] * n


def gram_matrix(rs_id: RootSystemId, gram_scale: Fraction = Fraction(1)) -> RatMat:
    """
    Gram matrix of the simple roots in Bourbaki order.

    :param rs_id: Root system identifier.
    :type rs_id: RootSystemId
    :param gram_scale: Global positive factor applied to every entry.
    :type gram_scale: Fraction
    :return: Symmetric positive definite matrix, long roots of squared length 2·gram_scale.
    :rtype: RatMat
    """
    n = rs_id.rank
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i, length in enumerate(_squared_lengths(rs_id.family, n)):
        rows[i][i] = length
    for (i, j), value in _edges(rs_id.family, n).items():
        rows[i - 1][j - 1] = rows[j - 1][i - 1] = value
    return matrix([[gram_scale * value for value in row] for row in rows])


def cartan_matrix(gram: RatMat) -> tuple[tuple[int, ...], ...]:
    """a_ij = ⟨α_i^∨, α_j⟩ = 2(α_i, α_j)/(α_i, α_i)"""
    n = len(gram)
    entries = [[2 * gram[i][j] / gram[i][i] for j in range(n)] for i in range(n)]
    if any(value.denominator != 1 for row in entries for value in row):
        raise DomainError('Gram matrix does not define integral Cartan data')
    return tuple(tuple(int(value) for value in row) for row in entries)


def positive_roots_by_closure(cartan: tuple[tuple[int, ...], ...]) -> tuple[tuple[int, ...], ...]:
    """
    Positive roots in the α-basis, generated height by height.

    β + α_i is a root iff q > 0 in the α_i-string β − pα_i, …, β + qα_i,
    where p is read off the roots already found and q = p − ⟨β, α_i^∨⟩.

    :param cartan: Cartan matrix a_ij = ⟨α_i^∨, α_j⟩.
    :type cartan: tuple[tuple[int, ...], ...]
    :return: Positive roots sorted by height, then lexicographically.
    :rtype: tuple[tuple[int, ...], ...]
    """
    n = len(cartan)
    simple = [tuple(int(k == i) for k in range(n)) for i in range(n)]
    found = set(simple)
    level = list(simple)
    while level:
        next_level = []
        for beta in level:
            for i in range(n):
                p = 0
                lower = list(beta)
                lower[i] -= 1
                while tuple(lower) in found:
                    p += 1
                    lower[i] -= 1
                pairing = sum(beta[k] * cartan[i][k] for k in range(n))
                if p - pairing > 0:
                    raised = list(beta)
                    raised[i] += 1
                    raised = tuple(raised)
                    if raised not in found:
                        found.add(raised)
                        next_level.append(raised)
        level = next_level
    return tuple(sorted(found, key=lambda root: (sum(root), root)))


@dataclass(frozen=True, eq=False)
class RootSystem:
    """
    Exact data of an irreducible reduced root system.

    Vectors are coordinates in the simple-root basis α_1 … α_n; index j in J,
    marks and coweights are 1-based in the mathematical sense and stored in
    0-based tuples (coweights[j - 1] is ϖ_j^∨).
    """
    id: RootSystemId
    gram: RatMat
    cartan: tuple[tuple[int, ...], ...]
    positive_roots: tuple[tuple[int, ...], ...]
    highest_root: RatVec
    marks: tuple[int, ...]
    coweights: tuple[RatVec, ...]
    minuscule: frozenset[int]
    gram_scale: Fraction = field(default=Fraction(1))

    @property
    def rank(self) -> int:
        return self.id.rank

    @property
    def indices(self) -> range:
        return range(1, self.rank + 1)

    def simple_root(self, i: int) -> RatVec:
        return tuple(Fraction(int(k == i - 1)) for k in range(self.rank))

    def coweight(self, j: int) -> RatVec:
        return self.coweights[j - 1]

    def mark(self, j: int) -> int:
        return self.marks[j - 1]

    def node_root(self, i: int) -> RatVec:
        """Root attached to node i of the affine diagram: −α₀ for i = 0, α_i otherwise"""
        return scale(-1, self.highest_root) if i == 0 else self.simple_root(i)

    def node_roots(self) -> tuple[RatVec, ...]:
        return tuple(self.node_root(i) for i in range(self.rank + 1))

    def all_roots(self) -> tuple[RatVec, ...]:
        positive = [vector(root) for root in self.positive_roots]
        return tuple(positive + [scale(-1, root) for root in positive])

    def is_root(self, x: RatVec) -> bool:
        key = tuple(x)
        if any(value.denominator != 1 for value in key):
            return False
        key = tuple(int(value) for value in key)
        return key in self._root_index or tuple(-value for value in key) in self._root_index

    @cached_property
    def _root_index(self) -> frozenset:
        return frozenset(self.positive_roots)

    def inner(self, x: RatVec, y: RatVec) -> Fraction:
        return gram_inner(self.gram, x, y)

    def coroot(self, x: RatVec) -> RatVec:
        """α^∨ = 2α/(α, α)"""
        return scale(2 / self.inner(x, x), x)

    def pairing(self, i: int, x: RatVec) -> Fraction:
        """(α_i, x)"""
        return self.inner(self.simple_root(i), x)

    def to_coweight_basis(self, x: RatVec) -> RatVec:
        """Coordinates of x in the basis ϖ_1^∨ … ϖ_n^∨, i.e. the values (α_i, x)"""
        return tuple(self.pairing(i, x) for i in self.indices)

    def from_coweight_basis(self, coefficients) -> RatVec:
        result = tuple(Fraction(0) for _ in range(self.rank))
        for j, c in zip(self.indices, coefficients):
            result = add(result, scale(c, self.coweight(j)))
        return result

    def __repr__(self):
        return f'<RootSystem({self.id}, marks={self.marks}, minuscule={sorted(self.minuscule)})>'


def build(rs_id: RootSystemId, gram_scale: Fraction = Fraction(1)) -> RootSystem:
    """
    Builds the root system of the given type.

    :param rs_id: Validated identifier.
    :type rs_id: RootSystemId
    :param gram_scale: Global factor on the inner product, used to check scale invariance.
    :type gram_scale: Fraction
    :return: Fully populated root system.
    :rtype: RootSystem
    """
    gram_scale = Fraction(gram_scale)
    if gram_scale <= 0:
        raise DomainError('gram_scale must be positive')
    gram = gram_matrix(rs_id, gram_scale)
    cartan = cartan_matrix(gram)
    positive = positive_roots_by_closure(cartan)
    highest = max(positive, key=sum)
    marks = tuple(highest)
    coweights = inverse(gram)
    logging.info(f' Built {rs_id}: {len(positive)} positive roots, marks {marks}')
    return RootSystem(
        id=rs_id,
        gram=gram,
        cartan=cartan,
        positive_roots=positive,
        highest_root=vector(highest),
        marks=marks,
        coweights=coweights,
        minuscule=frozenset(j for j, m in enumerate(marks, start=1) if m == 1),
        gram_scale=gram_scale,
    )


def classical_positive_root_count(rs_id: RootSystemId) -> int:
    n = rs_id.rank
    if rs_id.family == 'A':
        return n * (n + 1) // 2
    if rs_id.family in ('B', 'C'):
        return n * n
    if rs_id.family == 'D':
        return n * (n - 1)
    return CLASSICAL_POSITIVE_ROOT_COUNTS[str(rs_id)]


def alcove_vertices(rs: RootSystem) -> tuple[RatVec, ...]:
    """{0, ϖ_i^∨/m_i}"""
    zero = tuple(Fraction(0) for _ in range(rs.rank))
    return (zero,) + tuple(scale(Fraction(1, rs.mark(i)), rs.coweight(i)) for i in rs.indices)


def simple_system_basis(rs: RootSystem, j: int) -> tuple[RatVec, ...]:
    """Π_j = {−α₀} ∪ {α_i : i ≠ j}, listed with −α₀ first"""
    if j not in rs.indices:
        raise DomainError(f'index {j} outside 1..{rs.rank}')
    return (rs.node_root(0),) + tuple(rs.simple_root(i) for i in rs.indices if i != j)


def coordinates_in_basis(basis: tuple[RatVec, ...], x: RatVec) -> Optional[RatVec]:
    columns = tuple(tuple(member[k] for member in basis) for k in range(len(x)))
    solution = solve_linear(columns, x)
    return solution.point if solution.status == 'unique' else None


def is_simple_system(rs: RootSystem, j: int) -> bool:
    """
    Whether Π_j is a system of simple roots.

    Checked directly: every positive root must have integer coordinates in the
    Π_j basis that are all ≥ 0 or all ≤ 0.
    """
    basis = simple_system_basis(rs, j)
    for root in rs.positive_roots:
        coordinates = coordinates_in_basis(basis, vector(root))
        if coordinates is None or any(c.denominator != 1 for c in coordinates):
            return False
        if not (all(c >= 0 for c in coordinates) or all(c <= 0 for c in coordinates)):
            return False
    return True


def is_lowest_root(rs: RootSystem, j: int) -> bool:
    """α_j − β is not a root for any β in Π_j"""
    alpha = rs.simple_root(j)
    return not any(rs.is_root(tuple(a - b for a, b in zip(alpha, beta))) for beta in simple_system_basis(rs, j))
