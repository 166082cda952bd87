import logging
from functools import lru_cache
from typing import Iterable, Optional
from dataclasses import dataclass, field
from services.rootsys import RootSystem, alcove_vertices
from services.exceptions import DomainError, VerificationError
from functions.groups import multiplication_table, structure_label
from services.exactlin import (
    AffineSubspace, RatMat, RatVec, add, affine_solution_space, identity, inverse, mat_mul, mat_sub,
    mat_vec, scale, sub, transpose, unit_vector, zero_vector,
)


def preserves_gram(rs: RootSystem, linear: RatMat) -> bool:
    """Mᵀ G M = G"""
    return mat_mul(mat_mul(transpose(linear), rs.gram), linear) == rs.gram


@dataclass(frozen=True)
class WeylElement:
    """Element of the finite Weyl group; equality is matrix equality, the word is informational"""
    matrix: RatMat
    word: tuple[int, ...] = field(default=(), compare=False)

    def __call__(self, x: RatVec) -> RatVec:
        return mat_vec(self.matrix, x)

    def compose(self, other: 'WeylElement') -> 'WeylElement':
        """self ∘ other"""
        return WeylElement(mat_mul(self.matrix, other.matrix), self.word + other.word)

    @property
    def length(self) -> int:
        return len(self.word)


@dataclass(frozen=True)
class AffineIsometry:
    """x ↦ linear·x + translation, coordinates in the α-basis"""
    linear: RatMat
    translation: RatVec

    @classmethod
    def identity(cls, n: int) -> 'AffineIsometry':
        return cls(identity(n), zero_vector(n))

    @classmethod
    def from_weyl(cls, element: WeylElement, translation: Optional[RatVec] = None) -> 'AffineIsometry':
        n = len(element.matrix)
        return cls(element.matrix, translation if translation is not None else zero_vector(n))

    @property
    def dim(self) -> int:
        return len(self.linear)

    def __call__(self, x: RatVec) -> RatVec:
        return add(mat_vec(self.linear, x), self.translation)

    def compose(self, other: 'AffineIsometry') -> 'AffineIsometry':
        """self ∘ other"""
        return AffineIsometry(
            linear=mat_mul(self.linear, other.linear),
            translation=add(mat_vec(self.linear, other.translation), self.translation),
        )

    def inverse(self) -> 'AffineIsometry':
        linear = inverse(self.linear)
        return AffineIsometry(linear, scale(-1, mat_vec(linear, self.translation)))

    def power(self, k: int) -> 'AffineIsometry':
        result = AffineIsometry.identity(self.dim)
        for _ in range(k):
            result = result.compose(self)
        return result

    def is_identity(self) -> bool:
        return self == AffineIsometry.identity(self.dim)

    def fixes(self, x: RatVec) -> bool:
        return self(x) == tuple(x)

    def fixed_space(self) -> Optional[AffineSubspace]:
        """Solutions of (linear − id) x = −translation; None when g has no fixed point"""
        return affine_solution_space(mat_sub(self.linear, identity(self.dim)), scale(-1, self.translation))


def simple_reflection(rs: RootSystem, i: int) -> WeylElement:
    """
    s_i(x) = x − (α_i^∨, x) α_i as a matrix on α-coordinates.

    :param rs: Root system.
    :type rs: RootSystem
    :param i: Index 1 ≤ i ≤ n.
    :type i: int
    :rtype: WeylElement
    """
    if i not in rs.indices:
        raise DomainError(f'simple reflection index {i} outside 1..{rs.rank}')
    n = rs.rank
    factor = 2 / rs.gram[i - 1][i - 1]
    rows = [list(row) for row in identity(n)]
    for k in range(n):
        rows[i - 1][k] -= factor * rs.gram[i - 1][k]
    return WeylElement(tuple(tuple(row) for row in rows), (i,))


def longest_element(rs: RootSystem, subset: Iterable[int]) -> WeylElement:
    """
    Longest element of the parabolic subgroup W_subset by dominance descent.

    Starting from ρ_subset = Σ_{i ∈ subset} ϖ_i^∨, reflect by s_i while
    (α_i, x) > 0 for some i in the subset. The result sends ρ_subset to the
    antidominant chamber of the subsystem, which characterizes w₀ since
    ρ_subset is regular for W_subset.

    :param rs: Root system.
    :type rs: RootSystem
    :param subset: Indices of the parabolic subsystem.
    :type subset: Iterable[int]
    :return: The principal involution of the subsystem with a reduced word.
    :rtype: WeylElement
    """
    subset = sorted(set(subset))
    if any(i not in rs.indices for i in subset):
        raise DomainError(f'subset {subset} not inside 1..{rs.rank}')
    reflections = {i: simple_reflection(rs, i) for i in subset}
    x = zero_vector(rs.rank)
    for i in subset:
        x = add(x, rs.coweight(i))

    element = WeylElement(identity(rs.rank), ())
    while True:
        descent = next((i for i in subset if rs.pairing(i, x) > 0), None)
        if descent is None:
            return element
        x = reflections[descent](x)
        element = reflections[descent].compose(element)


def node_permutation(rs: RootSystem, linear: RatMat) -> Optional[tuple[int, ...]]:
    """
    Images of the affine nodes under a linear map: result[i] = k when linear(r_i) = r_k,
    with r_0 = −α₀ and r_i = α_i. None if the node roots are not permuted.
    """
    roots = rs.node_roots()
    position = {root: k for k, root in enumerate(roots)}
    images = []
    for root in roots:
        image = mat_vec(linear, root)
        if image not in position:
            return None
        images.append(position[image])
    return tuple(images) if len(set(images)) == len(images) else None


def _require_minuscule(rs: RootSystem, j: int) -> None:
    if j not in rs.minuscule:
        raise DomainError(f'index {j} is not minuscule in {rs.id} (J = {sorted(rs.minuscule)})')


def v_element(rs: RootSystem, j: int) -> WeylElement:
    """
    v_j = w_j⁻ w⁻.

    :raises DomainError: j is not minuscule.
    :raises VerificationError: v_j(−α₀) ≠ α_j or v_j does not permute the affine nodes.
    """
    _require_minuscule(rs, j)
    w = longest_element(rs, rs.indices)
    w_j = longest_element(rs, (i for i in rs.indices if i != j))
    v = w_j.compose(w)
    if v(rs.node_root(0)) != rs.simple_root(j):
        raise VerificationError(f'v_{j} does not send -alpha_0 to alpha_{j} in {rs.id}')
    if node_permutation(rs, v.matrix) is None:
        raise VerificationError(f'v_{j} does not permute the affine simple roots of {rs.id}')
    return v


def maps_alcove_to_itself(rs: RootSystem, g: AffineIsometry) -> bool:
    vertices = set(alcove_vertices(rs))
    return {g(vertex) for vertex in vertices} == vertices


def omega_element(rs: RootSystem, j: int) -> AffineIsometry:
    """
    ω_j = t_{ϖ_j^∨} v_j.

    :raises DomainError: j is not minuscule.
    """
    omega = AffineIsometry.from_weyl(v_element(rs, j), rs.coweight(j))
    if not maps_alcove_to_itself(rs, omega):
        raise VerificationError(f'omega_{j} does not stabilize the alcove of {rs.id}')
    return omega


def affine_wall_reflection(rs: RootSystem, k: int) -> AffineIsometry:
    """
    Reflection in the k-th wall of the alcove: H_k = {(α_k, x) = 0} for k ≥ 1
    and H_0 = {(α₀, x) = 1}.
    """
    if k:
        return AffineIsometry.from_weyl(simple_reflection(rs, k))
    coroot = rs.coroot(rs.highest_root)
    covector = mat_vec(rs.gram, rs.highest_root)
    n = rs.rank
    linear = tuple(tuple(unit_vector(n, r)[c] - coroot[r] * covector[c] for c in range(n)) for r in range(n))
    return AffineIsometry(linear, coroot)


@dataclass(frozen=True)
class FundamentalGroup:
    """
    Ω = {1} ∪ {ω_j : j ∈ J}.

    indices[k] is 0 for the identity and j for ω_j; table[a][b] indexes elements[a]∘elements[b].
    """
    elements: tuple[AffineIsometry, ...]
    indices: tuple[int, ...]
    table: tuple[tuple[int, ...], ...]
    label: str

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple('1' if j == 0 else f'omega_{j}' for j in self.indices)

    def element(self, j: int) -> AffineIsometry:
        return self.elements[self.indices.index(j)]


@lru_cache(maxsize=None)
def fundamental_group(rs: RootSystem) -> FundamentalGroup:
    """
    Builds Ω with its multiplication table computed by exact composition.

    :param rs: Root system.
    :type rs: RootSystem
    :rtype: FundamentalGroup
    """
    indices = (0,) + tuple(sorted(rs.minuscule))
    elements = tuple(AffineIsometry.identity(rs.rank) if j == 0 else omega_element(rs, j) for j in indices)
    try:
        table = multiplication_table(elements, lambda a, b: a.compose(b))
    except ValueError as error:
        raise VerificationError(f'fundamental group of {rs.id} is not closed') from error
    label = structure_label(table)
    logging.info(f' Fundamental group of {rs.id}: order {len(elements)}, {label}')
    return FundamentalGroup(elements, indices, tuple(tuple(row) for row in table), label)


def translated_alcove_vertices(rs: RootSystem, shift: RatVec) -> set[RatVec]:
    return {sub(vertex, shift) for vertex in alcove_vertices(rs)}


def dirichlet_domain(rs: RootSystem):
    """
    𝒜 ∩ {(ϖ_j^∨, x) ≤ ‖ϖ_j^∨‖²/2 : j ∈ J}, the points of the alcove at least as
    close to 0 as to every minuscule vertex.

    :rtype: HPolytope
    """
    from services.polytope import HalfSpace, alcove

    base = alcove(rs)
    extra = tuple(
        HalfSpace(rs.coweight(j), rs.inner(rs.coweight(j), rs.coweight(j)) / 2, '<=', f'D{j}')
        for j in sorted(rs.minuscule)
    )
    return base.with_halfspaces(extra, label=f'dirichlet({rs.id})')


def expected_fundamental_group_label(rs: RootSystem) -> str:
    """Published isomorphism type of Ω ≅ P^∨/Q^∨"""
    family, n = rs.id.family, rs.rank
    if family == 'A':
        return f'Z{n + 1}'
    if family == 'D':
        return 'Z2xZ2' if n % 2 == 0 else 'Z4'
    if family in ('B', 'C') or str(rs.id) == 'E7':
        return 'Z2'
    if str(rs.id) == 'E6':
        return 'Z3'
    return '1'
