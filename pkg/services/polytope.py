import math
import logging
from fractions import Fraction
from itertools import combinations
from functools import cached_property
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union
from functions.settings import face_cap
from services.rootsys import RootSystem
from services.weyl import AffineIsometry
from services.diagram import DiagramAut, linear_realization
from services.exceptions import (
    BalanceError, DegeneratePolytopeError, DimensionMismatchError, DomainError, FaceCapExceededError,
    UnboundedPolytopeError,
)
from services.exactlin import (
    Constraint, RatMat, RatVec, add, determinant, dot, gram_inner, identity, integer_row, lp_feasible,
    lp_maximize, mat_mul, mat_vec, rank, rat, scale, sub, transpose, unique_solution, unit_vector,
    vector, zero_vector,
)

SENSES = ('>=', '<=')


@dataclass(frozen=True)
class HalfSpace:
    """(normal, x) ≥ offset or ≤ offset, with normal in α-coordinates paired through the Gram matrix"""
    normal: RatVec
    offset: Fraction
    sense: str = '>='
    label: str = ''

    def __post_init__(self):
        if self.sense not in SENSES:
            raise DomainError(f'half-space sense must be one of {SENSES}, got {self.sense!r}')
        object.__setattr__(self, 'normal', vector(self.normal))
        object.__setattr__(self, 'offset', rat(self.offset))
        if all(c == 0 for c in self.normal):
            raise DomainError(f'half-space {self.label or "?"} has a zero normal')

    def coefficients(self, gram: RatMat) -> RatVec:
        """Plain coordinate coefficients G·normal of the linear form x ↦ (normal, x)"""
        return mat_vec(gram, self.normal)

    def constraint(self, gram: RatMat, strict: bool = False) -> Constraint:
        relation = self.sense[0] if strict else self.sense
        return Constraint(self.coefficients(gram), self.offset, relation)

    def slack(self, gram: RatMat, x: RatVec) -> Fraction:
        """Non-negative exactly on the half-space, zero on its boundary"""
        value = gram_inner(gram, self.normal, x)
        return value - self.offset if self.sense == '>=' else self.offset - value


@dataclass(frozen=True)
class HPolytope:
    gram: RatMat
    halfspaces: tuple[HalfSpace, ...]
    label: str = ''

    def __post_init__(self):
        object.__setattr__(self, 'halfspaces', tuple(self.halfspaces))
        for halfspace in self.halfspaces:
            if len(halfspace.normal) != len(self.gram):
                raise DimensionMismatchError(f'half-space {halfspace.label} does not live in dimension {len(self.gram)}')

    @property
    def dim(self) -> int:
        return len(self.gram)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(halfspace.label for halfspace in self.halfspaces)

    def with_halfspaces(self, extra: Iterable[HalfSpace], label: Optional[str] = None) -> 'HPolytope':
        return HPolytope(self.gram, self.halfspaces + tuple(extra), self.label if label is None else label)

    def constraints(self, strict: bool = False) -> list[Constraint]:
        return [halfspace.constraint(self.gram, strict) for halfspace in self.halfspaces]

    def contains(self, x: RatVec) -> bool:
        return all(halfspace.slack(self.gram, x) >= 0 for halfspace in self.halfspaces)

    def interior_point(self) -> Optional[RatVec]:
        """A point satisfying every constraint strictly, or None for lower-dimensional or empty input"""
        return lp_feasible(self.constraints(strict=True), dim=self.dim).point

    def integer_rows(self) -> list[list[int]]:
        """Each half-space as an integer row [a_1 … a_n | b] meaning a·x ≥ b"""
        rows = []
        for halfspace in self.halfspaces:
            sign = 1 if halfspace.sense == '>=' else -1
            coefficients = scale(sign, halfspace.coefficients(self.gram))
            rows.append(integer_row(list(coefficients) + [sign * halfspace.offset]))
        return rows


@dataclass(frozen=True)
class VPolytope:
    """
    Vertices of an H-polytope with their incidences.

    incidence[v] is the set of half-space indices tight at vertex v.
    """
    source: HPolytope
    vertices: tuple[RatVec, ...]
    incidence: tuple[frozenset[int], ...]

    @property
    def dim(self) -> int:
        return self.source.dim

    def vertex_set(self) -> frozenset[RatVec]:
        return frozenset(self.vertices)

    @cached_property
    def _by_halfspace(self) -> tuple[frozenset[int], ...]:
        return tuple(
            frozenset(v for v, tight in enumerate(self.incidence) if h in tight)
            for h in range(len(self.source.halfspaces))
        )

    def tight_vertices(self, h: int) -> frozenset[int]:
        return self._by_halfspace[h]

    def common_halfspaces(self, vertices: Iterable[int]) -> frozenset[int]:
        vertices = list(vertices)
        if not vertices:
            return frozenset(range(len(self.source.halfspaces)))
        return frozenset.intersection(*(self.incidence[v] for v in vertices))

    def incidence_matrix(self) -> list[list[bool]]:
        return [[h in tight for h in range(len(self.source.halfspaces))] for tight in self.incidence]

    def points(self, indices: Iterable[int]) -> list[RatVec]:
        return [self.vertices[v] for v in sorted(indices)]


@dataclass(frozen=True)
class Face:
    """A nonempty face, identified by the indices of its vertices"""
    vertices: frozenset[int]
    dim: int
    halfspaces: frozenset[int] = field(default=frozenset())

    def centroid(self, polytope: VPolytope) -> RatVec:
        total = zero_vector(polytope.dim)
        for point in polytope.points(self.vertices):
            total = add(total, point)
        return scale(Fraction(1, len(self.vertices)), total)

    def labels(self, polytope: VPolytope) -> list[str]:
        return [polytope.source.halfspaces[h].label for h in sorted(self.halfspaces)]


def affine_rank(points: list[RatVec]) -> int:
    """Dimension of the affine hull; −1 for no points"""
    if not points:
        return -1
    differences = [sub(point, points[0]) for point in points[1:]]
    return rank(differences) if differences else 0


def alcove(rs: RootSystem) -> HPolytope:
    """𝒜 = {(α_i, x) ≥ 0, (α₀, x) ≤ 1}"""
    halfspaces = [HalfSpace(rs.simple_root(i), 0, '>=', f'H{i}') for i in rs.indices]
    halfspaces.append(HalfSpace(rs.highest_root, 1, '<=', 'H0'))
    return HPolytope(rs.gram, tuple(halfspaces), f'alcove({rs.id})')


def komrakov_premet(rs: RootSystem) -> HPolytope:
    """
    𝒦: the alcove cut by (α₀ + α_j, x) ≤ 1 for every minuscule j.

    :param rs: Root system.
    :type rs: RootSystem
    :return: The alcove itself when J is empty.
    :rtype: HPolytope
    """
    extra = tuple(
        HalfSpace(add(rs.highest_root, rs.simple_root(j)), 1, '<=', f'H{j}^0') for j in sorted(rs.minuscule)
    )
    return alcove(rs).with_halfspaces(extra, label=f'kp({rs.id})')


def _check_bounded(polytope: HPolytope) -> None:
    constraints = polytope.constraints()
    for k in range(polytope.dim):
        for sign in (1, -1):
            result = lp_maximize(constraints, scale(sign, unit_vector(polytope.dim, k)), dim=polytope.dim)
            if result.status == 'unbounded':
                raise UnboundedPolytopeError(f'{polytope.label or "polytope"} is unbounded along coordinate {k + 1}')
            if result.status == 'infeasible':
                raise DegeneratePolytopeError(f'{polytope.label or "polytope"} is empty')


def _scaled(point: RatVec) -> tuple[list[int], int]:
    denominator = math.lcm(*(value.denominator for value in point))
    return [value.numerator * (denominator // value.denominator) for value in point], denominator


def enumerate_vertices(polytope: HPolytope) -> VPolytope:
    """
    Exact vertices of a bounded H-polytope.

    Every n-subset of the half-space hyperplanes is solved as a square integer
    system; solutions satisfying all constraints are the vertices.

    :param polytope: Bounded polytope.
    :type polytope: HPolytope
    :raises UnboundedPolytopeError: Some coordinate is unbounded on the polytope.
    :return: Vertices sorted lexicographically, with incidences.
    :rtype: VPolytope
    """
    _check_bounded(polytope)
    n = polytope.dim
    rows = polytope.integer_rows()
    found = {}
    systems = 0
    for subset in combinations(range(len(rows)), n):
        systems += 1
        point = unique_solution([rows[h] for h in subset], n)
        if point is None or point in found:
            continue
        numerators, denominator = _scaled(point)
        values = [sum(a * p for a, p in zip(row, numerators)) - row[n] * denominator for row in rows]
        if all(value >= 0 for value in values):
            found[point] = frozenset(h for h, value in enumerate(values) if value == 0)

    vertices = tuple(sorted(found))
    logging.info(f' {polytope.label or "polytope"}: {len(vertices)} vertices from {systems} systems')
    return VPolytope(polytope, vertices, tuple(found[vertex] for vertex in vertices))


def _as_vpolytope(polytope: Union[HPolytope, VPolytope]) -> VPolytope:
    return enumerate_vertices(polytope) if isinstance(polytope, HPolytope) else polytope


def kp_vertices_closed_form(rs: RootSystem) -> list[RatVec]:
    """{ϖ_i^∨/m_i : i ∉ J} ∪ {Σ_{j∈L} ϖ_j^∨/(|L|+1) : L ⊆ J}"""
    points = {scale(Fraction(1, rs.mark(i)), rs.coweight(i)) for i in rs.indices if i not in rs.minuscule}
    minuscule = sorted(rs.minuscule)
    for size in range(len(minuscule) + 1):
        for subset in combinations(minuscule, size):
            total = zero_vector(rs.rank)
            for j in subset:
                total = add(total, rs.coweight(j))
            points.add(scale(Fraction(1, size + 1), total))
    return sorted(points)


def bounding_hyperplanes(polytope: Union[HPolytope, VPolytope]) -> list[HalfSpace]:
    """
    Half-spaces whose tight vertices span a hyperplane, in definition order.

    :param polytope: Full-dimensional polytope.
    :rtype: list[HalfSpace]
    """
    vpoly = _as_vpolytope(polytope)
    return [
        halfspace for h, halfspace in enumerate(vpoly.source.halfspaces)
        if affine_rank(vpoly.points(vpoly.tight_vertices(h))) == vpoly.dim - 1
    ]


@dataclass(frozen=True)
class BalancedRoot:
    """v = Σ_{plus} α_i − Σ_{minus} α_i with involution(v) = −v"""
    plus: frozenset[int]
    minus: frozenset[int]
    vector: RatVec
    involution: DiagramAut
    minuscule: bool = True

    @property
    def support(self) -> frozenset[int]:
        return self.plus | self.minus

    def describe(self) -> str:
        terms = [f'+ alpha_{i}' for i in sorted(self.plus)] + [f'- alpha_{i}' for i in sorted(self.minus)]
        return ' '.join(terms).removeprefix('+ ')


def finite_diagram_aut(rs: RootSystem, mapping: dict[int, int]) -> DiagramAut:
    return DiagramAut(tuple(rs.indices), tuple(mapping.get(i, i) for i in rs.indices))


def standard_involution(rs: RootSystem) -> Optional[DiagramAut]:
    """φ₀: the involution of D that the balanced roots are anti-invariant under"""
    family, n = rs.id.family, rs.rank
    if family == 'A' and n >= 2:
        return finite_diagram_aut(rs, {i: n + 1 - i for i in rs.indices})
    if family == 'D':
        return finite_diagram_aut(rs, {n - 1: n, n: n - 1})
    if str(rs.id) == 'E6':
        return finite_diagram_aut(rs, {1: 6, 6: 1, 3: 5, 5: 3})
    return None


def balanced_root(rs: RootSystem, phi: DiagramAut, plus: Iterable[int], minus: Iterable[int],
                  minuscule: bool = True) -> BalancedRoot:
    """
    Builds and checks a balanced root.

    :param rs: Root system.
    :type rs: RootSystem
    :param phi: Involution of the finite diagram.
    :type phi: DiagramAut
    :param plus: Indices with coefficient +1.
    :param minus: Indices with coefficient −1.
    :param minuscule: Require the support to lie in J.
    :type minuscule: bool
    :raises BalanceError: Empty, overlapping, unswapped or non-minuscule support, or φ(v) ≠ −v.
    :rtype: BalancedRoot
    """
    plus, minus = frozenset(plus), frozenset(minus)
    if not plus or plus & minus:
        raise BalanceError(f'support {sorted(plus)}:{sorted(minus)} must be nonempty and disjoint')
    if not (plus | minus) <= set(rs.indices):
        raise BalanceError(f'support {sorted(plus | minus)} outside 1..{rs.rank}')
    if frozenset(phi(i) for i in plus) != minus:
        raise BalanceError(f'{phi.cycles()} does not map {sorted(plus)} onto {sorted(minus)}')
    if minuscule and not (plus | minus) <= rs.minuscule:
        raise BalanceError(f'support {sorted(plus | minus)} is not minuscule (J = {sorted(rs.minuscule)})')

    v = zero_vector(rs.rank)
    for i in plus:
        v = add(v, rs.simple_root(i))
    for i in minus:
        v = sub(v, rs.simple_root(i))
    if mat_vec(linear_realization(rs, phi), v) != scale(-1, v):
        raise BalanceError(f'{phi.cycles()} does not negate the root')
    return BalancedRoot(plus, minus, v, phi, minuscule)


def default_balanced_roots(rs: RootSystem) -> tuple[BalancedRoot, ...]:
    """
    Balanced roots cutting 𝒦 down to a fundamental polytope of Aut(𝒜); empty when Aut(D) = 1.

    D₄ carries two: α₃ − α₄ for the swap (3 4) and α₁ − α₃ for (1 3).
    """
    family, n = rs.id.family, rs.rank
    phi = standard_involution(rs)
    if family == 'A' and n >= 2:
        half = range(1, n // 2 + 1)
        return (balanced_root(rs, phi, half, (n + 1 - i for i in half)),)
    if family == 'D' and n == 4:
        return (
            balanced_root(rs, phi, {3}, {4}),
            balanced_root(rs, finite_diagram_aut(rs, {1: 3, 3: 1}), {1}, {3}),
        )
    if family == 'D':
        return (balanced_root(rs, phi, {n - 1}, {n}),)
    if str(rs.id) == 'E6':
        return (balanced_root(rs, phi, {1}, {6}),)
    return ()


def fundamental_polytope(rs: RootSystem, roots: Optional[Iterable[BalancedRoot]] = None) -> HPolytope:
    """
    ℒ = {x ∈ 𝒦 : (v, x) ≥ 0 for every balanced root v}.

    :param rs: Root system.
    :type rs: RootSystem
    :param roots: Override for the per-type balanced roots.
    :raises DegeneratePolytopeError: The slices leave no interior.
    :rtype: HPolytope
    """
    roots = default_balanced_roots(rs) if roots is None else tuple(roots)
    extra = tuple(HalfSpace(root.vector, 0, '>=', f'H0^{k}') for k, root in enumerate(roots))
    result = komrakov_premet(rs).with_halfspaces(extra, label=f'fundamental({rs.id})')
    if result.interior_point() is None:
        raise DegeneratePolytopeError(f'balanced slices leave no interior in {result.label}')
    return result


def vertex_count_formula_A(n: int) -> int:
    """2^{n−1} + ((3 − (−1)^n)/4)·C(2⌊n/2⌋, ⌊n/2⌋)"""
    if n < 2:
        raise DomainError(f'vertex count formula needs n >= 2, got {n}')
    k = n // 2
    central = math.comb(2 * k, k)
    return 2 ** (n - 1) + (central // 2 if n % 2 == 0 else central)


def sign_filtered_subsets(rs: RootSystem, roots: Iterable[BalancedRoot]) -> list[tuple[int, ...]]:
    """Subsets L ⊆ J with |L ∩ plus| ≥ |L ∩ minus| for every root"""
    roots = tuple(roots)
    minuscule = sorted(rs.minuscule)
    kept = []
    for size in range(len(minuscule) + 1):
        for subset in combinations(minuscule, size):
            members = set(subset)
            if all(len(members & root.plus) >= len(members & root.minus) for root in roots):
                kept.append(subset)
    return kept


def balanced_pairing(rs: RootSystem, root: BalancedRoot, subset: Iterable[int]) -> Fraction:
    """(v, Σ_{j ∈ subset} ϖ_j^∨)"""
    total = zero_vector(rs.rank)
    for j in subset:
        total = add(total, rs.coweight(j))
    return rs.inner(root.vector, total)


def inherited_vertices(rs: RootSystem, roots: Iterable[BalancedRoot]) -> list[RatVec]:
    """Vertices of 𝒦 on the non-negative side of every balanced root"""
    roots = tuple(roots)
    return [
        vertex for vertex in kp_vertices_closed_form(rs)
        if all(rs.inner(root.vector, vertex) >= 0 for root in roots)
    ]


def _subfaces(polytope: VPolytope, face: frozenset[int]) -> dict[frozenset[int], int]:
    """
    Facets of a face, each with one half-space cutting it out.

    The facets are the inclusion-maximal nonempty proper intersections of the
    face with the tight sets of the half-spaces not tight on the whole face.
    """
    common = polytope.common_halfspaces(face)
    candidates = {}
    for h in range(len(polytope.source.halfspaces)):
        if h in common:
            continue
        part = face & polytope.tight_vertices(h)
        if part and part not in candidates:
            candidates[part] = h
    return {part: h for part, h in candidates.items() if not any(part < other for other in candidates)}


def face_lattice(polytope: Union[HPolytope, VPolytope], cap: Optional[int] = None) -> list[Face]:
    """
    All nonempty faces, from the polytope itself down to its vertices.

    :param polytope: Polytope, enumerated first when given in H-form.
    :param cap: Maximal number of faces, ALCOVE_FACE_CAP by default.
    :type cap: int, optional
    :raises FaceCapExceededError: More faces than the cap.
    :return: Faces sorted by decreasing dimension, then vertex indices.
    :rtype: list[Face]
    """
    vpoly = _as_vpolytope(polytope)
    cap = face_cap() if cap is None else cap
    top = frozenset(range(len(vpoly.vertices)))
    if not top:
        return []
    dims = {top: affine_rank(list(vpoly.vertices))}
    frontier = [top]
    while frontier:
        next_frontier = []
        for face in frontier:
            for part in _subfaces(vpoly, face):
                if part in dims:
                    continue
                dims[part] = dims[face] - 1
                if len(dims) > cap:
                    logging.warning(f' Face cap {cap} reached on {vpoly.source.label}')
                    raise FaceCapExceededError(cap, vpoly.source.label)
                next_frontier.append(part)
        frontier = next_frontier

    faces = [Face(vertices, dim, vpoly.common_halfspaces(vertices)) for vertices, dim in dims.items()]
    faces.sort(key=lambda face: (-face.dim, sorted(face.vertices)))
    logging.info(f' {vpoly.source.label}: {len(faces)} faces')
    return faces


def regular_face(polytope: Union[HPolytope, VPolytope], x: RatVec) -> Face:
    """
    Intersection of all faces containing x, i.e. the face whose relative interior holds x.

    :raises DomainError: x is outside the polytope.
    """
    vpoly = _as_vpolytope(polytope)
    source = vpoly.source
    if not source.contains(x):
        raise DomainError(f'point {x} is outside {source.label}')
    tight = frozenset(h for h, halfspace in enumerate(source.halfspaces) if halfspace.slack(source.gram, x) == 0)
    vertices = frozenset(v for v, incidence in enumerate(vpoly.incidence) if tight <= incidence)
    return Face(vertices, affine_rank(vpoly.points(vertices)), vpoly.common_halfspaces(vertices))


class VolumeCalculator:
    """
    Exact volume by memoized recursive cone decomposition.

    A face of dimension d is measured in a chart: d ambient coordinates onto
    which its affine hull projects bijectively, together with the lift
    (n × d) from chart coordinates back to the ambient space. The volume is
    Σ height·vol(facet)/d over the facets missing the apex; a facet inherits
    the chart minus one coordinate eliminated through its hyperplane.
    Volumes are Lebesgue measure in α-coordinates.
    """

    def __init__(self, polytope: VPolytope):
        self.polytope = polytope
        gram = polytope.source.gram
        self.coefficients = [halfspace.coefficients(gram) for halfspace in polytope.source.halfspaces]
        self.offsets = [halfspace.offset for halfspace in polytope.source.halfspaces]
        self._memo: dict[frozenset[int], tuple[tuple[int, ...], RatMat, Fraction]] = {}

    def volume(self) -> Fraction:
        n = self.polytope.dim
        if affine_rank(list(self.polytope.vertices)) != n:
            raise DegeneratePolytopeError(f'{self.polytope.source.label} is not full-dimensional')
        top = frozenset(range(len(self.polytope.vertices)))
        return self._face_volume(top, n, tuple(range(n)), identity(n))

    def _face_volume(self, face: frozenset[int], d: int, chart: tuple[int, ...], lift: RatMat) -> Fraction:
        if d == 0:
            return Fraction(1)
        stored = self._memo.get(face)
        if stored is not None:
            _, stored_lift, stored_volume = stored
            return stored_volume * abs(determinant(tuple(stored_lift[c] for c in chart)))

        n = self.polytope.dim
        subfaces = _subfaces(self.polytope, face)
        apex = max(sorted(face), key=lambda v: sum(1 for part in subfaces if v in part))
        apex_point = self.polytope.vertices[apex]

        total = Fraction(0)
        for part, h in subfaces.items():
            if apex in part:
                continue
            c = self.coefficients[h]
            a = [sum((c[r] * lift[r][j] for r in range(n)), Fraction(0)) for j in range(d)]
            k = next(j for j in range(d) if a[j])
            height = abs(dot(c, apex_point) - self.offsets[h]) / abs(a[k])
            sub_lift = tuple(
                tuple(lift[r][j] - lift[r][k] * a[j] / a[k] for j in range(d) if j != k) for r in range(n)
            )
            total += height * self._face_volume(part, d - 1, chart[:k] + chart[k + 1:], sub_lift)

        result = total / d
        self._memo[face] = (chart, lift, result)
        return result


def volume(polytope: Union[HPolytope, VPolytope]) -> Fraction:
    """
    Exact volume in α-coordinates.

    :raises DegeneratePolytopeError: The polytope is lower-dimensional.
    :rtype: Fraction
    """
    return VolumeCalculator(_as_vpolytope(polytope)).volume()


def simplex_volume(points: list[RatVec]) -> Fraction:
    """|det(p_1 − p_0, …, p_n − p_0)|/n!"""
    n = len(points) - 1
    if any(len(point) != n for point in points):
        raise DimensionMismatchError(f'{len(points)} points do not span a simplex in dimension {n}')
    return abs(determinant(tuple(sub(point, points[0]) for point in points[1:]))) / math.factorial(n)


def transform_polytope(polytope: HPolytope, g: AffineIsometry) -> HPolytope:
    """
    gP as an H-polytope: (ν, x) ≥ c becomes (Lν, y) ≥ c + (Lν, t).

    :raises DomainError: The linear part of g is not orthogonal for the Gram matrix.
    """
    gram = polytope.gram
    if mat_mul(mat_mul(transpose(g.linear), gram), g.linear) != gram:
        raise DomainError('transform_polytope needs an isometry')
    halfspaces = []
    for halfspace in polytope.halfspaces:
        normal = mat_vec(g.linear, halfspace.normal)
        offset = halfspace.offset + gram_inner(gram, normal, g.translation)
        halfspaces.append(HalfSpace(normal, offset, halfspace.sense, halfspace.label))
    return HPolytope(gram, tuple(halfspaces), polytope.label)
