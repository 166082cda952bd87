import logging
from fractions import Fraction
from dataclasses import dataclass
from typing import Iterable, Optional
from services.rootsys import RootSystem, RootSystemId
from functions.groups import multiplication_table
from services.diagram import alcove_automorphism_group
from services.exceptions import DomainError, VerificationError
from services.exactlin import AffineSubspace, Constraint, RatVec, add, dot, lp_feasible, scale, solve_linear
from services.weyl import AffineIsometry, affine_wall_reflection, fundamental_group, node_permutation, preserves_gram
from services.polytope import (
    Face, HPolytope, VPolytope, alcove, enumerate_vertices, face_lattice, regular_face, transform_polytope, volume,
)


@dataclass(frozen=True)
class GroupAction:
    """
    A finite group of alcove isometries together with the region it should tile.

    names[k] and node_images[k] describe elements[k]; node_images is π(g) on {−α₀} ∪ Π.
    """
    rs: RootSystem
    elements: tuple[AffineIsometry, ...]
    ambient: HPolytope
    names: tuple[str, ...]
    node_images: tuple[tuple[int, ...], ...]
    label: str = ''

    def __post_init__(self):
        if AffineIsometry.identity(self.rs.rank) not in self.elements:
            raise VerificationError(f'group {self.label} lacks the identity')
        if any(not preserves_gram(self.rs, g.linear) for g in self.elements):
            raise VerificationError(f'group {self.label} contains a non-isometry')
        try:
            multiplication_table(self.elements, lambda a, b: a.compose(b))
        except ValueError as error:
            raise VerificationError(f'group {self.label} is not closed under composition') from error

    @property
    def order(self) -> int:
        return len(self.elements)

    def described(self):
        """(element, name, node images) triples"""
        return zip(self.elements, self.names, self.node_images)


def _node_images(rs: RootSystem, g: AffineIsometry) -> tuple[int, ...]:
    images = node_permutation(rs, g.linear)
    if images is None:
        raise VerificationError(f'element does not permute the affine nodes of {rs.id}')
    return images


def omega_action(rs: RootSystem, ambient: Optional[HPolytope] = None) -> GroupAction:
    """Ω acting on the alcove"""
    omega = fundamental_group(rs)
    return GroupAction(
        rs=rs,
        elements=omega.elements,
        ambient=ambient if ambient is not None else alcove(rs),
        names=omega.names,
        node_images=tuple(_node_images(rs, g) for g in omega.elements),
        label=f'Omega({rs.id})',
    )


def alcove_aut_action(rs: RootSystem, ambient: Optional[HPolytope] = None) -> GroupAction:
    """Aut(𝒜) acting on the alcove; elements are named by their node cycles"""
    group = alcove_automorphism_group(rs)
    return GroupAction(
        rs=rs,
        elements=group.isometries,
        ambient=ambient if ambient is not None else alcove(rs),
        names=tuple(element.node_permutation.cycles() for element in group.elements),
        node_images=tuple(element.node_images for element in group.elements),
        label=f'Aut(A)({rs.id})',
    )


@dataclass(frozen=True)
class Overlap:
    element: str
    point: RatVec


@dataclass(frozen=True)
class FundamentalDomainReport:
    claim: str
    verdict: bool
    disjoint: bool
    covering: bool
    order: int
    domain_volume: Fraction
    ambient_volume: Fraction
    overlaps: tuple[Overlap, ...] = ()


def is_fundamental_domain(domain: HPolytope, action: GroupAction) -> FundamentalDomainReport:
    """
    Decides whether the translates gF tile the ambient region.

    Two exact checks: the interiors of F and gF are disjoint for every g ≠ 1
    (strict LP infeasibility), and |G|·vol(F) = vol(ambient).

    :param domain: Candidate fundamental domain F.
    :type domain: HPolytope
    :param action: Group with its ambient region.
    :type action: GroupAction
    :raises DomainError: F is not inside the ambient region.
    :rtype: FundamentalDomainReport
    """
    vertices = enumerate_vertices(domain)
    if not all(action.ambient.contains(vertex) for vertex in vertices.vertices):
        raise DomainError(f'{domain.label} is not contained in {action.ambient.label}')

    interior = domain.constraints(strict=True)
    overlaps = []
    for g, name, _ in action.described():
        if g.is_identity():
            continue
        image = transform_polytope(domain, g)
        result = lp_feasible(interior + image.constraints(strict=True), dim=domain.dim)
        if result:
            overlaps.append(Overlap(name, result.point))

    domain_volume = volume(vertices)
    ambient_volume = volume(action.ambient)
    covering = action.order * domain_volume == ambient_volume
    verdict = not overlaps and covering
    logging.info(f' {domain.label} under {action.label}: disjoint={not overlaps}, covering={covering}')
    return FundamentalDomainReport(
        claim=f'{domain.label} is a fundamental domain for {action.label}',
        verdict=verdict,
        disjoint=not overlaps,
        covering=covering,
        order=action.order,
        domain_volume=domain_volume,
        ambient_volume=ambient_volume,
        overlaps=tuple(overlaps),
    )


def stabilizer(action: GroupAction, x: RatVec) -> list[AffineIsometry]:
    return [g for g in action.elements if g.fixes(x)]


def kac_coordinates(rs: RootSystem, x: RatVec) -> tuple[Fraction, ...]:
    """[b₀, b₁, …, b_n] with b_i = (α_i, x) and b₀ = 1 − (α₀, x)"""
    return (1 - rs.inner(rs.highest_root, x),) + rs.to_coweight_basis(x)


def from_kac_coordinates(rs: RootSystem, kac: Iterable) -> RatVec:
    """Inverse of kac_coordinates; b₀ is checked against b₀ + Σ m_i b_i = 1"""
    kac = [Fraction(value) for value in kac]
    if len(kac) != rs.rank + 1:
        raise DomainError(f'{rs.id} needs {rs.rank + 1} Kac coordinates, got {len(kac)}')
    if kac[0] + sum(m * b for m, b in zip(rs.marks, kac[1:])) != 1:
        raise DomainError(f'Kac coordinates {kac} do not satisfy b0 + sum(m_i b_i) = 1')
    return rs.from_coweight_basis(kac[1:])


@dataclass(frozen=True)
class StabilizerDecomposition:
    """(W_ext)_x = Ω_x ⋉ (W_aff)_x, the latter given by the alcove walls through x"""
    omega: tuple[int, ...]
    walls: tuple[int, ...]


def ext_stabilizer_decomposition(rs: RootSystem, x: RatVec) -> StabilizerDecomposition:
    """
    :param rs: Root system.
    :type rs: RootSystem
    :param x: Point of the alcove.
    :type x: RatVec
    :raises DomainError: x is outside the alcove.
    :return: Indices j of the ω_j fixing x (0 for the identity) and the walls k with b_k = 0.
    :rtype: StabilizerDecomposition
    """
    if not alcove(rs).contains(x):
        raise DomainError(f'point {x} is outside the alcove of {rs.id}')
    omega = fundamental_group(rs)
    fixing = tuple(j for j, g in zip(omega.indices, omega.elements) if g.fixes(x))
    walls = tuple(k for k, b in enumerate(kac_coordinates(rs, x)) if b == 0)
    return StabilizerDecomposition(fixing, walls)


@dataclass(frozen=True)
class Witness:
    """g fixes fixed_point but moves moved_point, both in the relative interior of face"""
    face: Face
    face_labels: tuple[str, ...]
    element: str
    node_images: tuple[int, ...]
    fixed_point: RatVec
    moved_point: RatVec


@dataclass(frozen=True)
class StratificationReport:
    claim: str
    stratified: bool
    witnesses: tuple[Witness, ...]
    faces_checked: int


@dataclass(frozen=True)
class _FixedData:
    g: AffineIsometry
    name: str
    node_images: tuple[int, ...]
    space: AffineSubspace
    fixed_vertices: frozenset[int]


def _combine(directions: tuple[RatVec, ...], coefficients: RatVec, dim: int) -> RatVec:
    total = tuple(Fraction(0) for _ in range(dim))
    for direction, coefficient in zip(directions, coefficients):
        total = add(total, scale(coefficient, direction))
    return total


def _relint_point_in(polytope: VPolytope, face: Face, space: AffineSubspace) -> Optional[RatVec]:
    """
    A point of relint(face) ∩ space, or None.

    The tight half-spaces of the face are solved as equalities on space; the
    remaining ones must hold strictly on the solution set.
    """
    source = polytope.source
    tight = sorted(face.halfspaces)
    others = [h for h in range(len(source.halfspaces)) if h not in face.halfspaces]
    coefficients = [halfspace.coefficients(source.gram) for halfspace in source.halfspaces]

    if space.dim:
        rows = tuple(tuple(dot(coefficients[h], direction) for direction in space.directions) for h in tight)
        rhs = tuple(source.halfspaces[h].offset - dot(coefficients[h], space.point) for h in tight)
        solution = solve_linear(rows, rhs, num_columns=space.dim)
        if not solution.solvable:
            return None
        base = AffineSubspace(
            space.at(solution.point),
            tuple(_combine(space.directions, kernel, source.dim) for kernel in solution.kernel),
        )
    elif any(source.halfspaces[h].slack(source.gram, space.point) != 0 for h in tight):
        return None
    else:
        base = space

    constraints = []
    for h in others:
        halfspace = source.halfspaces[h]
        reduced = tuple(dot(coefficients[h], direction) for direction in base.directions)
        if all(value == 0 for value in reduced):
            if halfspace.slack(source.gram, base.point) <= 0:
                return None
            continue
        constraints.append(Constraint(reduced, halfspace.offset - dot(coefficients[h], base.point), halfspace.sense[0]))
    if not constraints:
        return base.point
    result = lp_feasible(constraints, dim=base.dim)
    return base.at(result.point) if result else None


def _moved_point(polytope: VPolytope, face: Face, g: AffineIsometry) -> RatVec:
    centroid = face.centroid(polytope)
    if not g.fixes(centroid):
        return centroid
    vertex = next(polytope.vertices[v] for v in sorted(face.vertices) if not g.fixes(polytope.vertices[v]))
    return scale(Fraction(1, 2), add(centroid, vertex))


def _fixed_data(action: GroupAction, polytope: VPolytope) -> list[_FixedData]:
    """Non-identity elements with a fixed point, each with the domain vertices it fixes"""
    fixed = []
    for g, name, images in action.described():
        if g.is_identity():
            continue
        space = g.fixed_space()
        if space is None:
            continue
        fixed_vertices = frozenset(v for v, vertex in enumerate(polytope.vertices) if g.fixes(vertex))
        fixed.append(_FixedData(g, name, images, space, fixed_vertices))
    return fixed


def stratified_centralizers(action: GroupAction, domain: HPolytope, cap: Optional[int] = None,
                            limit: Optional[int] = None) -> StratificationReport:
    """
    Decides whether stabilizers are constant on the relative interior of every face.

    For each g ≠ 1 and face 𝔉 the property fails exactly when aff(𝔉) ⊄ Fix(g)
    while relint(𝔉) ∩ Fix(g) ≠ ∅: Fix(g) is an affine subspace, so g then
    fixes one interior point of 𝔉 and moves another.

    :param action: Group acting on the polytope.
    :type action: GroupAction
    :param domain: Polytope whose faces are examined.
    :type domain: HPolytope
    :param cap: Face-lattice cap, ALCOVE_FACE_CAP by default.
    :type cap: int, optional
    :param limit: Stop after this many witnesses.
    :type limit: int, optional
    :raises FaceCapExceededError: Too many faces.
    :rtype: StratificationReport
    """
    polytope = enumerate_vertices(domain)
    faces = face_lattice(polytope, cap)

    fixed = _fixed_data(action, polytope)

    witnesses = []
    for face in faces:
        for data in fixed:
            if face.vertices <= data.fixed_vertices:
                continue
            point = _relint_point_in(polytope, face, data.space)
            if point is None:
                continue
            moved = _moved_point(polytope, face, data.g)
            _verify_witness(polytope, face, data.g, point, moved)
            witnesses.append(Witness(
                face=face,
                face_labels=tuple(face.labels(polytope)),
                element=data.name,
                node_images=data.node_images,
                fixed_point=point,
                moved_point=moved,
            ))
            if limit is not None and len(witnesses) >= limit:
                break
        if limit is not None and len(witnesses) >= limit:
            break

    logging.info(f' {action.label} on {domain.label}: {len(faces)} faces, {len(witnesses)} witnesses')
    return StratificationReport(
        claim=f'{action.label} has stratified centralizers w.r.t. {domain.label}',
        stratified=not witnesses,
        witnesses=tuple(witnesses),
        faces_checked=len(faces),
    )


def _verify_witness(polytope: VPolytope, face: Face, g: AffineIsometry, fixed_point: RatVec,
                    moved_point: RatVec) -> None:
    """Re-checks a witness by substitution"""
    if not g.fixes(fixed_point) or g.fixes(moved_point):
        raise VerificationError('stratification witness does not separate fixed and moved points')
    for point in (fixed_point, moved_point):
        if regular_face(polytope, point).vertices != face.vertices:
            raise VerificationError('stratification witness point is not in the relative interior of its face')


def _relint_points(polytope: VPolytope, face: Face, fixed: list[_FixedData]):
    """Points of relint(face): halfway to each vertex, then a fixed and a moved point for each element"""
    centroid = face.centroid(polytope)
    for vertex in polytope.points(face.vertices):
        yield scale(Fraction(1, 2), add(centroid, vertex))
    for data in fixed:
        if face.vertices <= data.fixed_vertices:
            continue
        point = _relint_point_in(polytope, face, data.space)
        if point is not None:
            yield point
            yield _moved_point(polytope, face, data.g)


def _ext_witness(rs: RootSystem, action: GroupAction, polytope: VPolytope, face: Face,
                 first: tuple[RatVec, StabilizerDecomposition],
                 second: tuple[RatVec, StabilizerDecomposition]) -> Witness:
    (x, at_x), (y, at_y) = first, second
    by_index = dict(zip(fundamental_group(rs).indices, action.described()))
    separating = sorted(set(at_x.omega) ^ set(at_y.omega))
    if separating:
        g, name, images = by_index[separating[0]]
    else:
        k = sorted(set(at_x.walls) ^ set(at_y.walls))[0]
        g, name, images = affine_wall_reflection(rs, k), f's_{k}', ()
    fixed_point, moved_point = (x, y) if g.fixes(x) else (y, x)
    _verify_witness(polytope, face, g, fixed_point, moved_point)
    return Witness(
        face=face,
        face_labels=tuple(face.labels(polytope)),
        element=name,
        node_images=images,
        fixed_point=fixed_point,
        moved_point=moved_point,
    )


def ext_stratified_centralizers(rs: RootSystem, domain: HPolytope, cap: Optional[int] = None) -> StratificationReport:
    """
    W_ext verdict on a polytope inside the alcove, from the full decomposition (W_ext)_x = Ω_x ⋉ (W_aff)_x.

    Every face compares the decomposition at its centroid with the one at the
    points halfway to each vertex, and at the relative-interior points that
    each ω ≠ 1 fixes or moves.

    :param rs: Root system.
    :type rs: RootSystem
    :param domain: Polytope inside the alcove.
    :type domain: HPolytope
    :param cap: Face-lattice cap, ALCOVE_FACE_CAP by default.
    :type cap: int, optional
    :raises FaceCapExceededError: Too many faces.
    :rtype: StratificationReport
    """
    polytope = enumerate_vertices(domain)
    faces = face_lattice(polytope, cap)
    action = omega_action(rs)
    fixed = _fixed_data(action, polytope)

    witnesses = []
    for face in faces:
        centroid = face.centroid(polytope)
        reference = ext_stabilizer_decomposition(rs, centroid)
        for point in _relint_points(polytope, face, fixed):
            decomposition = ext_stabilizer_decomposition(rs, point)
            if decomposition != reference:
                witnesses.append(_ext_witness(rs, action, polytope, face, (centroid, reference), (point, decomposition)))
                break

    logging.info(f' W_ext({rs.id}) on {domain.label}: {len(faces)} faces, {len(witnesses)} witnesses')
    return StratificationReport(
        claim=f'W_ext({rs.id}) has stratified centralizers w.r.t. {domain.label}',
        stratified=not witnesses,
        witnesses=tuple(witnesses),
        faces_checked=len(faces),
    )


def affine_weyl_stratified(rs: RootSystem) -> StratificationReport:
    """
    W_aff on the alcove: on every face the reflections in the walls containing it
    fix the whole face, and the reflections in the other walls move its centroid.
    """
    polytope = enumerate_vertices(alcove(rs))
    reflections = [affine_wall_reflection(rs, k) for k in range(rs.rank + 1)]
    # alcove half-spaces are listed H1 … Hn, H0
    wall_of = {h: (h + 1) % (rs.rank + 1) for h in range(rs.rank + 1)}
    faces = face_lattice(polytope)
    witnesses = []
    for face in faces:
        centroid = face.centroid(polytope)
        containing = {wall_of[h] for h in face.halfspaces}
        for k, reflection in enumerate(reflections):
            fixes_face = all(reflection.fixes(point) for point in polytope.points(face.vertices))
            if (k in containing) != fixes_face or (k not in containing and reflection.fixes(centroid)):
                witnesses.append(Witness(
                    face=face,
                    face_labels=tuple(face.labels(polytope)),
                    element=f's_{k}',
                    node_images=(),
                    fixed_point=centroid,
                    moved_point=reflection(centroid),
                ))
    return StratificationReport(
        claim=f'W_aff({rs.id}) has stratified centralizers w.r.t. {polytope.source.label}',
        stratified=not witnesses,
        witnesses=tuple(witnesses),
        faces_checked=len(faces),
    )


def fixed_space_codimension(g: AffineIsometry) -> Optional[int]:
    """n − dim Fix(g), None when g has no fixed point"""
    space = g.fixed_space()
    return None if space is None else g.dim - space.dim


def omega_stratification_claim(rs_id: RootSystemId) -> Optional[bool]:
    """Published verdict for Ω on 𝒦: in type A_n stratified iff n + 1 is prime"""
    if rs_id.family != 'A':
        return None
    order = rs_id.rank + 1
    return all(order % d for d in range(2, int(order ** 0.5) + 1))


def alcove_aut_stratification_claim(rs_id: RootSystemId) -> Optional[bool]:
    """Aut(𝒜) on ℒ is known not to be stratified in A₃"""
    return False if str(rs_id) == 'A3' else None


def shift_images(kac: tuple[Fraction, ...], steps: int = 1) -> tuple[Fraction, ...]:
    """Right cyclic shift [b_n, b₀, …, b_{n−1}] applied steps times"""
    steps %= len(kac)
    return kac[-steps:] + kac[:-steps] if steps else kac
