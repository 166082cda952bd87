import pytest
from fractions import Fraction
from services.rootsys import alcove_vertices
from services.weyl import AffineIsometry, dirichlet_domain, fundamental_group
from services.diagram import alcove_automorphism_group
from services.fundcheck import (
    alcove_aut_action, is_fundamental_domain, kac_coordinates, omega_action, stratified_centralizers,
)
from services.exactlin import identity
from services.exceptions import (
    BalanceError, DomainError, FaceCapExceededError, UnboundedPolytopeError,
)
from services.polytope import (
    HalfSpace, HPolytope, alcove, balanced_pairing, balanced_root, bounding_hyperplanes, enumerate_vertices,
    face_lattice, fundamental_polytope, inherited_vertices, komrakov_premet, kp_vertices_closed_form,
    regular_face, sign_filtered_subsets, simplex_volume, standard_involution, default_balanced_roots,
    transform_polytope, vertex_count_formula_A, volume,
)

KP_TYPES = ['A2', 'A3', 'A5', 'A7', 'B3', 'B5', 'C3', 'C5', 'D4', 'D5', 'D7', 'E6', 'E7', 'E8', 'F4', 'G2']


def labels(halfspaces):
    return {halfspace.label for halfspace in halfspaces}


def point(rs, coefficients):
    """Point from its ϖ^∨-coordinates"""
    return rs.from_coweight_basis([Fraction(c) for c in coefficients])


@pytest.mark.parametrize('name', KP_TYPES)
def test_kp_closed_form_matches_enumeration(system, name):
    rs = system(name)
    assert enumerate_vertices(komrakov_premet(rs)).vertex_set() == frozenset(kp_vertices_closed_form(rs))


@pytest.mark.parametrize('n', [2, 3, 4, 5, 6, 7, 8])
def test_kp_of_a_has_two_to_the_n_vertices(system, n):
    assert len(enumerate_vertices(komrakov_premet(system(f'A{n}'))).vertices) == 2 ** n


@pytest.mark.parametrize('name', ['A3', 'B4', 'C3', 'D5', 'E6', 'E7'])
def test_h0_does_not_bound_kp(system, name):
    rs = system(name)
    found = labels(bounding_hyperplanes(komrakov_premet(rs)))
    assert 'H0' not in found
    assert found == {f'H{i}' for i in rs.indices} | {f'H{j}^0' for j in rs.minuscule}


def test_kp_without_minuscule_indices_is_the_alcove(system):
    rs = system('F4')
    assert enumerate_vertices(komrakov_premet(rs)).vertex_set() == frozenset(alcove_vertices(rs))


@pytest.mark.parametrize('n, count', [(2, 3), (3, 6), (4, 11), (5, 22), (6, 42), (7, 84), (8, 163)])
def test_fundamental_polytope_of_a_vertex_count(system, n, count):
    vertices = enumerate_vertices(fundamental_polytope(system(f'A{n}')))
    assert len(vertices.vertices) == count == vertex_count_formula_A(n)


def test_vertex_count_formula_needs_rank_two():
    with pytest.raises(DomainError):
        vertex_count_formula_A(1)


@pytest.mark.parametrize('name', ['A4', 'A5', 'D4', 'D5', 'D6', 'E6'])
def test_fundamental_polytope_inherits_kp_vertices(system, name):
    rs = system(name)
    roots = default_balanced_roots(rs)
    vertices = enumerate_vertices(fundamental_polytope(rs, roots)).vertex_set()
    assert vertices == frozenset(inherited_vertices(rs, roots))
    assert vertices <= frozenset(kp_vertices_closed_form(rs))


def test_fundamental_polytope_of_a2(system):
    rs = system('A2')
    vertices = enumerate_vertices(fundamental_polytope(rs))
    assert vertices.vertex_set() == {point(rs, (0, 0)), point(rs, ('1/2', 0)), point(rs, ('1/3', '1/3'))}
    assert labels(bounding_hyperplanes(vertices)) == {'H2', 'H1^0', 'H0^0'}


def test_fundamental_polytope_of_a3_bounding(system):
    rs = system('A3')
    assert labels(bounding_hyperplanes(fundamental_polytope(rs))) == {'H2', 'H3', 'H1^0', 'H2^0', 'H0^0'}


def test_fundamental_polytope_of_a5_is_cut_by_its_slice(system):
    rs = system('A5')
    found = labels(bounding_hyperplanes(fundamental_polytope(rs)))
    assert 'H0^0' in found and 'H0' not in found
    assert len(found) == 2 * 5 + 1


def test_d4_uses_two_slices(system):
    rs = system('D4')
    roots = default_balanced_roots(rs)
    assert [root.describe() for root in roots] == ['alpha_3 - alpha_4', 'alpha_1 - alpha_3']
    vertices = enumerate_vertices(fundamental_polytope(rs))
    assert vertices.vertex_set() == {
        point(rs, (0, 0, 0, 0)),
        point(rs, ('1/2', 0, 0, 0)),
        point(rs, (0, '1/2', 0, 0)),
        point(rs, ('1/3', 0, '1/3', 0)),
        point(rs, ('1/4', 0, '1/4', '1/4')),
    }
    assert labels(bounding_hyperplanes(vertices)) == {'H2', 'H4', 'H1^0', 'H0^0', 'H0^1'}


def test_d5_bounding(system):
    rs = system('D5')
    found = labels(bounding_hyperplanes(fundamental_polytope(rs)))
    assert found == {'H1', 'H2', 'H3', 'H5', 'H1^0', 'H4^0', 'H0^0'}


def test_e6_balanced_root_and_bounding(system):
    rs = system('E6')
    (root,) = default_balanced_roots(rs)
    assert root.describe() == 'alpha_1 - alpha_6'
    assert standard_involution(rs).cycles() == '(1 6)(3 5)'
    found = labels(bounding_hyperplanes(fundamental_polytope(rs)))
    assert found == {'H2', 'H3', 'H4', 'H5', 'H6', 'H1^0', 'H0^0'}


def test_non_minuscule_support_breaks_inheritance_in_e6(system):
    rs = system('E6')
    phi = standard_involution(rs)
    root = balanced_root(rs, phi, {3}, {5}, minuscule=False)
    vertices = enumerate_vertices(fundamental_polytope(rs, [root])).vertex_set()
    new = vertices - frozenset(kp_vertices_closed_form(rs))
    assert new == {point(rs, (0, 0, '1/4', 0, '1/4', 0))}

    wide = balanced_root(rs, phi, {1, 3}, {5, 6}, minuscule=False)
    vertices = enumerate_vertices(fundamental_polytope(rs, [wide])).vertex_set()
    assert len(vertices - frozenset(kp_vertices_closed_form(rs))) == 3


def test_minimal_support_in_a4(system):
    rs = system('A4')
    root = balanced_root(rs, standard_involution(rs), {1}, {4})
    assert len(enumerate_vertices(fundamental_polytope(rs, [root])).vertices) == 3 * 2 ** 2


@pytest.mark.parametrize('plus, minus, minuscule', [
    ({1}, {2}, True),
    ({1}, {1}, True),
    (set(), {3}, True),
    ({3}, {5}, True),
    ({1}, {7}, True),
])
def test_invalid_balanced_supports(system, plus, minus, minuscule):
    rs = system('E6') if 5 in minus else system('A3')
    with pytest.raises(BalanceError):
        balanced_root(rs, standard_involution(rs), plus, minus, minuscule=minuscule)


def test_sign_filter_and_pairing_identity(system):
    rs = system('A5')
    (root,) = default_balanced_roots(rs)
    subsets = sign_filtered_subsets(rs, [root])
    for subset in subsets:
        members = set(subset)
        expected = len(members & root.plus) - len(members & root.minus)
        assert balanced_pairing(rs, root, subset) == expected >= 0
    assert () in subsets and (5,) not in subsets


@pytest.mark.parametrize('name', ['A2', 'A3', 'B3', 'C3', 'D4', 'G2', 'F4'])
def test_simplex_and_cone_volumes_agree(system, name):
    rs = system(name)
    assert volume(alcove(rs)) == simplex_volume(list(alcove_vertices(rs)))


def test_volumes_of_a2(system):
    rs = system('A2')
    assert volume(alcove(rs)) == Fraction(1, 6)
    assert volume(komrakov_premet(rs)) == Fraction(1, 18)
    assert volume(fundamental_polytope(rs)) == Fraction(1, 36)


@pytest.mark.parametrize('name', ['A3', 'A4', 'B3', 'C4', 'D4', 'D5', 'E6'])
def test_volume_identities(system, name):
    rs = system(name)
    alcove_volume = volume(alcove(rs))
    omega = fundamental_group(rs)
    assert omega.order * volume(komrakov_premet(rs)) == alcove_volume
    assert omega.order * volume(dirichlet_domain(rs)) == alcove_volume
    assert alcove_automorphism_group(rs).order * volume(fundamental_polytope(rs)) == alcove_volume


@pytest.mark.parametrize('name', ['A2', 'A3', 'B3', 'D4'])
def test_scaled_gram_changes_no_vertex_in_kac_coordinates(system, name):
    plain, scaled = system(name), system(name, 7)
    for build in (komrakov_premet, fundamental_polytope):
        first = sorted(kac_coordinates(plain, v) for v in enumerate_vertices(build(plain)).vertices)
        second = sorted(kac_coordinates(scaled, v) for v in enumerate_vertices(build(scaled)).vertices)
        assert first == second


@pytest.mark.parametrize('name', ['A2', 'A3', 'B3', 'D4'])
def test_scaled_gram_keeps_groups_and_verdicts(system, name):
    plain, scaled = system(name), system(name, 7)
    assert fundamental_group(scaled).order == fundamental_group(plain).order
    assert alcove_automorphism_group(scaled).order == alcove_automorphism_group(plain).order
    assert alcove_automorphism_group(scaled).label == alcove_automorphism_group(plain).label
    for rs in (plain, scaled):
        assert is_fundamental_domain(komrakov_premet(rs), omega_action(rs)).verdict
        assert is_fundamental_domain(fundamental_polytope(rs), alcove_aut_action(rs)).verdict
    for action, build in ((omega_action, komrakov_premet), (alcove_aut_action, fundamental_polytope)):
        first = stratified_centralizers(action(plain), build(plain))
        second = stratified_centralizers(action(scaled), build(scaled))
        assert first.stratified == second.stratified
        assert {w.element for w in first.witnesses} == {w.element for w in second.witnesses}


def test_face_lattice_of_a_triangle(system):
    rs = system('A2')
    faces = face_lattice(alcove(rs))
    assert [face.dim for face in faces] == [2, 1, 1, 1, 0, 0, 0]
    with pytest.raises(FaceCapExceededError):
        face_lattice(alcove(rs), cap=3)


def test_face_lattice_of_kp_a3(system):
    faces = face_lattice(komrakov_premet(system('A3')))
    counts = {}
    for face in faces:
        counts[face.dim] = counts.get(face.dim, 0) + 1
    assert counts[0] == 8 and counts[3] == 1
    assert counts[0] - counts[1] + counts[2] == 2


def test_regular_face(system):
    rs = system('A2')
    vpoly = enumerate_vertices(alcove(rs))
    centroid = point(rs, ('1/3', '1/3'))
    assert regular_face(vpoly, centroid).dim == 2
    edge = regular_face(vpoly, point(rs, ('1/2', 0)))
    assert edge.dim == 1 and edge.labels(vpoly) == ['H2']
    with pytest.raises(DomainError):
        regular_face(vpoly, point(rs, (1, 1)))


def test_unbounded_polytope():
    square_corner = HPolytope(identity(2), (HalfSpace((1, 0), 0), HalfSpace((0, 1), 0)), 'corner')
    with pytest.raises(UnboundedPolytopeError):
        enumerate_vertices(square_corner)


def test_halfspace_validation():
    with pytest.raises(DomainError):
        HalfSpace((0, 0), 1)
    with pytest.raises(DomainError):
        HalfSpace((1, 0), 1, '>')


def test_transform_polytope_by_omega(system):
    rs = system('A3')
    kp = komrakov_premet(rs)
    g = fundamental_group(rs).element(1)
    image = enumerate_vertices(transform_polytope(kp, g)).vertex_set()
    assert image == {g(v) for v in enumerate_vertices(kp).vertices}


def test_transform_polytope_needs_an_isometry(system):
    rs = system('A2')
    stretch = AffineIsometry(((Fraction(2), Fraction(0)), (Fraction(0), Fraction(1))), (Fraction(0), Fraction(0)))
    with pytest.raises(DomainError):
        transform_polytope(alcove(rs), stretch)
