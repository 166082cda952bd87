import pytest
from fractions import Fraction
from services.rootsys import alcove_vertices
from services.exceptions import DomainError
from services.fundcheck import fixed_space_codimension, from_kac_coordinates
from services.weyl import (
    AffineIsometry, affine_wall_reflection, expected_fundamental_group_label, fundamental_group, longest_element,
    maps_alcove_to_itself, node_permutation, omega_element, preserves_gram, simple_reflection, v_element,
)

OMEGA_TYPES = ['A1', 'A2', 'A3', 'A5', 'B2', 'B4', 'C3', 'C5', 'D4', 'D5', 'D6', 'E6', 'E7', 'E8', 'F4', 'G2']


def test_simple_reflection_negates_its_root(system):
    rs = system('B3')
    for i in rs.indices:
        s = simple_reflection(rs, i)
        assert s(rs.simple_root(i)) == tuple(-value for value in rs.simple_root(i))
        assert preserves_gram(rs, s.matrix)
        assert s.compose(s).matrix == AffineIsometry.identity(3).linear


@pytest.mark.parametrize('name, length', [('A3', 6), ('B3', 9), ('D4', 12), ('G2', 6), ('E6', 36)])
def test_longest_element_length_is_the_number_of_positive_roots(system, name, length):
    rs = system(name)
    w = longest_element(rs, rs.indices)
    assert w.length == length
    assert all(w(root) in {tuple(-value for value in positive) for positive in rs.all_roots()}
               for root in rs.all_roots())


def test_longest_element_sends_positive_roots_to_negative(system):
    rs = system('F4')
    w = longest_element(rs, rs.indices)
    for root in rs.positive_roots:
        assert all(value <= 0 for value in w(tuple(Fraction(c) for c in root)))


@pytest.mark.parametrize('name', ['A4', 'B3', 'C4', 'D5', 'E6', 'E7'])
def test_v_element_sends_lowest_root_to_minuscule_root(system, name):
    rs = system(name)
    for j in rs.minuscule:
        v = v_element(rs, j)
        assert v(rs.node_root(0)) == rs.simple_root(j)
        assert node_permutation(rs, v.matrix)[0] == j


def test_omega_element_needs_a_minuscule_index(system):
    with pytest.raises(DomainError):
        omega_element(system('E6'), 2)


@pytest.mark.parametrize('name', OMEGA_TYPES)
def test_fundamental_group_order_and_type(system, name):
    rs = system(name)
    omega = fundamental_group(rs)
    assert omega.order == len(rs.minuscule) + 1
    assert omega.label == expected_fundamental_group_label(rs)
    assert all(maps_alcove_to_itself(rs, g) for g in omega.elements)


def test_omega_elements_move_the_origin_to_minuscule_vertices(system):
    rs = system('D5')
    omega = fundamental_group(rs)
    for j in rs.minuscule:
        assert omega.element(j)(alcove_vertices(rs)[0]) == rs.coweight(j)


def test_omega_node_permutations_in_a3(system):
    rs = system('A3')
    omega = fundamental_group(rs)
    assert omega.names == ('1', 'omega_1', 'omega_2', 'omega_3')
    assert node_permutation(rs, omega.element(1).linear) == (1, 2, 3, 0)
    assert node_permutation(rs, omega.element(2).linear) == (2, 3, 0, 1)
    assert omega.table == ((0, 1, 2, 3), (1, 2, 3, 0), (2, 3, 0, 1), (3, 0, 1, 2))


def test_isometry_algebra(system):
    rs = system('A2')
    g = fundamental_group(rs).element(1)
    assert g.power(3).is_identity()
    assert g.compose(g.inverse()).is_identity()
    assert g.inverse() == fundamental_group(rs).element(2)


def test_fixed_spaces_of_omega_in_a3(system):
    rs = system('A3')
    omega = fundamental_group(rs)
    barycenter = from_kac_coordinates(rs, [Fraction(1, 4)] * 4)
    assert omega.element(1).fixes(barycenter)
    assert fixed_space_codimension(omega.element(1)) == 3
    assert fixed_space_codimension(omega.element(2)) == 2
    assert omega.element(1).fixed_space().point == barycenter


def test_translation_has_no_fixed_point(system):
    rs = system('A2')
    translation = AffineIsometry(AffineIsometry.identity(2).linear, rs.coweight(1))
    assert translation.fixed_space() is None
    assert fixed_space_codimension(translation) is None


def test_affine_wall_reflections(system):
    rs = system('A2')
    s0 = affine_wall_reflection(rs, 0)
    zero, w1, w2 = alcove_vertices(rs)
    assert s0.fixes(w1) and s0.fixes(w2)
    assert s0(zero) == rs.highest_root
    assert s0.power(2).is_identity()
    s1 = affine_wall_reflection(rs, 1)
    assert s1.fixes(zero) and s1.fixes(w2) and not s1.fixes(w1)


def test_wall_reflection_of_non_simply_laced_type(system):
    rs = system('G2')
    s0 = affine_wall_reflection(rs, 0)
    assert preserves_gram(rs, s0.linear)
    assert all(s0.fixes(vertex) for vertex in alcove_vertices(rs)[1:])
