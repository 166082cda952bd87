import pytest
from fractions import Fraction
from services.exceptions import DomainError
from services.rootsys import (
    RootSystemId, alcove_vertices, classical_positive_root_count, is_lowest_root, is_simple_system,
)

TYPES = [
    'A1', 'A2', 'A3', 'A4', 'A5', 'A6', 'A7', 'A8', 'B2', 'B3', 'B4', 'B5', 'B6', 'B7', 'B8',
    'C3', 'C4', 'C5', 'C6', 'C7', 'C8',
    'D4', 'D5', 'D6', 'D7', 'D8', 'E6', 'E7', 'E8', 'F4', 'G2',
]


@pytest.mark.parametrize('name', TYPES)
def test_positive_root_count_is_classical(system, name):
    rs = system(name)
    assert len(rs.positive_roots) == classical_positive_root_count(rs.id)


@pytest.mark.parametrize('name, count', [('B6', 36), ('B7', 49), ('B8', 64), ('C6', 36), ('C7', 49), ('C8', 64)])
def test_positive_roots_of_b_and_c(system, name, count):
    assert len(system(name).positive_roots) == count


@pytest.mark.parametrize('name, marks', [
    ('A4', (1, 1, 1, 1)),
    ('B3', (1, 2, 2)),
    ('C3', (2, 2, 1)),
    ('D5', (1, 2, 2, 1, 1)),
    ('E6', (1, 2, 2, 3, 2, 1)),
    ('E7', (2, 2, 3, 4, 3, 2, 1)),
    ('E8', (2, 3, 4, 6, 5, 4, 3, 2)),
    ('F4', (2, 3, 4, 2)),
    ('G2', (3, 2)),
])
def test_highest_root_marks(system, name, marks):
    assert system(name).marks == marks


@pytest.mark.parametrize('name, minuscule', [
    ('A3', {1, 2, 3}), ('B2', {1}), ('B4', {1}), ('C4', {4}), ('D4', {1, 3, 4}), ('D7', {1, 6, 7}),
    ('E6', {1, 6}), ('E7', {7}), ('E8', set()), ('F4', set()), ('G2', set()),
])
def test_minuscule_indices(system, name, minuscule):
    assert system(name).minuscule == frozenset(minuscule)


def test_long_roots_have_squared_length_two(system):
    rs = system('G2')
    assert rs.inner(rs.simple_root(1), rs.simple_root(1)) == Fraction(2, 3)
    assert rs.inner(rs.simple_root(2), rs.simple_root(2)) == 2
    assert rs.inner(rs.highest_root, rs.highest_root) == 2


def test_coweights_are_dual_to_simple_roots(system):
    rs = system('F4')
    for i in rs.indices:
        for j in rs.indices:
            assert rs.pairing(i, rs.coweight(j)) == (1 if i == j else 0)


def test_alcove_vertices_of_g2(system):
    rs = system('G2')
    vertices = alcove_vertices(rs)
    assert vertices[0] == (0, 0)
    assert rs.to_coweight_basis(vertices[1]) == (Fraction(1, 3), 0)
    assert rs.to_coweight_basis(vertices[2]) == (0, Fraction(1, 2))
    assert all(rs.inner(rs.highest_root, vertex) == 1 for vertex in vertices[1:])


def test_coweight_basis_round_trip(system):
    rs = system('E6')
    x = rs.from_coweight_basis([Fraction(1, 4), 0, 0, 0, 0, Fraction(1, 4)])
    assert rs.to_coweight_basis(x) == (Fraction(1, 4), 0, 0, 0, 0, Fraction(1, 4))


@pytest.mark.parametrize('name', ['A3', 'B3', 'C3', 'D5', 'E6', 'E7', 'F4', 'G2'])
def test_minuscule_characterizations_agree(system, name):
    rs = system(name)
    for j in rs.indices:
        assert is_simple_system(rs, j) == (j in rs.minuscule)
    for j in rs.minuscule:
        assert is_lowest_root(rs, j)


def test_gram_scale_multiplies_the_form(system):
    plain, scaled = system('B3'), system('B3', 7)
    assert scaled.gram == tuple(tuple(7 * value for value in row) for row in plain.gram)
    assert scaled.marks == plain.marks
    assert scaled.minuscule == plain.minuscule


@pytest.mark.parametrize('family, rank', [('A', 0), ('B', 1), ('C', 2), ('D', 3), ('E', 9), ('F', 5), ('G', 3), ('H', 3)])
def test_invalid_identifiers(family, rank):
    with pytest.raises(DomainError):
        RootSystemId(family, rank)


def test_parse_identifier():
    assert RootSystemId.parse(' e6 ') == RootSystemId('E', 6)
    assert str(RootSystemId.parse('A12')) == 'A12'
    with pytest.raises(DomainError):
        RootSystemId.parse('E')


def test_registry_returns_shared_systems(registry):
    first = registry.lookup('d', 5)
    assert registry.get(RootSystemId('D', 5)) is first
    assert registry.get(RootSystemId('D', 5), 7) is not first
