from functions.groups import closure, element_orders, is_abelian, multiplication_table, order_spectrum, structure_label


def compose(a, b):
    """Permutations as image tuples, a∘b"""
    return tuple(a[i] for i in b)


def permutation_group(*generators):
    n = len(generators[0])
    return closure(generators, compose, tuple(range(n)))


def test_cyclic_group():
    elements = permutation_group((1, 2, 3, 0))
    table = multiplication_table(elements, compose)
    assert len(elements) == 4
    assert structure_label(table) == 'Z4'
    assert element_orders(table) == [1, 4, 2, 4]


def test_klein_four_group():
    table = multiplication_table(permutation_group((1, 0, 3, 2), (2, 3, 0, 1)), compose)
    assert is_abelian(table)
    assert structure_label(table) == 'Z2xZ2'


def test_dihedral_groups():
    square = permutation_group((1, 2, 3, 0), (0, 3, 2, 1))
    assert structure_label(multiplication_table(square, compose)) == 'I2(4)'
    triangle = permutation_group((1, 2, 0), (0, 2, 1))
    assert structure_label(multiplication_table(triangle, compose)) == 'I2(3)'


def test_symmetric_group_on_four_letters():
    table = multiplication_table(permutation_group((1, 0, 2, 3), (1, 2, 3, 0)), compose)
    assert order_spectrum(table) == {1: 1, 2: 9, 3: 8, 4: 6}
    assert structure_label(table) == 'S4'


def test_alternating_group_has_no_named_type():
    # A4 has order 12 and is neither abelian nor dihedral
    table = multiplication_table(permutation_group((1, 2, 0, 3), (1, 0, 3, 2)), compose)
    assert structure_label(table) == 'order12'


def test_trivial_group():
    assert structure_label([[0]]) == '1'
