from collections import Counter
from typing import Callable, Hashable, Sequence, TypeVar

Element = TypeVar('Element', bound=Hashable)


def closure(generators: Sequence[Element], compose: Callable, identity: Element) -> list[Element]:
    """
    Finite group generated by the given elements, in breadth-first discovery order.

    :param generators: Generating elements.
    :type generators: Sequence
    :param compose: compose(a, b) returns a∘b.
    :type compose: Callable
    :param identity: Identity element, listed first.
    :return: All group elements.
    :rtype: list
    """
    elements = [identity]
    seen = {identity}
    frontier = [identity]
    while frontier:
        next_frontier = []
        for element in frontier:
            for generator in generators:
                product = compose(element, generator)
                if product not in seen:
                    seen.add(product)
                    elements.append(product)
                    next_frontier.append(product)
        frontier = next_frontier
    return elements


def multiplication_table(elements: Sequence[Element], compose: Callable) -> list[list[int]]:
    """
    table[a][b] is the index of elements[a]∘elements[b].

    :raises ValueError: The list is not closed under composition.
    """
    index = {element: i for i, element in enumerate(elements)}
    table = []
    for a in elements:
        row = []
        for b in elements:
            product = compose(a, b)
            if product not in index:
                raise ValueError('element list is not closed under composition')
            row.append(index[product])
        table.append(row)
    return table


def element_orders(table: list[list[int]], identity_index: int = 0) -> list[int]:
    orders = []
    for a in range(len(table)):
        power, order = a, 1
        while power != identity_index:
            power = table[power][a]
            order += 1
        orders.append(order)
    return orders


def order_spectrum(table: list[list[int]], identity_index: int = 0) -> dict[int, int]:
    return dict(sorted(Counter(element_orders(table, identity_index)).items()))


def is_abelian(table: list[list[int]]) -> bool:
    size = len(table)
    return all(table[a][b] == table[b][a] for a in range(size) for b in range(a + 1, size))


def _is_dihedral(table: list[list[int]], orders: list[int], identity_index: int) -> bool:
    size = len(table)
    half = size // 2
    for rotation in (a for a in range(size) if orders[a] == half):
        powers, power = {identity_index}, rotation
        while power != identity_index:
            powers.add(power)
            power = table[power][rotation]
        if all(orders[a] == 2 for a in range(size) if a not in powers):
            return True
    return False


def structure_label(table: list[list[int]], identity_index: int = 0) -> str:
    """
    Isomorphism type detected from abelianness and element orders.

    Labels: '1', 'Z{k}', 'Z2xZ2', 'I2({k})' for dihedral groups of order 2k
    (I2(3) is S3), 'S4'; anything else is reported as 'order{k}'.
    """
    size = len(table)
    if size == 1:
        return '1'
    orders = element_orders(table, identity_index)
    if is_abelian(table):
        if max(orders) == size:
            return f'Z{size}'
        if size == 4:
            return 'Z2xZ2'
        return f'order{size}'
    if size % 2 == 0 and _is_dihedral(table, orders, identity_index):
        return f'I2({size // 2})'
    if size == 24 and order_spectrum(table, identity_index) == {1: 1, 2: 9, 3: 8, 4: 6}:
        return 'S4'
    return f'order{size}'
