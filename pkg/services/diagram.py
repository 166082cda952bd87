import logging
import networkx as nx
from functools import lru_cache
from fractions import Fraction
from dataclasses import dataclass, replace
from networkx.algorithms import isomorphism
from services.exactlin import RatMat, zero_vector
from services.rootsys import RootSystem, RootSystemId
from services.exceptions import DomainError, VerificationError
from functions.groups import element_orders, multiplication_table, structure_label
from services.weyl import (
    AffineIsometry, FundamentalGroup, fundamental_group, maps_alcove_to_itself, node_permutation, preserves_gram,
)

# Coxeter label m_ij from the product of Cartan integers a_ij·a_ji
COXETER_LABELS = {0: 2, 1: 3, 2: 4, 3: 6}


@dataclass(frozen=True)
class DynkinDiagram:
    """
    Nodes with Cartan integers c(i, j) = ⟨r_i^∨, r_j⟩ of their roots.

    The affine diagram has nodes 0..n with r_0 = −α₀; the finite one has nodes 1..n.
    """
    nodes: tuple[int, ...]
    cartan_integers: tuple[tuple[int, ...], ...]
    affine: bool

    def c(self, i: int, j: int) -> int:
        return self.cartan_integers[self.nodes.index(i)][self.nodes.index(j)]

    def graph(self, without: tuple[int, ...] = ()) -> nx.DiGraph:
        """Directed graph with an edge i → j labelled c(i, j) whenever c(i, j) ≠ 0, i ≠ j"""
        graph = nx.DiGraph()
        kept = [node for node in self.nodes if node not in without]
        graph.add_nodes_from(kept)
        for i in kept:
            for j in kept:
                if i != j and self.c(i, j):
                    graph.add_edge(i, j, cartan=self.c(i, j))
        return graph


@dataclass(frozen=True, order=True)
class DiagramAut:
    """Node permutation: images[k] is the image of nodes[k]"""
    nodes: tuple[int, ...]
    images: tuple[int, ...]

    def __call__(self, node: int) -> int:
        return self.images[self.nodes.index(node)]

    def compose(self, other: 'DiagramAut') -> 'DiagramAut':
        """self ∘ other"""
        return DiagramAut(self.nodes, tuple(self(other(node)) for node in self.nodes))

    def inverse(self) -> 'DiagramAut':
        inverse = {image: node for node, image in zip(self.nodes, self.images)}
        return DiagramAut(self.nodes, tuple(inverse[node] for node in self.nodes))

    def is_identity(self) -> bool:
        return self.nodes == self.images

    def affine_images(self, rank: int) -> tuple[int, ...]:
        """Images over nodes 0..n, fixing 0 when the permutation lives on the finite diagram"""
        return tuple(self(node) if node in self.nodes else node for node in range(rank + 1))

    def cycles(self) -> str:
        """Cycle notation such as '(1 6)(3 5)'; '()' for the identity"""
        seen, parts = set(), []
        for start in self.nodes:
            if start in seen or self(start) == start:
                continue
            cycle, node = [], start
            while node not in seen:
                seen.add(node)
                cycle.append(node)
                node = self(node)
            parts.append('(' + ' '.join(str(node) for node in cycle) + ')')
        return ''.join(parts) or '()'


def build_diagram(rs: RootSystem, affine: bool) -> DynkinDiagram:
    """
    Dynkin diagram of the simple roots, or of {−α₀} ∪ Π when affine.

    :param rs: Root system.
    :type rs: RootSystem
    :param affine: Include node 0.
    :type affine: bool
    :rtype: DynkinDiagram
    """
    nodes = tuple(range(0 if affine else 1, rs.rank + 1))
    roots = [rs.node_root(i) for i in nodes]
    rows = []
    for r_i in roots:
        norm = rs.inner(r_i, r_i)
        row = [2 * rs.inner(r_i, r_j) / norm for r_j in roots]
        if any(value.denominator != 1 for value in row):
            raise VerificationError(f'non-integral Cartan integer in the diagram of {rs.id}')
        rows.append(tuple(int(value) for value in row))
    return DynkinDiagram(nodes, tuple(rows), affine)


def diagram_automorphisms(dd: DynkinDiagram) -> list[DiagramAut]:
    """
    All Cartan-integer-preserving node permutations.

    VF2 matching of the diagram against itself with labelled edges; the
    search prunes on degrees and labels, so even 9-node diagrams are instant.

    :param dd: Diagram.
    :type dd: DynkinDiagram
    :return: The automorphism group, sorted with the identity first.
    :rtype: list[DiagramAut]
    """
    graph = dd.graph()
    matcher = isomorphism.DiGraphMatcher(
        graph, graph, edge_match=lambda first, second: first['cartan'] == second['cartan'],
    )
    automorphisms = set()
    for mapping in matcher.isomorphisms_iter():
        automorphism = DiagramAut(dd.nodes, tuple(mapping[node] for node in dd.nodes))
        if any(dd.c(i, j) != dd.c(automorphism(i), automorphism(j)) for i in dd.nodes for j in dd.nodes):
            raise VerificationError('graph isomorphism does not preserve Cartan integers')
        automorphisms.add(automorphism)
    return sorted(automorphisms)


def affine_marks(rs: RootSystem) -> tuple[int, ...]:
    """(1, m_1, …, m_n): the kernel vector of the affine Cartan matrix"""
    return (1,) + rs.marks


def linear_realization(rs: RootSystem, phi: DiagramAut) -> RatMat:
    """
    The Gram-orthogonal map sending r_i to r_{φ(i)} for every affine node.

    Columns are the α-coordinates of the images of α_1 … α_n, which fixes the
    map; the image of −α₀ and orthogonality are then checked.

    :raises DomainError: φ does not preserve the Cartan integers.
    """
    images = phi.affine_images(rs.rank)
    columns = [rs.node_root(images[i]) for i in rs.indices]
    linear = tuple(tuple(column[r] for column in columns) for r in range(rs.rank))
    image_of_lowest = tuple(sum((linear[r][c] * rs.node_root(0)[c] for c in range(rs.rank)), Fraction(0))
                            for r in range(rs.rank))
    if image_of_lowest != rs.node_root(images[0]) or not preserves_gram(rs, linear):
        raise DomainError(f'permutation {images} is not an automorphism of the affine diagram of {rs.id}')
    return linear


def theta(rs: RootSystem, phi: DiagramAut) -> AffineIsometry:
    """
    θ(φ) = t_{ϖ_j^∨} φ where φ(−α₀) = α_j (ϖ_0^∨ = 0).

    :param rs: Root system.
    :type rs: RootSystem
    :param phi: Automorphism of the affine diagram (or of the finite one, extended by 0 ↦ 0).
    :type phi: DiagramAut
    :rtype: AffineIsometry
    """
    j = phi.affine_images(rs.rank)[0]
    translation = rs.coweight(j) if j else zero_vector(rs.rank)
    result = AffineIsometry(linear_realization(rs, phi), translation)
    if not maps_alcove_to_itself(rs, result):
        raise VerificationError(f'theta of {phi.cycles()} does not stabilize the alcove of {rs.id}')
    return result


@dataclass(frozen=True)
class AlcoveAutomorphism:
    """
    An element θ(φ) of Aut(𝒜) with its factorization θ(φ) = ω_j ∘ ψ, ψ ∈ Aut(D).

    node_images is π(θ(φ)) = φ on nodes 0..n; omega_index is j (0 for the identity of Ω).
    """
    isometry: AffineIsometry
    node_images: tuple[int, ...]
    omega_index: int
    diagram_part: DiagramAut

    @property
    def node_permutation(self) -> DiagramAut:
        return DiagramAut(tuple(range(len(self.node_images))), self.node_images)


@dataclass(frozen=True)
class AlcoveAutGroup:
    elements: tuple[AlcoveAutomorphism, ...]
    generators: tuple[tuple[str, AlcoveAutomorphism], ...]
    table: tuple[tuple[int, ...], ...]
    label: str
    omega: FundamentalGroup
    diagram_group: tuple[DiagramAut, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def isometries(self) -> tuple[AffineIsometry, ...]:
        return tuple(element.isometry for element in self.elements)

    def generator(self, name: str) -> AlcoveAutomorphism:
        return dict(self.generators)[name]

    def by_node_images(self, images: tuple[int, ...]) -> AlcoveAutomorphism:
        for element in self.elements:
            if element.node_images == tuple(images):
                return element
        raise DomainError(f'no element of Aut(A) acts on nodes as {images}')

    def by_isometry(self, isometry: AffineIsometry) -> AlcoveAutomorphism:
        for element in self.elements:
            if element.isometry == isometry:
                return element
        raise DomainError('isometry is not an element of Aut(A)')

    def coxeter_matrix(self) -> list[list[int]]:
        """Orders of τ_a τ_b for the named generators"""
        generators = [element.isometry for _, element in self.generators]
        return [[isometry_order(a.compose(b)) for b in generators] for a in generators]

    def order_spectrum(self) -> dict[int, int]:
        orders = element_orders([list(row) for row in self.table])
        return {order: orders.count(order) for order in sorted(set(orders))}


def isometry_order(g: AffineIsometry, limit: int = 1000) -> int:
    power, order = g, 1
    while not power.is_identity():
        power = power.compose(g)
        order += 1
        if order > limit:
            raise VerificationError('isometry of infinite or unexpectedly large order')
    return order


def _finite_images(rs: RootSystem, mapping: dict[int, int]) -> tuple[int, ...]:
    """Affine node images of a finite diagram automorphism given by its moved nodes"""
    return (0,) + tuple(mapping.get(i, i) for i in rs.indices)


def _coxeter_generator_recipe(rs: RootSystem, group: AlcoveAutGroup) -> list[tuple[str, AffineIsometry]]:
    """Named Coxeter generators τ_i of Aut(𝒜) per type"""
    family, n = rs.id.family, rs.rank
    omega = group.omega.element

    def phi(mapping: dict[int, int]) -> AffineIsometry:
        return group.by_node_images(_finite_images(rs, mapping)).isometry

    if family == 'A' and n == 1:
        return [('tau_1', omega(1))]
    if family == 'A':
        phi_0 = phi({i: n + 1 - i for i in rs.indices})
        return [('tau_0', phi_0), ('tau_1', omega(1).compose(phi_0))]
    if family == 'B':
        return [('tau_1', omega(1))]
    if family == 'C':
        return [('tau_1', omega(n))]
    if family == 'D' and n == 4:
        phi_0 = phi({3: 4, 4: 3})
        return [('tau_0', phi_0), ('tau_1', phi({1: 3, 3: 1})), ('tau_2', omega(1).compose(phi_0))]
    if family == 'D':
        phi_0 = phi({n - 1: n, n: n - 1})
        if n % 2 == 0:
            return [('tau_0', phi_0), ('tau_1', omega(n - 1))]
        return [('tau_0', phi_0), ('tau_1', phi_0.compose(omega(n)))]
    if family == 'E' and n == 6:
        phi_0 = phi({1: 6, 6: 1, 3: 5, 5: 3})
        return [('tau_0', phi_0), ('tau_1', phi_0.compose(omega(6)))]
    if family == 'E' and n == 7:
        return [('tau_1', omega(7))]
    return []


def expected_alcove_group_label(rs_id: RootSystemId) -> str:
    """Published isomorphism type of Aut(𝒜)"""
    family, n = rs_id.family, rs_id.rank
    if family == 'A':
        return 'Z2' if n == 1 else f'I2({n + 1})'
    if family == 'D':
        return 'S4' if n == 4 else 'I2(4)'
    if family == 'E' and n == 6:
        return 'I2(3)'
    if family in ('B', 'C') or str(rs_id) == 'E7':
        return 'Z2'
    return '1'


def expected_coxeter_matrix(rs_id: RootSystemId) -> list[list[int]]:
    family, n = rs_id.family, rs_id.rank
    if family == 'A' and n >= 2:
        return [[1, n + 1], [n + 1, 1]]
    if family == 'D' and n == 4:
        return [[1, 3, 2], [3, 1, 3], [2, 3, 1]]
    if family == 'D':
        return [[1, 4], [4, 1]]
    if str(rs_id) == 'E6':
        return [[1, 3], [3, 1]]
    if family in ('A', 'B', 'C') or str(rs_id) == 'E7':
        return [[1]]
    return []


@lru_cache(maxsize=None)
def alcove_automorphism_group(rs: RootSystem) -> AlcoveAutGroup:
    """
    Aut(𝒜) as the image of Aut(D̃) under θ, with each element factored as ω_j ∘ ψ.

    :param rs: Root system.
    :type rs: RootSystem
    :rtype: AlcoveAutGroup
    """
    omega = fundamental_group(rs)
    affine_group = diagram_automorphisms(build_diagram(rs, affine=True))
    finite_group = tuple(diagram_automorphisms(build_diagram(rs, affine=False)))
    nodes = tuple(range(rs.rank + 1))

    v_permutations = {0: DiagramAut(nodes, nodes)}
    for j in sorted(rs.minuscule):
        v_permutations[j] = DiagramAut(nodes, _node_images(rs, omega.element(j)))

    elements = []
    for phi in affine_group:
        j = phi(0)
        if j not in v_permutations:
            raise VerificationError(f'affine diagram automorphism of {rs.id} moves 0 to non-minuscule node {j}')
        psi = v_permutations[j].inverse().compose(phi)
        diagram_part = DiagramAut(tuple(rs.indices), psi.images[1:])
        isometry = theta(rs, phi)
        if omega.element(j).compose(theta(rs, diagram_part)) != isometry:
            raise VerificationError(f'factorization of {phi.cycles()} through Omega x Aut(D) fails in {rs.id}')
        elements.append(AlcoveAutomorphism(isometry, phi.images, j, diagram_part))

    elements.sort(key=lambda element: element.node_images)
    isometries = [element.isometry for element in elements]
    try:
        table = multiplication_table(isometries, lambda a, b: a.compose(b))
    except ValueError as error:
        raise VerificationError(f'alcove automorphism group of {rs.id} is not closed') from error
    group = AlcoveAutGroup(
        elements=tuple(elements),
        generators=(),
        table=tuple(tuple(row) for row in table),
        label=structure_label(table),
        omega=omega,
        diagram_group=finite_group,
    )
    generators = tuple((name, group.by_isometry(g)) for name, g in _coxeter_generator_recipe(rs, group))
    logging.info(f' Aut(A) of {rs.id}: order {len(elements)}, {group.label}, {len(generators)} Coxeter generators')
    return replace(group, generators=generators)


def _node_images(rs: RootSystem, g: AffineIsometry) -> tuple[int, ...]:
    images = node_permutation(rs, g.linear)
    if images is None:
        raise VerificationError(f'linear part does not permute the affine nodes of {rs.id}')
    return images


def minuscule_by_automorphism(rs: RootSystem) -> frozenset[int]:
    """Nodes j ≠ 0 with φ(0) = j for some φ ∈ Aut(D̃)"""
    return frozenset(phi(0) for phi in diagram_automorphisms(build_diagram(rs, affine=True))) - {0}


def removal_matches_finite_diagram(rs: RootSystem, j: int) -> bool:
    """Whether D̃ with node j removed is isomorphic to D"""
    affine = build_diagram(rs, affine=True)
    finite = build_diagram(rs, affine=False)
    return nx.is_isomorphic(
        affine.graph(without=(j,)), finite.graph(),
        edge_match=lambda first, second: first['cartan'] == second['cartan'],
    )


@dataclass(frozen=True)
class ChamberAutomorphism:
    """
    Coxeter-diagram automorphism, realized on the unit-normal basis α_i/|α_i|
    where it is a permutation matrix.
    """
    images: tuple[int, ...]
    matrix: RatMat


def coxeter_graph(rs: RootSystem) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(rs.indices)
    for i in rs.indices:
        for j in rs.indices:
            if i < j:
                label = COXETER_LABELS[rs.cartan[i - 1][j - 1] * rs.cartan[j - 1][i - 1]]
                if label > 2:
                    graph.add_edge(i, j, label=label)
    return graph


def chamber_automorphisms(rs: RootSystem) -> list[ChamberAutomorphism]:
    """
    Aut(𝒞) = Aut(C): label-preserving automorphisms of the Coxeter graph.

    Orthogonality in the unit-normal basis is checked through the squared
    cosines G_ij²/(G_ii G_jj), which are rational, and the signs of G_ij.
    """
    graph = coxeter_graph(rs)
    matcher = isomorphism.GraphMatcher(
        graph, graph, edge_match=lambda first, second: first['label'] == second['label'],
    )
    gram = rs.gram
    n = rs.rank
    result = set()
    for mapping in matcher.isomorphisms_iter():
        images = tuple(mapping[i] for i in rs.indices)
        for i in range(n):
            for j in range(n):
                a, b = images[i] - 1, images[j] - 1
                same_cosine = gram[i][j] ** 2 * gram[a][a] * gram[b][b] == gram[a][b] ** 2 * gram[i][i] * gram[j][j]
                if not same_cosine or (gram[i][j] < 0) != (gram[a][b] < 0):
                    raise VerificationError(f'Coxeter graph automorphism {images} is not orthogonal in {rs.id}')
        permutation = tuple(
            tuple(Fraction(int(images[c] == r + 1)) for c in range(n)) for r in range(n)
        )
        result.add(ChamberAutomorphism(images, permutation))
    return sorted(result, key=lambda automorphism: automorphism.images)
