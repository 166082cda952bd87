from typing import Annotated, Optional
from pydantic import AfterValidator, BaseModel, ConfigDict, Field
from functions.formatting import coweight_combination, parse_rational, rational, rationals
from services.rootsys import RootSystem, alcove_vertices
from services.weyl import AffineIsometry, FundamentalGroup
from services.diagram import AlcoveAutGroup, AlcoveAutomorphism, chamber_automorphisms
from services.polytope import BalancedRoot, Face, HalfSpace, VPolytope, bounding_hyperplanes
from services.fundcheck import FundamentalDomainReport, StratificationReport, Witness, kac_coordinates


def _checked_rational(text: str) -> str:
    parse_rational(text)
    return text


# Exact rational carried as "p" or "p/q"
RationalText = Annotated[str, AfterValidator(_checked_rational)]


class Document(BaseModel):
    """Base of every JSON document written to stdout or --out"""
    model_config = ConfigDict(extra='forbid')


class RootSystemDocument(Document):
    type: str = Field(description='Type name such as E6')
    rank: int
    gram_scale: RationalText = '1'
    gram: list[list[RationalText]]
    cartan: list[list[int]]
    positive_root_count: int
    highest_root: list[int]
    marks: list[int]
    minuscule: list[int] = Field(description='J, indices with mark 1')
    alcove_vertices: list[list[RationalText]] = Field(description='0 and the vertices coweight_i / m_i')

    @classmethod
    def of(cls, rs: RootSystem) -> 'RootSystemDocument':
        return cls(
            type=str(rs.id),
            rank=rs.rank,
            gram_scale=rational(rs.gram_scale),
            gram=[rationals(row) for row in rs.gram],
            cartan=[list(row) for row in rs.cartan],
            positive_root_count=len(rs.positive_roots),
            highest_root=[int(value) for value in rs.highest_root],
            marks=list(rs.marks),
            minuscule=sorted(rs.minuscule),
            alcove_vertices=[rationals(vertex) for vertex in alcove_vertices(rs)],
        )


class IsometryDocument(Document):
    name: str
    linear: list[list[RationalText]]
    translation: list[RationalText]
    node_images: list[int] = Field(description='Image of node i at position i, node 0 being -alpha_0')

    @classmethod
    def of(cls, name: str, g: AffineIsometry, node_images: tuple[int, ...]) -> 'IsometryDocument':
        return cls(
            name=name,
            linear=[rationals(row) for row in g.linear],
            translation=rationals(g.translation),
            node_images=list(node_images),
        )


class GroupDocument(Document):
    type: str
    label: str = Field(description='Isomorphism type detected from the multiplication table')
    order: int
    elements: list[IsometryDocument]
    table: list[list[int]]

    @classmethod
    def of(cls, rs: RootSystem, omega: FundamentalGroup, node_images: list[tuple[int, ...]]) -> 'GroupDocument':
        return cls(
            type=str(rs.id),
            label=omega.label,
            order=omega.order,
            elements=[IsometryDocument.of(name, g, images)
                      for name, g, images in zip(omega.names, omega.elements, node_images)],
            table=[list(row) for row in omega.table],
        )


class AlcoveElementDocument(IsometryDocument):
    omega_index: int = Field(description='j of the factor omega_j, 0 for the identity')
    diagram_part: str = Field(description='Cycles of the factor in Aut(D)')

    @classmethod
    def of_element(cls, element: AlcoveAutomorphism) -> 'AlcoveElementDocument':
        return cls(
            name=element.node_permutation.cycles(),
            linear=[rationals(row) for row in element.isometry.linear],
            translation=rationals(element.isometry.translation),
            node_images=list(element.node_images),
            omega_index=element.omega_index,
            diagram_part=element.diagram_part.cycles(),
        )


class AlcoveAutDocument(Document):
    type: str
    label: str
    expected_label: str
    order: int
    omega_order: int
    diagram_order: int
    chamber_order: int
    elements: list[AlcoveElementDocument]
    generators: dict[str, list[int]] = Field(description='Coxeter generators as node permutations')
    coxeter_matrix: list[list[int]]
    table: list[list[int]]

    @classmethod
    def of(cls, rs: RootSystem, group: AlcoveAutGroup, expected_label: str) -> 'AlcoveAutDocument':
        return cls(
            type=str(rs.id),
            label=group.label,
            expected_label=expected_label,
            order=group.order,
            omega_order=group.omega.order,
            diagram_order=len(group.diagram_group),
            chamber_order=len(chamber_automorphisms(rs)),
            elements=[AlcoveElementDocument.of_element(element) for element in group.elements],
            generators={name: list(element.node_images) for name, element in group.generators},
            coxeter_matrix=group.coxeter_matrix(),
            table=[list(row) for row in group.table],
        )


class HalfSpaceDocument(Document):
    label: str
    normal: list[RationalText]
    offset: RationalText
    sense: str

    @classmethod
    def of(cls, halfspace: HalfSpace) -> 'HalfSpaceDocument':
        return cls(
            label=halfspace.label,
            normal=rationals(halfspace.normal),
            offset=rational(halfspace.offset),
            sense=halfspace.sense,
        )


class PolytopeDocument(Document):
    type: str
    label: str
    halfspaces: list[HalfSpaceDocument]
    vertices: list[list[RationalText]]
    vertices_in_coweights: list[str]
    vertices_kac: list[list[RationalText]] = Field(description='Kac coordinates [b0, ..., bn] of each vertex')
    bounding: list[str] = Field(description='Labels of the bounding hyperplanes')
    balanced_roots: list[str] = []
    volume: Optional[RationalText] = None

    @classmethod
    def of(cls, rs: RootSystem, polytope: VPolytope, roots: tuple[BalancedRoot, ...] = (),
           volume=None) -> 'PolytopeDocument':
        return cls(
            type=str(rs.id),
            label=polytope.source.label,
            halfspaces=[HalfSpaceDocument.of(halfspace) for halfspace in polytope.source.halfspaces],
            vertices=[rationals(vertex) for vertex in polytope.vertices],
            vertices_in_coweights=[coweight_combination(rs.to_coweight_basis(vertex)) for vertex in polytope.vertices],
            vertices_kac=[rationals(kac_coordinates(rs, vertex)) for vertex in polytope.vertices],
            bounding=[halfspace.label for halfspace in bounding_hyperplanes(polytope)],
            balanced_roots=[root.describe() for root in roots],
            volume=None if volume is None else rational(volume),
        )


class FaceDocument(Document):
    vertices: list[int]
    dim: int
    halfspaces: list[str]

    @classmethod
    def of(cls, face: Face, labels: tuple[str, ...]) -> 'FaceDocument':
        return cls(vertices=sorted(face.vertices), dim=face.dim, halfspaces=list(labels))


class WitnessDocument(Document):
    face: FaceDocument
    element: str
    node_images: list[int]
    fixed_point: list[RationalText]
    moved_point: list[RationalText]
    fixed_kac: list[RationalText]
    moved_kac: list[RationalText]

    @classmethod
    def of(cls, rs: RootSystem, witness: Witness) -> 'WitnessDocument':
        return cls(
            face=FaceDocument.of(witness.face, witness.face_labels),
            element=witness.element,
            node_images=list(witness.node_images),
            fixed_point=rationals(witness.fixed_point),
            moved_point=rationals(witness.moved_point),
            fixed_kac=rationals(kac_coordinates(rs, witness.fixed_point)),
            moved_kac=rationals(kac_coordinates(rs, witness.moved_point)),
        )


class OverlapDocument(Document):
    element: str
    point: list[RationalText]


class ReportDocument(Document):
    type: str
    claim: str
    verdict: bool
    expected: Optional[bool] = Field(default=None, description='Published verdict, when there is one')
    details: dict[str, str] = {}
    witnesses: list[WitnessDocument] = []
    overlaps: list[OverlapDocument] = []

    @classmethod
    def of_fundamental(cls, rs: RootSystem, report: FundamentalDomainReport,
                       expected: Optional[bool] = None) -> 'ReportDocument':
        return cls(
            type=str(rs.id),
            claim=report.claim,
            verdict=report.verdict,
            expected=expected,
            details={
                'disjoint': str(report.disjoint).lower(),
                'covering': str(report.covering).lower(),
                'order': str(report.order),
                'domain_volume': rational(report.domain_volume),
                'ambient_volume': rational(report.ambient_volume),
            },
            overlaps=[OverlapDocument(element=overlap.element, point=rationals(overlap.point))
                      for overlap in report.overlaps],
        )

    @classmethod
    def of_stratification(cls, rs: RootSystem, report: StratificationReport,
                          expected: Optional[bool] = None) -> 'ReportDocument':
        return cls(
            type=str(rs.id),
            claim=report.claim,
            verdict=report.stratified,
            expected=expected,
            details={'faces_checked': str(report.faces_checked), 'witness_count': str(len(report.witnesses))},
            witnesses=[WitnessDocument.of(rs, witness) for witness in report.witnesses],
        )

    @property
    def mismatch(self) -> bool:
        return self.expected is not None and self.expected != self.verdict


class VolumeDocument(Document):
    type: str
    alcove: RationalText
    alcove_simplex: RationalText = Field(description='Alcove volume from the simplex determinant')
    komrakov_premet: RationalText
    fundamental: RationalText
    dirichlet: Optional[RationalText] = None
    omega_order: int
    alcove_aut_order: int
    identities: dict[str, bool]


class SweepRowDocument(Document):
    type: str
    omega_order: int
    diagram_order: int
    alcove_aut_order: int
    kp_vertices: int
    fundamental_vertices: int
    fund_domain: str = Field(default='-', description="'true', 'false', 'skipped(cap)' or '-' when not run")
    stratified: str = '-'


class SweepDocument(Document):
    family: str
    ranks: list[int]
    checks: list[str]
    rows: list[SweepRowDocument]


class FixtureDocument(Document):
    type: str
    omega_node_images: dict[str, list[int]]
    omega_table: list[list[int]]
    alcove_aut_order: int
    alcove_aut_label: str
    generators: dict[str, list[int]]
    coxeter_matrix: list[list[int]]
    notes: list[str] = []
