import pytest
from pathlib import Path
from pydantic import ValidationError
from services.exceptions import ConfigurationError
from services.weyl import fundamental_group, node_permutation
from services.polytope import default_balanced_roots, enumerate_vertices, fundamental_polytope, volume
from documents.fixtures_repository import FixturesRepository, build_fixture
from documents.models import (
    FixtureDocument, GroupDocument, IsometryDocument, PolytopeDocument, ReportDocument, RootSystemDocument,
)

FIXTURES = Path(__file__).parent / 'fixtures'


def test_group_document_survives_json(system):
    rs = system('A3')
    omega = fundamental_group(rs)
    document = GroupDocument.of(rs, omega, [node_permutation(rs, g.linear) for g in omega.elements])
    assert GroupDocument.model_validate_json(document.model_dump_json()) == document
    assert document.label == 'Z4'
    assert document.elements[1].node_images == [1, 2, 3, 0]


def test_documents_reject_unknown_fields():
    with pytest.raises(ValidationError):
        ReportDocument(type='A3', claim='x', verdict=True, comment='extra')


def test_rationals_must_be_exact():
    with pytest.raises(ValidationError):
        IsometryDocument(name='g', linear=[['0.5']], translation=['0'], node_images=[0])
    document = IsometryDocument(name='g', linear=[['-1/2']], translation=['3'], node_images=[0])
    assert document.linear == [['-1/2']]


def test_report_mismatch():
    assert ReportDocument(type='A3', claim='c', verdict=False, expected=True).mismatch
    assert not ReportDocument(type='A3', claim='c', verdict=False, expected=False).mismatch
    assert not ReportDocument(type='D4', claim='c', verdict=True).mismatch


def test_root_system_document_of_g2(system):
    document = RootSystemDocument.of(system('G2'))
    assert document.marks == [3, 2]
    assert document.minuscule == []
    assert document.positive_root_count == 6
    assert len(document.alcove_vertices) == 3


def test_polytope_document_of_a2(system):
    rs = system('A2')
    polytope = fundamental_polytope(rs)
    document = PolytopeDocument.of(rs, enumerate_vertices(polytope), default_balanced_roots(rs), volume(polytope))
    assert set(document.bounding) == {'H2', 'H1^0', 'H0^0'}
    assert ['1/3', '1/3', '1/3'] in document.vertices_kac
    assert document.balanced_roots == ['alpha_1 - alpha_2']
    assert document.volume == '1/36'


@pytest.mark.parametrize('name', ['A2', 'A3', 'D4'])
def test_golden_fixtures_match_computation(system, name):
    with FixturesRepository(FIXTURES) as repository:
        assert name in repository.available()
        fixture = repository.get_fixture(name)
    assert fixture == build_fixture(system(name), notes=tuple(fixture.notes))


def test_d4_fixture_records_the_origin_note():
    with FixturesRepository(FIXTURES) as repository:
        notes = repository.get_fixture('D4').notes
    assert any('origin' in note for note in notes)


def test_save_fixture(system, tmp_path):
    fixture = build_fixture(system('E6'), notes=('computed',))
    with FixturesRepository(tmp_path) as repository:
        path = repository.save_fixture(fixture)
        assert repository.available() == ['E6']
    assert path == tmp_path / 'E6.json'
    assert FixtureDocument.model_validate_json(path.read_text(encoding='utf-8')) == fixture
    assert fixture.alcove_aut_label == 'I2(3)'


def test_missing_fixture_directory(tmp_path):
    with pytest.raises(ConfigurationError):
        with FixturesRepository(tmp_path / 'missing'):
            pass
