import logging
from pathlib import Path
from typing import Optional
from functions.settings import fixtures_dir
from services.rootsys import RootSystem
from services.exceptions import ConfigurationError
from services.weyl import fundamental_group, node_permutation
from services.diagram import alcove_automorphism_group
from documents.models import FixtureDocument


class FixturesRepository:
    """A repository of golden fixture documents stored as <type>.json"""
    def __init__(self, directory: Optional[Path] = None):
        self.directory = Path(directory) if directory is not None else fixtures_dir()

    def __enter__(self) -> 'FixturesRepository':
        """Checks the fixture directory and returns a repository instance"""
        if not self.directory.is_dir():
            raise ConfigurationError(f'fixture directory {self.directory} does not exist')
        self._cache: dict[str, FixtureDocument] = {}
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        """Drops the documents read in this context"""
        self._cache.clear()

    def available(self) -> list[str]:
        """
        Lists the types that have a fixture.

        :return: Type names such as 'A3', sorted.
        :rtype: list[str]
        """
        return sorted(path.stem for path in self.directory.glob('*.json'))

    def get_fixture(self, type_name: str) -> FixtureDocument:
        """
        Reads and validates one fixture.

        :param type_name: Type name such as 'D4'.
        :type type_name: str
        :return: The validated document.
        :rtype: FixtureDocument
        """
        if type_name not in self._cache:
            path = self.directory / f'{type_name}.json'
            self._cache[type_name] = FixtureDocument.model_validate_json(path.read_text(encoding='utf-8'))
        return self._cache[type_name]

    def save_fixture(self, fixture: FixtureDocument) -> Path:
        """
        Writes a fixture, replacing an existing one.

        :param fixture: Document to store.
        :type fixture: FixtureDocument
        :return: Path of the written file.
        :rtype: Path
        """
        path = self.directory / f'{fixture.type}.json'
        path.write_text(fixture.model_dump_json(indent=2) + '\n', encoding='utf-8')
        self._cache[fixture.type] = fixture
        logging.info(f' Fixture {fixture.type} written to {path}')
        return path


def build_fixture(rs: RootSystem, notes: tuple[str, ...] = ()) -> FixtureDocument:
    """Computes the fixture document of a root system from scratch"""
    omega = fundamental_group(rs)
    group = alcove_automorphism_group(rs)
    return FixtureDocument(
        type=str(rs.id),
        omega_node_images={
            name: list(node_permutation(rs, g.linear)) for name, g in zip(omega.names, omega.elements)
        },
        omega_table=[list(row) for row in omega.table],
        alcove_aut_order=group.order,
        alcove_aut_label=group.label,
        generators={name: list(element.node_images) for name, element in group.generators},
        coxeter_matrix=group.coxeter_matrix(),
        notes=list(notes),
    )
