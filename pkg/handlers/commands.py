import logging
from fractions import Fraction
from typing import Any, Optional
from dataclasses import dataclass
from handlers import loops
from handlers.errors import EXIT_OK, EXIT_VERIFICATION
from services.rootsys import RootSystemId, alcove_vertices
from services.registry import RootSystemRegistry
from services.exceptions import DomainError, UsageError, VerificationError
from functions.formatting import bracket, parse_rational, pretty_table, rational, tsv
from services import diagram, fundcheck, polytope, weyl
from documents import models

SYSTEM_VERBS = (
    'info', 'omega', 'aut-alcove', 'kp', 'fund-polytope', 'dirichlet',
    'check-fund', 'check-stratified', 'table-a', 'table-b', 'volume',
)
VERBS = SYSTEM_VERBS + ('sweep',)
FORMATS = ('json', 'tsv', 'pretty')
SUPPORT_VERBS = ('fund-polytope', 'table-b', 'check-fund', 'check-stratified', 'volume')
GROUPS = {'check-fund': ('aut', 'omega'), 'check-stratified': ('omega', 'aut', 'waff', 'wext')}


def parse_support(text: str) -> tuple[frozenset[int], frozenset[int]]:
    """'1,2:5,6' → ({1, 2}, {5, 6})"""
    try:
        plus, minus = text.split(':')
        return (frozenset(int(i) for i in plus.split(',') if i),
                frozenset(int(i) for i in minus.split(',') if i))
    except ValueError as error:
        raise UsageError(f'--support expects PLUS:MINUS such as 1,2:5,6, got {text!r}') from error


def parse_ranks(text: str) -> tuple[int, int]:
    """'2-6' → (2, 6); a single rank is a range of one"""
    try:
        parts = [int(part) for part in text.split('-')]
    except ValueError as error:
        raise UsageError(f'--ranks expects a-b, got {text!r}') from error
    if len(parts) == 1:
        return parts[0], parts[0]
    if len(parts) != 2:
        raise UsageError(f'--ranks expects a-b, got {text!r}')
    return parts[0], parts[1]


@dataclass(frozen=True)
class Command:
    """A validated command line"""
    verb: str
    family: str
    rank: Optional[int] = None
    format: str = 'json'
    support: Optional[tuple[frozenset[int], frozenset[int]]] = None
    ranks: Optional[tuple[int, int]] = None
    checks: tuple[str, ...] = ()
    group: Optional[str] = None
    scale: Fraction = Fraction(1)
    out: Optional[str] = None

    @classmethod
    def from_arguments(cls, arguments: Any) -> 'Command':
        """
        Builds a command from parsed arguments and checks verb/option compatibility.

        :param arguments: argparse namespace.
        :raises UsageError: Options that the verb does not accept, or a missing rank.
        :rtype: Command
        """
        verb = arguments.verb
        family, rank = arguments.family.upper(), arguments.rank
        if rank is None and len(family) > 1:
            family, rank = family[0], family[1:]
        if rank is not None:
            try:
                rank = int(rank)
            except ValueError as error:
                raise UsageError(f'rank must be an integer, got {rank!r}') from error

        if verb == 'sweep':
            if arguments.ranks is None and rank is None:
                raise UsageError('sweep needs --ranks a-b')
            ranks = parse_ranks(arguments.ranks) if arguments.ranks else (rank, rank)
        else:
            if rank is None:
                raise UsageError(f'{verb} needs a rank, e.g. "{verb} A 3"')
            if arguments.ranks or arguments.checks:
                raise UsageError('--ranks and --checks apply to sweep only')
            ranks = None

        if arguments.support and verb not in SUPPORT_VERBS:
            raise UsageError(f'--support does not apply to {verb}')
        if arguments.group and verb not in GROUPS:
            raise UsageError(f'--group does not apply to {verb}')
        if arguments.group and arguments.group not in GROUPS[verb]:
            raise UsageError(f'--group for {verb} must be one of {", ".join(GROUPS[verb])}')

        checks = tuple(check for check in (arguments.checks or '').split(',') if check)
        unknown = [check for check in checks if check not in loops.SWEEP_CHECKS]
        if unknown:
            raise UsageError(f'unknown sweep checks {unknown}, expected {", ".join(loops.SWEEP_CHECKS)}')
        try:
            scale = parse_rational(arguments.scale)
        except ValueError as error:
            raise UsageError(str(error)) from error

        return cls(
            verb=verb,
            family=family,
            rank=rank,
            format=arguments.format,
            support=parse_support(arguments.support) if arguments.support else None,
            ranks=ranks,
            checks=checks,
            group=arguments.group or (GROUPS[verb][0] if verb in GROUPS else None),
            scale=scale,
            out=arguments.out,
        )

    @property
    def system_id(self) -> RootSystemId:
        return RootSystemId(self.family, self.rank)


@dataclass(frozen=True)
class CommandResult:
    document: models.Document
    exit_code: int = EXIT_OK


def command_handler(command: Command) -> CommandResult:
    """
    Routes a command to the handler of its verb.

    :param command: Validated command.
    :type command: Command
    :return: Document to print and exit code; 2 when a published claim disagrees with the computation.
    :rtype: CommandResult
    """
    if command.verb == 'sweep':
        return CommandResult(loops.sweep(command.family, command.ranks, command.checks, command.scale))

    system_commands = SystemCommands(command)
    if command.verb == 'info':
        return system_commands.info_command_handler()
    elif command.verb == 'omega':
        return system_commands.omega_command_handler()
    elif command.verb in ('aut-alcove', 'table-a'):
        return system_commands.alcove_aut_command_handler(elements=command.verb == 'aut-alcove')
    elif command.verb == 'kp':
        return system_commands.kp_command_handler()
    elif command.verb in ('fund-polytope', 'table-b'):
        return system_commands.fundamental_command_handler(check_claims=command.verb == 'table-b')
    elif command.verb == 'dirichlet':
        return system_commands.dirichlet_command_handler()
    elif command.verb == 'check-fund':
        return system_commands.check_fund_command_handler()
    elif command.verb == 'check-stratified':
        return system_commands.check_stratified_command_handler()
    elif command.verb == 'volume':
        return system_commands.volume_command_handler()
    raise UsageError(f'unknown verb {command.verb!r}')


class SystemCommands:
    """
    Handles the verbs that act on a single root system.

    :param command: The validated command.
    :type command: Command
    """
    def __init__(self, command: Command):
        self.command = command
        self.rs = RootSystemRegistry().get(command.system_id, command.scale)

    def _result(self, document: models.Document, claims_hold: bool = True) -> CommandResult:
        if not claims_hold:
            logging.warning(f' Published claim does not match the computation for {self.rs.id} ({self.command.verb})')
        return CommandResult(document, EXIT_OK if claims_hold else EXIT_VERIFICATION)

    def _roots(self) -> Optional[tuple[polytope.BalancedRoot, ...]]:
        """Balanced roots from --support, None for the per-type defaults"""
        if self.command.support is None:
            return None
        phi = polytope.standard_involution(self.rs)
        if phi is None:
            raise DomainError(f'{self.rs.id} has no diagram involution to balance a root against')
        plus, minus = self.command.support
        minuscule = (plus | minus) <= self.rs.minuscule
        if not minuscule:
            logging.warning(f' Support {sorted(plus)}:{sorted(minus)} is not minuscule in {self.rs.id}')
        return (polytope.balanced_root(self.rs, phi, plus, minus, minuscule=minuscule),)

    def info_command_handler(self) -> CommandResult:
        return self._result(models.RootSystemDocument.of(self.rs))

    def omega_command_handler(self) -> CommandResult:
        omega = weyl.fundamental_group(self.rs)
        images = [weyl.node_permutation(self.rs, g.linear) for g in omega.elements]
        document = models.GroupDocument.of(self.rs, omega, images)
        return self._result(document, omega.label == weyl.expected_fundamental_group_label(self.rs))

    def alcove_aut_command_handler(self, elements: bool = True) -> CommandResult:
        group = diagram.alcove_automorphism_group(self.rs)
        expected = diagram.expected_alcove_group_label(self.rs.id)
        document = models.AlcoveAutDocument.of(self.rs, group, expected)
        if not elements:
            document.elements = []
            document.table = []
        claims_hold = group.label == expected and group.coxeter_matrix() == diagram.expected_coxeter_matrix(self.rs.id)
        return self._result(document, claims_hold)

    def kp_command_handler(self) -> CommandResult:
        vertices = polytope.enumerate_vertices(polytope.komrakov_premet(self.rs))
        if vertices.vertex_set() != frozenset(polytope.kp_vertices_closed_form(self.rs)):
            raise VerificationError(f'closed-form vertices of {vertices.source.label} differ from the enumerated ones')
        return self._result(models.PolytopeDocument.of(self.rs, vertices, volume=polytope.volume(vertices)))

    def fundamental_command_handler(self, check_claims: bool = False) -> CommandResult:
        roots = self._roots()
        fundamental = polytope.fundamental_polytope(self.rs, roots)
        vertices = polytope.enumerate_vertices(fundamental)
        used = polytope.default_balanced_roots(self.rs) if roots is None else roots
        document = models.PolytopeDocument.of(self.rs, vertices, used, volume=polytope.volume(vertices))

        claims_hold = True
        if check_claims and all(root.minuscule for root in used):
            inherited = frozenset(polytope.inherited_vertices(self.rs, used))
            claims_hold = vertices.vertex_set() == inherited
            if roots is None and self.rs.id.family == 'A' and self.rs.rank >= 2:
                claims_hold = claims_hold and len(vertices.vertices) == polytope.vertex_count_formula_A(self.rs.rank)
        return self._result(document, claims_hold)

    def dirichlet_command_handler(self) -> CommandResult:
        vertices = polytope.enumerate_vertices(weyl.dirichlet_domain(self.rs))
        return self._result(models.PolytopeDocument.of(self.rs, vertices, volume=polytope.volume(vertices)))

    def check_fund_command_handler(self) -> CommandResult:
        if self.command.group == 'omega':
            report = fundcheck.is_fundamental_domain(polytope.komrakov_premet(self.rs), fundcheck.omega_action(self.rs))
        else:
            domain = polytope.fundamental_polytope(self.rs, self._roots())
            report = fundcheck.is_fundamental_domain(domain, fundcheck.alcove_aut_action(self.rs))
        expected = True if self.command.support is None else None
        document = models.ReportDocument.of_fundamental(self.rs, report, expected)
        return self._result(document, not document.mismatch)

    def check_stratified_command_handler(self) -> CommandResult:
        group = self.command.group
        if group == 'omega':
            report = fundcheck.stratified_centralizers(fundcheck.omega_action(self.rs), polytope.komrakov_premet(self.rs))
            expected = fundcheck.omega_stratification_claim(self.rs.id)
        elif group == 'aut':
            domain = polytope.fundamental_polytope(self.rs, self._roots())
            report = fundcheck.stratified_centralizers(fundcheck.alcove_aut_action(self.rs), domain)
            expected = fundcheck.alcove_aut_stratification_claim(self.rs.id) if self.command.support is None else None
        elif group == 'waff':
            report = fundcheck.affine_weyl_stratified(self.rs)
            expected = True
        else:
            report = fundcheck.ext_stratified_centralizers(self.rs, polytope.komrakov_premet(self.rs))
            expected = fundcheck.omega_stratification_claim(self.rs.id)
        document = models.ReportDocument.of_stratification(self.rs, report, expected)
        return self._result(document, not document.mismatch)

    def volume_command_handler(self) -> CommandResult:
        rs = self.rs
        alcove_volume = polytope.volume(polytope.alcove(rs))
        kp_volume = polytope.volume(polytope.komrakov_premet(rs))
        fundamental_volume = polytope.volume(polytope.fundamental_polytope(rs, self._roots()))
        omega_order = weyl.fundamental_group(rs).order
        aut_order = diagram.alcove_automorphism_group(rs).order
        simplex = polytope.simplex_volume(list(alcove_vertices(rs)))

        identities = {
            'simplex_agrees': simplex == alcove_volume,
            'omega_kp_covers_alcove': omega_order * kp_volume == alcove_volume,
            'aut_fundamental_covers_alcove': aut_order * fundamental_volume == alcove_volume,
        }
        dirichlet_volume = None
        if omega_order > 1:
            dirichlet_volume = polytope.volume(weyl.dirichlet_domain(rs))
            identities['omega_dirichlet_covers_alcove'] = omega_order * dirichlet_volume == alcove_volume

        document = models.VolumeDocument(
            type=str(rs.id),
            alcove=rational(alcove_volume),
            alcove_simplex=rational(simplex),
            komrakov_premet=rational(kp_volume),
            fundamental=rational(fundamental_volume),
            dirichlet=None if dirichlet_volume is None else rational(dirichlet_volume),
            omega_order=omega_order,
            alcove_aut_order=aut_order,
            identities=identities,
        )
        claims_hold = all(identities.values()) if self.command.support is None else identities['simplex_agrees']
        return self._result(document, claims_hold)


def _cell(value: Any) -> str:
    if value is None:
        return '-'
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, list) and not any(isinstance(item, list) for item in value):
        return bracket(value)
    return str(value)


def _key_value_rows(document: models.Document, fields: tuple[str, ...]) -> list[tuple[str, str]]:
    data = document.model_dump()
    return [(name, _cell(data[name])) for name in fields]


def document_table(document: models.Document) -> tuple[tuple[str, ...], list[tuple]]:
    """Header and rows of the text rendering of a document"""
    if isinstance(document, models.RootSystemDocument):
        fields = ('type', 'rank', 'gram_scale', 'marks', 'minuscule', 'positive_root_count', 'highest_root')
        rows = _key_value_rows(document, fields)
        rows += [(f'vertex {k}', bracket(vertex)) for k, vertex in enumerate(document.alcove_vertices)]
        return ('field', 'value'), rows
    if isinstance(document, models.GroupDocument):
        rows = [(element.name, bracket(element.node_images), bracket(element.translation))
                for element in document.elements]
        return ('element', 'node_images', 'translation'), rows
    if isinstance(document, models.AlcoveAutDocument):
        rows = [('label', document.label, f'expected {document.expected_label}'),
                ('order', document.order, f'{document.omega_order} x {document.diagram_order}'),
                ('coxeter_matrix', document.coxeter_matrix, '')]
        rows += [(name, bracket(images), 'generator') for name, images in document.generators.items()]
        rows += [(element.name, bracket(element.node_images), f'omega_{element.omega_index} {element.diagram_part}')
                 for element in document.elements]
        return ('name', 'value', 'note'), rows
    if isinstance(document, models.PolytopeDocument):
        rows = [(k, bracket(vertex), combination, bracket(kac)) for k, (vertex, combination, kac)
                in enumerate(zip(document.vertices, document.vertices_in_coweights, document.vertices_kac))]
        rows.append(('bounding', ' '.join(document.bounding), '', ''))
        for root in document.balanced_roots:
            rows.append(('balanced', root, '', ''))
        rows.append(('volume', _cell(document.volume), '', ''))
        return ('vertex', 'coordinates', 'coweights', 'kac'), rows
    if isinstance(document, models.ReportDocument):
        rows = _key_value_rows(document, ('type', 'claim', 'verdict', 'expected'))
        rows += [(name, value) for name, value in document.details.items()]
        for k, witness in enumerate(document.witnesses):
            rows.append((f'witness {k}', f'{witness.element} on {" ".join(witness.face.halfspaces)}: '
                                         f'fixes {bracket(witness.fixed_kac)}, moves {bracket(witness.moved_kac)}'))
        for overlap in document.overlaps:
            rows.append(('overlap', f'{overlap.element} at {bracket(overlap.point)}'))
        return ('field', 'value'), rows
    if isinstance(document, models.VolumeDocument):
        fields = ('type', 'alcove', 'alcove_simplex', 'komrakov_premet', 'fundamental', 'dirichlet',
                  'omega_order', 'alcove_aut_order')
        rows = _key_value_rows(document, fields)
        rows += [(name, _cell(value)) for name, value in document.identities.items()]
        return ('field', 'value'), rows
    if isinstance(document, models.SweepDocument):
        header = tuple(models.SweepRowDocument.model_fields)
        rows = [tuple(_cell(value) for value in row.model_dump().values()) for row in document.rows]
        return header, rows
    raise TypeError(f'no text rendering for {type(document).__name__}')


def render(document: models.Document, output_format: str) -> str:
    """
    Renders a document for stdout.

    :param document: Document to render.
    :param output_format: 'json', 'tsv' or 'pretty'.
    :type output_format: str
    :rtype: str
    """
    if output_format == 'json':
        return document.model_dump_json(indent=2)
    header, rows = document_table(document)
    return tsv(header, rows) if output_format == 'tsv' else pretty_table(header, rows)
