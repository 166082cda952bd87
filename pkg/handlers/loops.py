import logging
from typing import Callable
from services.rootsys import RootSystemId
from services.registry import RootSystemRegistry
from services.exceptions import DomainError, FaceCapExceededError
from services import diagram, fundcheck, polytope, weyl
from documents.models import SweepDocument, SweepRowDocument

SWEEP_CHECKS = ('fund', 'strat')
SKIPPED_CAP = 'skipped(cap)'


class TaskHandlers:
    @staticmethod
    def run_task(function: Callable[..., bool], **kwargs) -> str:
        """
        Runs one sweep check and renders its verdict.

        A face-cap hit marks the cell instead of aborting the sweep.

        :param function: Check returning a verdict.
        :type function: Callable[..., bool]
        :param kwargs: Keyword arguments to pass to the function.
        :return: 'true', 'false' or 'skipped(cap)'.
        :rtype: str
        """
        try:
            return str(bool(function(**kwargs))).lower()
        except FaceCapExceededError as error:
            logging.warning(f' Sweep check {function.__name__} skipped: {error}')
            return SKIPPED_CAP

    @staticmethod
    def fund_check(rs) -> bool:
        return fundcheck.is_fundamental_domain(polytope.fundamental_polytope(rs), fundcheck.alcove_aut_action(rs)).verdict

    @staticmethod
    def strat_check(rs) -> bool:
        return fundcheck.stratified_centralizers(fundcheck.omega_action(rs), polytope.komrakov_premet(rs)).stratified

    def sweep_row(self, rs, checks: tuple[str, ...]) -> SweepRowDocument:
        group = diagram.alcove_automorphism_group(rs)
        row = SweepRowDocument(
            type=str(rs.id),
            omega_order=weyl.fundamental_group(rs).order,
            diagram_order=len(group.diagram_group),
            alcove_aut_order=group.order,
            kp_vertices=len(polytope.enumerate_vertices(polytope.komrakov_premet(rs)).vertices),
            fundamental_vertices=len(polytope.enumerate_vertices(polytope.fundamental_polytope(rs)).vertices),
        )
        if 'fund' in checks:
            row.fund_domain = self.run_task(self.fund_check, rs=rs)
        if 'strat' in checks:
            row.stratified = self.run_task(self.strat_check, rs=rs)
        return row


def sweep(family: str, ranks: tuple[int, int], checks: tuple[str, ...] = (), gram_scale=1) -> SweepDocument:
    """
    One summary row per rank of a family, in increasing rank order.

    :param family: Family letter.
    :type family: str
    :param ranks: Inclusive rank range.
    :type ranks: tuple[int, int]
    :param checks: Any of 'fund' and 'strat'.
    :type checks: tuple[str, ...]
    :raises DomainError: A rank in the range is invalid for the family.
    :rtype: SweepDocument
    """
    low, high = ranks
    if low > high:
        raise DomainError(f'empty rank range {low}-{high}')
    registry = RootSystemRegistry()
    handlers = TaskHandlers()
    rows = []
    for rank in range(low, high + 1):
        rs = registry.get(RootSystemId(family, rank), gram_scale)
        logging.info(f' Sweep row {rs.id}')
        rows.append(handlers.sweep_row(rs, checks))
    return SweepDocument(family=family, ranks=list(range(low, high + 1)), checks=list(checks), rows=rows)
