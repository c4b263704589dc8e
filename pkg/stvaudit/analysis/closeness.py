"""
Closeness of an STV count.

A round is close for a group of continuing candidates, holding at least
one eventual winner and one eventual loser, when the smallest of their
opening totals is at least p percent of the largest. Comparisons are exact
integer cross-multiplications in vote units.
"""

import logging
from dataclasses import dataclass
from itertools import combinations

from stvaudit import config
from stvaudit.analysis.condorcet import condorcet_committee
from stvaudit.analysis.methods import sntv
from stvaudit.core.model import Election
from stvaudit.engine.tabulate import TabulationRecord, TiePolicy

logger = logging.getLogger(__name__)


def _groups(record: TabulationRecord, size: int):
    """(smallest, largest) opening totals of every qualifying group, over all rounds."""
    winners = record.winner_set
    for r in record.rounds:
        for group in combinations(sorted(r.totals), size):
            if not any(c in winners for c in group) or all(c in winners for c in group):
                continue
            units = [r.totals[c].units for c in group]
            yield min(units), max(units)


def _close(record: TabulationRecord, size: int, p: int) -> bool:
    return any(low * 100 >= p * high for low, high in _groups(record, size))


def three_candidate_close(election: Election, record: TabulationRecord, p: int) -> bool:
    return _close(record, 3, p)


def two_candidate_close(election: Election, record: TabulationRecord, p: int) -> bool:
    return _close(record, 2, p)


def _by_percent(record: TabulationRecord, size: int, percents: range) -> dict[int, bool]:
    groups = list(_groups(record, size))
    return {p: any(low * 100 >= p * high for low, high in groups) for p in percents}


def percent_range() -> range:
    return range(config.CLOSENESS_P_MIN, config.CLOSENESS_P_MAX + 1)


@dataclass(frozen=True)
class ClosenessReport:
    election_title: str
    seats: int
    first_round_terminated: bool
    three_close: dict[int, bool]
    two_close: dict[int, bool]
    stv_winners: frozenset[int]
    condorcet_committee: frozenset[int] | None
    sntv_winners: frozenset[int]
    sntv_tie_broken: bool = False

    @property
    def methods_agree(self) -> bool:
        return self.condorcet_committee is not None and \
            self.stv_winners == self.sntv_winners == self.condorcet_committee


def closeness_report(election: Election, record: TabulationRecord,
                     tie_policy: TiePolicy | str = TiePolicy.FAIL) -> ClosenessReport:
    """All closeness measures of one counted election.

    Raises TieError when SNTV ties at the seat boundary under 'fail'.
    """
    active = election.active_candidates()
    percents = percent_range()
    sntv_set, broken = sntv(election.profile, election.seats, tie_policy, active)
    report = ClosenessReport(
        election_title=election.title,
        seats=election.seats,
        first_round_terminated=record.first_round_terminated(),
        three_close=_by_percent(record, 3, percents),
        two_close=_by_percent(record, 2, percents),
        stv_winners=record.winner_set,
        condorcet_committee=condorcet_committee(election.profile, election.seats, active),
        sntv_winners=sntv_set,
        sntv_tie_broken=broken,
    )
    logger.debug("Closeness of %r: condorcet=%s sntv=%s agree=%s", election.title,
                 report.condorcet_committee, sorted(report.sntv_winners), report.methods_agree)
    return report
