"""
Exhaustive single-ballot-type oracle for small elections.

Enumerates every admissible change to one ballot type at every count and
keeps the changes that verify. Used to check the searchers on elections
small enough to enumerate.
"""

import logging
from collections.abc import Iterator
from dataclasses import dataclass

from stvaudit import config
from stvaudit.core.errors import OracleCapExceeded
from stvaudit.core.model import Election
from stvaudit.engine.tabulate import TiePolicy
from stvaudit.search import moves
from stvaudit.search.budget import SearchBudget, SearchContext
from stvaudit.search.certificate import (
    AnomalyCertificate,
    AnomalyKind,
    BallotModification,
    ModificationKind,
)
from stvaudit.search.committee import check_committee_size

logger = logging.getLogger(__name__)

UNLIMITED = SearchBudget(max_probes=10 ** 12, max_seconds=0)


@dataclass(frozen=True)
class OracleCaps:
    max_candidates: int = config.ORACLE_MAX_CANDIDATES
    max_types: int = config.ORACLE_MAX_TYPES
    max_voters: int = config.ORACLE_MAX_VOTERS

    def admits(self, election: Election) -> bool:
        return (len(election.active_candidates()) <= self.max_candidates
                and len(election.profile.ballots) <= self.max_types
                and election.profile.total_voters() <= self.max_voters)


Move = tuple[int, int | None, tuple[BallotModification, ...]]


def _counts(kind: ModificationKind, source: tuple[int, ...], result, total: int):
    for count in range(1, total + 1):
        yield (BallotModification(kind, source, result, count),)


def single_type_moves(ctx: SearchContext, kind: AnomalyKind) -> Iterator[Move]:
    """Every admissible single-type change for `kind`, as (focal, displaced, modifications)."""
    ballots = ctx.election.profile.ballots
    active = list(ctx.election.active_candidates())

    if kind is AnomalyKind.UPWARD:
        for x in sorted(ctx.winners):
            for ballot in ballots:
                for result in moves.shift_up_results(ballot.ranking, x):
                    for mods in _counts(ModificationKind.SHIFT_UP, ballot.ranking, result, ballot.count):
                        yield x, None, mods

    elif kind is AnomalyKind.DOWNWARD_STRONG:
        for x in sorted(ctx.losers):
            for ballot in ballots:
                for result in moves.shift_down_results(ballot.ranking, x):
                    for mods in _counts(ModificationKind.SHIFT_DOWN, ballot.ranking, result, ballot.count):
                        yield x, None, mods

    elif kind is AnomalyKind.DOWNWARD_WEAK:
        for x in sorted(ctx.losers):
            for ballot in ballots:
                if ballot.ranking != (x,):
                    continue
                for result in moves.bullet_rewrites(x, active):
                    for mods in _counts(ModificationKind.BULLET_REWRITE, ballot.ranking, result, ballot.count):
                        yield x, None, mods

    elif kind is AnomalyKind.NO_SHOW:
        for x in sorted(ctx.losers):
            for y in sorted(ctx.winners):
                for ballot in ballots:
                    if not moves.removable(ballot, x, y, ctx.seats):
                        continue
                    for mods in _counts(ModificationKind.REMOVE, ballot.ranking, None, ballot.count):
                        yield x, y, mods


def exhaustive_oracle(election: Election, kind: AnomalyKind, caps: OracleCaps | None = None,
                      tie_policy: TiePolicy | str = TiePolicy.FAIL) -> list[AnomalyCertificate]:
    """All verified single-type certificates of `kind`; raises OracleCapExceeded on large input."""
    caps = caps or OracleCaps()
    if not caps.admits(election):
        raise OracleCapExceeded(
            f"election with {len(election.active_candidates())} candidates, "
            f"{len(election.profile.ballots)} ballot types, {election.profile.total_voters()} voters "
            f"exceeds oracle caps {caps.max_candidates}/{caps.max_types}/{caps.max_voters}"
        )
    if kind is AnomalyKind.COMMITTEE_SIZE:
        return check_committee_size(election, tie_policy)

    ctx = SearchContext(election, UNLIMITED, tie_policy)
    for focal, displaced, mods in single_type_moves(ctx, kind):
        ctx.attempt(kind, focal, mods, displaced)
    logger.debug("Oracle %s: %d certificates from %d probes", kind.value, len(ctx.found), ctx.counter.probes)
    return sorted(ctx.found, key=lambda c: c.sort_key())
