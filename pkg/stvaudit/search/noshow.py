"""
No-show search: removing ballots that rank X above Y replaces winner Y
with X. Y must sit outside the top S positions on every removed ballot;
certificates where X is not in the top S of every removed ballot are
flagged ambiguous.
"""

import logging

from stvaudit.core.fixed import SCALE
from stvaudit.core.model import Election
from stvaudit.engine.tabulate import TiePolicy, compute_quota
from stvaudit.search import moves
from stvaudit.search.budget import (
    Option,
    SearchBudget,
    SearchContext,
    SearchResult,
    incremental,
    run_passes,
    take,
)
from stvaudit.search.certificate import AnomalyKind, ModificationKind
from stvaudit.search.oracle import OracleCaps, single_type_moves

logger = logging.getLogger(__name__)

KIND = AnomalyKind.NO_SHOW


def _no_show(_mods) -> AnomalyKind:
    return KIND


def _removals(ctx: SearchContext, x: int, y: int, head: int, deleted: set[int]) -> list[Option]:
    """Removable ballots headed by `head`; unambiguous ones first, X nearest the top first."""
    keyed = []
    for ballot in ctx.election.profile.ballots:
        if moves.reduced_head(ballot.ranking, deleted) != head:
            continue
        if not moves.removable(ballot, x, y, ctx.seats):
            continue
        position = ballot.position(x)
        ambiguous = position is None or position >= ctx.seats
        keyed.append(((ambiguous, position if position is not None else len(ballot.ranking), ballot.ranking),
                      (ModificationKind.REMOVE, ballot, None)))
    return [option for _, option in sorted(keyed, key=lambda k: k[0])]


def _pairs(ctx: SearchContext):
    for x in sorted(ctx.losers):
        for y in sorted(ctx.winners):
            if (x, y) not in ctx.found_pairs():
                yield x, y


def elimination_order_pass(ctx: SearchContext):
    """Remove ballots headed by a candidate so they drop out earlier."""
    eliminated = list(ctx.baseline.eliminated_order())
    withdrawn = set(ctx.election.withdrawn)
    active = list(ctx.election.active_candidates())

    for j, next_out in enumerate(eliminated):
        deleted = withdrawn | set(eliminated[:j])
        standing = [c for c in active if c not in deleted]
        tally = moves.reduced_tallies(ctx.election.profile.ballots, deleted, standing)
        for x, y in _pairs(ctx):
            for ci in standing:
                if ci in (x, next_out):
                    continue
                others = [tally[c] for c in standing if c != ci]
                k = tally[ci] - min(others) + 1
                if k < 1:
                    continue
                mods = take(_removals(ctx, x, y, ci, deleted), k)
                if mods and ctx.attempt(KIND, x, mods, y):
                    break


def _delay_count(total_units: int, voters: int, seats: int, available: int) -> int | None:
    """Fewest removed ballots that leave the winner below the shrinking quota."""
    for k in range(1, min(available, voters - 1) + 1):
        if total_units - k * SCALE < compute_quota(voters - k, seats).value * SCALE:
            return k
    return None


def seat_order_pass(ctx: SearchContext):
    """Remove ballots headed by an elected candidate to delay their election."""
    record = ctx.baseline
    withdrawn = set(ctx.election.withdrawn)
    for w1 in record.winners:
        r = record.elected_round[w1]
        if w1 in record.elected_without_quota:
            continue
        total = record.rounds[r - 1].totals[w1].units
        deleted = withdrawn | {c for c in record.eliminated_order() if record.round_eliminated(c) < r}
        for x, y in _pairs(ctx):
            options = _removals(ctx, x, y, w1, deleted)
            available = sum(o[1].count for o in options)
            k = _delay_count(total, record.total_voters, ctx.seats, available)
            if k is None:
                continue
            mods = take(options, k)
            if mods:
                ctx.attempt(KIND, x, mods, y)


def brute_force_pass(ctx: SearchContext):
    """Remove ballots headed by each candidate one at a time."""
    active = list(ctx.election.active_candidates())
    withdrawn = set(ctx.election.withdrawn)
    for x, y in _pairs(ctx):
        for b in active:
            if b == y or (x, y) in ctx.found_pairs():
                continue
            options = _removals(ctx, x, y, b, withdrawn)
            second = [o for o in options if o[1].position(x) == 1]
            if incremental(ctx, _no_show, x, options, y):
                continue
            if second and second != options:
                incremental(ctx, _no_show, x, second, y)


def sweep_pass(ctx: SearchContext):
    """Every single-type removal, on elections small enough to enumerate."""
    if not OracleCaps().admits(ctx.election):
        return
    for focal, displaced, mods in single_type_moves(ctx, KIND):
        if (focal, displaced) not in ctx.found_pairs():
            ctx.attempt(KIND, focal, mods, displaced)


def search_no_show(election: Election, budget: SearchBudget | None = None,
                   tie_policy: TiePolicy | str = TiePolicy.FAIL) -> SearchResult:
    ctx = SearchContext(election, budget or SearchBudget(), tie_policy)
    if ctx.baseline.first_round_terminated():
        logger.debug("All winners elected in round 1; no-show search skipped")
        return SearchResult((), 0, False)
    return run_passes(ctx, 'No-show', [elimination_order_pass, seat_order_pass, brute_force_pass, sweep_pass])
