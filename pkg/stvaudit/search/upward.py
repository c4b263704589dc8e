"""
Upward monotonicity search: a winner X loses after being moved up on
some ballots, every other candidate's relative order left unchanged.
"""

import logging

from stvaudit.core.fixed import SCALE
from stvaudit.core.model import Election
from stvaudit.engine.tabulate import TiePolicy
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

KIND = AnomalyKind.UPWARD


def _upward(_mods) -> AnomalyKind:
    return KIND


def _raise_above(ctx: SearchContext, x: int, head: int, deleted: set[int]) -> list[Option]:
    """Ballots headed by `head` once `deleted` are struck, with X lifted to just above `head`.

    Ballots where X is ranked come first, nearest to the top first; ballots
    without X follow.
    """
    keyed = []
    for ballot in ctx.election.profile.ballots:
        ranking = ballot.ranking
        if moves.reduced_head(ranking, deleted) != head:
            continue
        rank = moves.reduced_rank(ranking, x, deleted)
        result = moves.move_to(ranking, x, ranking.index(head))
        keyed.append(((rank is None, rank or 0, ranking), (ModificationKind.SHIFT_UP, ballot, result)))
    return [option for _, option in sorted(keyed, key=lambda k: k[0])]


def elimination_order_pass(ctx: SearchContext):
    """Force a candidate out earlier by moving a winner above them, one reduced profile at a time."""
    quota = ctx.baseline.quota.value
    eliminated = list(ctx.baseline.eliminated_order())
    withdrawn = set(ctx.election.withdrawn)
    active = list(ctx.election.active_candidates())

    for j, next_out in enumerate(eliminated):
        deleted = withdrawn | set(eliminated[:j])
        standing = [c for c in active if c not in deleted]
        tally = moves.reduced_tallies(ctx.election.profile.ballots, deleted, standing)
        for x in sorted(ctx.winners):
            if x in ctx.found_focal(KIND):
                continue
            for ci in standing:
                if ci in (x, next_out):
                    continue
                others = [tally[c] for c in standing if c not in (ci, x)]
                if not others:
                    continue
                k = tally[ci] - min(others) + 1
                if k < 1 or tally[x] + k >= quota:
                    continue
                mods = take(_raise_above(ctx, x, ci, deleted), k)
                if mods and ctx.attempt(KIND, x, mods):
                    break


def seat_order_pass(ctx: SearchContext):
    """Delay an earlier winner W1 by lifting a later winner W2 above them."""
    record = ctx.baseline
    quota_units = record.quota.value * SCALE
    order = list(record.winners)
    withdrawn = set(ctx.election.withdrawn)

    for i, w1 in enumerate(order):
        r = record.elected_round[w1]
        if w1 in record.elected_without_quota:
            continue
        total = record.rounds[r - 1].totals[w1].units
        k = (total - quota_units) // SCALE + 1
        deleted = withdrawn | {c for c in record.eliminated_order() if record.round_eliminated(c) < r}
        for w2 in order[i + 1:]:
            if w2 in ctx.found_focal(KIND):
                continue
            mods = take(_raise_above(ctx, w2, w1, deleted), k)
            if mods:
                ctx.attempt(KIND, w2, mods)


def brute_force_pass(ctx: SearchContext):
    """Move a winner to the top of ballots headed by another candidate, one ballot at a time."""
    active = list(ctx.election.active_candidates())
    for x in sorted(ctx.winners):
        for b in active:
            if b == x or x in ctx.found_focal(KIND):
                continue
            options = _raise_above(ctx, x, b, set(ctx.election.withdrawn))
            ranked = [o for o in options if x in o[1].ranking]
            bullets = [o for o in options if o[1].ranking == (b,)]
            second = [o for o in ranked if o[1].position(x) == 1]
            if incremental(ctx, _upward, x, ranked + bullets):
                continue
            if second != ranked:
                incremental(ctx, _upward, x, second + bullets)


def sweep_pass(ctx: SearchContext):
    """Every single-type move, on elections small enough to enumerate."""
    if not OracleCaps().admits(ctx.election):
        return
    for focal, _displaced, mods in single_type_moves(ctx, KIND):
        if focal not in ctx.found_focal(KIND):
            ctx.attempt(KIND, focal, mods)


def search_upward(election: Election, budget: SearchBudget | None = None,
                  tie_policy: TiePolicy | str = TiePolicy.FAIL) -> SearchResult:
    ctx = SearchContext(election, budget or SearchBudget(), tie_policy)
    if ctx.baseline.first_round_terminated():
        logger.debug("All winners elected in round 1; upward search skipped")
        return SearchResult((), 0, False)
    return run_passes(ctx, 'Upward', [elimination_order_pass, seat_order_pass, brute_force_pass, sweep_pass])
