"""
Downward monotonicity search: a losing candidate X wins after being
moved down on some ballots (strong form), or after bullet votes for X are
also rewritten to Y or Y then X (weak form).
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
from stvaudit.search.certificate import AnomalyKind, BallotModification, ModificationKind
from stvaudit.search.oracle import OracleCaps, single_type_moves

logger = logging.getLogger(__name__)


def downward_kind(mods: tuple[BallotModification, ...]) -> AnomalyKind:
    if any(m.kind is ModificationKind.BULLET_REWRITE for m in mods):
        return AnomalyKind.DOWNWARD_WEAK
    return AnomalyKind.DOWNWARD_STRONG


def _found(ctx: SearchContext, x: int) -> bool:
    return x in ctx.found_focal(AnomalyKind.DOWNWARD_STRONG) and x in ctx.found_focal(AnomalyKind.DOWNWARD_WEAK)


def _lower_below(ctx: SearchContext, x: int, target: int, deleted: set[int]) -> list[Option]:
    """Ballots headed by X once `deleted` are struck, with X dropped to just below `target`."""
    keyed = []
    for ballot in ctx.election.profile.ballots:
        ranking = ballot.ranking
        if moves.reduced_head(ranking, deleted) != x:
            continue
        rank = moves.reduced_rank(ranking, target, deleted)
        if rank is None:
            continue
        result = moves.move_to(ranking, x, ranking.index(target))
        keyed.append(((rank, ranking), (ModificationKind.SHIFT_DOWN, ballot, result)))
    return [option for _, option in sorted(keyed, key=lambda k: k[0])]


def _bullets(ctx: SearchContext, x: int, target: int) -> list[Option]:
    for ballot in ctx.election.profile.ballots:
        if ballot.ranking == (x,):
            return [(ModificationKind.BULLET_REWRITE, ballot, (target, x))]
    return []


def _try(ctx: SearchContext, x: int, shifts: list[Option], bullets: list[Option], k: int):
    """Strong form first; fall back to topping up with rewritten bullet votes."""
    mods = take(shifts, k)
    if mods and ctx.attempt(AnomalyKind.DOWNWARD_STRONG, x, mods):
        return
    if bullets:
        mods = take(shifts + bullets, k)
        if mods:
            ctx.attempt(downward_kind(mods), x, mods)


def elimination_order_pass(ctx: SearchContext):
    """Save the next candidate out by dropping X below them on X's own ballots."""
    eliminated = list(ctx.baseline.eliminated_order())
    withdrawn = set(ctx.election.withdrawn)
    active = list(ctx.election.active_candidates())

    for j, next_out in enumerate(eliminated):
        deleted = withdrawn | set(eliminated[:j])
        standing = [c for c in active if c not in deleted]
        tally = moves.reduced_tallies(ctx.election.profile.ballots, deleted, standing)
        for x in sorted(ctx.losers):
            if x not in standing or x == next_out or _found(ctx, x):
                continue
            rivals = [c for c in standing if c not in (next_out, x)]
            if not rivals:
                continue
            replacement = min(rivals, key=lambda c: (tally[c], c))
            k = tally[replacement] - tally[next_out] + 1
            if k < 1 or tally[x] - k <= tally[replacement]:
                continue
            _try(ctx, x, _lower_below(ctx, x, next_out, deleted), _bullets(ctx, x, next_out), k)


def seat_order_pass(ctx: SearchContext):
    """Drop X below a later winner W so that W reaches quota sooner."""
    record = ctx.baseline
    quota_units = record.quota.value * SCALE
    withdrawn = set(ctx.election.withdrawn)

    for w in record.winners:
        r = record.elected_round[w]
        if r == 1 or w in record.elected_without_quota:
            continue
        for x in sorted(ctx.losers):
            if _found(ctx, x):
                continue
            for q in range(r - 1, 0, -1):
                totals = record.rounds[q - 1].totals
                if x not in totals or w not in totals:
                    continue
                k = (quota_units - totals[w].units + SCALE - 1) // SCALE
                if k < 1:
                    continue
                deleted = withdrawn | {c for c in record.eliminated_order() if record.round_eliminated(c) < q}
                _try(ctx, x, _lower_below(ctx, x, w, deleted), _bullets(ctx, x, w), k)


def brute_force_pass(ctx: SearchContext):
    """Drop X below another candidate on X's ballots one at a time, then rewrite X's bullet votes."""
    active = list(ctx.election.active_candidates())
    withdrawn = set(ctx.election.withdrawn)
    for x in sorted(ctx.losers):
        for b in active:
            if b == x or _found(ctx, x):
                continue
            shifts = _lower_below(ctx, x, b, withdrawn)
            bullets = _bullets(ctx, x, b)
            second = [o for o in shifts if o[1].position(b) == 1]
            if incremental(ctx, downward_kind, x, shifts + bullets):
                continue
            if second != shifts:
                incremental(ctx, downward_kind, x, second + bullets)


def sweep_pass(ctx: SearchContext):
    """Every single-type move, on elections small enough to enumerate."""
    if not OracleCaps().admits(ctx.election):
        return
    for kind in (AnomalyKind.DOWNWARD_STRONG, AnomalyKind.DOWNWARD_WEAK):
        for focal, _displaced, mods in single_type_moves(ctx, kind):
            if focal not in ctx.found_focal(kind):
                ctx.attempt(kind, focal, mods)


def search_downward(election: Election, budget: SearchBudget | None = None,
                    tie_policy: TiePolicy | str = TiePolicy.FAIL) -> SearchResult:
    ctx = SearchContext(election, budget or SearchBudget(), tie_policy)
    if ctx.baseline.first_round_terminated():
        logger.debug("All winners elected in round 1; downward search skipped")
        return SearchResult((), 0, False)
    return run_passes(ctx, 'Downward', [elimination_order_pass, seat_order_pass, brute_force_pass, sweep_pass])
