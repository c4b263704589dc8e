"""
Scottish STV count.

Every ballot type is one parcel: all ballots of a type sit with the same
candidate and carry one exact value in 10^-5 vote units. Surplus transfers
rescale each parcel once with truncation; exclusions move parcels whole.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum

from stvaudit.core.errors import ProfileError, TieError
from stvaudit.core.fixed import SCALE, FixedVote, truncate_div
from stvaudit.core.model import BallotType, Election

logger = logging.getLogger(__name__)


class TiePolicy(str, Enum):
    FAIL = 'fail'
    INDEX = 'index'


class EventKind(str, Enum):
    ELECTED = 'elected'
    ELIMINATED = 'eliminated'
    SURPLUS = 'surplus'


@dataclass(frozen=True)
class Quota:
    value: int


@dataclass(frozen=True)
class Event:
    kind: EventKind
    candidates: tuple[int, ...]
    without_quota: tuple[int, ...] = ()


@dataclass(frozen=True)
class Transfer:
    source: int
    target: int | None  # None = exhausted
    value: FixedVote


@dataclass(frozen=True)
class Round:
    """One column of a votes-by-round table.

    `totals` are the opening totals of continuing candidates; `closing`,
    `retained`, `exhausted` and `loss` describe the count after the event.
    """
    number: int
    totals: dict[int, FixedVote]
    event: Event
    transfers: tuple[Transfer, ...]
    closing: dict[int, FixedVote]
    retained: FixedVote
    exhausted: FixedVote
    loss: FixedVote


@dataclass(frozen=True)
class TabulationRecord:
    seats: int
    total_voters: int
    quota: Quota
    rounds: tuple[Round, ...]
    winners: tuple[int, ...]
    elected_round: dict[int, int]
    elected_without_quota: frozenset[int]
    tie_broken_by_index: bool = False

    @property
    def winner_set(self) -> frozenset[int]:
        return frozenset(self.winners)

    @property
    def exhausted(self) -> tuple[FixedVote, ...]:
        return tuple(r.exhausted for r in self.rounds)

    @property
    def loss(self) -> tuple[FixedVote, ...]:
        return tuple(r.loss for r in self.rounds)

    def first_round_terminated(self) -> bool:
        """True when every winner was declared in round 1."""
        return bool(self.winners) and all(self.elected_round[w] == 1 for w in self.winners)

    def eliminated_order(self) -> tuple[int, ...]:
        return tuple(r.event.candidates[0] for r in self.rounds if r.event.kind is EventKind.ELIMINATED)

    def round_eliminated(self, candidate: int) -> int | None:
        for r in self.rounds:
            if r.event.kind is EventKind.ELIMINATED and r.event.candidates[0] == candidate:
                return r.number
        return None

    def conservation_holds(self) -> bool:
        total = self.total_voters * SCALE
        previous_loss = 0
        for r in self.rounds:
            held = sum(v.units for v in r.closing.values()) + r.retained.units
            if held + r.exhausted.units + r.loss.units != total:
                return False
            if r.loss.units < previous_loss:
                return False
            previous_loss = r.loss.units
        return True


@dataclass(slots=True)
class WeightedBallotState:
    """A ballot type's parcel: its whole value and where it currently sits."""
    ballot: BallotType
    value: int
    position: int | None
    received: int = 0

    @property
    def holder(self) -> int | None:
        return None if self.position is None else self.ballot.ranking[self.position]

    def weight(self) -> FixedVote:
        return FixedVote(truncate_div(self.value, self.ballot.count))

    def advance(self, eligible: set[int]) -> int | None:
        start = 0 if self.position is None else self.position + 1
        ranking = self.ballot.ranking
        for i in range(start, len(ranking)):
            if ranking[i] in eligible:
                self.position = i
                return ranking[i]
        self.position = None
        return None


class CountState:
    """Mutable working state of one count."""

    def __init__(self, election: Election, tie_policy: TiePolicy):
        self.seats = election.seats
        self.total_voters = election.profile.total_voters()
        self.quota = compute_quota(self.total_voters, self.seats)
        self.quota_units = self.quota.value * SCALE
        self.tie_policy = tie_policy
        # Single-seat counts move an excluded pile in one step, as an ordinary
        # instant runoff does; multi-seat counts transfer it in sub-stages.
        self.staged = self.seats > 1

        active = election.active_candidates()
        self.continuing: list[int] = list(active)
        self.elected: list[int] = []
        self.pending: list[int] = []
        self.totals: dict[int, int] = {c: 0 for c in active}
        self.piles: dict[int, list[WeightedBallotState]] = {c: [] for c in active}
        self.exhausted = 0
        self.loss = 0
        self.step = 0
        self.round_number = 0
        self.rounds: list[Round] = []
        self.elected_round: dict[int, int] = {}
        self.without_quota: set[int] = set()
        self.tie_broken_by_index = False

        eligible = set(active)
        for ballot in election.profile.ballots:
            parcel = WeightedBallotState(ballot, ballot.count * SCALE, None)
            self.place(parcel, eligible)

    def receiving(self) -> set[int]:
        if self.staged:
            return {c for c in self.continuing if self.totals[c] < self.quota_units}
        return set(self.continuing)

    def place(self, parcel: WeightedBallotState, eligible: set[int]) -> int | None:
        target = parcel.advance(eligible) if parcel.value > 0 else None
        if target is None:
            parcel.position = None
            self.exhausted += parcel.value
            return None
        parcel.received = self.step
        self.totals[target] += parcel.value
        self.piles[target].append(parcel)
        return target

    def opening(self) -> dict[int, FixedVote]:
        return {c: FixedVote(self.totals[c]) for c in sorted(self.continuing)}

    def break_tie(self, tied: list[int], lowest: bool, context: str) -> int:
        """Backward tie-break over earlier rounds, then the tie policy."""
        group = sorted(tied)
        for earlier in reversed(self.rounds):
            values = {c: earlier.totals[c].units for c in group if c in earlier.totals}
            if len(values) < len(group):
                continue
            target = min(values.values()) if lowest else max(values.values())
            group = [c for c in group if values[c] == target]
            if len(group) == 1:
                return group[0]
        if self.tie_policy is TiePolicy.INDEX:
            self.tie_broken_by_index = True
            logger.debug("Tie %s in round %d broken by index: %s", context, self.round_number, group)
            return group[0]
        raise TieError(group, self.round_number, context)


def compute_quota(total_voters: int, seats: int) -> Quota:
    if total_voters < 1:
        raise ProfileError("quota needs at least one voter")
    if seats < 1:
        raise ProfileError("quota needs at least one seat")
    return Quota(total_voters // (seats + 1) + 1)


def transfer_surplus(state: CountState, elected: int) -> dict[int | None, int]:
    """Transfer an elected candidate's surplus over all of their parcels.

    Each parcel value v becomes truncate(v * surplus / total); the candidate
    keeps exactly quota and the truncation remainder is added to the loss.
    """
    total = state.totals[elected]
    surplus = total - state.quota_units
    if surplus < 0:
        raise RuntimeError(f"candidate {elected} has no surplus to transfer")
    state.pending.remove(elected)
    moved: dict[int | None, int] = defaultdict(int)
    if surplus == 0:
        return moved

    state.step += 1
    eligible = state.receiving()
    pile = state.piles[elected]
    state.piles[elected] = []
    transferred = 0
    for parcel in pile:
        parcel.value = truncate_div(parcel.value * surplus, total)
        transferred += parcel.value
        moved[state.place(parcel, eligible)] += parcel.value
    state.totals[elected] = state.quota_units
    state.loss += surplus - transferred
    return moved


def exclude(state: CountState, candidate: int) -> dict[int | None, int]:
    """Exclude a candidate: first-preference parcels first, then parcels in the order received."""
    state.continuing.remove(candidate)
    pile = state.piles.pop(candidate)
    state.totals.pop(candidate)
    moved: dict[int | None, int] = defaultdict(int)

    if state.staged:
        batches: dict[int, list[WeightedBallotState]] = defaultdict(list)
        for parcel in pile:
            batches[parcel.received].append(parcel)
        stages = [batches[k] for k in sorted(batches)]
    else:
        stages = [pile]

    for stage in stages:
        state.step += 1
        eligible = state.receiving()
        for parcel in stage:
            moved[state.place(parcel, eligible)] += parcel.value
    return moved


def eliminate_lowest(state: CountState) -> tuple[int, dict[int | None, int]]:
    lowest = min(state.totals[c] for c in state.continuing)
    tied = [c for c in state.continuing if state.totals[c] == lowest]
    candidate = tied[0] if len(tied) == 1 else state.break_tie(tied, lowest=True, context='elimination')
    return candidate, exclude(state, candidate)


def _largest_surplus(state: CountState) -> int:
    largest = max(state.totals[c] for c in state.pending)
    tied = [c for c in state.pending if state.totals[c] == largest]
    if len(tied) == 1:
        return tied[0]
    return state.break_tie(tied, lowest=False, context='surplus order')


def _declare(state: CountState, candidates: list[int]) -> tuple[int, ...]:
    ranked = tuple(sorted(candidates, key=lambda c: (-state.totals[c], c)))
    for c in ranked:
        state.continuing.remove(c)
        state.elected.append(c)
        state.elected_round[c] = state.round_number
        if state.totals[c] >= state.quota_units:
            state.pending.append(c)
        else:
            state.without_quota.add(c)
    return ranked


def _transfers(source: int | None, moved: dict[int | None, int]) -> tuple[Transfer, ...]:
    if source is None:
        return ()
    ordered = sorted(moved, key=lambda t: (t is None, t or 0))
    return tuple(Transfer(source, t, FixedVote(moved[t])) for t in ordered)


def tabulate(election: Election, tie_policy: TiePolicy | str = TiePolicy.FAIL) -> TabulationRecord:
    """Run the count and return the full votes-by-round record.

    Raises TieError when a tie survives the backward tie-break under 'fail'.
    """
    state = CountState(election, TiePolicy(tie_policy))
    seats = election.seats
    if election.is_degenerate():
        logger.info("Degenerate count: %d seats for %d candidates, everyone standing is elected",
                    seats, len(election.active_candidates()))

    while len(state.elected) < seats:
        state.round_number += 1
        opening = state.opening()
        source: int | None = None
        moved: dict[int | None, int] = {}

        if len(state.elected) + len(state.continuing) <= seats:
            ranked = _declare(state, list(state.continuing))
            below = tuple(c for c in ranked if c in state.without_quota)
            event = Event(EventKind.ELECTED, ranked, below)
        else:
            reached = [c for c in state.continuing if state.totals[c] >= state.quota_units]
            if reached:
                event = Event(EventKind.ELECTED, _declare(state, reached))
                if len(state.elected) < seats:
                    source = _largest_surplus(state)
                    moved = transfer_surplus(state, source)
            elif state.pending:
                source = _largest_surplus(state)
                moved = transfer_surplus(state, source)
                event = Event(EventKind.SURPLUS, (source,))
            else:
                source, moved = eliminate_lowest(state)
                event = Event(EventKind.ELIMINATED, (source,))

        state.rounds.append(Round(
            number=state.round_number,
            totals=opening,
            event=event,
            transfers=_transfers(source, moved),
            closing=state.opening(),
            retained=FixedVote(sum(state.totals[c] for c in state.elected)),
            exhausted=FixedVote(state.exhausted),
            loss=FixedVote(state.loss),
        ))

    record = TabulationRecord(
        seats=seats,
        total_voters=state.total_voters,
        quota=state.quota,
        rounds=tuple(state.rounds),
        winners=tuple(state.elected),
        elected_round=dict(state.elected_round),
        elected_without_quota=frozenset(state.without_quota),
        tie_broken_by_index=state.tie_broken_by_index,
    )
    logger.debug("Counted %d seats in %d rounds, winners %s", seats, len(record.rounds), record.winners)
    return record


def winner_sets_for_all_seat_counts(election: Election,
                                    tie_policy: TiePolicy | str = TiePolicy.FAIL) -> dict[int, frozenset[int]]:
    return {
        s: tabulate(election.with_seats(s), tie_policy).winner_set
        for s in range(1, election.seats + 1)
    }
