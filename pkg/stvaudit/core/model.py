"""
Domain model: candidates, ballot types, preference profiles, elections.

Candidate ids are the 1-based positions from the ballot file. Profiles are
stored as weighted ballot types and are always canonical once constructed.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass, field

from stvaudit.core.errors import ProfileError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Candidate:
    id: int
    name: str
    party: str | None = None

    def __post_init__(self):
        if not self.name:
            raise ProfileError(f"candidate {self.id} has an empty name")

    def label(self) -> str:
        return f"{self.name} ({self.party})" if self.party else self.name


@dataclass(frozen=True)
class BallotType:
    ranking: tuple[int, ...]
    count: int

    def __post_init__(self):
        if not self.ranking:
            raise ProfileError("empty ranking")
        if len(set(self.ranking)) != len(self.ranking):
            raise ProfileError(f"candidate repeated in ranking {list(self.ranking)}")
        if self.count < 0:
            raise ProfileError(f"negative count {self.count} for ranking {list(self.ranking)}")

    def position(self, candidate: int) -> int | None:
        """0-based position of candidate on this ranking, None when unranked."""
        try:
            return self.ranking.index(candidate)
        except ValueError:
            return None

    def prefers(self, x: int, y: int) -> bool:
        """Weak-order preference: x ranked above y, or x ranked and y unranked."""
        px, py = self.position(x), self.position(y)
        if px is None:
            return False
        return py is None or px < py


@dataclass(frozen=True)
class PreferenceProfile:
    roster: tuple[Candidate, ...]
    ballots: tuple[BallotType, ...]

    def total_voters(self) -> int:
        return sum(b.count for b in self.ballots)

    def candidate_ids(self) -> tuple[int, ...]:
        return tuple(c.id for c in self.roster)

    def candidate(self, candidate_id: int) -> Candidate:
        return self.roster[candidate_id - 1]

    def name(self, candidate_id: int) -> str:
        return self.roster[candidate_id - 1].name

    def count_of(self, ranking: tuple[int, ...]) -> int:
        for b in self.ballots:
            if b.ranking == ranking:
                return b.count
        return 0

    def with_counts(self, changes: dict[tuple[int, ...], int]) -> 'PreferenceProfile':
        """New canonical profile after adding signed count deltas per ranking."""
        counts = {b.ranking: b.count for b in self.ballots}
        for ranking, delta in changes.items():
            counts[ranking] = counts.get(ranking, 0) + delta
            if counts[ranking] < 0:
                raise ProfileError(f"count for ranking {list(ranking)} would become negative")
        ballots = [BallotType(r, c) for r, c in counts.items()]
        return canonicalize(PreferenceProfile(self.roster, tuple(ballots)))


@dataclass(frozen=True)
class Election:
    profile: PreferenceProfile
    seats: int
    title: str = ''
    withdrawn: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        active = len(self.active_candidates())
        if self.seats < 1:
            raise ProfileError(f"seat count must be positive, got {self.seats}")
        if self.seats > active:
            raise ProfileError(f"{self.seats} seats but only {active} candidates standing")
        if self.profile.total_voters() <= 0:
            raise ProfileError("election has no voters")

    @property
    def roster(self) -> tuple[Candidate, ...]:
        return self.profile.roster

    def active_candidates(self) -> tuple[int, ...]:
        return tuple(c.id for c in self.profile.roster if c.id not in self.withdrawn)

    def is_degenerate(self) -> bool:
        return self.seats == len(self.active_candidates())

    def with_seats(self, seats: int) -> 'Election':
        return Election(self.profile, seats, self.title, self.withdrawn)

    def with_profile(self, profile: PreferenceProfile) -> 'Election':
        return Election(profile, self.seats, self.title, self.withdrawn)


def make_roster(names: list[str], parties: list[str | None] | None = None) -> tuple[Candidate, ...]:
    parties = parties or [None] * len(names)
    return tuple(Candidate(i + 1, name, party) for i, (name, party) in enumerate(zip(names, parties)))


def canonicalize(profile: PreferenceProfile) -> PreferenceProfile:
    """Merge duplicate rankings, drop zero counts, sort lexicographically.

    Idempotent; preserves the total voter count.
    """
    known = {c.id for c in profile.roster}
    if sorted(known) != list(range(1, len(profile.roster) + 1)):
        raise ProfileError("candidate ids must be dense 1..n")

    merged: dict[tuple[int, ...], int] = defaultdict(int)
    for ballot in profile.ballots:
        unknown = [c for c in ballot.ranking if c not in known]
        if unknown:
            raise ProfileError(f"unknown candidate id(s) {unknown} in ranking {list(ballot.ranking)}")
        merged[ballot.ranking] += ballot.count

    ballots = tuple(BallotType(r, merged[r]) for r in sorted(merged) if merged[r] > 0)
    result = PreferenceProfile(profile.roster, ballots)
    if result.total_voters() <= 0:
        raise ProfileError("profile has no voters")
    return result


def make_profile(names: list[str], ballots: list[tuple[int, list[int]]],
                 parties: list[str | None] | None = None) -> PreferenceProfile:
    """Build a canonical profile from (count, ranking) pairs."""
    roster = make_roster(names, parties)
    types = tuple(BallotType(tuple(ranking), count) for count, ranking in ballots)
    return canonicalize(PreferenceProfile(roster, types))


def first_place_tallies(profile: PreferenceProfile) -> dict[int, int]:
    """First-preference counts for every candidate on the roster."""
    tally = {c.id: 0 for c in profile.roster}
    for ballot in profile.ballots:
        tally[ballot.ranking[0]] += ballot.count
    return tally
