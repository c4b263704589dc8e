"""
Descriptive statistics of a corpus: how many candidates voters rank.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from stvaudit.core.model import Election

logger = logging.getLogger(__name__)

STATS_COLUMNS = ['election', 'voters', 'candidates', 'seats', 'mean_length', 'median_length']


@dataclass(frozen=True)
class ElectionStats:
    name: str
    voters: int
    candidates: int
    seats: int
    mean_length: float
    median_length: float

    def as_row(self) -> list:
        return [self.name, self.voters, self.candidates, self.seats,
                f"{self.mean_length:.2f}", f"{self.median_length:.1f}"]


@dataclass(frozen=True)
class Aggregate:
    elections: int
    mean_length: float
    median_length: float


@dataclass(frozen=True)
class CorpusStats:
    elections: tuple[ElectionStats, ...]
    by_seats: dict[int, Aggregate]
    by_candidates: dict[int, Aggregate]  # four-seat elections only


def _weighted_median(lengths: np.ndarray, counts: np.ndarray) -> float:
    order = np.argsort(lengths, kind='stable')
    lengths, cumulative = lengths[order], np.cumsum(counts[order])
    total = int(cumulative[-1])
    low = lengths[np.searchsorted(cumulative, (total - 1) // 2 + 1)]
    high = lengths[np.searchsorted(cumulative, total // 2 + 1)]
    return (float(low) + float(high)) / 2


def election_stats(election: Election, name: str = '') -> ElectionStats:
    lengths = np.array([len(b.ranking) for b in election.profile.ballots], dtype=np.int64)
    counts = np.array([b.count for b in election.profile.ballots], dtype=np.int64)
    voters = int(counts.sum())
    return ElectionStats(
        name=name or election.title,
        voters=voters,
        candidates=len(election.active_candidates()),
        seats=election.seats,
        mean_length=float((lengths * counts).sum()) / voters,
        median_length=_weighted_median(lengths, counts),
    )


def _aggregate(group: list[ElectionStats]) -> Aggregate:
    return Aggregate(
        elections=len(group),
        mean_length=float(np.mean([s.mean_length for s in group])),
        median_length=float(np.median([s.median_length for s in group])),
    )


def descriptive_stats(elections: list[tuple[str, Election]]) -> CorpusStats:
    """Per-election ballot lengths plus aggregates by seats and, for four seats, by candidates."""
    per_election = tuple(election_stats(e, name) for name, e in elections)
    by_seats: dict[int, list[ElectionStats]] = defaultdict(list)
    by_candidates: dict[int, list[ElectionStats]] = defaultdict(list)
    for s in per_election:
        by_seats[s.seats].append(s)
        if s.seats == 4:
            by_candidates[s.candidates].append(s)

    stats = CorpusStats(
        elections=per_election,
        by_seats={k: _aggregate(v) for k, v in sorted(by_seats.items())},
        by_candidates={k: _aggregate(v) for k, v in sorted(by_candidates.items())},
    )
    logger.info("Stats over %d elections, seat groups %s", len(per_election), list(stats.by_seats))
    return stats


def aggregate_rows(stats: CorpusStats) -> list[list]:
    """Rows of (group, key, elections, mean, median) for the aggregate table."""
    rows = []
    for seats, agg in stats.by_seats.items():
        rows.append(['seats', seats, agg.elections, f"{agg.mean_length:.2f}", f"{agg.median_length:.1f}"])
    for n, agg in stats.by_candidates.items():
        rows.append(['candidates_4_seats', n, agg.elections, f"{agg.mean_length:.2f}", f"{agg.median_length:.1f}"])
    return rows
