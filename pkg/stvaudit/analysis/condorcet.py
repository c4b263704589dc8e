"""
Pairwise tallies and Condorcet committees under the weak-order model.

Unranked candidates on a ballot are tied with each other and sit below
every ranked candidate.
"""

import logging
from itertools import combinations

import numpy as np

from stvaudit.core.model import PreferenceProfile

logger = logging.getLogger(__name__)


def pairwise_matrix(profile: PreferenceProfile, candidates: tuple[int, ...] | None = None) -> np.ndarray:
    """Square matrix m where m[i, j] counts voters preferring candidate i+1 over j+1."""
    n = len(profile.roster)
    matrix = np.zeros((n, n), dtype=np.int64)
    considered = set(candidates) if candidates is not None else set(profile.candidate_ids())

    for ballot in profile.ballots:
        ranked = [c for c in ballot.ranking if c in considered]
        unranked = [c for c in considered if c not in ranked]
        for i, x in enumerate(ranked):
            below = ranked[i + 1:] + unranked
            if below:
                matrix[x - 1, [c - 1 for c in below]] += ballot.count
    return matrix


def beats(matrix: np.ndarray, x: int, y: int) -> bool:
    return matrix[x - 1, y - 1] > matrix[y - 1, x - 1]


def condorcet_committee(profile: PreferenceProfile, seats: int,
                        candidates: tuple[int, ...] | None = None) -> frozenset[int] | None:
    """The size-S set whose every member beats every outsider head to head, or None.

    Such a set is unique when it exists, so the first one found is returned.
    """
    pool = tuple(candidates) if candidates is not None else profile.candidate_ids()
    if seats >= len(pool):
        return frozenset(pool)

    matrix = pairwise_matrix(profile, pool)
    for committee in combinations(pool, seats):
        outside = [d for d in pool if d not in committee]
        if all(beats(matrix, c, d) for c in committee for d in outside):
            logger.debug("Condorcet committee of size %d: %s", seats, committee)
            return frozenset(committee)
    return None
