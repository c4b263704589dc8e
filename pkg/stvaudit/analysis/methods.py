"""
Single non-transferable vote, used as a comparison method.
"""

import logging

from stvaudit.core.errors import TieError
from stvaudit.core.model import PreferenceProfile
from stvaudit.engine.tabulate import TiePolicy

logger = logging.getLogger(__name__)


def sntv(profile: PreferenceProfile, seats: int, tie_policy: TiePolicy | str = TiePolicy.FAIL,
         candidates: tuple[int, ...] | None = None) -> tuple[frozenset[int], bool]:
    """Top-S candidates by first-place votes, and whether a boundary tie was broken by index.

    First places on withdrawn candidates pass to the next ranked candidate.
    """
    pool = tuple(candidates) if candidates is not None else profile.candidate_ids()
    standing = set(pool)
    tally = {c: 0 for c in pool}
    for ballot in profile.ballots:
        for c in ballot.ranking:
            if c in standing:
                tally[c] += ballot.count
                break

    ordered = sorted(pool, key=lambda c: (-tally[c], c))
    if seats >= len(ordered):
        return frozenset(ordered), False

    boundary = tally[ordered[seats - 1]]
    tied = frozenset(c for c in pool if tally[c] == boundary)
    broken = tally[ordered[seats]] == boundary
    if broken:
        if TiePolicy(tie_policy) is TiePolicy.FAIL:
            raise TieError(tied, 1, 'sntv')
        logger.warning("SNTV boundary tie among %s broken by candidate index", sorted(tied))
    return frozenset(ordered[:seats]), broken


def sntv_winners(profile: PreferenceProfile, seats: int, tie_policy: TiePolicy | str = TiePolicy.FAIL,
                 candidates: tuple[int, ...] | None = None) -> frozenset[int]:
    return sntv(profile, seats, tie_policy, candidates)[0]
