"""
Committee-size check: is every smaller committee contained in the full one?
This check is exact.
"""

import logging

from stvaudit.core.model import Election
from stvaudit.engine.tabulate import TiePolicy, tabulate
from stvaudit.search.certificate import AnomalyCertificate, AnomalyKind, Flag

logger = logging.getLogger(__name__)


def check_committee_size(election: Election,
                         tie_policy: TiePolicy | str = TiePolicy.FAIL) -> list[AnomalyCertificate]:
    if election.seats < 2:
        return []
    records = {s: tabulate(election.with_seats(s), tie_policy) for s in range(1, election.seats + 1)}
    winner_sets = {s: r.winner_set for s, r in records.items()}
    full = winner_sets[election.seats]
    flags = frozenset()
    if any(r.tie_broken_by_index for r in records.values()):
        flags = frozenset({Flag.TIE_ENCOUNTERED})

    certificates = []
    for reduced_seats in range(1, election.seats):
        smaller = winner_sets[reduced_seats]
        if smaller <= full:
            continue
        focal = min(smaller - full)
        certificates.append(AnomalyCertificate(
            kind=AnomalyKind.COMMITTEE_SIZE,
            seats=election.seats,
            focal=focal,
            original_winners=full,
            modified_winners=smaller,
            reduced_seats=reduced_seats,
            flags=flags,
            election_title=election.title,
            election=election,
        ))
        logger.info("Committee-size anomaly: W(P,%d) %s not within W(P,%d) %s",
                    reduced_seats, sorted(smaller), election.seats, sorted(full))
    return certificates
