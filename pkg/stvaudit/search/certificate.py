"""
Anomaly certificates: the ballot changes that demonstrate an anomaly,
plus both winner sets. Certificates serialize to canonical JSON and can be
replayed against the ballot file they were found in.
"""

import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum

from stvaudit.core.errors import CertificateFormatError, CertificateRejected, RejectionReason
from stvaudit.core.model import Candidate, Election, PreferenceProfile

logger = logging.getLogger(__name__)


class AnomalyKind(str, Enum):
    COMMITTEE_SIZE = 'committee_size'
    UPWARD = 'upward'
    DOWNWARD_STRONG = 'downward_strong'
    DOWNWARD_WEAK = 'downward_weak'
    NO_SHOW = 'no_show'


class ModificationKind(str, Enum):
    SHIFT_UP = 'shift_up'
    SHIFT_DOWN = 'shift_down'
    BULLET_REWRITE = 'bullet_rewrite'
    REMOVE = 'remove'


class Flag(str, Enum):
    AMBIGUOUS_NO_SHOW = 'ambiguous_no_show'
    IDENTICAL_BALLOTS_USED = 'identical_ballots_used'
    TIE_ENCOUNTERED = 'tie_encountered'


KIND_ORDER = list(AnomalyKind)


@dataclass(frozen=True)
class BallotModification:
    kind: ModificationKind
    source: tuple[int, ...]
    result: tuple[int, ...] | None
    count: int

    def sort_key(self):
        return (self.kind.value, self.source, self.result or (), self.count)


@dataclass(frozen=True)
class AnomalyCertificate:
    kind: AnomalyKind
    seats: int
    focal: int
    original_winners: frozenset[int]
    modified_winners: frozenset[int]
    modifications: tuple[BallotModification, ...] = ()
    displaced: int | None = None
    reduced_seats: int | None = None
    flags: frozenset[Flag] = frozenset()
    election_hash: str = ''
    election_title: str = ''
    election: Election | None = field(default=None, compare=False, repr=False)

    def ballots_changed(self) -> int:
        return sum(m.count for m in self.modifications)

    def relation_key(self):
        return (KIND_ORDER.index(self.kind), self.focal, self.displaced or 0,
                tuple(sorted(self.modified_winners)))

    def preference_key(self):
        """Smaller is better among certificates sharing a relation key."""
        ambiguous = Flag.AMBIGUOUS_NO_SHOW in self.flags
        mods = tuple(m.sort_key() for m in self.modifications)
        return (ambiguous, self.ballots_changed(), len(self.modifications), mods)

    def sort_key(self):
        return (*self.relation_key(), self.reduced_seats or 0, self.ballots_changed(),
                tuple(m.sort_key() for m in self.modifications))


def apply_modifications(profile: PreferenceProfile,
                        modifications: tuple[BallotModification, ...]) -> PreferenceProfile:
    """Apply ballot changes and re-canonicalize; rejects missing or overdrawn ballots."""
    required: Counter = Counter()
    deltas: Counter = Counter()
    for mod in modifications:
        if mod.count < 1:
            raise CertificateRejected(RejectionReason.COUNT_OVERFLOW, f"non-positive count {mod.count}")
        available = profile.count_of(mod.source)
        if available == 0:
            raise CertificateRejected(RejectionReason.UNKNOWN_BALLOT, f"no ballots {list(mod.source)}")
        required[mod.source] += mod.count
        if required[mod.source] > available:
            raise CertificateRejected(
                RejectionReason.COUNT_OVERFLOW,
                f"{required[mod.source]} ballots {list(mod.source)} requested, {available} cast",
            )
        deltas[mod.source] -= mod.count
        if mod.result is not None:
            deltas[mod.result] += mod.count
    return profile.with_counts(dict(deltas))


def dedupe(certificates: list[AnomalyCertificate]) -> list[AnomalyCertificate]:
    """Keep the preferred certificate per relation key, in deterministic order."""
    best: dict[tuple, AnomalyCertificate] = {}
    for cert in certificates:
        key = cert.relation_key()
        if cert.kind is AnomalyKind.COMMITTEE_SIZE:
            key = (*key, cert.reduced_seats)
        current = best.get(key)
        if current is None or cert.preference_key() < current.preference_key():
            best[key] = cert
    return sorted(best.values(), key=lambda c: c.sort_key())


def party_seats(winners: frozenset[int], roster: tuple[Candidate, ...]) -> dict[str, int]:
    seats: Counter = Counter()
    for c in winners:
        seats[roster[c - 1].party or 'unknown'] += 1
    return dict(sorted(seats.items()))


def _ranking_doc(ranking: tuple[int, ...] | None, roster: tuple[Candidate, ...]) -> dict | None:
    if ranking is None:
        return None
    return {'ids': list(ranking), 'names': [roster[c - 1].name for c in ranking]}


def to_dict(cert: AnomalyCertificate, roster: tuple[Candidate, ...]) -> dict:
    return {
        'kind': cert.kind.value,
        'election_hash': cert.election_hash,
        'election_title': cert.election_title,
        'seats': cert.seats,
        'reduced_seats': cert.reduced_seats,
        'focal': {'id': cert.focal, 'name': roster[cert.focal - 1].name},
        'displaced': None if cert.displaced is None else
                     {'id': cert.displaced, 'name': roster[cert.displaced - 1].name},
        'modifications': [
            {
                'kind': m.kind.value,
                'count': m.count,
                'source': _ranking_doc(m.source, roster),
                'result': _ranking_doc(m.result, roster),
            }
            for m in cert.modifications
        ],
        'original_winners': sorted(cert.original_winners),
        'modified_winners': sorted(cert.modified_winners),
        'flags': sorted(f.value for f in cert.flags),
        'party_seats': {
            'original': party_seats(cert.original_winners, roster),
            'modified': party_seats(cert.modified_winners, roster),
        },
    }


def to_json(cert: AnomalyCertificate, roster: tuple[Candidate, ...]) -> str:
    return json.dumps(to_dict(cert, roster), sort_keys=True, indent=2, ensure_ascii=False) + '\n'


def from_dict(data: dict, election: Election | None = None) -> AnomalyCertificate:
    """Rebuild a certificate from its JSON document.

    Raises CertificateFormatError when the document is not a certificate.
    """
    try:
        mods = tuple(
            BallotModification(
                kind=ModificationKind(m['kind']),
                source=tuple(m['source']['ids']),
                result=None if m['result'] is None else tuple(m['result']['ids']),
                count=int(m['count']),
            )
            for m in data['modifications']
        )
        displaced = data.get('displaced')
        return AnomalyCertificate(
            kind=AnomalyKind(data['kind']),
            seats=int(data['seats']),
            focal=int(data['focal']['id']),
            original_winners=frozenset(data['original_winners']),
            modified_winners=frozenset(data['modified_winners']),
            modifications=mods,
            displaced=None if displaced is None else int(displaced['id']),
            reduced_seats=data.get('reduced_seats'),
            flags=frozenset(Flag(f) for f in data.get('flags', [])),
            election_hash=data.get('election_hash', ''),
            election_title=data.get('election_title', ''),
            election=election,
        )
    except (KeyError, TypeError, ValueError) as e:
        raise CertificateFormatError(f"unreadable certificate: {e}") from e


def from_json(text: str, election: Election | None = None) -> AnomalyCertificate:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise CertificateFormatError(f"invalid JSON: {e}") from e
    return from_dict(data, election)
