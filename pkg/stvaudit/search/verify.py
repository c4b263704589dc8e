"""
Certificate replay: apply the ballot changes, recount both elections and
check the winner-set relation the anomaly kind requires.
"""

import logging
from dataclasses import dataclass, field, replace

from stvaudit.core.errors import CertificateRejected, ProfileError, RejectionReason
from stvaudit.core.model import BallotType, Election
from stvaudit.engine.tabulate import TabulationRecord, TiePolicy, tabulate
from stvaudit.search import moves
from stvaudit.search.certificate import (
    AnomalyCertificate,
    AnomalyKind,
    BallotModification,
    Flag,
    ModificationKind,
    apply_modifications,
)

logger = logging.getLogger(__name__)

ALLOWED_MODIFICATIONS = {
    AnomalyKind.UPWARD: {ModificationKind.SHIFT_UP},
    AnomalyKind.DOWNWARD_STRONG: {ModificationKind.SHIFT_DOWN},
    AnomalyKind.DOWNWARD_WEAK: {ModificationKind.SHIFT_DOWN, ModificationKind.BULLET_REWRITE},
    AnomalyKind.NO_SHOW: {ModificationKind.REMOVE},
}


@dataclass(frozen=True)
class VerifiedCertificate:
    certificate: AnomalyCertificate
    original: TabulationRecord = field(compare=False, repr=False)
    modified: TabulationRecord = field(compare=False, repr=False)


def no_show_flags(modifications: tuple[BallotModification, ...], focal: int, seats: int) -> set[Flag]:
    flags = set()
    for mod in modifications:
        position = BallotType(mod.source, 1).position(focal)
        if position is None or position >= seats:
            flags.add(Flag.AMBIGUOUS_NO_SHOW)
    if len({m.source for m in modifications}) == 1:
        flags.add(Flag.IDENTICAL_BALLOTS_USED)
    return flags


def _reject(reason: RejectionReason, detail: str):
    raise CertificateRejected(reason, detail)


def _check_no_show_ballots(cert: AnomalyCertificate):
    if cert.displaced is None or cert.displaced == cert.focal:
        _reject(RejectionReason.MALFORMED_SHIFT, "no-show needs a distinct displaced winner")
    for mod in cert.modifications:
        ballot = BallotType(mod.source, 1)
        if not ballot.prefers(cert.focal, cert.displaced):
            _reject(RejectionReason.MALFORMED_SHIFT,
                    f"removed ballot {list(mod.source)} does not rank {cert.focal} above {cert.displaced}")
        position = ballot.position(cert.displaced)
        if position is not None and position < cert.seats:
            _reject(RejectionReason.MALFORMED_SHIFT,
                    f"removed ballot {list(mod.source)} ranks {cert.displaced} in the top {cert.seats}")


def relation_holds(kind: AnomalyKind, focal: int, displaced: int | None,
                   before: frozenset[int], after: frozenset[int]) -> bool:
    x, y = focal, displaced
    if kind is AnomalyKind.UPWARD:
        return x in before and x not in after
    if kind in (AnomalyKind.DOWNWARD_STRONG, AnomalyKind.DOWNWARD_WEAK):
        return x not in before and x in after
    return x not in before and y in before and after == (before - {y}) | {x}


def _verify_committee_size(cert: AnomalyCertificate, election: Election,
                           original: TabulationRecord, policy: TiePolicy) -> VerifiedCertificate:
    reduced_seats = cert.reduced_seats
    if cert.modifications or reduced_seats is None or not 1 <= reduced_seats < cert.seats:
        _reject(RejectionReason.MALFORMED_SHIFT, "committee-size certificate needs a smaller seat count")
    reduced = tabulate(election.with_seats(reduced_seats), policy)
    if reduced.winner_set != cert.modified_winners:
        _reject(RejectionReason.WINNERS_MISMATCH,
                f"W(P,{reduced_seats}) is {sorted(reduced.winner_set)}")
    if reduced.winner_set <= original.winner_set or cert.focal not in reduced.winner_set - original.winner_set:
        _reject(RejectionReason.RELATION_NOT_SATISFIED, "smaller committee is contained in the full one")
    return VerifiedCertificate(replace(cert, election=election), original, reduced)


def verify_certificate(cert: AnomalyCertificate, election: Election | None = None,
                       content_hash: str | None = None) -> VerifiedCertificate:
    """Replay a certificate; raises CertificateRejected with the reason it fails.

    When `content_hash` is given it must match the hash the certificate was
    issued against.
    """
    election = election or cert.election
    if election is None:
        _reject(RejectionReason.UNKNOWN_BALLOT, "certificate has no election attached")
    if content_hash and cert.election_hash and content_hash != cert.election_hash:
        _reject(RejectionReason.HASH_MISMATCH, f"certificate issued for {cert.election_hash[:12]}")
    if election.seats != cert.seats:
        election = election.with_seats(cert.seats)

    policy = TiePolicy.INDEX if Flag.TIE_ENCOUNTERED in cert.flags else TiePolicy.FAIL
    original = tabulate(election, policy)
    if original.winner_set != cert.original_winners:
        _reject(RejectionReason.WINNERS_MISMATCH, f"election elects {sorted(original.winner_set)}")

    if cert.kind is AnomalyKind.COMMITTEE_SIZE:
        return _verify_committee_size(cert, election, original, policy)

    if not cert.modifications:
        _reject(RejectionReason.MALFORMED_SHIFT, "certificate changes no ballots")
    allowed = ALLOWED_MODIFICATIONS[cert.kind]
    for mod in cert.modifications:
        if election.profile.count_of(mod.source) == 0:
            _reject(RejectionReason.UNKNOWN_BALLOT, f"no ballots {list(mod.source)}")
        if mod.kind not in allowed or not moves.is_legal(mod, cert.focal):
            _reject(RejectionReason.MALFORMED_SHIFT,
                    f"{mod.kind.value} {list(mod.source)} -> {mod.result} is not allowed here")
    if cert.kind is AnomalyKind.DOWNWARD_WEAK and not any(
            m.kind is ModificationKind.BULLET_REWRITE for m in cert.modifications):
        _reject(RejectionReason.MALFORMED_SHIFT, "weak downward certificate rewrites no bullet votes")
    if cert.kind is AnomalyKind.NO_SHOW:
        _check_no_show_ballots(cert)

    try:
        modified_election = election.with_profile(apply_modifications(election.profile, cert.modifications))
    except ProfileError as e:
        raise CertificateRejected(RejectionReason.MALFORMED_SHIFT, str(e)) from e
    modified = tabulate(modified_election, policy)

    if not relation_holds(cert.kind, cert.focal, cert.displaced, original.winner_set, modified.winner_set):
        _reject(RejectionReason.RELATION_NOT_SATISFIED,
                f"winners {sorted(original.winner_set)} -> {sorted(modified.winner_set)}")
    if modified.winner_set != cert.modified_winners:
        _reject(RejectionReason.WINNERS_MISMATCH, f"modified election elects {sorted(modified.winner_set)}")

    flags = set(cert.flags) & {Flag.TIE_ENCOUNTERED}
    if cert.kind is AnomalyKind.NO_SHOW:
        flags |= no_show_flags(cert.modifications, cert.focal, cert.seats)
    return VerifiedCertificate(replace(cert, flags=frozenset(flags), election=election), original, modified)
