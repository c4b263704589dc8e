"""
Search budget and the probe context shared by the searchers.

Every tabulation of a modified election is a probe and is charged against
the budget. Probes that hit a tie are abandoned; candidate certificates are
verified by replay before they are kept.
"""

import logging
import time
from dataclasses import dataclass, field

from stvaudit import config
from stvaudit.core.errors import CertificateRejected, ProfileError, TieError
from stvaudit.core.model import BallotType, Election
from stvaudit.engine.tabulate import TabulationRecord, TiePolicy, tabulate
from stvaudit.search.certificate import (
    AnomalyCertificate,
    AnomalyKind,
    BallotModification,
    Flag,
    ModificationKind,
    apply_modifications,
    dedupe,
)
from stvaudit.search.verify import relation_holds, verify_certificate

logger = logging.getLogger(__name__)

# (modification kind, ballot type, result ranking) in the order ballots are taken
Option = tuple[ModificationKind, BallotType, tuple[int, ...] | None]


@dataclass(frozen=True)
class SearchBudget:
    max_probes: int = config.BUDGET_PROBES
    max_seconds: float = config.BUDGET_SECONDS  # 0 = no wall-time cap

    def __post_init__(self):
        if self.max_probes < 1:
            raise ValueError("probe cap must be at least 1")
        if self.max_seconds < 0:
            raise ValueError("time cap cannot be negative")


class BudgetExhausted(Exception):
    """Raised inside a searcher to unwind once the budget is spent."""


@dataclass
class ProbeCounter:
    budget: SearchBudget
    probes: int = 0
    ties: int = 0
    truncated: bool = False
    started: float = field(default_factory=time.monotonic)

    def charge(self):
        if self.probes >= self.budget.max_probes:
            self.truncated = True
            raise BudgetExhausted()
        if self.budget.max_seconds and time.monotonic() - self.started > self.budget.max_seconds:
            self.truncated = True
            raise BudgetExhausted()
        self.probes += 1

    def probe(self, election: Election) -> TabulationRecord | None:
        """Count a modified election; None when the count hit a tie."""
        self.charge()
        try:
            return tabulate(election, TiePolicy.FAIL)
        except TieError as e:
            self.ties += 1
            logger.debug("Probe abandoned: %s", e)
            return None


@dataclass(frozen=True)
class SearchResult:
    certificates: tuple[AnomalyCertificate, ...]
    probes: int
    truncated: bool


def accept(cert: AnomalyCertificate, found: list[AnomalyCertificate]) -> bool:
    """Verify a candidate certificate before keeping it."""
    try:
        verified = verify_certificate(cert)
    except CertificateRejected as e:
        logger.debug("Certificate rejected (%s): %s", cert.kind.value, e)
        return False
    except TieError as e:
        logger.debug("Certificate rejected on tie: %s", e)
        return False
    found.append(verified.certificate)
    return True


class SearchContext:
    """State of one searcher run on one election."""

    def __init__(self, election: Election, budget: SearchBudget,
                 tie_policy: TiePolicy | str = TiePolicy.FAIL):
        self.election = election
        self.seats = election.seats
        self.counter = ProbeCounter(budget)
        self.baseline = tabulate(election, tie_policy)
        self.winners = self.baseline.winner_set
        self.losers = frozenset(election.active_candidates()) - self.winners
        self.flags = frozenset({Flag.TIE_ENCOUNTERED}) if self.baseline.tie_broken_by_index else frozenset()
        self.found: list[AnomalyCertificate] = []

    def found_focal(self, kind: AnomalyKind) -> set[int]:
        return {c.focal for c in self.found if c.kind is kind}

    def found_pairs(self) -> set[tuple[int, int]]:
        return {(c.focal, c.displaced) for c in self.found if c.kind is AnomalyKind.NO_SHOW}

    def attempt(self, kind: AnomalyKind, focal: int, modifications: tuple[BallotModification, ...],
                displaced: int | None = None) -> bool:
        """Probe one modification set; keep it when it verifies as an anomaly."""
        try:
            modified = self.election.with_profile(apply_modifications(self.election.profile, modifications))
        except (CertificateRejected, ProfileError):
            return False
        record = self.counter.probe(modified)
        if record is None:
            return False
        if not relation_holds(kind, focal, displaced, self.winners, record.winner_set):
            return False
        cert = AnomalyCertificate(
            kind=kind,
            seats=self.seats,
            focal=focal,
            original_winners=self.winners,
            modified_winners=record.winner_set,
            modifications=tuple(sorted(modifications, key=lambda m: m.sort_key())),
            displaced=displaced,
            flags=self.flags,
            election_title=self.election.title,
            election=self.election,
        )
        return accept(cert, self.found)

    def result(self) -> SearchResult:
        return SearchResult(tuple(dedupe(self.found)), self.counter.probes, self.counter.truncated)


def take(options: list[Option], count: int) -> tuple[BallotModification, ...] | None:
    """Take `count` ballots greedily in option order; None when too few exist."""
    mods = []
    remaining = count
    for kind, ballot, result in options:
        if remaining == 0:
            break
        used = min(remaining, ballot.count)
        mods.append(BallotModification(kind, ballot.ranking, result, used))
        remaining -= used
    if remaining or not mods:
        return None
    return tuple(mods)


def incremental(ctx: SearchContext, kind_of, focal: int, options: list[Option],
                displaced: int | None = None) -> bool:
    """Change one ballot at a time along `options`, probing after each ballot.

    `kind_of` maps the modification tuple to the anomaly kind it would show.
    Stops at the first verified anomaly.
    """
    prefix: list[BallotModification] = []
    for kind, ballot, result in options:
        for used in range(1, ballot.count + 1):
            mods = (*prefix, BallotModification(kind, ballot.ranking, result, used))
            if ctx.attempt(kind_of(mods), focal, mods, displaced):
                return True
        prefix.append(BallotModification(kind, ballot.ranking, result, ballot.count))
    return False


def run_passes(ctx: SearchContext, label: str, passes) -> SearchResult:
    for search_pass in passes:
        try:
            search_pass(ctx)
        except BudgetExhausted:
            logger.warning("%s search stopped by budget after %d probes", label, ctx.counter.probes)
            break
        logger.debug("%s pass %s done: %d probes, %d found",
                     label, search_pass.__name__, ctx.counter.probes, len(ctx.found))
    result = ctx.result()
    logger.info("%s search: %d certificates, %d probes%s", label, len(result.certificates),
                result.probes, " (truncated)" if result.truncated else "")
    return result

