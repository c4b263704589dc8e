"""
Corpus runner: expand input paths, parse and analyse elections on a worker
pool, and hand results back in input path order.
"""

import asyncio
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

from stvaudit import config
from stvaudit.analysis.closeness import ClosenessReport, closeness_report
from stvaudit.core.errors import ProfileError, StvAuditError, TieError
from stvaudit.corpus.blt import BallotFile, load_ballot_file
from stvaudit.engine.tabulate import TabulationRecord, TiePolicy, tabulate
from stvaudit.search.budget import SearchBudget
from stvaudit.search.certificate import AnomalyCertificate, AnomalyKind
from stvaudit.search.committee import check_committee_size
from stvaudit.search.downward import search_downward
from stvaudit.search.noshow import search_no_show
from stvaudit.search.upward import search_upward

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INPUT = 2
EXIT_TIE = 3
EXIT_REJECTED = 4

# --kinds names, in report order
SEARCHERS = {
    'committee': None,
    'upward': search_upward,
    'downward': search_downward,
    'noshow': search_no_show,
}


def expand_paths(paths: list[str]) -> list[str]:
    """Files as given, directories expanded to their *.blt files; sorted, missing paths kept."""
    found = []
    for path in paths:
        if os.path.isdir(path):
            for root, _dirs, files in os.walk(path):
                found.extend(os.path.join(root, f) for f in files if f.lower().endswith('.blt'))
        else:
            found.append(path)
    return sorted(set(found))


@dataclass(frozen=True)
class AnalysisOptions:
    kinds: tuple[str, ...] = tuple(SEARCHERS)
    budget: SearchBudget | None = None
    tie_policy: TiePolicy = TiePolicy.FAIL
    seats: int | None = None
    count: bool = True
    search: bool = True
    closeness: bool = False


@dataclass(frozen=True)
class ElectionOutcome:
    path: str
    exit_code: int
    ballot_file: BallotFile | None = None
    record: TabulationRecord | None = None
    certificates: tuple[AnomalyCertificate, ...] = ()
    probes: int = 0
    truncated: bool = False
    closeness: ClosenessReport | None = None
    error: str | None = None
    duration_ms: int = 0

    @property
    def status(self) -> str:
        return {EXIT_OK: 'ok', EXIT_INPUT: 'input_error', EXIT_TIE: 'tie'}.get(self.exit_code, 'error')

    @property
    def kinds_found(self) -> frozenset[AnomalyKind]:
        return frozenset(c.kind for c in self.certificates)


def search_election(ballot_file: BallotFile, options: AnalysisOptions
                    ) -> tuple[tuple[AnomalyCertificate, ...], int, bool]:
    """Run the selected searchers; certificates carry the file's content hash."""
    election = ballot_file.election
    certificates: list[AnomalyCertificate] = []
    probes, truncated = 0, False
    for name in options.kinds:
        if name == 'committee':
            certificates.extend(check_committee_size(election, options.tie_policy))
            continue
        result = SEARCHERS[name](election, options.budget, options.tie_policy)
        certificates.extend(result.certificates)
        probes += result.probes
        truncated = truncated or result.truncated
    certificates = [replace(c, election_hash=ballot_file.content_hash) for c in certificates]
    certificates.sort(key=lambda c: c.sort_key())
    return tuple(certificates), probes, truncated


def analyze_path(path: str, options: AnalysisOptions) -> ElectionOutcome:
    """Parse, count and optionally search one file; failures become the outcome's exit code."""
    started = time.monotonic()

    def elapsed() -> int:
        return int((time.monotonic() - started) * 1000)

    try:
        ballot_file = load_ballot_file(path, options.seats)
    except OSError as e:
        logger.error("Cannot read %s: %s", path, e)
        return ElectionOutcome(path, EXIT_INPUT, error=str(e), duration_ms=elapsed())
    except ProfileError as e:
        logger.error("Cannot parse %s: %s", path, e)
        return ElectionOutcome(path, EXIT_INPUT, error=str(e), duration_ms=elapsed())

    if not options.count:
        return ElectionOutcome(path, EXIT_OK, ballot_file, duration_ms=elapsed())

    try:
        record = tabulate(ballot_file.election, options.tie_policy)
        certificates, probes, truncated = (), 0, False
        if options.search:
            certificates, probes, truncated = search_election(ballot_file, options)
        report = None
        if options.closeness:
            report = closeness_report(ballot_file.election, record, options.tie_policy)
    except TieError as e:
        logger.error("%s: %s", path, e)
        return ElectionOutcome(path, EXIT_TIE, ballot_file, error=str(e), duration_ms=elapsed())
    except StvAuditError as e:
        logger.error("%s: %s", path, e)
        return ElectionOutcome(path, EXIT_FAILURE, ballot_file, error=str(e), duration_ms=elapsed())
    except Exception as e:
        logger.exception("Unexpected failure on %s", path)
        return ElectionOutcome(path, EXIT_FAILURE, ballot_file, error=repr(e), duration_ms=elapsed())

    logger.info("%s: winners %s, %d certificates, %d probes%s", path, list(record.winners),
                len(certificates), probes, " (truncated)" if truncated else "")
    return ElectionOutcome(path, EXIT_OK, ballot_file, record, certificates, probes, truncated,
                           report, duration_ms=elapsed())


async def _run_pool(paths: list[str], options: AnalysisOptions, workers: int) -> list[ElectionOutcome]:
    loop = asyncio.get_running_loop()
    with ProcessPoolExecutor(max_workers=workers) as executor:
        tasks = [loop.run_in_executor(executor, analyze_path, path, options) for path in paths]
        return list(await asyncio.gather(*tasks))


def run_corpus(paths: list[str], options: AnalysisOptions, workers: int | None = None) -> list[ElectionOutcome]:
    """Analyse every election under `paths`; outcomes come back sorted by path."""
    files = expand_paths(paths)
    workers = workers or config.WORKERS
    logger.info("Processing %d files with %d workers", len(files), workers)
    if workers <= 1 or len(files) <= 1:
        return [analyze_path(path, options) for path in files]
    return asyncio.run(_run_pool(files, options, workers))


def worst_exit_code(outcomes: list[ElectionOutcome]) -> int:
    """Most severe exit code across outcomes: unexpected failure, then tie, then input."""
    codes = {o.exit_code for o in outcomes}
    for code in (EXIT_FAILURE, EXIT_TIE, EXIT_INPUT):
        if code in codes:
            return code
    return EXIT_OK


def load_corpus(paths: list[str], seats: int | None = None, workers: int | None = None) -> list[ElectionOutcome]:
    """Parse only; outcomes carry the BallotFile or the parse error."""
    return run_corpus(paths, AnalysisOptions(seats=seats, count=False, search=False), workers)
