"""
Command handlers. Each cmd_* takes a RunConfig and returns an exit code:
0 success (findings included), 1 unexpected failure, 2 input error,
3 unresolved tie under policy 'fail', 4 certificate rejected.
"""

import logging
import os
import sys
from dataclasses import dataclass, field

from stvaudit import config
from stvaudit.analysis.series import (
    SERIES_COLUMNS,
    THREE,
    TWO,
    SeriesEntry,
    closeness_series,
    closeness_summary,
)
from stvaudit.core import database
from stvaudit.core.errors import (
    CertificateFormatError,
    CertificateRejected,
    ProfileError,
    TieError,
)
from stvaudit.corpus.blt import load_ballot_file
from stvaudit.corpus.runner import (
    EXIT_FAILURE,
    EXIT_INPUT,
    EXIT_OK,
    EXIT_REJECTED,
    EXIT_TIE,
    SEARCHERS,
    AnalysisOptions,
    ElectionOutcome,
    load_corpus,
    run_corpus,
    worst_exit_code,
)
from stvaudit.corpus.stats import STATS_COLUMNS, aggregate_rows, descriptive_stats
from stvaudit.corpus.writer import csv_text, json_text, write_csv, write_json, write_text
from stvaudit.engine.tabulate import TiePolicy
from stvaudit.reports.rounds import render_rounds_text, rounds_document, rounds_rows
from stvaudit.reports.summary import SUMMARY_COLUMNS, render_summary_text, summary_rows
from stvaudit.search.budget import SearchBudget
from stvaudit.search.certificate import from_json, to_dict
from stvaudit.search.verify import verify_certificate

logger = logging.getLogger(__name__)

FORMATS = ('table', 'csv', 'json')

CLOSENESS_COLUMNS = ['election', 'seats', 'first_round_terminated', 'three_close_max_p', 'two_close_max_p',
                     'stv_winners', 'sntv_winners', 'condorcet_committee', 'methods_agree', 'anomalies']


@dataclass
class RunConfig:
    command: str
    inputs: list[str]
    seats: int | None = None
    kinds: tuple[str, ...] = tuple(SEARCHERS)
    budget_probes: int = config.BUDGET_PROBES
    budget_seconds: float = config.BUDGET_SECONDS
    tie_policy: TiePolicy = TiePolicy(config.TIE_POLICY)
    fmt: str = 'table'
    out: str | None = None
    run_log: bool = True
    election: str | None = None
    workers: int = config.WORKERS
    run_id: int | None = field(default=None, repr=False)

    def __post_init__(self):
        if not self.inputs:
            raise ValueError("at least one input path is required")
        if self.budget_probes < 1:
            raise ValueError("probe cap must be at least 1")
        unknown = [k for k in self.kinds if k not in SEARCHERS]
        if unknown:
            raise ValueError(f"unknown anomaly kind(s) {unknown}; choose from {', '.join(SEARCHERS)}")
        if self.fmt not in FORMATS:
            raise ValueError(f"unknown format {self.fmt!r}")

    def options(self, **overrides) -> AnalysisOptions:
        values = dict(
            kinds=self.kinds,
            budget=SearchBudget(self.budget_probes, self.budget_seconds),
            tie_policy=self.tie_policy,
            seats=self.seats,
        )
        values.update(overrides)
        return AnalysisOptions(**values)


def _emit(text: str):
    sys.stdout.write(text)
    sys.stdout.flush()


def _record(cfg: RunConfig, outcomes: list[ElectionOutcome]):
    if cfg.run_id is None:
        return
    try:
        for o in outcomes:
            e = o.ballot_file.election if o.ballot_file else None
            database.record_election(
                cfg.run_id, o.path, o.ballot_file.content_hash if o.ballot_file else None, o.status,
                voters=e.profile.total_voters() if e else None,
                candidates=len(e.roster) if e else None,
                seats=e.seats if e else None,
                probes=o.probes, truncated=o.truncated, certificates=len(o.certificates),
                error=o.error, duration_ms=o.duration_ms,
            )
    except Exception as e:
        logger.error("Run log write failed: %s", e)


def _finish(cfg: RunConfig, outcomes: list[ElectionOutcome]) -> int:
    _record(cfg, outcomes)
    if not outcomes:
        logger.error("No ballot files found in %s", cfg.inputs)
        return EXIT_INPUT
    for o in outcomes:
        if o.exit_code != EXIT_OK:
            sys.stderr.write(f"{o.path}: {o.error}\n")
    return worst_exit_code(outcomes)


def _counted(outcomes: list[ElectionOutcome]) -> list[ElectionOutcome]:
    return [o for o in outcomes if o.record is not None]


def cmd_tabulate(cfg: RunConfig) -> int:
    """Votes-by-round table for every election."""
    outcomes = run_corpus(cfg.inputs, cfg.options(search=False), cfg.workers)

    for o in _counted(outcomes):
        election, record = o.ballot_file.election, o.record
        if cfg.out:
            base = os.path.join(cfg.out, 'rounds', o.ballot_file.stem)
            write_text(base + '.txt', render_rounds_text(election, record))
            rows = rounds_rows(election, record)
            write_csv(base + '.csv', rows[0], rows[1:])
            write_json(base + '.json', rounds_document(election, record))
        elif cfg.fmt == 'csv':
            rows = rounds_rows(election, record)
            _emit(csv_text(rows[0], rows[1:]))
        elif cfg.fmt == 'json':
            _emit(json_text(rounds_document(election, record)))
        else:
            _emit(render_rounds_text(election, record))
    return _finish(cfg, outcomes)


def _certificate_documents(o: ElectionOutcome) -> list[tuple[str, dict]]:
    """(file name, document) per certificate, numbered within each kind."""
    roster = o.ballot_file.election.roster
    numbered: dict[str, int] = {}
    docs = []
    for cert in o.certificates:
        numbered[cert.kind.value] = numbered.get(cert.kind.value, 0) + 1
        docs.append((f"{cert.kind.value}-{numbered[cert.kind.value]}.json", to_dict(cert, roster)))
    return docs


def cmd_anomalies(cfg: RunConfig) -> int:
    """Search every election for anomalies and report certificates plus the summary matrix."""
    outcomes = run_corpus(cfg.inputs, cfg.options(), cfg.workers)
    counted = _counted(outcomes)
    rows = summary_rows(outcomes, cfg.kinds)

    if cfg.out:
        for o in counted:
            for name, doc in _certificate_documents(o):
                write_json(os.path.join(cfg.out, 'certificates', o.ballot_file.stem, name), doc)
        write_csv(os.path.join(cfg.out, 'anomaly_summary.csv'), SUMMARY_COLUMNS, rows)
        write_text(os.path.join(cfg.out, 'anomaly_summary.txt'), render_summary_text(outcomes, cfg.kinds))
    elif cfg.fmt == 'csv':
        _emit(csv_text(SUMMARY_COLUMNS, rows))
    elif cfg.fmt == 'json':
        _emit(json_text([
            {
                'election': o.ballot_file.stem,
                'truncated': o.truncated,
                'probes': o.probes,
                'certificates': [doc for _name, doc in _certificate_documents(o)],
            }
            for o in counted
        ]))
    else:
        _emit(render_summary_text(outcomes, cfg.kinds))
    return _finish(cfg, outcomes)


def _max_close(close: dict[int, bool]) -> str:
    hits = [p for p, ok in close.items() if ok]
    return str(max(hits)) if hits else ''


def _names(election, candidates) -> str:
    if candidates is None:
        return 'none'
    return ';'.join(election.profile.name(c) for c in sorted(candidates))


def _closeness_row(o: ElectionOutcome) -> list:
    election, report = o.ballot_file.election, o.closeness
    return [
        o.ballot_file.stem, report.seats, 'yes' if report.first_round_terminated else 'no',
        _max_close(report.three_close), _max_close(report.two_close),
        _names(election, report.stv_winners), _names(election, report.sntv_winners),
        _names(election, report.condorcet_committee), 'yes' if report.methods_agree else 'no',
        ';'.join(sorted(k.value for k in o.kinds_found)),
    ]


def cmd_closeness(cfg: RunConfig) -> int:
    """Closeness measures per election and the corpus-level p-series."""
    outcomes = run_corpus(cfg.inputs, cfg.options(closeness=True), cfg.workers)
    counted = [o for o in _counted(outcomes) if o.closeness is not None]
    entries = [SeriesEntry(o.closeness, o.kinds_found) for o in counted]
    per_election = [_closeness_row(o) for o in counted]
    three = [r.as_row() for r in closeness_series(entries, THREE)]
    two = [r.as_row() for r in closeness_series(entries, TWO)]
    summary = [list(row) for row in closeness_summary(entries)]
    summary_header = ['measure', 'close_count', 'anomalous_close_count']

    if cfg.out:
        write_csv(os.path.join(cfg.out, 'closeness.csv'), CLOSENESS_COLUMNS, per_election)
        write_csv(os.path.join(cfg.out, 'closeness_series_three.csv'), SERIES_COLUMNS, three)
        write_csv(os.path.join(cfg.out, 'closeness_series_two.csv'), SERIES_COLUMNS, two)
        write_csv(os.path.join(cfg.out, 'closeness_summary.csv'), summary_header, summary)
    elif cfg.fmt == 'json':
        _emit(json_text({
            'elections': [dict(zip(CLOSENESS_COLUMNS, row)) for row in per_election],
            'series_three': [dict(zip(SERIES_COLUMNS, row)) for row in three],
            'series_two': [dict(zip(SERIES_COLUMNS, row)) for row in two],
            'summary': [dict(zip(summary_header, row)) for row in summary],
        }))
    elif cfg.fmt == 'csv':
        _emit(csv_text(CLOSENESS_COLUMNS, per_election))
    else:
        text = csv_text(CLOSENESS_COLUMNS, per_election)
        text += '\nThree-candidate-close series\n' + csv_text(SERIES_COLUMNS, three)
        text += '\nTwo-candidate-close series\n' + csv_text(SERIES_COLUMNS, two)
        text += '\n' + csv_text(summary_header, summary)
        _emit(text)
    return _finish(cfg, outcomes)


def cmd_stats(cfg: RunConfig) -> int:
    """Ballot-length statistics for the corpus."""
    outcomes = load_corpus(cfg.inputs, cfg.seats, cfg.workers)
    parsed = [(o.ballot_file.stem, o.ballot_file.election) for o in outcomes if o.ballot_file]
    if not parsed:
        return _finish(cfg, outcomes)
    stats = descriptive_stats(parsed)
    rows = [s.as_row() for s in stats.elections]
    aggregate_header = ['group', 'key', 'elections', 'mean_length', 'median_length']
    aggregates = aggregate_rows(stats)

    if cfg.out:
        write_csv(os.path.join(cfg.out, 'stats.csv'), STATS_COLUMNS, rows)
        write_csv(os.path.join(cfg.out, 'stats_aggregates.csv'), aggregate_header, aggregates)
    elif cfg.fmt == 'json':
        _emit(json_text({
            'elections': [dict(zip(STATS_COLUMNS, row)) for row in rows],
            'aggregates': [dict(zip(aggregate_header, row)) for row in aggregates],
        }))
    elif cfg.fmt == 'csv':
        _emit(csv_text(STATS_COLUMNS, rows))
    else:
        _emit(csv_text(STATS_COLUMNS, rows) + '\n' + csv_text(aggregate_header, aggregates))
    return _finish(cfg, outcomes)


def cmd_verify(cfg: RunConfig) -> int:
    """Replay certificate files against the ballot file given by --election."""
    if not cfg.election:
        logger.error("verify needs --election FILE.blt")
        return EXIT_INPUT
    try:
        ballot_file = load_ballot_file(cfg.election, cfg.seats)
    except (OSError, ProfileError) as e:
        logger.error("Cannot load %s: %s", cfg.election, e)
        sys.stderr.write(f"{cfg.election}: {e}\n")
        return EXIT_INPUT

    codes = set()
    for path in sorted(cfg.inputs):
        try:
            with open(path, encoding='utf-8') as f:
                cert = from_json(f.read(), ballot_file.election)
            verify_certificate(cert, ballot_file.election, ballot_file.content_hash)
        except (OSError, CertificateFormatError) as e:
            logger.error("Cannot read certificate %s: %s", path, e)
            _emit(f"UNREADABLE {path}: {e}\n")
            codes.add(EXIT_INPUT)
            continue
        except CertificateRejected as e:
            logger.warning("Certificate %s rejected: %s", path, e)
            _emit(f"REJECTED {path}: {e}\n")
            codes.add(EXIT_REJECTED)
            continue
        except TieError as e:
            logger.error("Certificate %s hit a tie: %s", path, e)
            _emit(f"TIE {path}: {e}\n")
            codes.add(EXIT_TIE)
            continue
        except Exception as e:
            logger.exception("Unexpected failure verifying %s", path)
            _emit(f"ERROR {path}: {e!r}\n")
            codes.add(EXIT_FAILURE)
            continue
        logger.info("Certificate %s verified", path)
        _emit(f"OK {path}\n")

    for code in (EXIT_REJECTED, EXIT_FAILURE, EXIT_TIE, EXIT_INPUT):
        if code in codes:
            return code
    return EXIT_OK


COMMANDS = {
    'tabulate': cmd_tabulate,
    'anomalies': cmd_anomalies,
    'closeness': cmd_closeness,
    'stats': cmd_stats,
    'verify': cmd_verify,
}
