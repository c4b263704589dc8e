"""
Corpus-level closeness series: for each p, how many multiwinner elections
are close and how many of those show an anomaly.
"""

import logging
from dataclasses import dataclass

from stvaudit.analysis.closeness import ClosenessReport, percent_range
from stvaudit.search.certificate import AnomalyKind

logger = logging.getLogger(__name__)

THREE = 'three'
TWO = 'two'

SERIES_COLUMNS = ['p', 'close_count', 'anomalous_close_count', 'ratio',
                  'anomalous_close_count_excluding_committee', 'ratio_excluding_committee']


@dataclass(frozen=True)
class SeriesEntry:
    report: ClosenessReport
    kinds: frozenset[AnomalyKind]

    @property
    def anomalous(self) -> bool:
        return bool(self.kinds)

    @property
    def anomalous_excluding_committee(self) -> bool:
        return bool(self.kinds - {AnomalyKind.COMMITTEE_SIZE})


@dataclass(frozen=True)
class SeriesRow:
    p: int
    close_count: int
    anomalous_close_count: int
    anomalous_excluding_committee: int

    def as_row(self) -> list:
        return [self.p, self.close_count, self.anomalous_close_count,
                ratio_text(self.anomalous_close_count, self.close_count),
                self.anomalous_excluding_committee,
                ratio_text(self.anomalous_excluding_committee, self.close_count)]


def ratio_text(numerator: int, denominator: int) -> str:
    """Ratio rounded half up to 4 places; empty for 0/0."""
    if denominator == 0:
        return ''
    q = (numerator * 20000 + denominator) // (2 * denominator)
    return f"{q // 10000}.{q % 10000:04d}"


def closeness_series(entries: list[SeriesEntry], metric: str = THREE) -> list[SeriesRow]:
    multiwinner = [e for e in entries if e.report.seats > 1]
    if not multiwinner:
        return []
    rows = []
    for p in percent_range():
        close = [e for e in multiwinner
                 if (e.report.three_close if metric == THREE else e.report.two_close)[p]]
        rows.append(SeriesRow(
            p=p,
            close_count=len(close),
            anomalous_close_count=sum(1 for e in close if e.anomalous),
            anomalous_excluding_committee=sum(1 for e in close if e.anomalous_excluding_committee),
        ))
    logger.debug("Closeness series %s over %d multiwinner elections", metric, len(multiwinner))
    return rows


def closeness_summary(entries: list[SeriesEntry]) -> list[tuple[str, int, int]]:
    """(measure, close elections, anomalous among them) for the non-percentage measures."""
    multiwinner = [e for e in entries if e.report.seats > 1]
    measures = [
        ('multiwinner', multiwinner),
        ('not_first_round_terminated', [e for e in multiwinner if not e.report.first_round_terminated]),
        ('no_condorcet_committee', [e for e in multiwinner if e.report.condorcet_committee is None]),
        ('methods_disagree', [e for e in multiwinner if not e.report.methods_agree]),
    ]
    return [(name, len(group), sum(1 for e in group if e.anomalous)) for name, group in measures]
