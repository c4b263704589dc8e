"""
Anomaly summary matrix: one row per election, one column per anomaly
kind. Downward findings are marked S (strong) and/or W (weak); a no-show
finding is marked † when every certificate for it is ambiguous.
"""

import logging

from stvaudit.corpus.runner import ElectionOutcome
from stvaudit.search.certificate import AnomalyKind, Flag

logger = logging.getLogger(__name__)

SUMMARY_COLUMNS = ['election', 'seats', 'committee_size', 'upward', 'downward', 'no_show',
                   'truncated', 'status']

DAGGER = '†'


def _yes_no(found: bool) -> str:
    return 'Yes' if found else 'No'


def _downward(outcome: ElectionOutcome) -> str:
    marks = []
    if AnomalyKind.DOWNWARD_STRONG in outcome.kinds_found:
        marks.append('S')
    if AnomalyKind.DOWNWARD_WEAK in outcome.kinds_found:
        marks.append('W')
    return f"Yes ({'/'.join(marks)})" if marks else 'No'


def _no_show(outcome: ElectionOutcome) -> str:
    certs = [c for c in outcome.certificates if c.kind is AnomalyKind.NO_SHOW]
    if not certs:
        return 'No'
    if all(Flag.AMBIGUOUS_NO_SHOW in c.flags for c in certs):
        return f"Yes{DAGGER}"
    return 'Yes'


def summary_row(outcome: ElectionOutcome, kinds: tuple[str, ...]) -> list[str]:
    """Cells for one election; kinds that were not searched show '-'."""
    bf = outcome.ballot_file
    name = bf.stem if bf else outcome.path
    if outcome.record is None:
        seats = str(bf.election.seats) if bf else ''
        return [name, seats, '-', '-', '-', '-', '-', outcome.status]

    found = outcome.kinds_found
    cells = {
        'committee': _yes_no(AnomalyKind.COMMITTEE_SIZE in found),
        'upward': _yes_no(AnomalyKind.UPWARD in found),
        'downward': _downward(outcome),
        'noshow': _no_show(outcome),
    }
    return [name, str(outcome.record.seats)] + \
        [cells[k] if k in kinds else '-' for k in ('committee', 'upward', 'downward', 'noshow')] + \
        [_yes_no(outcome.truncated), outcome.status]


def summary_rows(outcomes: list[ElectionOutcome], kinds: tuple[str, ...]) -> list[list[str]]:
    return [summary_row(o, kinds) for o in outcomes]


def render_summary_text(outcomes: list[ElectionOutcome], kinds: tuple[str, ...]) -> str:
    rows = [SUMMARY_COLUMNS] + summary_rows(outcomes, kinds)
    widths = [max(len(row[i]) for row in rows) for i in range(len(SUMMARY_COLUMNS))]
    lines = ['  '.join(v.ljust(w) for v, w in zip(row, widths)).rstrip() for row in rows]

    anomalous = sum(1 for o in outcomes if o.certificates)
    lines.append('')
    lines.append(f"{anomalous} of {len(outcomes)} elections show at least one anomaly")
    for kind in AnomalyKind:
        count = sum(1 for o in outcomes if kind in o.kinds_found)
        if count:
            lines.append(f"  {kind.value}: {count}")
    return '\n'.join(lines) + '\n'
