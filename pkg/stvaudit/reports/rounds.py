"""
Votes-by-round tables: one column per round, one row per candidate.
"""

import logging

from stvaudit.core.model import Election
from stvaudit.engine.tabulate import EventKind, TabulationRecord

logger = logging.getLogger(__name__)

TEXT_PLACES = 3


def _event_text(election: Election, event) -> str:
    names = ', '.join(election.profile.name(c) for c in event.candidates)
    if event.kind is EventKind.ELECTED:
        text = f"elected {names}"
        if event.without_quota:
            below = ', '.join(election.profile.name(c) for c in event.without_quota)
            text += f" (without quota: {below})"
        return text
    if event.kind is EventKind.SURPLUS:
        return f"surplus of {names}"
    return f"eliminated {names}"


def rounds_rows(election: Election, record: TabulationRecord, places: int | None = None) -> list[list[str]]:
    """Header plus one row per candidate, then exhausted and loss rows.

    Blank cells are rounds the candidate did not open as continuing; a
    trailing '*' marks the round a candidate was elected in. `places=None`
    keeps the full five decimals.
    """
    def cell(value) -> str:
        return str(value) if places is None else value.display(places)

    header = ['candidate'] + [f"round {r.number}" for r in record.rounds]
    rows = [header]
    for c in election.active_candidates():
        row = [election.profile.name(c)]
        for r in record.rounds:
            if c not in r.totals:
                row.append('')
                continue
            text = cell(r.totals[c])
            if r.event.kind is EventKind.ELECTED and c in r.event.candidates:
                text += '*'
            row.append(text)
        rows.append(row)
    rows.append(['exhausted'] + [cell(r.exhausted) for r in record.rounds])
    rows.append(['loss'] + [cell(r.loss) for r in record.rounds])
    return rows


def render_rounds_text(election: Election, record: TabulationRecord) -> str:
    rows = rounds_rows(election, record, TEXT_PLACES)
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]

    lines = [election.title or 'Election',
             f"Seats: {record.seats}  Voters: {record.total_voters}  Quota: {record.quota.value}",
             '']
    for row in rows:
        cells = [row[0].ljust(widths[0])] + [v.rjust(w) for v, w in zip(row[1:], widths[1:])]
        lines.append('  '.join(cells).rstrip())
    lines.append('')
    for r in record.rounds:
        lines.append(f"Round {r.number}: {_event_text(election, r.event)}")
    winners = ', '.join(election.profile.name(c) for c in record.winners)
    lines.append(f"Winners: {winners}")
    if record.tie_broken_by_index:
        lines.append("Note: a tie was broken by candidate index")
    return '\n'.join(lines) + '\n'


def rounds_document(election: Election, record: TabulationRecord) -> dict:
    return {
        'title': election.title,
        'seats': record.seats,
        'voters': record.total_voters,
        'quota': record.quota.value,
        'candidates': [{'id': c.id, 'name': c.name, 'party': c.party} for c in election.roster],
        'withdrawn': sorted(election.withdrawn),
        'rounds': [
            {
                'round': r.number,
                'totals': {str(c): str(v) for c, v in sorted(r.totals.items())},
                'event': {
                    'kind': r.event.kind.value,
                    'candidates': list(r.event.candidates),
                    'without_quota': list(r.event.without_quota),
                },
                'transfers': [
                    {'from': t.source, 'to': t.target, 'value': str(t.value)} for t in r.transfers
                ],
                'exhausted': str(r.exhausted),
                'loss': str(r.loss),
            }
            for r in record.rounds
        ],
        'winners': list(record.winners),
        'tie_broken_by_index': record.tie_broken_by_index,
    }
