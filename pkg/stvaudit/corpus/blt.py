"""
BLT ballot files.

Layout:
    n S
    -c ...                 optional withdrawn candidates
    count c1 c2 ... 0      one line per ballot type, count >= 1
    0                      end of ballots
    "Name (Party)"         n candidate lines
    "Title"

Blank lines are ignored and CRLF line endings are accepted. Every error
carries the line number it was found on.
"""

import hashlib
import json
import logging
import os
import re
from dataclasses import dataclass, field

from stvaudit.core.errors import BltParseError, ProfileError
from stvaudit.core.model import (
    BallotType,
    Candidate,
    Election,
    PreferenceProfile,
    canonicalize,
)

logger = logging.getLogger(__name__)

PARTY_RE = re.compile(r'^(?P<name>.*?)\s*\((?P<party>[^()]*)\)$')


@dataclass(frozen=True)
class BallotFile:
    path: str
    election: Election
    content_hash: str
    metadata: dict = field(default_factory=dict, compare=False)

    @property
    def stem(self) -> str:
        return os.path.splitext(os.path.basename(self.path))[0]


def content_hash(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _ints(line_number: int, text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split()]
    except ValueError:
        raise BltParseError(line_number, f"expected integers, got {text!r}") from None


def _quoted(line_number: int, text: str) -> str:
    if len(text) < 2 or not (text.startswith('"') and text.endswith('"')):
        raise BltParseError(line_number, f"expected a quoted string, got {text!r}")
    return text[1:-1].strip()


def _candidate(line_number: int, candidate_id: int, text: str) -> Candidate:
    label = _quoted(line_number, text)
    name, party = label, None
    match = PARTY_RE.match(label)
    if match and match.group('name'):
        name, party = match.group('name'), match.group('party').strip() or None
    if not name:
        raise BltParseError(line_number, f"candidate {candidate_id} has an empty name")
    return Candidate(candidate_id, name, party)


def parse_blt(data: bytes | str, seats: int | None = None) -> Election:
    """Parse BLT content into a canonical Election; `seats` overrides the header."""
    if isinstance(data, bytes):
        try:
            text = data.decode('utf-8-sig')
        except UnicodeDecodeError as e:
            raise BltParseError(data[:e.start].count(b'\n') + 1, "not valid UTF-8") from None
    else:
        text = data

    lines = [(i + 1, raw.strip()) for i, raw in enumerate(text.splitlines())]
    lines = [(n, s) for n, s in lines if s]
    if not lines:
        raise BltParseError(1, "empty file")

    pos = 0
    header_line, header = lines[pos]
    values = _ints(header_line, header)
    if len(values) != 2 or values[0] < 1 or values[1] < 1:
        raise BltParseError(header_line, f"malformed header {header!r}, expected 'candidates seats'")
    n, header_seats = values
    pos += 1

    withdrawn: set[int] = set()
    while pos < len(lines) and lines[pos][1].startswith('-'):
        line_number, body = lines[pos]
        for value in _ints(line_number, body):
            if value >= 0 or -value > n:
                raise BltParseError(line_number, f"withdrawn candidate {value} out of range")
            withdrawn.add(-value)
        pos += 1

    ballots = []
    terminated = False
    while pos < len(lines):
        line_number, body = lines[pos]
        pos += 1
        if body.startswith('"'):
            pos -= 1
            break
        values = _ints(line_number, body)
        if values == [0]:
            terminated = True
            break
        if len(values) < 2 or values[-1] != 0:
            raise BltParseError(line_number, "ballot line must end with 0")
        count, ranking = values[0], values[1:-1]
        if count < 1:
            raise BltParseError(line_number, f"ballot count must be at least 1, got {count}")
        if not ranking:
            raise BltParseError(line_number, "empty ranking")
        for c in ranking:
            if not 1 <= c <= n:
                raise BltParseError(line_number, f"candidate index {c} out of range 1..{n}")
        if len(set(ranking)) != len(ranking):
            raise BltParseError(line_number, f"candidate repeated in ranking {ranking}")
        ballots.append(BallotType(tuple(ranking), count))
    if not terminated:
        raise BltParseError(lines[pos - 1][0] if pos else header_line, "missing '0' end-of-ballots line")

    names = lines[pos:]
    if len(names) < n + 1:
        last = names[-1][0] if names else lines[pos - 1][0]
        raise BltParseError(last, f"expected {n} candidate names and a title, found {len(names)} strings")
    roster = tuple(_candidate(line_number, i + 1, body) for i, (line_number, body) in enumerate(names[:n]))
    title_line, title_text = names[n]
    title = _quoted(title_line, title_text)
    if len(names) > n + 1:
        raise BltParseError(names[n + 1][0], "unexpected content after the title")

    if not ballots:
        raise BltParseError(title_line, "no voters")
    try:
        profile = canonicalize(PreferenceProfile(roster, tuple(ballots)))
        return Election(profile, seats if seats is not None else header_seats, title, frozenset(withdrawn))
    except BltParseError:
        raise
    except ProfileError as e:
        raise BltParseError(header_line, str(e)) from e


def serialize_blt(election: Election) -> str:
    """Canonical BLT text for an election."""
    out = [f"{len(election.roster)} {election.seats}"]
    if election.withdrawn:
        out.append(' '.join(f"-{c}" for c in sorted(election.withdrawn)))
    for ballot in election.profile.ballots:
        out.append(' '.join(str(v) for v in (ballot.count, *ballot.ranking, 0)))
    out.append('0')
    for c in election.roster:
        out.append(f'"{c.label()}"')
    out.append(f'"{election.title}"')
    return '\n'.join(out) + '\n'


def _apply_sidecar(election: Election, sidecar: dict) -> Election:
    parties = sidecar.get('parties') or {}
    if not parties:
        return election
    roster = tuple(
        Candidate(c.id, c.name, c.party or parties.get(str(c.id)))
        for c in election.roster
    )
    return election.with_profile(PreferenceProfile(roster, election.profile.ballots))


def load_ballot_file(path: str, seats: int | None = None) -> BallotFile:
    """Read and parse one ballot file, with its optional `<file>.json` sidecar manifest."""
    with open(path, 'rb') as f:
        data = f.read()
    election = parse_blt(data, seats)

    metadata: dict = {}
    sidecar_path = path + '.json'
    if os.path.exists(sidecar_path):
        try:
            with open(sidecar_path, encoding='utf-8') as f:
                metadata = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            logger.warning("Ignoring unreadable manifest %s: %s", sidecar_path, e)
            metadata = {}
        if not isinstance(metadata, dict):
            logger.warning("Ignoring manifest %s: not a JSON object", sidecar_path)
            metadata = {}
        election = _apply_sidecar(election, metadata)

    logger.info("Parsed %s: %d voters, %d candidates, %d seats",
                path, election.profile.total_voters(), len(election.roster), election.seats)
    return BallotFile(path, election, content_hash(data), metadata)
