import json

import pytest

from stvaudit.core.errors import BltParseError
from stvaudit.corpus.blt import content_hash, load_ballot_file, parse_blt, serialize_blt
from stvaudit.engine.tabulate import tabulate

from tests.conftest import COATES, fixture_path


def test_parse_example_fixture(example2):
    ballot_file = load_ballot_file(fixture_path('example_501.blt'))
    election = ballot_file.election
    assert election.profile == example2.profile
    assert election.seats == 2
    assert election.title == 'Worked example'
    assert ballot_file.stem == 'example_501'
    assert len(ballot_file.content_hash) == 64


def test_seat_override():
    election = load_ballot_file(fixture_path('example_501.blt'), seats=1).election
    assert tabulate(election).winner_set == {2}


def test_party_labels(perth):
    election = load_ballot_file(fixture_path('perth_kinross_reduced.blt')).election
    assert election.profile == perth.profile
    assert [(c.name, c.party) for c in election.roster] == [
        ('Barrett', 'LD'), ('Coates', 'Con'), ('Leitch', 'SNP')]
    assert tabulate(election).winners == (COATES,)


def test_crlf_blank_lines_and_bom():
    text = '\ufeff3 1\r\n\r\n2 1 2 0\r\n1 3 0\r\n0\r\n"A"\r\n"B"\r\n"C"\r\n"T"\r\n'
    election = parse_blt(text.encode('utf-8'))
    assert election.profile.total_voters() == 3
    assert election.title == 'T'


def test_withdrawn_candidates():
    election = parse_blt('3 1\n-2\n2 2 1 0\n1 3 0\n0\n"A"\n"B"\n"C"\n"T"\n')
    assert election.withdrawn == {2}
    assert election.active_candidates() == (1, 3)
    assert tabulate(election).winner_set == {1}


def test_serialize_is_canonical(example2):
    text = serialize_blt(example2)
    assert text.splitlines()[:2] == ['4 2', '19 1 2 0']
    assert parse_blt(text).profile == example2.profile
    assert serialize_blt(parse_blt(text)) == text


def test_duplicate_lines_merge():
    election = parse_blt('2 1\n2 1 0\n3 2 0\n1 1 0\n0\n"A"\n"B"\n"T"\n')
    assert election.profile.count_of((1,)) == 3


@pytest.mark.parametrize('text, line, message', [
    ('', 1, 'empty file'),
    ('4\n0\n', 1, 'malformed header'),
    ('2 1\n3 1 2\n0\n"A"\n"B"\n"T"\n', 2, 'must end with 0'),
    ('2 1\n0 1 0\n0\n"A"\n"B"\n"T"\n', 2, 'at least 1'),
    ('2 1\n3 0\n0\n"A"\n"B"\n"T"\n', 2, 'empty ranking'),
    ('2 1\n3 1 5 0\n0\n"A"\n"B"\n"T"\n', 2, 'out of range'),
    ('2 1\n3 1 1 0\n0\n"A"\n"B"\n"T"\n', 2, 'repeated'),
    ('2 1\n3 1 x 0\n0\n"A"\n"B"\n"T"\n', 2, 'expected integers'),
    ('2 1\n3 1 0\n"A"\n"B"\n"T"\n', 2, "missing '0'"),
    ('2 1\n3 1 0\n0\n"A"\n"T"\n', 5, 'candidate names'),
    ('2 1\n3 1 0\n0\n"A"\n"B"\n"T"\n"extra"\n', 7, 'after the title'),
    ('2 1\n0\n"A"\n"B"\n"T"\n', 5, 'no voters'),
    ('2 1\n-3\n3 1 0\n0\n"A"\n"B"\n"T"\n', 2, 'withdrawn'),
])
def test_parse_errors(text, line, message):
    with pytest.raises(BltParseError) as info:
        parse_blt(text)
    assert info.value.line_number == line
    assert message in info.value.message


def test_seat_count_must_fit():
    with pytest.raises(BltParseError) as info:
        parse_blt('2 3\n1 1 0\n0\n"A"\n"B"\n"T"\n')
    assert info.value.line_number == 1


def test_invalid_utf8_reports_line():
    with pytest.raises(BltParseError) as info:
        parse_blt(b'2 1\n1 1 0\n0\n"\xff"\n"B"\n"T"\n')
    assert info.value.line_number == 4


def test_sidecar_manifest(tmp_path):
    path = tmp_path / 'ward.blt'
    data = b'2 1\n3 1 0\n2 2 0\n0\n"Ann"\n"Bob (Lab)"\n"Ward"\n'
    path.write_bytes(data)
    (tmp_path / 'ward.blt.json').write_text(
        json.dumps({'parties': {'1': 'Grn', '2': 'Con'}, 'year': 2017}), encoding='utf-8')
    ballot_file = load_ballot_file(str(path))
    assert [c.party for c in ballot_file.election.roster] == ['Grn', 'Lab']
    assert ballot_file.metadata['year'] == 2017
    assert ballot_file.content_hash == content_hash(data)


def test_unreadable_sidecar_is_ignored(tmp_path):
    path = tmp_path / 'ward.blt'
    path.write_bytes(b'2 1\n3 1 0\n0\n"Ann"\n"Bob"\n"Ward"\n')
    (tmp_path / 'ward.blt.json').write_text('[1, 2', encoding='utf-8')
    ballot_file = load_ballot_file(str(path))
    assert ballot_file.metadata == {}
    assert ballot_file.election.roster[0].party is None
