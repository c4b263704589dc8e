import pickle

import pytest

from stvaudit.core import database
from stvaudit.core.errors import BltParseError, CertificateRejected, RejectionReason, TieError
from stvaudit.core.migrations import MIGRATIONS, run_migrations
from stvaudit.corpus.runner import EXIT_INPUT, EXIT_OK, AnalysisOptions, run_corpus

from tests.conftest import fixture_path

EXAMPLE = fixture_path('example_501.blt')
PERTH = fixture_path('perth_kinross_reduced.blt')


@pytest.mark.parametrize('error', [
    TieError({2, 3}, 4, 'exclusion'),
    BltParseError(7, 'expected integers'),
    CertificateRejected(RejectionReason.HASH_MISMATCH, 'ballot file differs'),
])
def test_errors_survive_pickling(error):
    copy = pickle.loads(pickle.dumps(error))
    assert type(copy) is type(error)
    assert str(copy) == str(error)
    assert copy.__dict__ == error.__dict__


def test_process_pool_matches_sequential_run(tmp_path):
    missing = str(tmp_path / 'missing.blt')
    options = AnalysisOptions(kinds=('committee', 'upward'))
    pooled = run_corpus([EXAMPLE, PERTH, missing], options, workers=2)
    sequential = run_corpus([EXAMPLE, PERTH, missing], options, workers=1)
    assert [o.path for o in pooled] == sorted([EXAMPLE, PERTH, missing])
    assert [o.exit_code for o in pooled] == [o.exit_code for o in sequential]
    assert EXIT_INPUT in {o.exit_code for o in pooled}
    for a, b in zip(pooled, sequential):
        assert a.record == b.record
        assert a.certificates == b.certificates
        if a.exit_code == EXIT_OK:
            assert a.ballot_file.content_hash == b.ballot_file.content_hash


def test_migrations_are_idempotent():
    run_migrations()
    run_migrations()
    row = database.fetchone("SELECT MAX(version) AS v, COUNT(*) AS n FROM schema_version")
    assert (row['v'], row['n']) == (len(MIGRATIONS), len(MIGRATIONS))
    assert database.fetchone("SELECT id FROM runs") is None
