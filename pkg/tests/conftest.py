import os

import pytest

from stvaudit.core.model import Election, make_profile

FIXTURES = os.path.join(os.path.dirname(__file__), 'fixtures')

A, B, C, D = 1, 2, 3, 4

EXAMPLE_BALLOTS = [
    (19, [A, B]),
    (41, [A, B, C, D]),
    (60, [A, C, D]),
    (15, [A, D]),
    (73, [B, C, A]),
    (51, [B, A, D, C]),
    (19, [B, D, C, A]),
    (57, [C, A]),
    (12, [C, B, A, D]),
    (40, [C, D, B, A]),
    (8, [D, A, C]),
    (47, [D, C, B]),
    (59, [D, B]),
]

BARRETT, COATES, LEITCH = 1, 2, 3

PERTH_BALLOTS = [
    (770, [BARRETT]),
    (619, [BARRETT, COATES, LEITCH]),
    (344, [BARRETT, LEITCH, COATES]),
    (846, [COATES]),
    (867, [COATES, BARRETT, LEITCH]),
    (49, [COATES, LEITCH, BARRETT]),
    (1167, [LEITCH]),
    (620, [LEITCH, BARRETT, COATES]),
    (96, [LEITCH, COATES, BARRETT]),
]


def fixture_path(name: str) -> str:
    return os.path.join(FIXTURES, name)


def example_election(seats: int = 2) -> Election:
    profile = make_profile(['A', 'B', 'C', 'D'], EXAMPLE_BALLOTS)
    return Election(profile, seats, 'Worked example')


def perth_election() -> Election:
    profile = make_profile(['Barrett', 'Coates', 'Leitch'], PERTH_BALLOTS, ['LD', 'Con', 'SNP'])
    return Election(profile, 1, 'Perth and Kinross reduced profile')


@pytest.fixture
def example2() -> Election:
    return example_election(2)


@pytest.fixture
def example1() -> Election:
    return example_election(1)


@pytest.fixture
def perth() -> Election:
    return perth_election()


@pytest.fixture(autouse=True)
def isolated_paths(tmp_path, monkeypatch):
    """Keep log files and the run log out of the working tree."""
    from stvaudit import config
    monkeypatch.setattr(config, 'LOGS_DIR', str(tmp_path / 'logs'))
    monkeypatch.setattr(config, 'DB_PATH', str(tmp_path / 'data' / 'stvaudit.db'))
    yield
    from stvaudit.core import database
    database.close()
