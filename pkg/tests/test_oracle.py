import logging

import numpy as np
import pytest
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from stvaudit.analysis.closeness import three_candidate_close, two_candidate_close
from stvaudit.core.errors import OracleCapExceeded, TieError
from stvaudit.core.model import Election, make_profile
from stvaudit.engine.tabulate import TiePolicy, tabulate, winner_sets_for_all_seat_counts
from stvaudit.search import downward, noshow, upward
from stvaudit.search.certificate import AnomalyKind
from stvaudit.search.committee import check_committee_size
from stvaudit.search.downward import search_downward
from stvaudit.search.noshow import search_no_show
from stvaudit.search.oracle import OracleCaps, exhaustive_oracle
from stvaudit.search.upward import search_upward
from stvaudit.search.verify import verify_certificate

logger = logging.getLogger(__name__)

_HEALTH = [HealthCheck.filter_too_much, HealthCheck.too_slow, HealthCheck.function_scoped_fixture]

SMALL = settings(max_examples=200, deadline=None, derandomize=True, suppress_health_check=_HEALTH)
CORPUS_SCALE = settings(max_examples=1000, deadline=None, derandomize=True, suppress_health_check=_HEALTH)
ORACLE_SCALE = settings(max_examples=500, deadline=None, derandomize=True, suppress_health_check=_HEALTH)

SEARCHED = [
    (search_upward, [AnomalyKind.UPWARD]),
    (search_downward, [AnomalyKind.DOWNWARD_STRONG, AnomalyKind.DOWNWARD_WEAK]),
    (search_no_show, [AnomalyKind.NO_SHOW]),
]


def build(n: int, rankings, counts, seats: int) -> Election:
    names = [chr(ord('A') + i) for i in range(n)]
    return Election(make_profile(names, [(count, list(r)) for count, r in zip(counts, rankings)]), seats)


@st.composite
def elections(draw, min_candidates=2, max_candidates=4, max_types=6, max_count=6, min_length=1):
    n = draw(st.integers(min_value=min_candidates, max_value=max_candidates))
    shortest = max(1, min(min_length, n))
    rankings = st.permutations(list(range(1, n + 1))).flatmap(
        lambda order: st.integers(min_value=shortest, max_value=n).map(lambda k: tuple(order[:k])))
    types = draw(st.lists(rankings, min_size=1, max_size=max_types, unique=True))
    counts = draw(st.lists(st.integers(min_value=1, max_value=max_count),
                           min_size=len(types), max_size=len(types)))
    seats = draw(st.integers(min_value=1, max_value=n - 1))
    return build(n, types, counts, seats)


def small_elections():
    return elections()


def corpus_scale_elections():
    """Up to 8 candidates and 12 ballot types of at most 16 voters each."""
    return elections(max_candidates=8, max_types=12, max_count=16)


@st.composite
def oracle_scale_elections(draw):
    """3 or 4 candidates, 3 to 6 mostly complete rankings, at most 40 voters."""
    election = draw(elections(min_candidates=3, max_candidates=4, max_types=6, max_count=8, min_length=3)
                    .filter(lambda e: len(e.profile.ballots) >= 3))
    assume(OracleCaps().admits(election))
    return election


def counted(election):
    try:
        return tabulate(election)
    except TieError:
        assume(False)


def relations(certificates):
    return {(c.kind, c.focal, c.displaced) for c in certificates}


def oracle_relations(election, kinds):
    expected = set()
    for kind in kinds:
        expected |= relations(exhaustive_oracle(election, kind))
    return expected


@CORPUS_SCALE
@given(corpus_scale_elections())
def test_count_conserves_votes(election):
    record = tabulate(election, TiePolicy.INDEX)
    assert record.conservation_holds()
    assert len(record.winners) == election.seats
    assert len(record.rounds) <= len(election.active_candidates()) + election.seats


@ORACLE_SCALE
@given(oracle_scale_elections())
def test_searchers_contain_oracle(election):
    counted(election)
    for search, kinds in SEARCHED:
        result = search(election)
        for cert in result.certificates:
            verify_certificate(cert)
        assert oracle_relations(election, kinds) <= relations(result.certificates)


def _skip_sweep(ctx):
    pass


def random_oracle_elections(count: int, seed: int = 20170504):
    rng = np.random.default_rng(seed)
    made = 0
    while made < count:
        n = int(rng.integers(3, 5))
        width = int(rng.integers(3, 7))
        rankings = []
        for _ in range(width):
            order = [int(c) + 1 for c in rng.permutation(n)]
            rankings.append(tuple(order[:int(rng.integers(n - 1, n + 1))]))
        counts = [int(c) for c in rng.integers(1, 9, size=width)]
        if sum(counts) > OracleCaps().max_voters:
            continue
        made += 1
        yield build(n, rankings, counts, int(rng.integers(1, n)))


def test_heuristic_passes_find_most_oracle_anomalies(monkeypatch):
    for module in (upward, downward, noshow):
        monkeypatch.setattr(module, 'sweep_pass', _skip_sweep)
    expected, found = 0, 0
    for election in random_oracle_elections(300):
        try:
            tabulate(election)
        except TieError:
            continue
        for search, kinds in SEARCHED:
            wanted = oracle_relations(election, kinds)
            expected += len(wanted)
            found += len(wanted & relations(search(election).certificates))
    logger.info("Heuristic passes found %d of %d oracle anomalies", found, expected)
    assert expected > 0
    assert found / expected >= 0.5, f"heuristics found only {found} of {expected}"


def test_upward_search_finds_focal_found_only_by_sweep():
    election = build(4, [(1, 2, 3, 4), (1, 3), (1, 4, 2, 3), (2, 4, 1, 3), (3, 2, 1), (4, 3, 1, 2)],
                     [6, 2, 6, 6, 8, 8], 2)
    assert OracleCaps().admits(election)
    assert 4 in {c.focal for c in exhaustive_oracle(election, AnomalyKind.UPWARD)}
    result = search_upward(election)
    assert 4 in {c.focal for c in result.certificates}
    for cert in result.certificates:
        verify_certificate(cert)


@SMALL
@given(small_elections())
def test_committee_check_is_complete(election):
    try:
        sets = winner_sets_for_all_seat_counts(election)
    except TieError:
        assume(False)
    certificates = check_committee_size(election)
    bad = {s for s in range(1, election.seats) if not sets[s] <= sets[election.seats]}
    assert {c.reduced_seats for c in certificates} == bad


@SMALL
@given(small_elections(), st.integers(min_value=50, max_value=99))
def test_closeness_is_monotone_in_p(election, p):
    record = counted(election)
    if three_candidate_close(election, record, p + 1):
        assert three_candidate_close(election, record, p)
    if two_candidate_close(election, record, p + 1):
        assert two_candidate_close(election, record, p)


def test_oracle_caps(example2):
    assert not OracleCaps().admits(example2)
    with pytest.raises(OracleCapExceeded):
        exhaustive_oracle(example2, AnomalyKind.UPWARD)


def test_oracle_on_tiny_election():
    profile = make_profile(['A', 'B', 'C'], [(4, [1, 2]), (3, [2, 3]), (2, [3, 1]), (2, [3])])
    election = Election(profile, 1)
    for kind in (AnomalyKind.UPWARD, AnomalyKind.NO_SHOW):
        for cert in exhaustive_oracle(election, kind):
            assert len({m.source for m in cert.modifications}) == 1
            verify_certificate(cert)
