import pytest

from stvaudit.core.errors import ProfileError
from stvaudit.core.model import (
    BallotType,
    Election,
    canonicalize,
    first_place_tallies,
    make_profile,
)

from tests.conftest import A, B, C, D, EXAMPLE_BALLOTS


def test_example_profile_totals(example2):
    assert example2.profile.total_voters() == 501
    assert first_place_tallies(example2.profile) == {A: 135, B: 143, C: 109, D: 114}


def test_canonicalize_merges_and_sorts():
    profile = make_profile(['A', 'B'], [(2, [2, 1]), (3, [1]), (1, [2, 1]), (0, [1, 2])])
    assert [(b.ranking, b.count) for b in profile.ballots] == [((1,), 3), ((2, 1), 3)]
    assert canonicalize(profile) == profile


@pytest.mark.parametrize('ranking', [(), (1, 1)])
def test_bad_rankings(ranking):
    with pytest.raises(ProfileError):
        BallotType(ranking, 1)


def test_unknown_candidate():
    with pytest.raises(ProfileError):
        make_profile(['A', 'B'], [(1, [1, 3])])


def test_seat_count_validation(example2):
    with pytest.raises(ProfileError):
        Election(example2.profile, 0)
    with pytest.raises(ProfileError):
        Election(example2.profile, 5)
    assert Election(example2.profile, 4).is_degenerate()


def test_withdrawn_candidates_reduce_active_count(example2):
    election = Election(example2.profile, 2, withdrawn=frozenset({D}))
    assert election.active_candidates() == (A, B, C)
    with pytest.raises(ProfileError):
        Election(example2.profile, 4, withdrawn=frozenset({D}))


def test_no_voters():
    with pytest.raises(ProfileError):
        make_profile(['A'], [])


def test_weak_order_preference():
    ballot = BallotType((B, C), 1)
    assert ballot.prefers(B, C)
    assert ballot.prefers(C, A)
    assert not ballot.prefers(A, D)
    assert not ballot.prefers(D, A)


def test_with_counts(example2):
    changed = example2.profile.with_counts({(D, A, C): -6, (A, D, C): 6})
    assert changed.count_of((D, A, C)) == 2
    assert changed.count_of((A, D, C)) == 6
    assert changed.total_voters() == 501
    with pytest.raises(ProfileError):
        example2.profile.with_counts({(D, A, C): -9})


def test_example_ballot_count():
    assert len(EXAMPLE_BALLOTS) == 13
