import pytest

from stvaudit.core.errors import TieError
from stvaudit.core.fixed import FixedVote
from stvaudit.core.model import BallotType, Election, make_profile
from stvaudit.engine.tabulate import (
    EventKind,
    TiePolicy,
    WeightedBallotState,
    compute_quota,
    tabulate,
    winner_sets_for_all_seat_counts,
)

from tests.conftest import A, B, BARRETT, C, COATES, D, LEITCH


def totals(record, round_number):
    return {c: str(v) for c, v in record.rounds[round_number - 1].totals.items()}


def test_quota():
    assert compute_quota(501, 1).value == 251
    assert compute_quota(501, 2).value == 168
    assert compute_quota(466, 2).value == 156


def test_single_seat_example(example1):
    record = tabulate(example1)
    assert record.quota.value == 251
    assert totals(record, 1) == {A: '135.00000', B: '143.00000', C: '109.00000', D: '114.00000'}
    assert totals(record, 2) == {A: '192.00000', B: '155.00000', D: '154.00000'}
    assert totals(record, 3) == {A: '200.00000', B: '301.00000'}
    assert record.eliminated_order() == (C, D)
    assert record.winners == (B,)


def test_two_seat_example(example2):
    record = tabulate(example2)
    assert record.quota.value == 168
    assert record.rounds[0].event.kind is EventKind.ELIMINATED
    assert record.rounds[0].event.candidates == (C,)

    second = record.rounds[1]
    assert totals(record, 2)[A] == '192.00000'
    assert second.event.kind is EventKind.ELECTED and second.event.candidates == (A,)
    moved = {t.target: str(t.value) for t in second.transfers}
    assert moved == {B: '7.50000', D: '9.37500', None: '7.12500'}

    assert totals(record, 3) == {B: '162.50000', D: '163.37500'}
    assert record.rounds[2].event.candidates == (B,)
    assert totals(record, 4) == {D: '233.37500'}
    assert record.winners == (A, D)
    assert record.elected_round == {A: 2, D: 4}


def test_conservation_on_examples(example1, example2, perth):
    for election in (example1, example2, perth):
        assert tabulate(election).conservation_holds()


def test_perth_kinross(perth):
    record = tabulate(perth)
    assert [r.totals for r in record.rounds][0] == {
        BARRETT: FixedVote.from_int(1733), COATES: FixedVote.from_int(1762), LEITCH: FixedVote.from_int(1883)}
    assert record.rounds[1].totals == {COATES: FixedVote.from_int(2381), LEITCH: FixedVote.from_int(2227)}
    assert record.winners == (COATES,)


def test_perth_kinross_upward_change(perth):
    changed = perth.with_profile(perth.profile.with_counts({(LEITCH,): -151, (COATES, LEITCH): 151}))
    assert tabulate(changed).winners == (BARRETT,)


def test_perth_kinross_no_show(perth):
    changed = perth.with_profile(perth.profile.with_counts({(LEITCH, BARRETT, COATES): -151}))
    assert tabulate(changed).winners == (BARRETT,)


def test_upward_example_round_values(example2):
    changed = example2.with_profile(example2.profile.with_counts({(D, A, C): -6, (A, D, C): 6}))
    record = tabulate(changed)
    assert record.winner_set == {B, C}
    assert totals(record, 3) == {A: '151.58415', C: '171.48513'}


def test_downward_example_round_values(example2):
    changed = example2.with_profile(example2.profile.with_counts({(B, C, A): -6, (C, B, A): 6}))
    record = tabulate(changed)
    assert record.winner_set == {B, C}
    third = record.rounds[2].totals
    assert (third[A].display(2), third[C].display(2)) == ('150.29', '174.29')


def test_no_show_example(example2):
    changed = example2.with_profile(example2.profile.with_counts({(B, C, A): -35}))
    record = tabulate(changed)
    assert record.quota.value == 156
    assert record.winner_set == {A, C}
    assert record.rounds[2].totals[C].display(2) == '163.29'


def test_all_seat_counts(example2):
    assert winner_sets_for_all_seat_counts(example2) == {1: {B}, 2: {A, D}}


def test_elect_remaining_without_quota():
    profile = make_profile(['A', 'B', 'C', 'D'], [(8, [1]), (7, [2]), (6, [3]), (3, [4])])
    record = tabulate(Election(profile, 2))
    assert record.eliminated_order() == (4, 3)
    assert record.winners == (1, 2)
    assert record.elected_without_quota == {1, 2}
    last = record.rounds[-1]
    assert last.event.kind is EventKind.ELECTED and set(last.event.without_quota) == {1, 2}


def test_first_round_termination():
    profile = make_profile(['A', 'B', 'C'], [(10, [1]), (10, [2]), (1, [3])])
    record = tabulate(Election(profile, 2))
    assert record.first_round_terminated()
    assert record.winner_set == {1, 2}


def test_unbreakable_tie():
    profile = make_profile(['A', 'B', 'C'], [(4, [1]), (4, [2]), (5, [3])])
    election = Election(profile, 1)
    with pytest.raises(TieError) as info:
        tabulate(election)
    assert info.value.candidates == {1, 2}
    record = tabulate(election, TiePolicy.INDEX)
    assert record.tie_broken_by_index
    assert record.eliminated_order()[0] == 1


def test_backward_tie_break():
    # B and C tie in round 2; C was lower in round 1 so C goes out.
    profile = make_profile(['A', 'B', 'C', 'D'], [(10, [1]), (6, [2]), (5, [3]), (1, [4, 3]), (2, [1, 2])])
    record = tabulate(Election(profile, 1))
    assert record.rounds[1].totals[2] == record.rounds[1].totals[3]
    assert record.eliminated_order()[:2] == (4, 3)
    assert not record.tie_broken_by_index


def test_withdrawn_candidate_is_skipped(example2):
    election = Election(example2.profile, 2, withdrawn=frozenset({C}))
    record = tabulate(election)
    assert C not in record.rounds[0].totals
    assert record.rounds[0].totals[A] == FixedVote.from_int(135 + 57)


def test_parcel_state_advances_past_excluded():
    parcel = WeightedBallotState(BallotType((A, B, C), 4), FixedVote.from_int(3).units, None)
    assert parcel.holder is None
    assert parcel.advance({B, C}) == B
    assert parcel.holder == B
    assert parcel.advance({A}) is None
    assert parcel.weight() == FixedVote.parse('0.75')


def test_degenerate_count_is_logged(example2, caplog):
    caplog.set_level('INFO', logger='stvaudit.engine.tabulate')
    record = tabulate(Election(example2.profile, 4))
    assert record.winner_set == {A, B, C, D}
    assert 'Degenerate count' in caplog.text
    caplog.clear()
    tabulate(example2)
    assert 'Degenerate count' not in caplog.text
