import pytest

from stvaudit.analysis.closeness import (
    ClosenessReport,
    closeness_report,
    three_candidate_close,
    two_candidate_close,
)
from stvaudit.analysis.condorcet import beats, condorcet_committee, pairwise_matrix
from stvaudit.analysis.methods import sntv, sntv_winners
from stvaudit.analysis.series import (
    THREE,
    TWO,
    SeriesEntry,
    closeness_series,
    closeness_summary,
    ratio_text,
)
from stvaudit.core.errors import TieError
from stvaudit.core.model import make_profile
from stvaudit.engine.tabulate import TiePolicy, tabulate
from stvaudit.search.certificate import AnomalyKind

from tests.conftest import A, B, C, D


def test_two_candidate_close(example2):
    record = tabulate(example2)
    # B 162.5 against D 163.375 in round 3
    assert two_candidate_close(example2, record, 95)
    assert two_candidate_close(example2, record, 99)
    assert not two_candidate_close(example2, record, 100)


def test_three_candidate_close(example2):
    record = tabulate(example2)
    assert three_candidate_close(example2, record, 50)
    assert three_candidate_close(example2, record, 80)
    assert not three_candidate_close(example2, record, 81)


def test_pairwise_matrix(example2):
    m = pairwise_matrix(example2.profile)
    assert (m[B - 1, A - 1], m[A - 1, B - 1]) == (301, 200)
    assert (m[C - 1, A - 1], m[A - 1, C - 1]) == (248, 194)
    assert (m[A - 1, D - 1], m[D - 1, A - 1]) == (328, 173)
    assert (m[B - 1, C - 1], m[C - 1, B - 1]) == (262, 224)
    assert (m[D - 1, B - 1], m[B - 1, D - 1]) == (229, 215)
    assert (m[C - 1, D - 1], m[D - 1, C - 1]) == (283, 199)
    assert beats(m, D, B)
    assert not beats(m, A, C)


def test_no_condorcet_committee_for_two_seats(example2):
    assert condorcet_committee(example2.profile, 2) is None


def test_unanimous_committee():
    profile = make_profile(['A', 'B', 'C'], [(5, [1, 2, 3])])
    assert condorcet_committee(profile, 1) == {1}
    assert condorcet_committee(profile, 2) == {1, 2}
    assert condorcet_committee(profile, 3) == {1, 2, 3}


def test_cycle_has_no_winner():
    profile = make_profile(['A', 'B', 'C'], [(1, [1, 2, 3]), (1, [2, 3, 1]), (1, [3, 1, 2])])
    assert condorcet_committee(profile, 1) is None


def test_unranked_candidates_tie_below_ranked():
    profile = make_profile(['A', 'B', 'C'], [(3, [1]), (2, [2, 3])])
    m = pairwise_matrix(profile)
    assert m[0, 1] == 3 and m[0, 2] == 3
    assert m[1, 2] == 2 and m[2, 1] == 0


def test_sntv(example2):
    assert sntv_winners(example2.profile, 2) == {A, B}


def test_sntv_boundary_tie():
    profile = make_profile(['A', 'B', 'C'], [(5, [1]), (3, [2]), (3, [3])])
    with pytest.raises(TieError):
        sntv(profile, 2)
    winners, broken = sntv(profile, 2, TiePolicy.INDEX)
    assert winners == {1, 2}
    assert broken


def test_closeness_report(example2):
    report = closeness_report(example2, tabulate(example2))
    assert report.stv_winners == {A, D}
    assert report.sntv_winners == {A, B}
    assert report.condorcet_committee is None
    assert not report.methods_agree
    assert not report.first_round_terminated
    assert report.two_close[95]
    assert not report.three_close[95]


@pytest.mark.parametrize('numerator, denominator, text', [
    (1, 3, '0.3333'),
    (2, 3, '0.6667'),
    (1, 1, '1.0000'),
    (1, 32, '0.0313'),
    (0, 5, '0.0000'),
    (0, 0, ''),
])
def test_ratio_text(numerator, denominator, text):
    assert ratio_text(numerator, denominator) == text


def report(seats=2, close=True, committee=None, first_round=False):
    flags = {p: close for p in range(50, 96)}
    return ClosenessReport(
        election_title='t',
        seats=seats,
        first_round_terminated=first_round,
        three_close=flags,
        two_close={p: False for p in range(50, 96)},
        stv_winners=frozenset({1, 2}),
        condorcet_committee=committee,
        sntv_winners=frozenset({1, 2}),
    )


def test_closeness_series_counts_multiwinner_only():
    entries = [
        SeriesEntry(report(), frozenset({AnomalyKind.UPWARD})),
        SeriesEntry(report(), frozenset({AnomalyKind.COMMITTEE_SIZE})),
        SeriesEntry(report(), frozenset()),
        SeriesEntry(report(seats=1), frozenset({AnomalyKind.NO_SHOW})),
    ]
    rows = closeness_series(entries, THREE)
    assert [r.p for r in rows] == list(range(50, 96))
    assert rows[0].as_row() == [50, 3, 2, '0.6667', 1, '0.3333']
    assert all(r.close_count == 0 for r in closeness_series(entries, TWO))


def test_closeness_series_empty():
    assert closeness_series([]) == []
    assert closeness_series([SeriesEntry(report(seats=1), frozenset())]) == []


def test_closeness_summary():
    entries = [
        SeriesEntry(report(committee=frozenset({1, 2})), frozenset()),
        SeriesEntry(report(first_round=True), frozenset({AnomalyKind.UPWARD})),
    ]
    assert closeness_summary(entries) == [
        ('multiwinner', 2, 1),
        ('not_first_round_terminated', 1, 0),
        ('no_condorcet_committee', 1, 1),
        ('methods_disagree', 1, 1),
    ]
