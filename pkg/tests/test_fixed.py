import pytest

from stvaudit.core.fixed import SCALE, FixedVote, truncate_div


def test_parse_and_str():
    assert str(FixedVote.parse('163.375')) == '163.37500'
    assert FixedVote.parse('233.375').units == 23337500
    assert str(FixedVote.from_int(168)) == '168.00000'


def test_parse_rejects_six_places():
    with pytest.raises(ValueError):
        FixedVote.parse('1.000001')


def test_truncation_never_rounds_up():
    # 41 * 30 / 186 = 6.6129032...
    assert FixedVote.from_int(41).scale(30, 186) == FixedVote.parse('6.61290')
    assert FixedVote.parse('2') / FixedVote.parse('3') == FixedVote.parse('0.66666')


def test_truncate_div_toward_zero():
    assert truncate_div(7, 2) == 3
    assert truncate_div(-7, 2) == -3
    with pytest.raises(ZeroDivisionError):
        truncate_div(1, 0)


def test_display_rounds_half_up():
    assert FixedVote.parse('174.28570').display(2) == '174.29'
    assert FixedVote.parse('151.58415').display(2) == '151.58'
    assert FixedVote.parse('162.5').display(3) == '162.500'
    assert FixedVote.parse('0.005').display(2) == '0.01'


def test_ordering_and_truthiness():
    assert FixedVote(1) < FixedVote(2)
    assert FixedVote(SCALE) >= FixedVote.from_int(1)
    assert not FixedVote.zero()
    assert FixedVote.from_int(1).is_integral()
    assert not FixedVote.parse('1.5').is_integral()
