"""
Fixed-point vote values with exactly five decimal places.

A FixedVote holds an integer count of 10^-5 vote units. Addition and
subtraction are exact; multiplication and division truncate toward zero.
"""

from dataclasses import dataclass
from functools import total_ordering

PLACES = 5
SCALE = 10 ** PLACES


def truncate_div(numerator: int, denominator: int) -> int:
    """Integer division rounded toward zero (operands may be negative)."""
    if denominator == 0:
        raise ZeroDivisionError("division by zero vote total")
    q = abs(numerator) // abs(denominator)
    return q if (numerator >= 0) == (denominator > 0) else -q


@total_ordering
@dataclass(frozen=True, slots=True)
class FixedVote:
    units: int = 0

    @staticmethod
    def from_int(votes: int) -> 'FixedVote':
        return FixedVote(votes * SCALE)

    @staticmethod
    def parse(text: str) -> 'FixedVote':
        """Parse '163.375' style text; more than five decimals is an error."""
        text = text.strip()
        negative = text.startswith('-')
        if negative:
            text = text[1:]
        whole, _, frac = text.partition('.')
        if len(frac) > PLACES or not (whole or frac):
            raise ValueError(f"not a {PLACES}-place fixed value: {text!r}")
        units = int(whole or '0') * SCALE + int((frac or '0').ljust(PLACES, '0'))
        return FixedVote(-units if negative else units)

    @staticmethod
    def zero() -> 'FixedVote':
        return FixedVote(0)

    def __add__(self, other: 'FixedVote') -> 'FixedVote':
        return FixedVote(self.units + other.units)

    def __sub__(self, other: 'FixedVote') -> 'FixedVote':
        return FixedVote(self.units - other.units)

    def __mul__(self, other: 'FixedVote') -> 'FixedVote':
        return FixedVote(truncate_div(self.units * other.units, SCALE))

    def __truediv__(self, other: 'FixedVote') -> 'FixedVote':
        return FixedVote(truncate_div(self.units * SCALE, other.units))

    def scale(self, numerator: int, denominator: int) -> 'FixedVote':
        """self * numerator / denominator, truncated once at the end."""
        return FixedVote(truncate_div(self.units * numerator, denominator))

    def __lt__(self, other: 'FixedVote') -> bool:
        return self.units < other.units

    def __bool__(self) -> bool:
        return self.units != 0

    def display(self, places: int = 2) -> str:
        """Round half-up for display only."""
        if places >= PLACES:
            return str(self)
        step = 10 ** (PLACES - places)
        sign = '-' if self.units < 0 else ''
        rounded = (abs(self.units) + step // 2) // step
        whole, frac = divmod(rounded, 10 ** places)
        return f"{sign}{whole}.{frac:0{places}d}" if places else f"{sign}{whole}"

    def is_integral(self) -> bool:
        return self.units % SCALE == 0

    def __str__(self) -> str:
        sign = '-' if self.units < 0 else ''
        whole, frac = divmod(abs(self.units), SCALE)
        return f"{sign}{whole}.{frac:0{PLACES}d}"

    def __repr__(self) -> str:
        return f"FixedVote({self})"
