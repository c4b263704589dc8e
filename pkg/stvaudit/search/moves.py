"""
Ballot rewrites allowed by the anomaly definitions.

A shift moves one candidate and leaves the relative order of every other
candidate on the ballot unchanged.
"""

from stvaudit.core.model import BallotType
from stvaudit.search.certificate import BallotModification, ModificationKind


def move_to(ranking: tuple[int, ...], candidate: int, position: int) -> tuple[int, ...]:
    """Place candidate at position, inserting it when it is not ranked."""
    rest = [c for c in ranking if c != candidate]
    rest.insert(position, candidate)
    return tuple(rest)


def _same_others(source: tuple[int, ...], result: tuple[int, ...], candidate: int) -> bool:
    return [c for c in source if c != candidate] == [c for c in result if c != candidate]


def is_shift_up(source: tuple[int, ...], result: tuple[int, ...], candidate: int) -> bool:
    if candidate not in result or not _same_others(source, result, candidate):
        return False
    if candidate not in source:
        return True
    return result.index(candidate) < source.index(candidate)


def is_shift_down(source: tuple[int, ...], result: tuple[int, ...], candidate: int) -> bool:
    if candidate not in source or candidate not in result:
        return False
    if not _same_others(source, result, candidate):
        return False
    return result.index(candidate) > source.index(candidate)


def is_bullet_rewrite(source: tuple[int, ...], result: tuple[int, ...], candidate: int) -> bool:
    if source != (candidate,):
        return False
    if len(result) == 1:
        return result[0] != candidate
    return len(result) == 2 and result[1] == candidate and result[0] != candidate


def shift_up_results(ranking: tuple[int, ...], candidate: int) -> list[tuple[int, ...]]:
    """Every ranking with candidate strictly higher, top position first."""
    if candidate in ranking:
        limit = ranking.index(candidate)
    else:
        limit = len(ranking) + 1
    return [move_to(ranking, candidate, p) for p in range(limit)]


def shift_down_results(ranking: tuple[int, ...], candidate: int) -> list[tuple[int, ...]]:
    """Every ranking with candidate strictly lower but still ranked, nearest first."""
    if candidate not in ranking:
        return []
    start = ranking.index(candidate) + 1
    return [move_to(ranking, candidate, p) for p in range(start, len(ranking))]


def bullet_rewrites(candidate: int, others: list[int]) -> list[tuple[int, ...]]:
    results = []
    for other in others:
        if other != candidate:
            results.append((other,))
            results.append((other, candidate))
    return results


def is_legal(mod: BallotModification, candidate: int) -> bool:
    """Check a modification against the definition of its kind for focal candidate."""
    if mod.count < 1:
        return False
    if mod.kind is ModificationKind.REMOVE:
        return mod.result is None
    if mod.result is None or len(set(mod.result)) != len(mod.result):
        return False
    if mod.kind is ModificationKind.SHIFT_UP:
        return is_shift_up(mod.source, mod.result, candidate)
    if mod.kind is ModificationKind.SHIFT_DOWN:
        return is_shift_down(mod.source, mod.result, candidate)
    return is_bullet_rewrite(mod.source, mod.result, candidate)


def reduced_head(ranking: tuple[int, ...], deleted: set[int]) -> int | None:
    """First candidate on the ranking once deleted candidates are struck out."""
    for c in ranking:
        if c not in deleted:
            return c
    return None


def reduced_rank(ranking: tuple[int, ...], candidate: int, deleted: set[int]) -> int | None:
    """0-based position of candidate among the undeleted entries."""
    position = 0
    for c in ranking:
        if c in deleted:
            continue
        if c == candidate:
            return position
        position += 1
    return None


def reduced_tallies(ballots: tuple[BallotType, ...], deleted: set[int],
                    candidates: list[int]) -> dict[int, int]:
    tally = {c: 0 for c in candidates}
    for ballot in ballots:
        head = reduced_head(ballot.ranking, deleted)
        if head in tally:
            tally[head] += ballot.count
    return tally


def removable(ballot: BallotType, x: int, y: int, seats: int) -> bool:
    """A ballot a no-show certificate may remove: X above Y, Y outside the top `seats`."""
    if not ballot.prefers(x, y):
        return False
    position = ballot.position(y)
    return position is None or position >= seats
