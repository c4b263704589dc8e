"""
Exception hierarchy shared by all modules.
"""

from enum import Enum


class StvAuditError(Exception):
    """Base class for every error raised by stvaudit."""


class ProfileError(StvAuditError):
    """Malformed candidate roster, ballot, profile or election."""


class BltParseError(ProfileError):
    """A ballot file could not be parsed; carries the offending line number."""

    def __init__(self, line_number: int, message: str):
        self.line_number = line_number
        self.message = message
        super().__init__(f"line {line_number}: {message}")

    def __reduce__(self):
        return type(self), (self.line_number, self.message)


class TieError(StvAuditError):
    """Tie that the backward tie-break could not resolve under policy 'fail'."""

    def __init__(self, candidates, round_number: int, context: str):
        self.candidates = frozenset(candidates)
        self.round_number = round_number
        self.context = context
        ids = ", ".join(str(c) for c in sorted(self.candidates))
        super().__init__(f"unresolved {context} tie in round {round_number} between candidates {ids}")

    def __reduce__(self):
        return type(self), (self.candidates, self.round_number, self.context)


class RejectionReason(str, Enum):
    COUNT_OVERFLOW = 'count_overflow'
    UNKNOWN_BALLOT = 'unknown_ballot'
    MALFORMED_SHIFT = 'malformed_shift'
    RELATION_NOT_SATISFIED = 'relation_not_satisfied'
    WINNERS_MISMATCH = 'winners_mismatch'
    HASH_MISMATCH = 'hash_mismatch'


class CertificateRejected(StvAuditError):
    """A certificate failed replay."""

    def __init__(self, reason: RejectionReason, detail: str = ''):
        self.reason = reason
        self.detail = detail
        text = reason.value if not detail else f"{reason.value}: {detail}"
        super().__init__(text)

    def __reduce__(self):
        return type(self), (self.reason, self.detail)


class OracleCapExceeded(StvAuditError):
    """Election too large for exhaustive enumeration."""


class CertificateFormatError(StvAuditError):
    """A certificate document could not be read."""
