"""Exception taxonomy shared by the whole package.

Every error carries a stable ``kind`` string so the service layer and the
CLI can map failures to structured responses / exit codes without string
matching on messages.
"""


class RecipError(Exception):
    kind = "RecipError"


class ParseError(RecipError):
    kind = "ParseError"


class PerfectSquare(ParseError):
    kind = "PerfectSquare"


class ZeroDenominator(ParseError):
    kind = "ZeroDenominator"


class RationalValue(ParseError):
    kind = "RationalValue"


class InsufficientDigits(RecipError):
    """A CF-digit prefix is too short to answer the query rigorously."""

    kind = "InsufficientDigits"


class UnresolvedComparison(RecipError):
    """A comparison could not be certified within the precision cap."""

    kind = "UnresolvedComparison"


class OutOfRange(RecipError):
    kind = "OutOfRange"


class DomainError(RecipError):
    kind = "DomainError"


class ParameterMismatch(RecipError):
    kind = "ParameterMismatch"
