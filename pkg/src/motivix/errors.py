"""Exception taxonomy shared across the package.

Every error raised on purpose derives from MotivixError so the CLI can map
failures to stable exit codes.
"""


class MotivixError(Exception):
    """Base class for all deliberate failures."""

    exit_code = 70


class InvalidWord(MotivixError):
    """Malformed word or index: bad letters, endpoints, signs, or text."""

    exit_code = 30


class InvalidR(MotivixError):
    """Derivation degree out of range: must be odd and 1 <= r <= weight-1."""

    exit_code = 31


class Unsupported(MotivixError):
    """A closed-form formula was requested outside its proven domain."""

    exit_code = 32


class Divergent(MotivixError):
    """Numeric evaluation of a divergent word or index was requested."""

    exit_code = 33


class PrecisionCap(MotivixError):
    """Requested digits exceed the configured precision cap."""

    exit_code = 34


class PinFailure(MotivixError):
    """Rational reconstruction of a pinned constant did not converge."""

    exit_code = 35


class GradeError(MotivixError):
    """Weight-homogeneity violated (mixed weights in a sum or tensor)."""

    exit_code = 36


class Overweight(MotivixError):
    """Object weight exceeds the configured maximum weight."""

    exit_code = 37


class TableError(MotivixError):
    """Period table failed schema or value validation."""

    exit_code = 38


class CriterionMismatch(MotivixError):
    """The two independent descent criteria disagreed; internal invariant broken."""

    exit_code = 40
