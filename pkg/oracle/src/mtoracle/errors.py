"""Exception types shared across the oracle."""


class OracleError(Exception):
    """Base class; the CLI maps these to exit code 2."""


class DivergentIndex(OracleError):
    """The defining series of the requested value does not converge."""


class BadWord(OracleError):
    """A word string does not follow the start;letters;end encoding."""


class TableError(OracleError):
    """A period-table file is structurally invalid."""


class AccelerationError(OracleError):
    """Tail acceleration failed its internal cross-check."""
