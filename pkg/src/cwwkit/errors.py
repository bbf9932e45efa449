"""Exception types shared across the toolkit."""


class CwwError(Exception):
    """Base class for domain errors raised by cwwkit computations."""


class EmptyInput(CwwError):
    pass


class LengthMismatch(CwwError):
    pass


class IndexOutOfTermSet(CwwError):
    pass


class NegativeOperand(CwwError):
    pass


class BetaOutOfRange(CwwError):
    pass


class ZeroWeightMass(CwwError):
    pass


class DegenerateFou(CwwError):
    pass


class EmptyInterval(CwwError):
    pass


class AllIntervalsEliminated(CwwError):
    """A survey filtering stage removed every remaining data interval."""

    def __init__(self, stage, message=None):
        self.stage = stage
        super().__init__(message or f"all data intervals eliminated at stage: {stage}")


class AllEmbeddedInadmissible(CwwError):
    pass


class EmptyOverlap(CwwError):
    pass


class InsufficientSurvivors(CwwError):
    pass


class ValidationError(Exception):
    """Scenario or config content is structurally invalid.

    Carries the path of the offending field so CLI users can locate it.
    """

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class ParseError(Exception):
    """Input file could not be parsed; carries file position when known."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column})" if column is not None else ")")
        super().__init__(message + where)
