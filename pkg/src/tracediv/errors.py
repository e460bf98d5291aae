"""Exception hierarchy shared by all tracediv modules."""


class TraceDivError(Exception):
    """Base class for every error raised by tracediv."""


class NonPrime(TraceDivError, ValueError):
    pass


class ReduciblePoly(TraceDivError, ValueError):
    pass


class NonPrimitiveRoot(TraceDivError, ValueError):
    pass


class TableLimitExceeded(TraceDivError, ValueError):
    pass


class DivisionByZero(TraceDivError, ZeroDivisionError):
    pass


class PrecisionMismatch(TraceDivError, ValueError):
    pass


class InsufficientPrecision(TraceDivError, ValueError):
    pass


class NonConvergence(TraceDivError, RuntimeError):
    pass


class NonUnitDivisor(TraceDivError, ValueError):
    pass


class DimensionMismatch(TraceDivError, ValueError):
    pass


class EnumerationLimitExceeded(TraceDivError, RuntimeError):
    pass


class Infeasible(TraceDivError, ValueError):
    pass


class NonCoprimeGroupOrder(TraceDivError, ValueError):
    pass


class DegreeZero(TraceDivError, ValueError):
    pass


class NotFound(TraceDivError, LookupError):
    """A bounded search ended without a witness; this is not a refutation."""

    def __init__(self, message, budget=None, best=None):
        super().__init__(message)
        self.budget = budget
        self.best = best


class VerificationFailed(TraceDivError, AssertionError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ConfigError(TraceDivError, ValueError):
    """Malformed input file; carries a location when one is known."""

    def __init__(self, message, line=None, column=None, path=None):
        loc = ""
        if path is not None:
            loc += str(path)
        if line is not None:
            loc += f":{line}" + (f":{column}" if column is not None else "")
        super().__init__(f"{loc}: {message}" if loc else message)
        self.line = line
        self.column = column
        self.path = path
