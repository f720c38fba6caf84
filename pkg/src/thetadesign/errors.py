"""Exception hierarchy shared by all thetadesign modules."""


class ThetaDesignError(Exception):
    """Base class for every error raised by this package."""


class InvalidTheta(ThetaDesignError, ValueError):
    pass


class MalformedBlock(ThetaDesignError, ValueError):
    pass


class UnsupportedEdgeCount(ThetaDesignError, ValueError):
    pass


class NotDivisible(ThetaDesignError, ValueError):
    pass


class UnknownPoint(ThetaDesignError, KeyError):
    pass


class CatalogueSyntaxError(ThetaDesignError, ValueError):
    """Catalogue text could not be parsed; carries a line/column position."""

    def __init__(self, message: str, line: int = 0, column: int = 0, source: str = "<string>"):
        self.line = line
        self.column = column
        self.source = source
        super().__init__(f"{source}:{line}:{column}: {message}")


class ArityMismatch(CatalogueSyntaxError):
    pass


class PointOutOfRange(CatalogueSyntaxError):
    pass


class NotFound(ThetaDesignError, LookupError):
    pass


class Unprovidable(ThetaDesignError):
    """A GDD family lies outside the supported bounds or its search failed."""


class TooManyNewPoints(ThetaDesignError, ValueError):
    pass


class NotInSpectrum(ThetaDesignError, ValueError):
    pass


class PlanningFailure(ThetaDesignError):
    pass


class IngredientMissing(ThetaDesignError):
    pass


class VerificationFailure(ThetaDesignError):
    """A constructed design failed its own self-check. Always a bug."""


class BudgetExhausted(ThetaDesignError):
    def __init__(self, message: str, best_cost: int | None = None):
        self.best_cost = best_cost
        super().__init__(message)


class InfeasibleArity(ThetaDesignError, ValueError):
    pass
