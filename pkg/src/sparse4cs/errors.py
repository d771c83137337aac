"""Exception hierarchy shared by every module."""


class DesignError(Exception):
    """Base class for all errors raised by sparse4cs."""


class NotPrime(DesignError, ValueError):
    pass


class LimitExceeded(DesignError, ValueError):
    pass


class ZeroArgument(DesignError, ValueError):
    pass


class BadOrder(DesignError, ValueError):
    pass


class NoWitness(DesignError, RuntimeError):
    pass


class DuplicateVertex(DesignError, ValueError):
    pass


class DuplicatePoint(DuplicateVertex):
    pass


class NotAdmissible(DesignError, ValueError):
    pass


class GddUnavailable(DesignError, LookupError):
    pass


class Unsupported(DesignError, ValueError):
    pass


class BudgetExhausted(DesignError, RuntimeError):
    pass


class Infeasible(DesignError, ValueError):
    pass


class ParseError(DesignError, ValueError):
    pass


class ValidationFailed(DesignError, ValueError):
    pass


class IngredientMismatch(DesignError, ValueError):
    pass


class WrongType(DesignError, ValueError):
    pass


class NotEdgeDisjoint(DesignError, ValueError):
    pass


class PreconditionViolated(DesignError, ValueError):
    pass


class BadCPrime(DesignError, ValueError):
    pass
