"""
Exception hierarchy. Each class carries the exit code the CLI reports for it.
"""


class AbsArithError(Exception):
    """Base class for absarith failures"""

    exit_code = 1


class DomainError(AbsArithError, ValueError):
    """An input violates an operation's precondition"""

    exit_code = 1


class SizeError(DomainError):
    """An input lies outside the supported magnitude"""


class NotIntegralError(DomainError):
    """A value required to be integral is not"""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class TableError(DomainError):
    """Character table data is inconsistent"""


class BudgetExceededError(AbsArithError):
    """A configured effort budget ran out before the result was certified"""

    exit_code = 3


class IncompleteFactorizationError(BudgetExceededError):
    """Factorization stopped with a composite cofactor left over"""

    def __init__(self, message, factors=(), cofactor=1):
        super().__init__(message)
        self.factors = tuple(factors)
        self.cofactor = cofactor


class UsageError(AbsArithError):
    """Malformed command-line input"""

    exit_code = 2
