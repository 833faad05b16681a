"""Exception types shared across the package."""


class SubshiftError(Exception):
    """Base class for all package errors."""


class InputError(SubshiftError):
    """Malformed or out-of-contract input (bad symbol, bad JSON, size mismatch)."""


class ContractViolationError(SubshiftError):
    """A precondition that the caller must guarantee does not hold."""


class BudgetExceededError(SubshiftError):
    """A search or enumeration ran out of its node/time budget.

    ``partial`` carries whatever count was accumulated before the budget
    ran out, so callers can report progress.
    """

    def __init__(self, message, partial=0):
        super().__init__(message)
        self.partial = partial


class SimulationError(SubshiftError):
    """A machine simulation hit a rejected or unresolved branch."""


class VerificationError(SubshiftError):
    """A verify-style command found the property it checks to be false."""
