"""Exception types shared across the package."""


class InputError(ValueError):
    """Raised when arguments fall outside an operation's domain."""


class ContractError(RuntimeError):
    """Raised when a caller violates a documented precondition."""


class ConsistencyError(RuntimeError):
    """Raised when an internal cross-check fails; never silently corrected."""
