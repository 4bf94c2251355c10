"""Exception hierarchy shared by every subsystem."""


class ClimgovError(Exception):
    """Base class for all package errors."""


class ConfigurationError(ClimgovError, ValueError):
    """A scenario or parameter set violates its schema or invariants.

    ``violations`` holds ``(field_path, message)`` pairs when more than one
    problem was found in a single validation pass.
    """

    def __init__(self, message, violations=None):
        super().__init__(message)
        self.violations = list(violations or [])


class ContractError(ClimgovError, ValueError):
    """An operation was called with arguments outside its domain."""


class UnknownIdError(ClimgovError, KeyError):
    """Lookup of an id that is not part of the network or roster."""


class NumericError(ClimgovError, ArithmeticError):
    """Non-finite values reached a comparison that needs finite input."""
