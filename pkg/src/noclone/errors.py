"""Exception types shared across modules."""


class NoCloneError(ValueError):
    """Base class for input and precondition failures."""


class DegenerateDirectionError(NoCloneError):
    pass


class PreconditionError(NoCloneError):
    pass


class DegenerateConfigurationError(NoCloneError):
    pass


class StateValidationError(NoCloneError):
    pass


class SchemaError(NoCloneError):
    pass


class SizeError(NoCloneError):
    pass


class ConsistencyError(NoCloneError):
    pass


class RangeError(NoCloneError):
    pass


class ConfigError(NoCloneError):
    pass
