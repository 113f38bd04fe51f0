"""Exception hierarchy shared by every module."""


class PackingError(ValueError):
    """Base class for all validation failures raised by wdmpack."""


class InvalidSizeError(PackingError):
    pass


class ParityError(PackingError):
    pass


class EmptyArcError(PackingError):
    pass


class PolicyError(PackingError):
    pass


class RoutingError(PackingError):
    pass


class OrderError(PackingError):
    pass


class BudgetError(PackingError):
    """The exact oracle refuses inputs it cannot certify within its budget."""


class DivisibilityError(PackingError):
    pass


class LengthError(PackingError):
    pass


class ConfigError(PackingError):
    pass


class FormatError(PackingError):
    """Malformed input file."""
