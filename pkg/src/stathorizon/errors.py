class StatHorizonError(Exception):
    """Base class; ``exit_code`` is what the CLI returns for it."""
    exit_code = 1


class ParameterError(StatHorizonError, ValueError):
    pass


class DomainError(StatHorizonError, ValueError):
    pass


class SizeError(StatHorizonError, MemoryError):
    pass


class ShapeError(StatHorizonError, ValueError):
    pass


class ContractError(StatHorizonError, ValueError):
    pass


class InsufficientDataError(StatHorizonError, ValueError):
    pass


class UsageError(StatHorizonError):
    exit_code = 2
