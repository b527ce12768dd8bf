from .errors import CircmetricError, ConfigError, GuardError, NumericalError

__all__ = [
    'CircmetricError',
    'ConfigError',
    'GuardError',
    'NumericalError',
]
