"""
Утилиты для проекта
"""

from .config import Config
from .exceptions import (
    ConfigurationError,
    DegenerateSignalError,
    DimensionError,
    ParameterError,
    PotError,
    QuadratureError,
    SignalLengthError,
    UsageError,
)
from .logger import setup_logger

__all__ = [
    'Config', 'setup_logger',
    'PotError', 'ParameterError', 'DimensionError', 'SignalLengthError',
    'DegenerateSignalError', 'ConfigurationError', 'UsageError', 'QuadratureError',
]
