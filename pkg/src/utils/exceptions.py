"""
Исключения проекта
"""
from typing import Optional, Tuple


class PotError(Exception):
    """Базовое исключение библиотеки"""


class ParameterError(PotError, ValueError):
    """Параметр вне допустимого диапазона"""


class DimensionError(PotError, ValueError):
    """Размеры сетки символов не согласованы с решёткой"""


class SignalLengthError(PotError, ValueError):
    """Сигнал короче окна анализа"""


class DegenerateSignalError(PotError, ValueError):
    """Тестовый сигнал нулевой энергии"""


class ConfigurationError(PotError, ValueError):
    """Ошибка сценария или входного файла"""


class UsageError(PotError):
    """Неверное использование командной строки"""


class QuadratureError(PotError, RuntimeError):
    """
    Адаптивная квадратура не сошлась.

    Хранит диагностику: последнее значение интеграла, оценку ошибки,
    сообщение scipy и интервал интегрирования.
    """

    def __init__(
        self,
        message: str,
        value: float = float("nan"),
        abs_error: float = float("nan"),
        interval: Optional[Tuple[float, float]] = None,
    ):
        self.message = message
        self.value = value
        self.abs_error = abs_error
        self.interval = interval
        super().__init__(
            f"{message} (значение={value:.6g}, оценка ошибки={abs_error:.3g}, "
            f"интервал={interval})"
        )
