"""
Настройка логирования
"""
import logging
from pathlib import Path
from typing import Optional

from .config import Config


def setup_logger(
    name: str = "pot",
    log_file: Optional[str] = None,
    level: Optional[str] = None,
) -> logging.Logger:
    """
    Настройка логгера

    Args:
        name: Имя логгера
        log_file: Путь к файлу логов (опционально)
        level: Уровень логирования (по умолчанию из POT_LOG_LEVEL)

    Returns:
        Настроенный логгер
    """
    logger = logging.getLogger(name)
    logger.setLevel((level or Config.LOG_LEVEL).upper())

    # Повторный вызов не должен дублировать вывод
    if logger.handlers:
        return logger

    # Формат логов
    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )

    # Консольный handler
    console_handler = logging.StreamHandler()
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    # Файловый handler (если указан)
    if log_file:
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_file)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    return logger
