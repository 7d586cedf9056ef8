"""
Чтение сценариев и запись версионированных CSV
"""
import logging
from pathlib import Path
from typing import Dict, Mapping, Tuple, Union

import pandas as pd

from .config import Config
from .exceptions import ConfigurationError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

FLOAT_FORMAT = "%.12e"


def read_scenario(path: PathLike) -> Dict[str, str]:
    """
    Чтение файла сценария в формате key = value.

    Пустые строки и строки, начинающиеся с '#', пропускаются.
    Значения возвращаются строками, приведение типов делают модели pydantic.

    Args:
        path: Путь к файлу сценария

    Returns:
        Словарь ключ -> строковое значение
    """
    path = Path(path)
    if not path.exists():
        raise ConfigurationError(f"Файл сценария не найден: {path}")

    values: Dict[str, str] = {}
    for line_no, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{path}:{line_no}: ожидается 'ключ = значение', получено '{raw}'")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigurationError(f"{path}:{line_no}: пустой ключ")
        if key in values:
            raise ConfigurationError(f"{path}:{line_no}: ключ '{key}' задан повторно")
        values[key] = value

    logger.debug(f"Сценарий {path}: {len(values)} ключей")
    return values


def schema_line(kind: str, meta: Mapping[str, object]) -> str:
    """Строка схемы, открывающая каждый CSV."""
    parts = [f"schema: pot.{kind}/{Config.SCHEMA_VERSION}"]
    parts.extend(f"{key}={value}" for key, value in meta.items())
    return "# " + "; ".join(parts)


def parse_schema_line(line: str) -> Tuple[str, Dict[str, str]]:
    """Разбор строки схемы: (вид, метаданные)."""
    if not line.startswith("# schema: pot."):
        raise ConfigurationError(f"Отсутствует строка схемы: '{line.strip()}'")
    head, *rest = line[2:].strip().split("; ")
    kind, _, version = head[len("schema: pot."):].partition("/")
    if version != Config.SCHEMA_VERSION:
        raise ConfigurationError(f"Неподдерживаемая версия схемы {kind}: {version}")
    meta = {}
    for item in rest:
        key, _, value = item.partition("=")
        meta[key] = value
    return kind, meta


def write_csv(df: pd.DataFrame, path: PathLike, kind: str, meta: Mapping[str, object]) -> Path:
    """
    Запись DataFrame с версионированной строкой схемы.

    Args:
        df: Данные
        path: Путь к файлу
        kind: Вид файла (gain_table, tradeoff, ber_curve, ...)
        meta: Метаданные для строки схемы

    Returns:
        Путь к записанному файлу
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as fh:
        fh.write(schema_line(kind, meta) + "\n")
        df.to_csv(fh, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    logger.info(f"Записан файл {path} ({len(df)} строк)")
    return path


def read_csv(path: PathLike, kind: str) -> Tuple[pd.DataFrame, Dict[str, str]]:
    """
    Чтение CSV, записанного write_csv, с проверкой вида схемы.

    Returns:
        (данные, метаданные схемы)
    """
    path = Path(path)
    if not path.exists():
        raise ConfigurationError(f"Файл не найден: {path}")
    with path.open("r", encoding="utf-8") as fh:
        first = fh.readline()
    found, meta = parse_schema_line(first)
    if found != kind:
        raise ConfigurationError(f"{path}: ожидалась схема {kind}, найдена {found}")
    try:
        df = pd.read_csv(path, comment="#")
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise ConfigurationError(f"{path}: не удалось разобрать CSV: {e}") from e
    return df, meta
