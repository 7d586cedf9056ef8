"""
Конфигурация проекта
"""
import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()


class Config:
    """Класс для хранения конфигурации проекта"""

    # Пути к результатам
    BASE_DIR = Path(__file__).parent.parent.parent
    OUTPUT_DIR = Path(os.getenv("POT_OUTPUT_DIR", str(BASE_DIR / "results")))

    # Дискретизация (нормированные единицы F0 = 1/T0 = 1)
    OVERSAMPLING = 8
    MIN_OVERSAMPLING = 8
    RRC_SPAN = 64
    GAUSSIAN_TRUNCATION = 1e-6
    ENERGY_TOLERANCE = 1e-12

    # Решётка по умолчанию
    DEFAULT_SUBCARRIERS = 16
    DEFAULT_TRUNCATION = 4

    # Усреднение коэффициентов помех
    TAU_POINTS = 64
    PERIODICITY_TOL = 1e-6

    # Окно поднесущих в откликах канального моделирования
    SUBCARRIER_WINDOW = 8

    # Квадратуры
    QUAD_REL_TOL = 1e-8
    QUAD_TAIL = 1e-14
    QUAD_LIMIT = 200

    # Эквалайзеры
    ZF_REGULARIZATION = 1e-12
    MLSE_TAPS = 7
    MLSE_TRACEBACK = 20
    MLSE_MAX_STATES = 10 ** 7

    # Монте-Карло
    RANDOM_STATE = 42
    MIN_BITS_TARGET = 10 ** 4
    R_MAX_FRACTION = 1e-3
    STREAM_SYMBOLS = 200
    CONFIDENCE_Z = 1.96
    BATCH_BURSTS = 2000
    BATCH_STREAMS = 8
    AGGRESSOR_CHUNK = 4096

    # Параллелизм
    SIM_THREADS = max(1, int(os.getenv("POT_SIM_THREADS", "1")))

    # Логирование
    LOG_LEVEL = os.getenv("POT_LOG_LEVEL", "INFO")

    # Версия схем CSV
    SCHEMA_VERSION = "v1"

    @classmethod
    def create_directories(cls):
        """Создает каталог результатов"""
        cls.OUTPUT_DIR.mkdir(parents=True, exist_ok=True)
