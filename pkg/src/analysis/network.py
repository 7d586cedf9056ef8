"""
Модель сети: потери на трассе, частичная компенсация мощности, распределение CFO
"""
import logging
import math
from typing import List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..utils.exceptions import ParameterError

logger = logging.getLogger(__name__)

DEFAULT_CARRIER_MHZ = 3500.0


def pathloss_db(d_m, fc_mhz: float = DEFAULT_CARRIER_MHZ):
    """Потери на трассе, дБ: 11.8 + 45·log10(fc, МГц) + 40·log10(d / 1000 м)."""
    d = np.asarray(d_m, dtype=float)
    if np.any(d <= 0):
        raise ParameterError("Расстояние должно быть положительным")
    value = 11.8 + 45 * math.log10(fc_mhz) + 40 * np.log10(d / 1000)
    return float(value) if value.ndim == 0 else value


def pathloss_constants(fc_mhz: float = DEFAULT_CARRIER_MHZ) -> Tuple[float, float]:
    """(K0, n) для записи L = K0 + n·log10(d, м)."""
    return 11.8 + 45 * math.log10(fc_mhz) - 120, 40.0


class NetworkModel(BaseModel):
    """Геометрия и параметры сети агрессоров"""
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    lam: float = Field(1 / (math.pi * 50 ** 2), gt=0, alias="lambda", description="Плотность агрессоров, 1/м²")
    d_min: float = Field(25.0, gt=0, description="Минимальное расстояние до агрессора, м")
    D: float = Field(10.0, gt=0, description="Длина полезного звена, м")
    K0: float = Field(default_factory=lambda: pathloss_constants()[0], description="Константа потерь, дБ")
    n: float = Field(40.0, gt=0, description="Наклон потерь на декаду")
    beta: float = Field(0.0, ge=0, le=1, description="Коэффициент компенсации потерь")
    noise_power: float = Field(0.0, ge=0, description="Мощность шума на поднесущую")

    @model_validator(mode="after")
    def _geometry(self) -> "NetworkModel":
        if self.d_min < self.D:
            raise ValueError(f"d_min ({self.d_min}) должно быть не меньше D ({self.D})")
        return self

    @property
    def decay(self) -> float:
        """Показатель степени затухания n/10."""
        return self.n / 10


def power_ratio(D: float, r_own, d_k, net: NetworkModel):
    """
    Отношение мощности агрессора к мощности полезного сигнала на приёмнике:
    D^{(n-βn)/10} · r_own^{βn/10} · d_k^{-n/10}.
    """
    r = np.asarray(r_own, dtype=float)
    d = np.asarray(d_k, dtype=float)
    if D <= 0 or np.any(r <= 0) or np.any(d <= 0):
        raise ParameterError("Расстояния должны быть положительными")
    k = net.decay
    value = D ** (k - net.beta * k) * r ** (net.beta * k) * d ** (-k)
    return float(value) if np.ndim(value) == 0 else value


class CfoPmf(BaseModel):
    """Дискретное распределение сдвига несущей агрессоров (в единицах частоты)"""
    model_config = ConfigDict(frozen=True)

    eps_levels: List[float] = Field(..., min_length=1, description="Уровни CFO")
    probs: List[float] = Field(..., min_length=1, description="Вероятности уровней")

    @field_validator("probs")
    @classmethod
    def _probabilities(cls, probs: List[float]) -> List[float]:
        if any(p < 0 for p in probs):
            raise ValueError("вероятности должны быть неотрицательными")
        if abs(sum(probs) - 1.0) > 1e-12:
            raise ValueError(f"сумма вероятностей должна быть 1, получено {sum(probs)}")
        return probs

    @model_validator(mode="after")
    def _lengths(self) -> "CfoPmf":
        if len(self.eps_levels) != len(self.probs):
            raise ValueError("длины eps_levels и probs не совпадают")
        return self

    @classmethod
    def aligned(cls) -> "CfoPmf":
        return cls(eps_levels=[0.0], probs=[1.0])

    @classmethod
    def pot_best_case(cls, F: float) -> "CfoPmf":
        """Все агрессоры сдвинуты на половину разноса поднесущих."""
        return cls(eps_levels=[F / 2], probs=[1.0])

    @classmethod
    def uniform_levels(cls, F: float, levels: int) -> "CfoPmf":
        if levels < 1:
            raise ParameterError(f"Число уровней CFO должно быть >= 1, получено {levels}")
        return cls(eps_levels=[j * F / levels for j in range(levels)], probs=[1.0 / levels] * levels)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.choice(np.asarray(self.eps_levels), size=size, p=np.asarray(self.probs))
