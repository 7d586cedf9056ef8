"""
Многолучевой канал с рэлеевскими замираниями (блочное замирание на пачку)
"""
import logging
from dataclasses import dataclass
from typing import List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

logger = logging.getLogger(__name__)


class PowerDelayProfile(BaseModel):
    """Профиль задержек: мощности лучей (сумма 1) и задержки в единицах T0"""
    model_config = ConfigDict(frozen=True)

    powers: List[float] = Field(default_factory=lambda: [1.0], min_length=1)
    delays: List[float] = Field(default_factory=lambda: [0.0], min_length=1)

    @model_validator(mode="after")
    def _normalized(self) -> "PowerDelayProfile":
        if len(self.powers) != len(self.delays):
            raise ValueError("длины powers и delays не совпадают")
        if any(p < 0 for p in self.powers) or abs(sum(self.powers) - 1.0) > 1e-9:
            raise ValueError(f"мощности лучей должны быть неотрицательными с суммой 1, получено {sum(self.powers)}")
        if any(d < 0 for d in self.delays):
            raise ValueError("задержки должны быть неотрицательными")
        return self

    @classmethod
    def flat(cls) -> "PowerDelayProfile":
        return cls()

    @classmethod
    def exponential(cls, n_taps: int = 4, spacing: float = 1 / 16, decay: float = 1.0) -> "PowerDelayProfile":
        """Экспоненциальный профиль: мощности ∝ exp(-decay·l), задержки l·spacing."""
        raw = np.exp(-decay * np.arange(n_taps))
        powers = raw / raw.sum()
        return cls(powers=powers.tolist(), delays=(spacing * np.arange(n_taps)).tolist())

    @property
    def n_taps(self) -> int:
        return len(self.powers)

    def delay_indices(self, T: float, n_tau: int) -> np.ndarray:
        """Задержки в шагах сетки T/n_tau; задержки вне сетки округляются."""
        steps = np.asarray(self.delays) * n_tau / T
        indices = np.rint(steps).astype(int)
        if np.any(np.abs(steps - indices) > 1e-9):
            logger.warning(f"Задержки профиля округлены к сетке T/{n_tau}")
        return indices


@dataclass(frozen=True)
class ChannelRealization:
    """Комплексные коэффициенты лучей γ_l и их задержки τ_l"""
    taps: np.ndarray
    delays: np.ndarray

    def frequency_response(self, f) -> np.ndarray:
        """H(f) = Σ_l γ_l·exp(-j2πfτ_l)."""
        f = np.atleast_1d(np.asarray(f, dtype=float))
        return np.exp(-2j * np.pi * f[:, None] * self.delays[None, :]) @ self.taps


def sample_taps(pdp: PowerDelayProfile, rng: np.random.Generator, size: int = 1) -> np.ndarray:
    """Независимые комплексные гауссовы лучи формы (size, L) с дисперсиями из профиля."""
    std = np.sqrt(np.asarray(pdp.powers) / 2)
    return (rng.standard_normal((size, pdp.n_taps)) + 1j * rng.standard_normal((size, pdp.n_taps))) * std


def sample_channel(pdp: PowerDelayProfile, rng: np.random.Generator) -> ChannelRealization:
    return ChannelRealization(sample_taps(pdp, rng)[0], np.asarray(pdp.delays, dtype=float))
