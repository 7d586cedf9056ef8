"""
Прототипные фильтры: RRC, гауссов и прямоугольный импульсы
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..utils.config import Config
from ..utils.exceptions import ParameterError

logger = logging.getLogger(__name__)


class FilterKind(str, Enum):
    """Тип прототипного фильтра"""
    RRC = "rrc"
    GAUSSIAN = "gaussian"
    RECT = "rect"


@dataclass(frozen=True, eq=False)
class PrototypeFilter:
    """
    Дискретизированный импульс g(t) единичной энергии.

    Отсчёты взяты в моменты t_i = (first_index + i) / Q в единицах T0.
    Метод evaluate() возвращает тот же импульс в произвольные моменты
    времени с тем же нормирующим множителем, что и у отсчётов.
    """
    kind: FilterKind
    samples: np.ndarray
    oversampling: int
    span: float
    first_index: int
    scale: float
    alpha: Optional[float] = None
    rho: Optional[float] = None

    @property
    def times(self) -> np.ndarray:
        return (self.first_index + np.arange(len(self.samples))) / self.oversampling

    @property
    def half_span(self) -> float:
        """Половина носителя импульса."""
        return self.span / 2

    @property
    def bandwidth(self) -> float:
        """Занимаемая (двусторонняя) полоса в единицах F0."""
        if self.kind is FilterKind.RRC:
            return 1.0 + self.alpha
        if self.kind is FilterKind.GAUSSIAN:
            return 2 * math.sqrt(self.rho * math.log(1 / Config.GAUSSIAN_TRUNCATION) / math.pi)
        return 2.0

    def energy(self) -> float:
        """Дискретная энергия Σ|g[i]|²·T0/Q."""
        return float(np.sum(np.abs(self.samples) ** 2) / self.oversampling)

    def evaluate(self, t) -> np.ndarray:
        """Значения нормированного импульса в моменты t (вне носителя 0)."""
        t = np.asarray(t, dtype=float)
        if self.kind is FilterKind.RECT:
            # полуинтервал [-1/2, 1/2); допуск делает сдвиги на T разбиением
            inside = (t >= -0.5 - 1e-9) & (t < 0.5 - 1e-9)
            return np.where(inside, self.scale, 0.0)

        inside = np.abs(t) <= self.half_span + 1e-9
        if self.kind is FilterKind.RRC:
            raw = _rrc(t, self.alpha)
        else:
            raw = _gaussian(t, self.rho)
        return np.where(inside, self.scale * raw, 0.0)


class FilterSpec(BaseModel):
    """Параметры прототипного фильтра из сценария"""
    model_config = ConfigDict(frozen=True)

    kind: FilterKind = Field(FilterKind.RRC, description="Тип фильтра")
    alpha: float = Field(0.2, ge=0, le=1, description="Коэффициент скругления RRC")
    rho: float = Field(1.0, gt=0, description="Параметр концентрации гауссова импульса")
    oversampling: int = Field(Config.OVERSAMPLING, ge=Config.MIN_OVERSAMPLING, description="Отсчётов на T0")
    span: Optional[float] = Field(None, ge=1, description="Длительность RRC в T0")

    def build(self) -> PrototypeFilter:
        return make_filter(
            self.kind, Q=self.oversampling, span=self.span, alpha=self.alpha, rho=self.rho
        )


def _rrc(t: np.ndarray, alpha: float) -> np.ndarray:
    """Замкнутая форма RRC при T0 = 1; особые точки через аналитические пределы."""
    if alpha == 0:
        return np.sinc(t)

    t = np.asarray(t, dtype=float)
    out = np.empty_like(t)
    at_zero = np.isclose(t, 0.0, atol=1e-12)
    asymptote = 1 / (4 * alpha)
    at_asymptote = np.isclose(np.abs(t), asymptote, atol=1e-10)
    regular = ~(at_zero | at_asymptote)

    tr = t[regular]
    numerator = np.sin(np.pi * tr * (1 - alpha)) + 4 * alpha * tr * np.cos(np.pi * tr * (1 + alpha))
    denominator = np.pi * tr * (1 - (4 * alpha * tr) ** 2)
    out[regular] = numerator / denominator
    out[at_zero] = 1 - alpha + 4 * alpha / np.pi
    out[at_asymptote] = (alpha / np.sqrt(2)) * (
        (1 + 2 / np.pi) * np.sin(np.pi / (4 * alpha))
        + (1 - 2 / np.pi) * np.cos(np.pi / (4 * alpha))
    )
    return out


def _gaussian(t: np.ndarray, rho: float) -> np.ndarray:
    return (2 * rho) ** 0.25 * np.exp(-np.pi * rho * np.asarray(t, dtype=float) ** 2)


def make_filter(
    kind: Union[FilterKind, str],
    Q: int = Config.OVERSAMPLING,
    span: Optional[float] = None,
    alpha: Optional[float] = None,
    rho: Optional[float] = None,
) -> PrototypeFilter:
    """
    Построение прототипного фильтра единичной энергии.

    Args:
        kind: rrc | gaussian | rect
        Q: Отсчётов на T0 (не меньше 8)
        span: Длительность RRC в T0 (по умолчанию Config.RRC_SPAN)
        alpha: Коэффициент скругления RRC, [0, 1]
        rho: Параметр гауссова импульса, > 0

    Returns:
        PrototypeFilter
    """
    kind = FilterKind(kind)
    if int(Q) != Q or Q < Config.MIN_OVERSAMPLING:
        raise ParameterError(f"Передискретизация Q должна быть целой и >= {Config.MIN_OVERSAMPLING}, получено {Q}")
    Q = int(Q)

    if kind is FilterKind.RRC:
        alpha = 0.2 if alpha is None else float(alpha)
        if not 0 <= alpha <= 1:
            raise ParameterError(f"Коэффициент скругления alpha вне [0, 1]: {alpha}")
        span = float(Config.RRC_SPAN if span is None else span)
        if span < 1:
            raise ParameterError(f"Длительность фильтра span должна быть >= 1, получено {span}")
        half_count = int(round(span * Q / 2))
        first_index = -half_count
        raw = _rrc(np.arange(-half_count, half_count + 1) / Q, alpha)
        rho = None
    elif kind is FilterKind.GAUSSIAN:
        rho = 1.0 if rho is None else float(rho)
        if not rho > 0:
            raise ParameterError(f"Параметр rho должен быть положительным: {rho}")
        # усечение там, где |g| < 1e-6 от пика
        half = max(0.5, math.sqrt(math.log(1 / Config.GAUSSIAN_TRUNCATION) / (math.pi * rho)))
        span = 2 * half
        half_count = int(math.floor(half * Q + 1e-9))
        first_index = -half_count
        raw = _gaussian(np.arange(-half_count, half_count + 1) / Q, rho)
        alpha = None
    else:
        span = 1.0
        first_index = -int(math.floor(Q / 2))
        raw = np.ones(Q)
        alpha = rho = None

    energy = np.sum(np.abs(raw) ** 2) / Q
    scale = 1 / math.sqrt(energy)
    samples = (raw * scale).astype(complex)

    logger.debug(f"Фильтр {kind.value}: Q={Q}, span={span:.3f}, отсчётов={len(samples)}, масштаб={scale:.12f}")
    return PrototypeFilter(
        kind=kind,
        samples=samples,
        oversampling=Q,
        span=span,
        first_index=first_index,
        scale=scale,
        alpha=alpha,
        rho=rho,
    )
