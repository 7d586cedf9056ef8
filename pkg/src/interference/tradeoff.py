"""
Кривые компромисса между собственной и межпользовательской помехой
"""
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator

from .gains import mean_self_gain, timing_averaged_gain
from ..utils.config import Config
from ..utils.io import write_csv
from ..waveform.filters import FilterKind, make_filter
from ..waveform.lattice import LatticeParams

logger = logging.getLogger(__name__)


class TradeoffConfig(BaseModel):
    """
    Параметры развёртки.

    axis = F: RRC с фиксированным alpha, T = T0, по оси разнос поднесущих F (>= 1).
    axis = rho: гауссов импульс при T = F = 1, по оси ρ.
    """
    model_config = ConfigDict(frozen=True)

    axis: str = Field("F", pattern="^(F|rho)$", description="Ось развёртки")
    values: List[float] = Field(default_factory=list, description="Значения на оси")
    alpha: float = Field(0.2, ge=0, le=1, description="Скругление RRC для оси F")
    oversampling: int = Field(Config.OVERSAMPLING, ge=Config.MIN_OVERSAMPLING)
    N: int = Field(Config.DEFAULT_SUBCARRIERS, ge=1)
    K: int = Field(Config.DEFAULT_TRUNCATION, ge=1)
    n_tau: int = Field(Config.TAU_POINTS, ge=16)
    n_sum: Optional[int] = Field(None, ge=0, description="Окно поднесущих; None: вся полоса")

    @field_validator("values")
    @classmethod
    def _positive(cls, values: List[float], info) -> List[float]:
        if any(v <= 0 for v in values):
            raise ValueError("значения на оси должны быть положительными")
        if info.data.get("axis") == "F" and any(v < 1.0 for v in values):
            raise ValueError("разнос поднесущих F должен быть >= 1.0")
        return values


@dataclass(eq=False)
class TradeoffCurve:
    """Ψ_other (полное и частичное перекрытие) и Ψ_self вдоль оси параметра"""
    axis_name: str
    axis: np.ndarray = field(default_factory=lambda: np.empty(0))
    spectral_efficiency: np.ndarray = field(default_factory=lambda: np.empty(0))
    psi_other_full: np.ndarray = field(default_factory=lambda: np.empty(0))
    psi_other_partial: np.ndarray = field(default_factory=lambda: np.empty(0))
    psi_self: np.ndarray = field(default_factory=lambda: np.empty(0))

    def __len__(self) -> int:
        return len(self.axis)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "axis": self.axis,
            "spectral_efficiency": self.spectral_efficiency,
            "psi_other_full": self.psi_other_full,
            "psi_other_partial": self.psi_other_partial,
            "psi_self": self.psi_self,
        })

    def to_csv(self, path: Union[str, Path]) -> Path:
        return write_csv(self.to_frame(), path, "tradeoff", {"axis": self.axis_name})


def tradeoff_sweep(config: TradeoffConfig) -> TradeoffCurve:
    """
    Развёртка компромисса: для каждой точки оси считается усреднённая по τ Ψ_other
    при ε = 0 и ε = F/2 и Ψ_self.
    """
    rows = []
    for value in config.values:
        if config.axis == "F":
            g = make_filter(FilterKind.RRC, Q=config.oversampling, alpha=config.alpha)
            lattice = LatticeParams(F=value, T=1.0, N=config.N, K=config.K)
        else:
            g = make_filter(FilterKind.GAUSSIAN, Q=config.oversampling, rho=value)
            lattice = LatticeParams(F=1.0, T=1.0, N=config.N, K=config.K)

        full = timing_averaged_gain(g, g, lattice, 0.0, config.n_tau, n_sum=config.n_sum)
        partial = timing_averaged_gain(g, g, lattice, lattice.F / 2, config.n_tau, n_sum=config.n_sum)
        self_gain = mean_self_gain(g, lattice, config.n_sum)
        rows.append((value, lattice.spectral_efficiency, full, partial, self_gain))
        logger.info(
            f"{config.axis}={value:.4f}: Ψ_full={full:.6e}, Ψ_partial={partial:.6e}, Ψ_self={self_gain:.6e}"
        )

    if not rows:
        return TradeoffCurve(config.axis)
    columns = [np.array(col, dtype=float) for col in zip(*rows)]
    return TradeoffCurve(config.axis, *columns)
