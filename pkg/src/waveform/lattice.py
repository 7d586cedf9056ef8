"""
Решётка время-частота, сетка символов и дискретный сигнал
"""
from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..utils.config import Config
from ..utils.exceptions import DimensionError


class LatticeParams(BaseModel):
    """Прямоугольная решётка: шаг поднесущих F и символов T в единицах F0, T0"""
    model_config = ConfigDict(frozen=True)

    F: float = Field(1.0, gt=0, description="Разнос поднесущих, F0")
    T: float = Field(1.0, gt=0, description="Период символа, T0")
    N: int = Field(Config.DEFAULT_SUBCARRIERS, ge=1, description="Число поднесущих")
    K: int = Field(Config.DEFAULT_TRUNCATION, ge=1, description="Усечение пачки в периодах символа")

    @property
    def density(self) -> float:
        """Произведение T·F: 1 для полной ортогональной системы, > 1 для неполной."""
        return self.T * self.F

    @property
    def spectral_efficiency(self) -> float:
        return 1.0 / self.density

    @property
    def burst_symbols(self) -> int:
        return 2 * self.K - 1

    @property
    def time_indices(self) -> np.ndarray:
        """Индексы m ∈ [-K+1, K-1]."""
        return np.arange(-self.K + 1, self.K)


@dataclass(frozen=True, eq=False)
class SymbolGrid:
    """
    Информационные символы d[m][n].

    values имеет форму (2K-1, N); строка 0 соответствует m = -K+1.
    """
    values: np.ndarray
    K: int

    def __post_init__(self):
        if self.values.ndim != 2 or self.values.shape[0] != 2 * self.K - 1:
            raise DimensionError(
                f"Сетка символов должна иметь {2 * self.K - 1} строк, форма {self.values.shape}"
            )

    @classmethod
    def zeros(cls, lattice: LatticeParams) -> "SymbolGrid":
        return cls(np.zeros((lattice.burst_symbols, lattice.N), dtype=complex), lattice.K)

    @classmethod
    def unit(cls, lattice: LatticeParams, m: int = 0, n: int = 0) -> "SymbolGrid":
        """Единичный символ в ячейке (m, n)."""
        grid = cls.zeros(lattice)
        grid.values[m + lattice.K - 1, n] = 1.0
        return grid

    @property
    def N(self) -> int:
        return self.values.shape[1]

    def at(self, m: int, n: int) -> complex:
        return complex(self.values[m + self.K - 1, n])

    def check(self, lattice: LatticeParams) -> None:
        if self.K != lattice.K or self.N != lattice.N:
            raise DimensionError(
                f"Сетка (K={self.K}, N={self.N}) не совпадает с решёткой (K={lattice.K}, N={lattice.N})"
            )


@dataclass(frozen=True, eq=False)
class BasebandSignal:
    """Комплексные отсчёты s(t_k), t_k = t_start + k / sample_rate (единицы T0)."""
    samples: np.ndarray
    sample_rate: float
    t_start: float

    @property
    def times(self) -> np.ndarray:
        return self.t_start + np.arange(len(self.samples)) / self.sample_rate

    @property
    def t_end(self) -> float:
        return self.t_start + (len(self.samples) - 1) / self.sample_rate

    def energy(self) -> float:
        return float(np.sum(np.abs(self.samples) ** 2) / self.sample_rate)

    def __add__(self, other: "BasebandSignal") -> "BasebandSignal":
        if other.sample_rate != self.sample_rate or len(other.samples) != len(self.samples) \
                or not np.isclose(other.t_start, self.t_start):
            raise DimensionError("Сигналы заданы на разных сетках")
        return BasebandSignal(self.samples + other.samples, self.sample_rate, self.t_start)

    def scaled(self, factor: complex) -> "BasebandSignal":
        return BasebandSignal(self.samples * factor, self.sample_rate, self.t_start)
