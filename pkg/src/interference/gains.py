"""
Средние коэффициенты помех: межпользовательская Ψ(τ, ε) и собственная Ψ_self
"""
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Optional, Sequence, Union

import numpy as np
import pandas as pd
from scipy.integrate import trapezoid

from ..utils.config import Config
from ..utils.exceptions import ConfigurationError, ParameterError
from ..utils.io import read_csv, write_csv
from ..waveform.filters import PrototypeFilter
from ..waveform.gabor import cross_ambiguity, default_ambiguity_rate, full_band_energy, full_band_rate
from ..waveform.lattice import LatticeParams

logger = logging.getLogger(__name__)


def overlap_symbols(g_tx: PrototypeFilter, g_rx: PrototypeFilter, lattice: LatticeParams) -> int:
    """
    Усечение по символам, при котором учтены все сдвиги mT + τ, τ ∈ [0, T],
    с пересекающимися носителями фильтров.
    """
    return int(math.floor((g_tx.half_span + g_rx.half_span) / lattice.T)) + 2


def _time_offsets(lattice: LatticeParams, taus: np.ndarray, k_sum: int) -> np.ndarray:
    m = np.arange(-k_sum + 1, k_sum)
    return (m[None, :] * lattice.T + taus[:, None]).ravel()


def _psi_over_tau(
    g_tx: PrototypeFilter,
    g_rx: PrototypeFilter,
    lattice: LatticeParams,
    taus: np.ndarray,
    eps: float,
    n_sum: Optional[int],
    k_sum: Optional[int],
    sample_rate: Optional[float],
) -> np.ndarray:
    """Ψ(τ, ε) для массива τ одним векторизованным проходом."""
    taus = np.asarray(taus, dtype=float)
    k_sum = k_sum or overlap_symbols(g_tx, g_rx, lattice)
    offsets = _time_offsets(lattice, taus, k_sum)
    n_m = 2 * k_sum - 1

    if n_sum is None:
        energy = full_band_energy(g_tx, g_rx, offsets, eps, lattice.F, sample_rate)
        return energy.reshape(taus.size, n_m).sum(axis=1)

    freqs = np.arange(-n_sum, n_sum + 1) * lattice.F + eps
    fs = sample_rate or default_ambiguity_rate(g_tx, g_rx, float(np.max(np.abs(freqs))))
    values = cross_ambiguity(g_tx, g_rx, offsets, freqs, fs)
    return (np.abs(values) ** 2).reshape(taus.size, n_m * freqs.size).sum(axis=1)


def mean_other_gain(
    g_tx: PrototypeFilter,
    g_rx: PrototypeFilter,
    lattice: LatticeParams,
    tau: float,
    eps: float,
    n_sum: Optional[int] = None,
    k_sum: Optional[int] = None,
    sample_rate: Optional[float] = None,
) -> float:
    """
    Средний коэффициент межпользовательской помехи.

    Ψ(τ, ε) = Σ_{m,n} |<g_tx(t - mT - τ)·exp(j2π(nF + ε)t), g_rx(t)>|²,
    ячейка жертвы фиксирована в (0, 0).

    Args:
        g_tx: Фильтр мешающего передатчика
        g_rx: Приёмный фильтр жертвы
        lattice: Решётка
        tau: Временное рассогласование, [0, T)
        eps: Сдвиг несущей (F0)
        n_sum: Полуширина окна поднесущих (None: вся полоса)
        k_sum: Усечение по символам (None: всё перекрытие фильтров, см. overlap_symbols)
        sample_rate: Частота дискретизации (для всей полосы кратна F)

    Returns:
        Неотрицательное значение Ψ
    """
    if not -1e-12 <= tau < lattice.T:
        raise ParameterError(f"Временной сдвиг tau={tau} вне [0, T={lattice.T})")
    value = _psi_over_tau(g_tx, g_rx, lattice, np.array([tau]), eps, n_sum, k_sum, sample_rate)[0]
    logger.debug(f"Ψ(τ={tau:.4f}, ε={eps:.4f}) = {value:.6e}")
    return float(value)


def mean_self_gain(
    g: PrototypeFilter,
    lattice: LatticeParams,
    n_sum: Optional[int] = None,
    k_sum: Optional[int] = None,
    sample_rate: Optional[float] = None,
) -> float:
    """
    Средний коэффициент собственной помехи: сумма |<g_{m,n}, g_{0,0}>|² по (m, n) ≠ (0, 0)
    при одинаковых фильтрах передачи и приёма.
    """
    total = _psi_over_tau(g, g, lattice, np.array([0.0]), 0.0, n_sum, k_sum, sample_rate)[0]
    if n_sum is None:
        fs = sample_rate or full_band_rate(g, g, lattice.F)
    else:
        fs = sample_rate or default_ambiguity_rate(g, g, n_sum * lattice.F)
    concentric = abs(cross_ambiguity(g, g, [0.0], [0.0], fs)[0, 0]) ** 2
    return float(max(total - concentric, 0.0))


def periodicity_gap(
    g_tx: PrototypeFilter,
    g_rx: PrototypeFilter,
    lattice: LatticeParams,
    eps: float,
    n_sum: Optional[int] = None,
    k_sum: Optional[int] = None,
    sample_rate: Optional[float] = None,
) -> float:
    """|Ψ(0, ε) - Ψ(T, ε)|: остаток от усечения суммы по символам."""
    ends = _psi_over_tau(g_tx, g_rx, lattice, np.array([0.0, lattice.T]), eps, n_sum, k_sum, sample_rate)
    return float(abs(ends[0] - ends[1]))


def tau_grid(lattice: LatticeParams, n_tau: int = Config.TAU_POINTS) -> np.ndarray:
    """Равномерная сетка τ_j = jT/n_tau на [0, T)."""
    return np.arange(n_tau) * lattice.T / n_tau


def timing_averaged_gain(
    g_tx: PrototypeFilter,
    g_rx: PrototypeFilter,
    lattice: LatticeParams,
    eps: float,
    n_tau: int = Config.TAU_POINTS,
    rule: str = "trapezoid",
    n_sum: Optional[int] = None,
    k_sum: Optional[int] = None,
    sample_rate: Optional[float] = None,
) -> float:
    """
    Среднее Ψ(τ, ε) по τ, равномерному на [0, T).

    Args:
        rule: trapezoid (узлы jT/n, включая T) или midpoint (узлы (j + 1/2)T/n)
    """
    if n_tau < 16:
        raise ParameterError(f"Число точек по τ должно быть >= 16, получено {n_tau}")
    if rule == "trapezoid":
        taus = np.arange(n_tau + 1) * lattice.T / n_tau
        psi = _psi_over_tau(g_tx, g_rx, lattice, taus, eps, n_sum, k_sum, sample_rate)
        return float(trapezoid(psi, taus) / lattice.T)
    if rule == "midpoint":
        taus = (np.arange(n_tau) + 0.5) * lattice.T / n_tau
        psi = _psi_over_tau(g_tx, g_rx, lattice, taus, eps, n_sum, k_sum, sample_rate)
        return float(np.mean(psi))
    raise ParameterError(f"Неизвестное правило интегрирования: {rule}")


@dataclass(eq=False)
class GainTable:
    """
    Таблица Ψ(τ, ε) на сетке τ ⊂ [0, T) и значение Ψ_self.

    psi имеет форму (len(tau_grid), len(eps_grid)); psi_end, если задан, хранит Ψ(T, ε)
    для проверки периодичности по τ.
    """
    tau_grid: np.ndarray
    eps_grid: np.ndarray
    psi: np.ndarray
    psi_self: float
    T: float = 1.0
    meta: Dict[str, str] = field(default_factory=dict)
    psi_end: Optional[np.ndarray] = None

    def __post_init__(self):
        self.tau_grid = np.asarray(self.tau_grid, dtype=float)
        self.eps_grid = np.asarray(self.eps_grid, dtype=float)
        self.psi = np.asarray(self.psi, dtype=float).reshape(self.tau_grid.size, self.eps_grid.size)
        if self.psi_end is not None:
            self.psi_end = np.asarray(self.psi_end, dtype=float).reshape(self.eps_grid.size)
        self.validate()

    def validate(self) -> None:
        if not np.all(np.isfinite(self.psi)) or not np.isfinite(self.psi_self):
            raise ConfigurationError("Таблица коэффициентов содержит нечисловые значения")
        if np.any(self.psi < 0) or self.psi_self < 0:
            raise ConfigurationError("Таблица коэффициентов содержит отрицательные значения")
        if self.tau_grid.size and (self.tau_grid.min() < 0 or self.tau_grid.max() >= self.T):
            raise ConfigurationError(f"Сетка τ должна лежать в [0, T={self.T})")
        if self.eps_grid.size == 0:
            raise ConfigurationError("Таблица коэффициентов без значений ε")
        gap = self.periodicity_gap()
        if gap is not None and gap > Config.PERIODICITY_TOL * max(1.0, float(self.psi.max())):
            raise ConfigurationError(
                f"Ψ не периодична по τ: |Ψ(0) - Ψ(T)| = {gap:.3e}, увеличьте усечение по символам"
            )

    def periodicity_gap(self) -> Optional[float]:
        """max_ε |Ψ(0, ε) - Ψ(T, ε)| или None, если Ψ(T, ε) не сохранена."""
        if self.psi_end is None or self.tau_grid.size == 0 or self.tau_grid[0] != 0.0:
            return None
        return float(np.max(np.abs(self.psi[0] - self.psi_end)))

    def _column_index(self, eps: float) -> int:
        idx = int(np.argmin(np.abs(self.eps_grid - eps)))
        if abs(self.eps_grid[idx] - eps) > 1e-9:
            raise ParameterError(f"ε={eps} отсутствует в таблице {list(self.eps_grid)}")
        return idx

    def column(self, eps: float) -> np.ndarray:
        return self.psi[:, self._column_index(eps)]

    def mean(self, eps: float) -> float:
        """Среднее по τ (узлы jT/n эквивалентны трапециям для периодической Ψ)."""
        return float(np.mean(self.column(eps)))

    def flatness(self, eps: float, reference: Optional[float] = None) -> float:
        """(max - min) Ψ(·, ε) относительно среднего при полном перекрытии (ε = 0)."""
        if reference is None:
            reference = self.mean(0.0) if np.any(np.isclose(self.eps_grid, 0.0)) else self.mean(eps)
        column = self.column(eps)
        return float((column.max() - column.min()) / reference)

    def to_frame(self) -> pd.DataFrame:
        tau, eps = np.meshgrid(self.tau_grid, self.eps_grid, indexing="ij")
        return pd.DataFrame({"tau": tau.ravel(), "eps": eps.ravel(), "psi": self.psi.ravel()})

    def to_csv(self, path: Union[str, Path]) -> Path:
        meta = {"psi_self": f"{self.psi_self:.12e}", "T": f"{self.T:.12e}", **self.meta}
        return write_csv(self.to_frame(), path, "gain_table", meta)

    @classmethod
    def read_csv(cls, path: Union[str, Path]) -> "GainTable":
        """Чтение таблицы с проверкой инвариантов."""
        df, meta = read_csv(path, "gain_table")
        if list(df.columns) != ["tau", "eps", "psi"]:
            raise ConfigurationError(f"{path}: ожидаются столбцы tau, eps, psi, найдены {list(df.columns)}")
        try:
            psi_self = float(meta["psi_self"])
            T = float(meta.get("T", 1.0))
        except (KeyError, ValueError) as e:
            raise ConfigurationError(f"{path}: некорректная строка схемы: {e}") from e

        taus = np.unique(df["tau"].to_numpy(dtype=float))
        eps = np.unique(df["eps"].to_numpy(dtype=float))
        if len(df) != taus.size * eps.size:
            raise ConfigurationError(f"{path}: таблица не является полной сеткой τ × ε")
        pivot = df.pivot(index="tau", columns="eps", values="psi").reindex(index=taus, columns=eps)
        extra = {k: v for k, v in meta.items() if k not in ("psi_self", "T")}
        return cls(taus, eps, pivot.to_numpy(), psi_self, T, extra)


def gain_table(
    g_tx: PrototypeFilter,
    g_rx: PrototypeFilter,
    lattice: LatticeParams,
    eps_values: Sequence[float],
    n_tau: int = Config.TAU_POINTS,
    n_sum: Optional[int] = None,
    k_sum: Optional[int] = None,
) -> GainTable:
    """
    Таблица Ψ(τ, ε) для τ_j = jT/n_tau и заданных сдвигов несущей.

    Ψ_self считается для приёмного фильтра жертвы (фильтры передачи и приёма жертвы совпадают).
    Вместе с таблицей считается Ψ(T, ε), по которой GainTable проверяет периодичность.
    """
    eps_values = [float(e) for e in eps_values]
    if not eps_values:
        raise ParameterError("Список сдвигов несущей пуст")
    k_used = k_sum or overlap_symbols(g_tx, g_rx, lattice)
    taus = tau_grid(lattice, n_tau)
    with_end = np.append(taus, lattice.T)

    columns = []
    ends = []
    for eps in eps_values:
        values = _psi_over_tau(g_tx, g_rx, lattice, with_end, eps, n_sum, k_used, None)
        columns.append(values[:-1])
        ends.append(values[-1])
        logger.info(f"Ψ(τ, ε={eps:.4f}): среднее {np.mean(columns[-1]):.6e}")
    psi_self = mean_self_gain(g_rx, lattice, n_sum, k_sum)

    meta = {
        "filter": g_rx.kind.value,
        "F": f"{lattice.F:.12e}",
        "N_window": str(n_sum if n_sum is not None else "full"),
        "K": str(k_used),
    }
    return GainTable(
        taus, np.array(eps_values), np.column_stack(columns), psi_self, lattice.T, meta, np.array(ends)
    )
