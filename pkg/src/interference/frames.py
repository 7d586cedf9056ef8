"""
Равенство Планшереля и оценка границ фрейма
"""
import logging
import math
from typing import Iterable, Optional, Tuple

import numpy as np

from ..utils.exceptions import DegenerateSignalError, ParameterError
from ..waveform.filters import PrototypeFilter
from ..waveform.gabor import full_band_rate
from ..waveform.lattice import BasebandSignal, LatticeParams

logger = logging.getLogger(__name__)

MIN_TRIALS = 100


def plancherel_ratio(signal: BasebandSignal, g: PrototypeFilter, lattice: LatticeParams) -> float:
    """
    Σ_{m,n} |<s, g_{m,n}>|² / ||s||² по всей дискретной решётке.

    Сумма по n берётся по всем P = fs/F классам поднесущих, по m по всем
    сдвигам, перекрывающим сигнал.

    Raises:
        DegenerateSignalError: сигнал нулевой энергии
    """
    energy = signal.energy()
    if not energy > 0:
        raise DegenerateSignalError("Тестовый сигнал имеет нулевую энергию")

    fs = signal.sample_rate
    P = fs / lattice.F
    if abs(P - round(P)) > 1e-9:
        raise ParameterError(f"fs/F должно быть целым, получено {P}")
    P = int(round(P))

    t = signal.times
    m_lo = math.floor((t[0] - g.half_span) / lattice.T)
    m_hi = math.ceil((t[-1] + g.half_span) / lattice.T)
    m = np.arange(m_lo, m_hi + 1)

    windows = np.conj(g.evaluate(t[None, :] - m[:, None] * lattice.T)) * signal.samples[None, :]
    pad = (-len(t)) % P
    folded = np.pad(windows, ((0, 0), (0, pad))).reshape(len(m), -1, P).sum(axis=1)
    projected = P * np.sum(np.abs(folded) ** 2) / fs ** 2
    return float(projected / energy)


def gaussian_atoms(
    g: PrototypeFilter,
    lattice: LatticeParams,
    n_trials: int,
    rng: np.random.Generator,
) -> Iterable[BasebandSignal]:
    """
    Случайные гауссовы атомы вне узлов решётки: ширина ρ' ∈ [ρ/1.5, 1.5ρ],
    центр по времени в [-T/2, T/2), по частоте в [0, F).
    """
    rho = g.rho or 1.0
    fs = full_band_rate(g, g, lattice.F)
    rho_min = rho / 1.5
    half = math.sqrt(math.log(1e14) / (math.pi * rho_min))
    limit = 2 * lattice.T + half + g.half_span
    k = np.arange(math.floor(-limit * fs), math.ceil(limit * fs) + 1)
    t = k / fs

    for _ in range(n_trials):
        width = rho * math.exp(rng.uniform(-math.log(1.5), math.log(1.5)))
        t0 = rng.uniform(-lattice.T / 2, lattice.T / 2)
        f0 = rng.uniform(0, lattice.F)
        phase = rng.uniform(0, 2 * np.pi)
        samples = (2 * width) ** 0.25 * np.exp(-np.pi * width * (t - t0) ** 2) \
            * np.exp(1j * (2 * np.pi * f0 * t + phase))
        yield BasebandSignal(samples, fs, t[0])


def frame_bounds_estimate(
    g: PrototypeFilter,
    lattice: LatticeParams,
    n_trials: int = MIN_TRIALS,
    seed: Optional[int] = None,
    signals: Optional[Iterable[BasebandSignal]] = None,
) -> Tuple[float, float]:
    """
    Эмпирические границы фрейма (A, B): минимум и максимум отношения
    энергии проекций к энергии сигнала по набору тестовых сигналов.

    Args:
        g: Прототипный фильтр
        lattice: Решётка
        n_trials: Число случайных сигналов (не меньше 100)
        seed: Зерно генератора
        signals: Свои тестовые сигналы вместо случайных атомов

    Returns:
        (A_est, B_est)
    """
    if signals is None:
        if n_trials < MIN_TRIALS:
            raise ParameterError(f"Нужно не меньше {MIN_TRIALS} тестовых сигналов, получено {n_trials}")
        signals = gaussian_atoms(g, lattice, n_trials, np.random.default_rng(seed))

    ratios = np.array([plancherel_ratio(s, g, lattice) for s in signals])
    if ratios.size == 0:
        raise ParameterError("Нет тестовых сигналов")
    a_est, b_est = float(ratios.min()), float(ratios.max())
    logger.info(f"Границы фрейма ({g.kind.value}, TF={lattice.density:.3f}): A≈{a_est:.6f}, B≈{b_est:.6f}")
    return a_est, b_est
