"""
Системы Габора: сдвиги, синтез, анализ и функция неопределённости

Все интегралы считаются суммами Римана на равномерной сетке t_k = k / fs
(единицы T0), так что 0 и сдвиги на mT при целом T·fs лежат на сетке.
"""
import logging
import math
from typing import Optional, Tuple

import numpy as np

from .filters import PrototypeFilter
from .lattice import BasebandSignal, LatticeParams, SymbolGrid
from ..utils.exceptions import ParameterError, SignalLengthError

logger = logging.getLogger(__name__)

_CHUNK = 64


def sample_rate_for(lattice: LatticeParams, Q: int) -> float:
    """Частота дискретизации Q·max(1, ceil(N·F)) отсчётов на T0."""
    return float(Q * max(1, math.ceil(lattice.N * lattice.F - 1e-9)))


def burst_axis(lattice: LatticeParams, sample_rate: float, half_span: float) -> Tuple[float, int]:
    """
    Общая временная ось пачки из 2K-1 символов с хвостами фильтра
    и запасом T справа под временной сдвиг τ ∈ [0, T).

    Returns:
        (t_start, число отсчётов)
    """
    lo = -(lattice.K - 1) * lattice.T - half_span
    hi = (lattice.K - 1) * lattice.T + half_span + lattice.T
    k_lo = math.floor(lo * sample_rate)
    k_hi = math.ceil(hi * sample_rate)
    return k_lo / sample_rate, k_hi - k_lo + 1


def _axis(t_start: float, length: int, sample_rate: float) -> np.ndarray:
    k0 = round(t_start * sample_rate)
    return (k0 + np.arange(length)) / sample_rate


def _resolve_axis(g: PrototypeFilter, lattice: LatticeParams, sample_rate: Optional[float],
                  half_span: Optional[float]) -> Tuple[float, float, int]:
    fs = sample_rate or sample_rate_for(lattice, g.oversampling)
    t_start, length = burst_axis(lattice, fs, half_span if half_span is not None else g.half_span)
    return fs, t_start, length


def modulated_shift(
    g: PrototypeFilter,
    m: int,
    n: int,
    lattice: LatticeParams,
    tau: float = 0.0,
    eps: float = 0.0,
    sample_rate: Optional[float] = None,
    half_span: Optional[float] = None,
) -> BasebandSignal:
    """
    Базисная функция g(t - mT - τ)·exp(j2π(nF + ε)t) на общей оси пачки.

    Args:
        g: Прототипный фильтр
        m, n: Индексы символа и поднесущей
        lattice: Решётка
        tau: Дополнительный временной сдвиг (T0)
        eps: Дополнительный частотный сдвиг (F0)
        sample_rate: Частота дискретизации (по умолчанию sample_rate_for)
        half_span: Полуширина хвостов оси (по умолчанию g.half_span)
    """
    if not -lattice.K < m < lattice.K:
        raise ParameterError(f"Индекс символа m={m} вне [{-lattice.K + 1}, {lattice.K - 1}]")
    if not 0 <= n < lattice.N:
        raise ParameterError(f"Индекс поднесущей n={n} вне [0, {lattice.N - 1}]")

    fs, t_start, length = _resolve_axis(g, lattice, sample_rate, half_span)
    t = _axis(t_start, length, fs)
    samples = g.evaluate(t - m * lattice.T - tau) * np.exp(2j * np.pi * (n * lattice.F + eps) * t)
    return BasebandSignal(samples.astype(complex), fs, t[0])


def synthesize(
    grid: SymbolGrid,
    g_tx: PrototypeFilter,
    lattice: LatticeParams,
    sample_rate: Optional[float] = None,
    tau: float = 0.0,
    eps: float = 0.0,
    half_span: Optional[float] = None,
) -> BasebandSignal:
    """
    Синтез s(t) = Σ d[m][n]·g(t - mT - τ)·exp(j2π(nF + ε)t).

    Линеен по сетке символов; tau и eps задают сдвиг всей пачки (мешающий передатчик).
    """
    grid.check(lattice)
    fs, t_start, length = _resolve_axis(g_tx, lattice, sample_rate, half_span)
    t = _axis(t_start, length, fs)

    m = lattice.time_indices
    pulses = g_tx.evaluate(t[None, :] - m[:, None] * lattice.T - tau)
    carriers = np.exp(2j * np.pi * lattice.F * np.arange(lattice.N)[:, None] * t[None, :])
    per_symbol = grid.values @ carriers
    samples = np.sum(pulses * per_symbol, axis=0) * np.exp(2j * np.pi * eps * t)
    return BasebandSignal(samples, fs, t[0])


def analyze(signal: BasebandSignal, g_rx: PrototypeFilter, lattice: LatticeParams) -> SymbolGrid:
    """
    Корреляционный приём: d̂[m][n] = <s, g_rx(t - mT)·exp(j2πnFt)>.

    Raises:
        SignalLengthError: сигнал не покрывает окно анализа
    """
    need_lo = -(lattice.K - 1) * lattice.T - g_rx.half_span
    need_hi = (lattice.K - 1) * lattice.T + g_rx.half_span
    step = 1 / signal.sample_rate
    if signal.t_start > need_lo + step or signal.t_end < need_hi - step:
        raise SignalLengthError(
            f"Сигнал [{signal.t_start:.3f}, {signal.t_end:.3f}] короче окна анализа "
            f"[{need_lo:.3f}, {need_hi:.3f}]"
        )

    t = signal.times
    m = lattice.time_indices
    windows = np.conj(g_rx.evaluate(t[None, :] - m[:, None] * lattice.T))
    carriers = np.exp(-2j * np.pi * lattice.F * np.arange(lattice.N)[None, :] * t[:, None])
    values = ((windows * signal.samples[None, :]) @ carriers) / signal.sample_rate
    return SymbolGrid(values, lattice.K)


def default_ambiguity_rate(g_tx: PrototypeFilter, g_rx: PrototypeFilter, max_freq: float) -> float:
    """Частота дискретизации без наложения для модуляции до max_freq."""
    Q = max(g_tx.oversampling, g_rx.oversampling)
    width = max(g_tx.bandwidth, g_rx.bandwidth)
    return float(Q * max(1, math.ceil(abs(max_freq) + width)))


def _rx_axis(g_rx: PrototypeFilter, sample_rate: float) -> np.ndarray:
    k_lo = math.floor(-g_rx.half_span * sample_rate)
    k_hi = math.ceil(g_rx.half_span * sample_rate)
    return np.arange(k_lo, k_hi + 1) / sample_rate


def cross_ambiguity(
    g_tx: PrototypeFilter,
    g_rx: PrototypeFilter,
    time_offsets,
    freq_offsets,
    sample_rate: Optional[float] = None,
) -> np.ndarray:
    """
    Поверхность A(Δt, Δf) = <g_tx(t - Δt)·exp(j2πΔf·t), g_rx(t)>.

    Returns:
        Массив формы (len(time_offsets), len(freq_offsets))
    """
    offsets = np.atleast_1d(np.asarray(time_offsets, dtype=float))
    freqs = np.atleast_1d(np.asarray(freq_offsets, dtype=float))
    if freqs.size == 0 or offsets.size == 0:
        return np.zeros((offsets.size, freqs.size), dtype=complex)
    fs = sample_rate or default_ambiguity_rate(g_tx, g_rx, float(np.max(np.abs(freqs))))

    t = _rx_axis(g_rx, fs)
    rx_conj = np.conj(g_rx.evaluate(t))
    carriers = np.exp(2j * np.pi * t[:, None] * freqs[None, :])

    out = np.empty((offsets.size, freqs.size), dtype=complex)
    for start in range(0, offsets.size, _CHUNK):
        chunk = offsets[start:start + _CHUNK]
        products = g_tx.evaluate(t[None, :] - chunk[:, None]) * rx_conj[None, :]
        out[start:start + _CHUNK] = products @ carriers / fs
    return out


def ambiguity(
    g_tx: PrototypeFilter,
    g_rx: PrototypeFilter,
    dt: float,
    df: float,
    sample_rate: Optional[float] = None,
) -> complex:
    """Значение функции неопределённости в одной точке (Δt, Δf)."""
    return complex(cross_ambiguity(g_tx, g_rx, [dt], [df], sample_rate)[0, 0])


def full_band_rate(g_tx: PrototypeFilter, g_rx: PrototypeFilter, F: float) -> float:
    """Частота fs = P·F с целым числом P классов поднесущих."""
    Q = max(g_tx.oversampling, g_rx.oversampling)
    width = max(g_tx.bandwidth, g_rx.bandwidth)
    return float(Q * max(1, math.ceil(width / F)) * F)


def full_band_energy(
    g_tx: PrototypeFilter,
    g_rx: PrototypeFilter,
    time_offsets,
    eps: float,
    F: float,
    sample_rate: Optional[float] = None,
) -> np.ndarray:
    """
    Σ по всем дискретным классам поднесущих n of |A(Δt, nF + ε)|².

    Сумма по P = fs/F классам вычисляется свёрткой отсчётов по вычетам
    индекса mod P (равенство Парсеваля для ДПФ длины P).
    """
    fs = sample_rate or full_band_rate(g_tx, g_rx, F)
    P = fs / F
    if abs(P - round(P)) > 1e-9:
        raise ParameterError(f"fs/F должно быть целым, получено {P}")
    P = int(round(P))

    offsets = np.atleast_1d(np.asarray(time_offsets, dtype=float))
    t = _rx_axis(g_rx, fs)
    weight = np.conj(g_rx.evaluate(t)) * np.exp(2j * np.pi * eps * t)
    pad = (-len(t)) % P

    out = np.empty(offsets.size)
    for start in range(0, offsets.size, _CHUNK):
        chunk = offsets[start:start + _CHUNK]
        products = g_tx.evaluate(t[None, :] - chunk[:, None]) * weight[None, :]
        products = np.pad(products, ((0, 0), (0, pad)))
        folded = products.reshape(len(chunk), -1, P).sum(axis=1)
        out[start:start + _CHUNK] = P * np.sum(np.abs(folded) ** 2, axis=1) / fs ** 2
    return out
