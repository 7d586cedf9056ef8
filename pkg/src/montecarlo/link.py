"""
Канальное моделирование BER: FMT с ZF и NOFDM с MLSE на поднесущей

Приёмная статистика линейна по переданным символам, поэтому отклики
решётки (Δm, Δn) для каждого луча, сдвига τ на сетке T/n_tau и уровня CFO
считаются один раз через функцию неопределённости, а пачки собираются из них
с точными фазовыми множителями решётки. simulate_burst повторяет ту же
цепочку буквально (синтез, канал, анализ) для проверки.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np
from joblib import Parallel, delayed
from numpy.lib.stride_tricks import sliding_window_view
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from scipy.linalg import eigh, toeplitz

from .channel import ChannelRealization, PowerDelayProfile, sample_taps
from .deployment import default_r_max, sample_own_links
from .equalizers import mlse_equalize, mlse_state_count, zf_equalize
from .modem import QamConstellation
from ..analysis.ber import SUPPORTED_ORDERS, BerCurve
from ..analysis.laplace import sir_to_ratio
from ..analysis.network import CfoPmf, NetworkModel, power_ratio
from ..utils.config import Config
from ..utils.exceptions import ConfigurationError, DimensionError, ParameterError
from ..waveform.filters import FilterSpec, PrototypeFilter
from ..waveform.gabor import analyze, cross_ambiguity, synthesize
from ..waveform.lattice import LatticeParams, SymbolGrid

logger = logging.getLogger(__name__)


class Scheme(str, Enum):
    """Схема передачи и приёма"""
    FMT_ZF = "fmt-zf"
    NOFDM_MLSE = "nofdm-mlse"


class TrialConfig(BaseModel):
    """
    Параметры моделирования одной точки BER.

    Помеха задаётся либо одним агрессором (sir_db, eps), либо пуассоновским
    полем (network, cfo); без обоих канал без помех.
    """
    model_config = ConfigDict(frozen=True)

    scheme: Scheme = Field(Scheme.FMT_ZF, description="Схема: fmt-zf | nofdm-mlse")
    filter: FilterSpec = Field(default_factory=FilterSpec)
    lattice: LatticeParams = Field(default_factory=LatticeParams)
    M: int = Field(4, description="Порядок QAM")
    ebn0_db: float = Field(10.0, description="Eb/N0, дБ")
    noise: bool = Field(True, description="Добавлять тепловой шум")
    sir_db: Optional[float] = Field(None, description="SIR одного агрессора, дБ")
    eps: float = Field(0.0, ge=0, description="CFO одного агрессора, F0")
    network: Optional[NetworkModel] = None
    cfo: Optional[CfoPmf] = None
    r_max: Optional[float] = Field(None, gt=0, description="Внешний радиус поля агрессоров, м")
    bits_target: int = Field(Config.MIN_BITS_TARGET, ge=Config.MIN_BITS_TARGET)
    seed: int = Field(Config.RANDOM_STATE, ge=0)
    symbol_energy: float = Field(1.0, gt=0, description="Энергия символа Es")
    fading: bool = Field(True, description="Рэлеевское замирание; False: AWGN")
    delay_profile: str = Field("flat", pattern="^(flat|exponential)$")
    aggressor_signaling: str = Field("gaussian", pattern="^(gaussian|qam)$", description="Символы агрессоров")
    n_tau: int = Field(Config.TAU_POINTS, ge=16)
    n_sum: int = Field(Config.SUBCARRIER_WINDOW, ge=0)
    stream_symbols: int = Field(Config.STREAM_SYMBOLS, ge=32)
    traceback: int = Field(Config.MLSE_TRACEBACK, ge=1)

    @field_validator("M")
    @classmethod
    def _order(cls, M: int) -> int:
        if M not in SUPPORTED_ORDERS:
            raise ValueError(f"порядок QAM должен быть одним из {SUPPORTED_ORDERS}")
        return M

    @model_validator(mode="after")
    def _scenario(self) -> "TrialConfig":
        if self.sir_db is not None and self.network is not None:
            raise ValueError("задайте либо sir_db, либо network, но не оба")
        return self

    @property
    def scenario(self) -> str:
        if self.network is not None:
            return "ppp"
        return "single" if self.sir_db is not None else "none"


@dataclass(frozen=True)
class TrialResult:
    """Оценка BER с 95% доверительным интервалом"""
    ber: float
    ci_halfwidth: float
    bits: int
    errors: int
    sigma: float
    status: str = "ok"

    def agreement(self, analytic: float) -> float:
        """|ber - p| / σ, σ = sqrt(p(1 - p)/bits) при аналитическом p."""
        sigma = math.sqrt(max(analytic * (1 - analytic), 0.0) / self.bits)
        if sigma == 0:
            return 0.0 if self.ber == analytic else math.inf
        return abs(self.ber - analytic) / sigma


@dataclass(frozen=True)
class AggressorBurst:
    """Пачка агрессора для одной пачки жертвы: символы (2K-1, N), лучи, индексы τ и CFO, амплитуда"""
    symbols: np.ndarray
    taps: np.ndarray
    tau_index: int
    eps_index: int
    amplitude: float


@dataclass(frozen=True, eq=False)
class ResponseKernels:
    """
    Отклики решётки на измеряемую ячейку (0, n0).

    desired[l, Δm, Δn] = A(ΔmT + τ_l, ΔnF)·exp(-j2π(n0 + Δn)Fτ_l)
    aggressor[l, τ, e, Δm, Δn] = A(ΔmT + τ + τ_l, ΔnF + ε_e)·exp(-j2π((n0 + Δn)F + ε_e)τ_l)
    """
    lags: np.ndarray
    offsets: np.ndarray
    desired: np.ndarray
    aggressor: np.ndarray
    eps_levels: np.ndarray
    n_tau: int
    n0: int

    @classmethod
    def build(
        cls,
        g_tx: PrototypeFilter,
        g_rx: PrototypeFilter,
        lattice: LatticeParams,
        delay_indices: np.ndarray,
        eps_levels: Sequence[float],
        lags: np.ndarray,
        n_tau: int = Config.TAU_POINTS,
        n_sum: int = Config.SUBCARRIER_WINDOW,
        n0: Optional[int] = None,
    ) -> "ResponseKernels":
        n0 = lattice.N // 2 if n0 is None else n0
        offsets = np.arange(max(-n0, -n_sum), min(lattice.N - 1 - n0, n_sum) + 1)
        eps_levels = np.asarray(eps_levels, dtype=float)
        delay_indices = np.asarray(delay_indices, dtype=int)
        step = lattice.T / n_tau

        j_min = int(lags.min()) * n_tau
        j_max = int(lags.max()) * n_tau + n_tau - 1 + int(delay_indices.max())
        times = np.arange(j_min, j_max + 1) * step
        eps_all = np.concatenate([[0.0], eps_levels])
        freqs = (offsets[None, :] * lattice.F + eps_all[:, None]).ravel()
        table = cross_ambiguity(g_tx, g_rx, times, freqs).reshape(times.size, eps_all.size, offsets.size)

        carriers = (n0 + offsets) * lattice.F
        n_l = delay_indices.size
        desired = np.empty((n_l, lags.size, offsets.size), dtype=complex)
        aggressor = np.empty((n_l, n_tau, eps_levels.size, lags.size, offsets.size), dtype=complex)
        for l, d in enumerate(delay_indices):
            tau_l = d * step
            rows = lags * n_tau + d - j_min
            desired[l] = table[rows, 0, :] * np.exp(-2j * np.pi * carriers * tau_l)[None, :]
            for e, eps in enumerate(eps_levels):
                phase = np.exp(-2j * np.pi * (carriers + eps) * tau_l)[None, :]
                for t in range(n_tau):
                    aggressor[l, t, e] = table[rows + t, 1 + e, :] * phase

        logger.debug(
            f"Отклики: {lags.size} сдвигов символа, {offsets.size} поднесущих, "
            f"{n_l} лучей, {eps_levels.size} уровней CFO"
        )
        return cls(lags, offsets, desired, aggressor, eps_levels, n_tau, n0)

    @property
    def center_lag(self) -> int:
        return int(np.flatnonzero(self.lags == 0)[0])

    @property
    def center_offset(self) -> int:
        return int(np.flatnonzero(self.offsets == 0)[0])

    def desired_response(self, taps: np.ndarray) -> np.ndarray:
        """Σ_l γ_l·desired[l] для массива лучей формы (..., L)."""
        return np.einsum("...l,lmd->...md", taps, self.desired)

    def aggressor_response(self, taps: np.ndarray, tau_index, eps_index) -> np.ndarray:
        """Отклик агрессоров: taps (B, L), индексы (B,) -> (B, Δm, Δn)."""
        kernels = self.aggressor[:, np.atleast_1d(tau_index), np.atleast_1d(eps_index)]
        return np.einsum("bl,lbmd->bmd", np.atleast_2d(taps), kernels)


def _stream_response(symbols: np.ndarray, response: np.ndarray, phase: np.ndarray, width: int) -> np.ndarray:
    """
    y[u, m] = Σ_{Δm, Δn} d[u, m + Δm, Δn]·H[u, Δm, Δn]·phase[u, m, Δn].

    symbols дополнены width символами с каждой стороны.
    """
    windows = sliding_window_view(symbols, 2 * width + 1, axis=1)
    return np.einsum("usdk,ukd,usd->us", windows, response, phase)


class LinkSimulator:
    """
    Моделирование канального уровня для одной конфигурации.

    Отклики и корреляция шума строятся при первом запуске и
    переиспользуются для всех точек Eb/N0.
    """

    def __init__(self, cfg: TrialConfig):
        """
        Args:
            cfg: Параметры моделирования
        """
        self.cfg = cfg
        self.lattice = cfg.lattice
        self.constellation = QamConstellation(cfg.M)
        self.g = cfg.filter.build()
        self.n0 = self.lattice.N // 2
        if cfg.delay_profile == "exponential":
            self.pdp = PowerDelayProfile.exponential(spacing=self.lattice.T / 16)
        else:
            self.pdp = PowerDelayProfile.flat()
        self.delay_indices = self.pdp.delay_indices(self.lattice.T, cfg.n_tau)

        if cfg.scheme is Scheme.NOFDM_MLSE:
            n_states = mlse_state_count(cfg.M)
            if n_states > Config.MLSE_MAX_STATES:
                raise ConfigurationError(
                    f"MLSE для QAM-{cfg.M}: {n_states} состояний больше предела {Config.MLSE_MAX_STATES}"
                )
            self.width = max(3, math.ceil(2 * self.g.half_span / self.lattice.T))
            if cfg.stream_symbols <= 2 * (self.width + 3):
                raise ConfigurationError(
                    f"Поток из {cfg.stream_symbols} символов короче краевых зон 2·({self.width} + 3)"
                )
        else:
            self.width = self.lattice.K - 1

        if cfg.scenario == "ppp":
            self.cfo = cfg.cfo or CfoPmf.aligned()
            self.r_max = cfg.r_max or default_r_max(cfg.network)
            if self.r_max <= cfg.network.d_min:
                raise ConfigurationError(f"r_max ({self.r_max}) должен превышать d_min ({cfg.network.d_min})")
        else:
            self.cfo = CfoPmf(eps_levels=[cfg.eps], probs=[1.0])
            self.r_max = None

        self._kernels: Optional[ResponseKernels] = None
        self._noise_root: Optional[np.ndarray] = None

    @property
    def lags(self) -> np.ndarray:
        return np.arange(-self.width, self.width + 1)

    def build(self) -> None:
        """Расчёт откликов решётки и корня ковариации шума."""
        self._kernels = ResponseKernels.build(
            self.g, self.g, self.lattice, self.delay_indices, self.cfo.eps_levels,
            self.lags, self.cfg.n_tau, self.cfg.n_sum, self.n0,
        )
        if self.cfg.scheme is Scheme.NOFDM_MLSE:
            S = self.cfg.stream_symbols
            lag_times = np.arange(S) * self.lattice.T
            corr = cross_ambiguity(self.g, self.g, lag_times, [0.0])[:, 0]
            # R[i, j] = <g(t - jT), g(t - iT)> = c[j - i]
            cov = toeplitz(np.conj(corr), corr)
            w, V = eigh(cov)
            self._noise_root = (V * np.sqrt(np.clip(w, 0, None))) @ V.conj().T
        logger.info(
            f"Моделирование {self.cfg.scheme.value}: {self.cfg.filter.kind.value}, "
            f"F={self.lattice.F}, T={self.lattice.T}, N={self.lattice.N}, сценарий {self.cfg.scenario}"
        )

    def _ensure_built(self) -> None:
        if self._kernels is None:
            self.build()

    @property
    def kernels(self) -> ResponseKernels:
        self._ensure_built()
        return self._kernels

    def noise_variance(self, ebn0_db: float) -> float:
        """N0 = Es / (log2(M)·Eb/N0)."""
        if not self.cfg.noise:
            return 0.0
        return self.cfg.symbol_energy / (self.constellation.bits_per_symbol * 10 ** (ebn0_db / 10))

    def _draw_taps(self, rng: np.random.Generator, size: int) -> np.ndarray:
        if self.cfg.fading:
            return sample_taps(self.pdp, rng, size)
        return np.tile(np.sqrt(np.asarray(self.pdp.powers, dtype=complex)), (size, 1))

    def _aggressor_symbols(self, rng: np.random.Generator, shape) -> np.ndarray:
        """
        Символы агрессоров единичной средней энергии.

        При gaussian помеха при заданных замираниях агрессора гауссова,
        что совпадает с моделью преобразования Лапласа.
        """
        if self.cfg.aggressor_signaling == "qam":
            return self.constellation.modulate(self.constellation.random_indices(rng, shape))
        return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2)

    def _draw_aggressors(self, rng: np.random.Generator, units: int):
        """
        Агрессоры для units пачек (потоков): владелец, амплитуда, лучи, индексы τ и CFO.
        """
        es = self.cfg.symbol_energy
        if self.cfg.scenario == "single":
            owner = np.arange(units)
            amplitude = np.full(units, math.sqrt(sir_to_ratio(self.cfg.sir_db) * es))
            eps_index = np.zeros(units, dtype=int)
        else:
            net: NetworkModel = self.cfg.network
            counts = rng.poisson(net.lam * math.pi * (self.r_max ** 2 - net.d_min ** 2), units)
            owner = np.repeat(np.arange(units), counts)
            distances = np.sqrt(rng.uniform(net.d_min ** 2, self.r_max ** 2, owner.size))
            own = sample_own_links(net, rng, owner.size)
            ratio = np.atleast_1d(power_ratio(net.D, own, distances, net)) if owner.size else np.empty(0)
            amplitude = np.sqrt(ratio * es)
            eps_index = rng.choice(len(self.cfo.eps_levels), size=owner.size, p=np.asarray(self.cfo.probs))
        tau_index = rng.integers(0, self.cfg.n_tau, owner.size)
        taps = self._draw_taps(rng, owner.size)
        return owner, amplitude, taps, tau_index, eps_index

    def _burst_batch(self, rng: np.random.Generator, n0_var: float, size: int) -> Tuple[int, int]:
        """Пачки FMT: измеряется центральный символ m = 0 поднесущей n0."""
        k = self.kernels
        points = self.constellation.points
        es = self.cfg.symbol_energy
        shape = (size, k.lags.size, k.offsets.size)

        sent = self.constellation.random_indices(rng, shape)
        response = k.desired_response(self._draw_taps(rng, size))
        y = math.sqrt(es) * np.einsum("bmd,bmd->b", points[sent], response)

        if self.cfg.scenario != "none":
            owner, amplitude, taps, tau_index, eps_index = self._draw_aggressors(rng, size)
            interference = np.zeros(size, dtype=complex)
            for start in range(0, owner.size, Config.AGGRESSOR_CHUNK):
                part = slice(start, start + Config.AGGRESSOR_CHUNK)
                h = k.aggressor_response(taps[part], tau_index[part], eps_index[part])
                symbols = self._aggressor_symbols(rng, h.shape)
                values = amplitude[part] * np.einsum("bmd,bmd->b", symbols, h)
                interference += np.bincount(owner[part], weights=values.real, minlength=size) \
                    + 1j * np.bincount(owner[part], weights=values.imag, minlength=size)
            y = y + interference

        if n0_var > 0:
            y = y + math.sqrt(n0_var / 2) * (rng.standard_normal(size) + 1j * rng.standard_normal(size))

        gain = math.sqrt(es) * response[:, k.center_lag, k.center_offset]
        decided = self.constellation.demodulate(zf_equalize(y, gain))
        errors = self.constellation.bit_errors(sent[:, k.center_lag, k.center_offset], decided)
        return errors, size * self.constellation.bits_per_symbol

    def _stream_batch(self, rng: np.random.Generator, n0_var: float, size: int) -> Tuple[int, int]:
        """Потоки NOFDM: MLSE по измеряемой поднесущей, остальная ICI учитывается как шум."""
        k = self.kernels
        points = self.constellation.points
        es = self.cfg.symbol_energy
        S, W = self.cfg.stream_symbols, self.width
        m_times = np.arange(S) * self.lattice.T
        shape = (size, S + 2 * W, k.offsets.size)

        sent = self.constellation.random_indices(rng, shape)
        response = k.desired_response(self._draw_taps(rng, size))
        phase = np.exp(2j * np.pi * np.outer(m_times, k.offsets * self.lattice.F))
        y = math.sqrt(es) * _stream_response(points[sent], response, np.broadcast_to(phase, (size,) + phase.shape), W)

        if self.cfg.scenario != "none":
            owner, amplitude, taps, tau_index, eps_index = self._draw_aggressors(rng, size)
            for start in range(0, owner.size, Config.BATCH_STREAMS):
                part = slice(start, start + Config.BATCH_STREAMS)
                n_part = owner[part].size
                h = k.aggressor_response(taps[part], tau_index[part], eps_index[part])
                symbols = self._aggressor_symbols(rng, (n_part,) + shape[1:])
                freq = k.offsets[None, :] * self.lattice.F + k.eps_levels[eps_index[part]][:, None]
                agg_phase = np.exp(2j * np.pi * m_times[None, :, None] * freq[:, None, :])
                values = amplitude[part][:, None] * _stream_response(symbols, h, agg_phase, W)
                np.add.at(y, owner[part], values)

        if n0_var > 0:
            white = rng.standard_normal((size, S)) + 1j * rng.standard_normal((size, S))
            y = y + math.sqrt(n0_var / 2) * white @ self._noise_root.T

        errors = 0
        bits = 0
        c_lag, c_off = k.center_lag, k.center_offset
        for u in range(size):
            column = response[u, :, c_off]
            peak = int(k.lags[np.argmax(np.abs(column))])
            taps7 = np.zeros(Config.MLSE_TAPS, dtype=complex)
            for i in range(Config.MLSE_TAPS):
                lag = peak + 3 - i
                if -W <= lag <= W:
                    taps7[i] = math.sqrt(es) * column[lag + W]
            # s[t] = d[t + peak + 3]; d[j] хранится в sent[u, j + W]
            decided = mlse_equalize(y[u], taps7, self.constellation, self.cfg.traceback)
            j = np.arange(W + 3, S - W - 3)
            errors += self.constellation.bit_errors(sent[u, j + W, c_off], decided[j - peak - 3])
            bits += j.size * self.constellation.bits_per_symbol
        return errors, bits

    def _units_per_batch(self) -> int:
        return Config.BATCH_STREAMS if self.cfg.scheme is Scheme.NOFDM_MLSE else Config.BATCH_BURSTS

    def _bits_per_unit(self) -> int:
        per_symbol = self.constellation.bits_per_symbol
        if self.cfg.scheme is Scheme.NOFDM_MLSE:
            return (self.cfg.stream_symbols - 2 * (self.width + 3)) * per_symbol
        return per_symbol

    def run_batch(self, batch: int, ebn0_db: float) -> Tuple[int, int]:
        """Одна партия с генератором SeedSequence(seed, spawn_key=(batch,))."""
        rng = np.random.default_rng(np.random.SeedSequence(self.cfg.seed, spawn_key=(batch,)))
        n0_var = self.noise_variance(ebn0_db)
        if self.cfg.scheme is Scheme.NOFDM_MLSE:
            return self._stream_batch(rng, n0_var, self._units_per_batch())
        return self._burst_batch(rng, n0_var, self._units_per_batch())

    def run(self, ebn0_db: Optional[float] = None) -> TrialResult:
        """BER в точке Eb/N0 (по умолчанию из конфигурации)."""
        self._ensure_built()
        ebn0_db = self.cfg.ebn0_db if ebn0_db is None else ebn0_db
        per_batch = self._units_per_batch() * self._bits_per_unit()
        n_batches = max(1, math.ceil(self.cfg.bits_target / per_batch))

        counts = Parallel(n_jobs=Config.SIM_THREADS)(
            delayed(self.run_batch)(b, ebn0_db) for b in range(n_batches)
        )
        errors = sum(c[0] for c in counts)
        bits = sum(c[1] for c in counts)
        return summarize(errors, bits, ebn0_db)

    def burst_statistic(
        self,
        victim: SymbolGrid,
        victim_channel: ChannelRealization,
        aggressors: Sequence[AggressorBurst] = (),
    ) -> complex:
        """Статистика ячейки (0, n0) одной пачки FMT без шума по откликам решётки."""
        k = self.kernels
        if victim.values.shape[0] != k.lags.size:
            raise DimensionError(f"Пачка из {victim.values.shape[0]} символов, отклики на {k.lags.size} сдвигов")
        columns = self.n0 + k.offsets
        y = np.sum(victim.values[:, columns] * k.desired_response(victim_channel.taps))
        for a in aggressors:
            h = k.aggressor_response(a.taps[None, :], np.array([a.tau_index]), np.array([a.eps_index]))[0]
            y += a.amplitude * np.sum(a.symbols[:, columns] * h)
        return complex(y)


def summarize(errors: int, bits: int, ebn0_db: float = float("nan")) -> TrialResult:
    """BER, σ = sqrt(p(1-p)/bits) и полуширина 1.96σ."""
    ber = errors / bits
    sigma = math.sqrt(ber * (1 - ber) / bits)
    status = "ok"
    if errors == 0:
        status = "warning"
        logger.warning(f"Eb/N0={ebn0_db:.1f} дБ: ни одной ошибки на {bits} бит, интервал вырожден")
    else:
        logger.debug(f"Eb/N0={ebn0_db:.1f} дБ: BER={ber:.4e} ({errors}/{bits})")
    return TrialResult(ber, Config.CONFIDENCE_Z * sigma, bits, errors, sigma, status)


def run_trial(cfg: TrialConfig) -> TrialResult:
    return LinkSimulator(cfg).run()


def ber_sweep(cfg: TrialConfig, ebn0_db: Sequence[float]) -> BerCurve:
    """Кривая BER по сетке Eb/N0 с общими откликами и общими случайными числами."""
    simulator = LinkSimulator(cfg)
    results: List[TrialResult] = []
    for point in ebn0_db:
        results.append(simulator.run(point))
        logger.info(f"Eb/N0={point:.1f} дБ: BER={results[-1].ber:.4e} ± {results[-1].ci_halfwidth:.1e}")
    return BerCurve(
        np.asarray(ebn0_db, dtype=float),
        np.array([r.ber for r in results]),
        ci_halfwidth=np.array([r.ci_halfwidth for r in results]),
        sigma=np.array([r.sigma for r in results]),
        bits=np.array([r.bits for r in results]),
        errors=np.array([r.errors for r in results]),
        meta={"scheme": cfg.scheme.value, "M": cfg.M, "seed": cfg.seed},
    )


def _delayed_copy(
    grid: SymbolGrid,
    g: PrototypeFilter,
    lattice: LatticeParams,
    sample_rate: float,
    half_span: float,
    tau: float,
    eps: float,
    delay: float,
):
    """s(t - τ_l) для пачки со сдвигами τ, ε: пересинтез с поворотом символов."""
    rotation = np.exp(-2j * np.pi * np.arange(lattice.N) * lattice.F * delay)
    shifted = SymbolGrid(grid.values * rotation[None, :], grid.K)
    signal = synthesize(shifted, g, lattice, sample_rate, tau=tau + delay, eps=eps, half_span=half_span)
    return signal.scaled(np.exp(-2j * np.pi * eps * delay))


def simulate_burst(
    g_tx: PrototypeFilter,
    g_rx: PrototypeFilter,
    lattice: LatticeParams,
    victim: SymbolGrid,
    victim_channel: ChannelRealization,
    aggressors: Sequence[Tuple[SymbolGrid, ChannelRealization, float, float, float]] = (),
    n0: Optional[int] = None,
    sample_rate: Optional[float] = None,
) -> complex:
    """
    Буквальная цепочка для одной пачки FMT без шума: синтез, многолучевой канал,
    сумма с агрессорами (символы, канал, амплитуда, τ, ε), анализ, ячейка (0, n0).
    """
    n0 = lattice.N // 2 if n0 is None else n0
    fs = sample_rate or float(max(g_tx.oversampling, g_rx.oversampling)
                              * max(1, math.ceil(lattice.N * lattice.F + max(g_tx.bandwidth, g_rx.bandwidth)
                                                 + max((a[4] for a in aggressors), default=0.0))))
    half = max(g_tx.half_span, g_rx.half_span)

    received = None
    sources = [(victim, victim_channel, 1.0, 0.0, 0.0)] + list(aggressors)
    for grid, channel, amplitude, tau, eps in sources:
        if tau + float(np.max(channel.delays)) >= lattice.T:
            raise ParameterError("Сдвиг пачки с задержкой луча должен быть меньше T")
        for gamma, delay in zip(channel.taps, channel.delays):
            part = _delayed_copy(grid, g_tx, lattice, fs, half, tau, eps, delay).scaled(amplitude * gamma)
            received = part if received is None else received + part
    return analyze(received, g_rx, lattice).at(0, n0)
