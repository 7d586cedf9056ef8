"""
Вероятность битовой ошибки QAM: AWGN и усреднение по замираниям и помехам через преобразование Лапласа
"""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from joblib import Parallel, delayed
from scipy.special import erfc

from .quadrature import erfc_expectation
from ..utils.exceptions import ParameterError
from ..utils.io import write_csv

logger = logging.getLogger(__name__)

SUPPORTED_ORDERS = (4, 16, 64)

Laplace = Callable[[float], float]


def gray_qam_coefficients(M: int) -> Dict[int, Fraction]:
    """
    Точные коэффициенты w_i разложения BER квадратной QAM с кодом Грея
    по erfc((2i+1)·x). Нулевые коэффициенты опускаются.
    """
    sqrt_m = math.isqrt(M)
    if sqrt_m * sqrt_m != M or M < 4 or sqrt_m & (sqrt_m - 1):
        raise ParameterError(f"Порядок QAM должен быть квадратом степени двойки, получено {M}")
    bits_per_axis = sqrt_m.bit_length() - 1

    coefficients: Dict[int, Fraction] = {}
    for k in range(1, bits_per_axis + 1):
        level = 2 ** (k - 1)
        for i in range(sqrt_m - sqrt_m // 2 ** k):
            sign = -1 if (i * level // sqrt_m) % 2 else 1
            weight = level - (2 * i * level + sqrt_m) // (2 * sqrt_m)
            coefficients[i] = coefficients.get(i, Fraction(0)) + Fraction(sign * weight, sqrt_m * bits_per_axis)
    return {i: w for i, w in sorted(coefficients.items()) if w != 0}


@dataclass(frozen=True)
class ModQam:
    """Квадратная QAM: порядок M и коэффициенты w_i при индексах i"""
    M: int
    weights: Tuple[float, ...]
    indices: Tuple[int, ...]
    exact_weights: Tuple[Fraction, ...] = field(repr=False, default=())

    @classmethod
    def from_order(cls, M: int) -> "ModQam":
        if M not in SUPPORTED_ORDERS:
            raise ParameterError(f"Неподдерживаемый порядок QAM: {M}, допустимы {SUPPORTED_ORDERS}")
        coefficients = gray_qam_coefficients(M)
        exact = tuple(coefficients.values())
        if sum(exact) != Fraction(1, 2):
            raise ParameterError(f"Сумма коэффициентов QAM-{M} равна {sum(exact)}, ожидалось 1/2")
        return cls(M, tuple(float(w) for w in exact), tuple(coefficients.keys()), exact)

    @property
    def bits_per_symbol(self) -> int:
        return int(math.log2(self.M))

    def snr_from_ebn0(self, ebn0_linear: float) -> float:
        """Нормированное ОСШ из формулы AWGN: 3·log2(M)·Eb/N0 / (M - 1)."""
        return 3 * self.bits_per_symbol * ebn0_linear / (self.M - 1)


def qam_awgn_ber(mod: ModQam, snr_linear: float) -> float:
    """
    BER в канале AWGN: Σ_i w_i·erfc((2i+1)·sqrt(snr/2)).

    Args:
        mod: Модуляция
        snr_linear: Нормированное ОСШ (для QAM-4 равно 2·Eb/N0)
    """
    if snr_linear < 0:
        raise ParameterError(f"ОСШ должно быть неотрицательным: {snr_linear}")
    value = sum(w * erfc((2 * i + 1) * math.sqrt(snr_linear / 2)) for w, i in zip(mod.weights, mod.indices))
    return float(min(max(value, 0.0), 0.5))


def erfc_laplace_rhs(mgf: Laplace, a: float, b: float) -> float:
    """
    E[erfc(sqrt(x / (a·y + b)))] для x ~ Exp(1),
    выраженная через преобразование Лапласа y.
    """
    if a < 0 or b < 0:
        raise ParameterError(f"Параметры a, b должны быть неотрицательными: a={a}, b={b}")
    if abs(mgf(0.0) - 1.0) > 1e-9:
        raise ParameterError(f"Преобразование Лапласа в нуле должно быть 1, получено {mgf(0.0)}")
    return erfc_expectation(mgf, a, b)


def avg_ber(ebn0_linear: float, mod: ModQam, laplace: Laplace) -> float:
    """
    Средняя BER при рэлеевском замирании полезного сигнала и помехе
    с преобразованием Лапласа L_I.

    BER = 1/2 - (1/√π)·Σ_i w_i ∫ z^{-1/2}·exp(-z(1 + a_i·(M-1)/(3·log2 M)/ebn0))·L_I(a_i·z) dz,
    a_i = 2/(2i+1)².
    """
    if ebn0_linear < 0:
        raise ParameterError(f"Eb/N0 должно быть неотрицательным: {ebn0_linear}")
    if abs(laplace(0.0) - 1.0) > 1e-9:
        raise ParameterError(f"Преобразование Лапласа в нуле должно быть 1, получено {laplace(0.0)}")

    noise_scale = (mod.M - 1) / (3 * mod.bits_per_symbol)
    total = 0.0
    for w, i in zip(mod.weights, mod.indices):
        a = 2.0 / (2 * i + 1) ** 2
        b = a * noise_scale / ebn0_linear if ebn0_linear > 0 else math.inf
        total += w * erfc_expectation(laplace, a, b)
    return float(min(max(total, 0.0), 0.5))


def rayleigh_ber(ebn0_linear) -> np.ndarray:
    """BER QAM-4 в рэлеевском канале без помех: (1 - sqrt(γ/(1+γ)))/2."""
    gamma = np.asarray(ebn0_linear, dtype=float)
    return 0.5 * (1 - np.sqrt(gamma / (1 + gamma)))


def no_interference(_: float) -> float:
    """L_I ≡ 1."""
    return 1.0


def db_to_linear(value_db):
    return 10 ** (np.asarray(value_db, dtype=float) / 10)


@dataclass(eq=False)
class BerCurve:
    """Кривая BER(Eb/N0); для Монте-Карло также полуширина доверительного интервала и счётчики"""
    ebn0_db: np.ndarray
    ber: np.ndarray
    ci_halfwidth: Optional[np.ndarray] = None
    sigma: Optional[np.ndarray] = None
    bits: Optional[np.ndarray] = None
    errors: Optional[np.ndarray] = None
    meta: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        self.ebn0_db = np.asarray(self.ebn0_db, dtype=float)
        self.ber = np.asarray(self.ber, dtype=float)
        if self.ebn0_db.shape != self.ber.shape:
            raise ParameterError("Длины сетки Eb/N0 и значений BER не совпадают")
        # оценка Монте-Карло при малом числе бит может превысить 1/2
        upper = 1.0 if self.is_empirical else 0.5 + 1e-12
        if np.any(self.ber < 0) or np.any(self.ber > upper):
            raise ParameterError(f"Значения BER должны лежать в [0, {upper:.3g}]")

    @property
    def is_empirical(self) -> bool:
        return self.bits is not None

    def is_non_increasing(self, tolerance: float = 0.0) -> bool:
        order = np.argsort(self.ebn0_db)
        return bool(np.all(np.diff(self.ber[order]) <= tolerance))

    def to_frame(self) -> pd.DataFrame:
        data = {"ebn0_db": self.ebn0_db, "ber": self.ber}
        for name in ("ci_halfwidth", "sigma", "bits", "errors"):
            values = getattr(self, name)
            if values is not None:
                data["ci" if name == "ci_halfwidth" else name] = values
        return pd.DataFrame(data)

    def to_csv(self, path: Union[str, Path], meta: Optional[Mapping[str, object]] = None) -> Path:
        return write_csv(self.to_frame(), path, "ber_curve", {**self.meta, **(meta or {})})


def ber_curve(
    ebn0_db: Sequence[float],
    mod: ModQam,
    laplace: Laplace,
    n_jobs: int = 1,
) -> BerCurve:
    """Аналитическая кривая avg_ber по сетке Eb/N0 (точки независимы)."""
    ebn0 = db_to_linear(ebn0_db)
    if n_jobs > 1:
        values = Parallel(n_jobs=n_jobs, prefer="threads")(
            delayed(avg_ber)(float(g), mod, laplace) for g in ebn0
        )
    else:
        values = [avg_ber(float(g), mod, laplace) for g in ebn0]
    for point, value in zip(ebn0_db, values):
        logger.debug(f"Eb/N0={point:.1f} дБ: BER={value:.6e}")
    return BerCurve(np.asarray(ebn0_db, dtype=float), np.array(values))


def agreement(analytic, measured, bits) -> np.ndarray:
    """
    Поточечное |ber_mc - ber_analytic| / σ, σ = sqrt(p(1 - p)/bits) при аналитическом p.

    При σ = 0 результат 0 для совпадающих значений, иначе inf.
    """
    p = np.asarray(analytic, dtype=float)
    diff = np.abs(np.asarray(measured, dtype=float) - p)
    sigma = np.sqrt(np.clip(p * (1 - p), 0.0, None) / np.asarray(bits, dtype=float))
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(sigma > 0, diff / np.where(sigma > 0, sigma, 1.0), np.where(diff == 0, 0.0, np.inf))
    return out


@dataclass(frozen=True)
class ExponentialGammaMixture:
    """
    Положительная смесь: с вероятностью p Exp(среднее mean_exp),
    иначе Gamma(shape, scale). Преобразование Лапласа в замкнутой форме.
    """
    p: float
    mean_exp: float
    shape: float
    scale: float

    def laplace(self, s: float) -> float:
        return self.p / (1 + s * self.mean_exp) + (1 - self.p) * (1 + s * self.scale) ** (-self.shape)

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        pick = rng.random(n) < self.p
        return np.where(pick, rng.exponential(self.mean_exp, n), rng.gamma(self.shape, self.scale, n))


def erfc_monte_carlo_lhs(
    a: float,
    b: float,
    y_sampler: Callable[[np.random.Generator, int], np.ndarray],
    n: int,
    rng: np.random.Generator,
    chunk: int = 10 ** 5,
) -> Tuple[float, float]:
    """
    Оценка E[erfc(sqrt(x / (a·y + b)))] методом Монте-Карло, x ~ Exp(1).

    Returns:
        (среднее, стандартная ошибка)
    """
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < n:
        size = min(chunk, n - done)
        x = rng.exponential(1.0, size)
        denom = a * y_sampler(rng, size) + b
        with np.errstate(divide="ignore"):
            ratio = np.where(denom > 0, x / np.where(denom > 0, denom, 1.0), np.inf)
        values = erfc(np.sqrt(ratio))
        total += values.sum()
        total_sq += np.sum(values ** 2)
        done += size
    mean = total / n
    var = max(total_sq / n - mean ** 2, 0.0)
    return float(mean), float(math.sqrt(var / n))
