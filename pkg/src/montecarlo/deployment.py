"""
Пуассоновское размещение агрессоров и прямая оценка E[exp(-z·I)]
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..analysis.laplace import PsiOfEps, laplace_multi, psi_levels
from ..analysis.network import CfoPmf, NetworkModel, power_ratio
from ..utils.config import Config
from ..utils.exceptions import ParameterError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Deployment:
    """Реализация поля агрессоров: расстояния, углы, длины собственных звеньев, CFO и сдвиги τ"""
    distances: np.ndarray
    angles: np.ndarray
    own_links: np.ndarray
    eps: np.ndarray
    taus: np.ndarray

    def __len__(self) -> int:
        return len(self.distances)

    def check(self, net: NetworkModel, cfo: CfoPmf, T: float) -> None:
        if np.any(self.distances < net.d_min):
            raise ParameterError("Агрессор ближе d_min")
        if np.any(self.taus < 0) or np.any(self.taus >= T):
            raise ParameterError("Сдвиг τ вне [0, T)")
        levels = np.asarray(cfo.eps_levels)
        if not all(np.any(np.isclose(e, levels)) for e in self.eps):
            raise ParameterError("CFO агрессора вне заданного набора")

    def power_ratios(self, net: NetworkModel) -> np.ndarray:
        if len(self) == 0:
            return np.empty(0)
        return np.atleast_1d(power_ratio(net.D, self.own_links, self.distances, net))


def default_r_max(net: NetworkModel, fraction: float = Config.R_MAX_FRACTION) -> float:
    """
    Радиус, за которым ожидаемая доля мощности помех меньше fraction:
    (r_max / d_min)^{2 - n/10} = fraction.
    """
    k = net.decay
    if k <= 2:
        raise ParameterError(f"Для усечения поля нужен n/10 > 2, получено {k}")
    if not 0 < fraction < 1:
        raise ParameterError(f"Доля должна лежать в (0, 1): {fraction}")
    return float(net.d_min * fraction ** (-1 / (k - 2)))


def sample_own_links(net: NetworkModel, rng: np.random.Generator, size: int) -> np.ndarray:
    """Длины собственных звеньев с плотностью 2πλ·r·exp(-λπr²)."""
    return np.sqrt(rng.exponential(1 / (net.lam * math.pi), size))


def sample_ppp(
    net: NetworkModel,
    r_max: float,
    rng: np.random.Generator,
    cfo: Optional[CfoPmf] = None,
    T: float = 1.0,
) -> Deployment:
    """
    Однородный пуассоновский процесс в кольце d_min <= d < r_max.

    Число точек ~ Poisson(λπ(r_max² - d_min²)), положения равномерны в кольце,
    τ ~ U[0, T), ε берётся из CfoPmf.
    """
    if r_max <= net.d_min:
        raise ParameterError(f"r_max ({r_max}) должен превышать d_min ({net.d_min})")
    cfo = cfo or CfoPmf.aligned()
    count = rng.poisson(net.lam * math.pi * (r_max ** 2 - net.d_min ** 2))
    distances = np.sqrt(rng.uniform(net.d_min ** 2, r_max ** 2, count))
    return Deployment(
        distances=distances,
        angles=rng.uniform(0, 2 * math.pi, count),
        own_links=sample_own_links(net, rng, count),
        eps=cfo.sample(rng, count),
        taus=rng.uniform(0, T, count),
    )


def interference_mgf_monte_carlo(
    z: float,
    net: NetworkModel,
    cfo: CfoPmf,
    psi_bar_of_eps: PsiOfEps,
    n_draws: int,
    rng: np.random.Generator,
    r_max: Optional[float] = None,
    tail_correction: bool = False,
    chunk: int = 2000,
) -> float:
    """
    Прямая оценка E[exp(-z·I)], I = Σ_k C_k·Ψ̄(ε_k)·h_k, h_k ~ Exp(1), по реализациям поля.

    Args:
        z: Аргумент преобразования
        net: Модель сети
        cfo: Распределение CFO
        psi_bar_of_eps: Ψ̄ по уровням CFO
        n_draws: Число реализаций поля
        rng: Генератор
        r_max: Внешний радиус (по умолчанию default_r_max)
        tail_correction: Домножить на точный вклад агрессоров за r_max
            (для пуассоновского поля множители по непересекающимся областям независимы)
        chunk: Реализаций за проход
    """
    r_max = r_max or default_r_max(net)
    psi = psi_levels(cfo, psi_bar_of_eps)
    levels = np.arange(len(cfo.eps_levels))
    mean_count = net.lam * math.pi * (r_max ** 2 - net.d_min ** 2)

    total = 0.0
    done = 0
    while done < n_draws:
        size = min(chunk, n_draws - done)
        counts = rng.poisson(mean_count, size)
        n = int(counts.sum())
        owner = np.repeat(np.arange(size), counts)
        distances = np.sqrt(rng.uniform(net.d_min ** 2, r_max ** 2, n))
        own = sample_own_links(net, rng, n)
        level = rng.choice(levels, size=n, p=np.asarray(cfo.probs))
        fading = rng.exponential(1.0, n)
        if n:
            terms = np.atleast_1d(power_ratio(net.D, own, distances, net)) * psi[level] * fading
            interference = np.bincount(owner, weights=terms, minlength=size)
        else:
            interference = np.zeros(size)
        total += np.sum(np.exp(-z * interference))
        done += size

    estimate = total / n_draws
    if tail_correction:
        outer = net.model_copy(update={"d_min": r_max})
        estimate *= laplace_multi(z, outer, cfo, psi_bar_of_eps)
    logger.debug(f"MC E[exp(-zI)] при z={z:.4e}: {estimate:.6f} ({n_draws} реализаций, r_max={r_max:.1f} м)")
    return float(estimate)
