"""
Преобразования Лапласа суммарной помехи: один агрессор и пуассоновское поле агрессоров
"""
import logging
import math
from functools import lru_cache
from typing import Callable, Mapping, Optional, Union

import numpy as np
from scipy.special import gamma as gamma_fn

from .network import CfoPmf, NetworkModel, power_ratio
from .quadrature import adaptive_quad
from ..utils.config import Config
from ..utils.exceptions import ParameterError

logger = logging.getLogger(__name__)

PsiOfEps = Union[Mapping[float, float], Callable[[float], float]]

# e^{-w} < 1e-16 за верхним пределом внутреннего интеграла
EXP_TAIL = math.log(1e16)
RADIAL_TAIL = 1e-10


def _check_z(z: float) -> None:
    if z < 0:
        raise ParameterError(f"Аргумент преобразования Лапласа должен быть неотрицательным: {z}")


def laplace_single(
    z: float,
    net: NetworkModel,
    psi_bar: float,
    r_own: Optional[float] = None,
    d_k: Optional[float] = None,
) -> float:
    """
    L_I(z) = 1 / (1 + z·C·Ψ̄) для одного агрессора с рэлеевским замиранием.

    C = power_ratio(D, r_own, d_k); по умолчанию r_own = D, d_k = d_min.
    """
    _check_z(z)
    c = power_ratio(net.D, net.D if r_own is None else r_own, net.d_min if d_k is None else d_k, net)
    return 1.0 / (1.0 + z * c * psi_bar)


def sir_to_ratio(sir_db: float) -> float:
    """C = 10^{-SIR/10}."""
    return 10 ** (-sir_db / 10)


def laplace_single_sir(z: float, sir_db: float, psi_bar: float) -> float:
    """Один агрессор, заданный отношением сигнал/помеха вместо геометрии."""
    _check_z(z)
    return 1.0 / (1.0 + z * sir_to_ratio(sir_db) * psi_bar)


def laplace_single_tau(z: float, psi_of_tau: np.ndarray, c: float) -> float:
    """
    Среднее по равномерной сетке τ ∈ [0, T) от 1 / (1 + z·C·Ψ(τ)).

    Используется, когда Ψ(τ, ε) заметно зависит от τ.
    """
    _check_z(z)
    psi = np.asarray(psi_of_tau, dtype=float)
    if psi.size == 0:
        raise ParameterError("Пустой профиль Ψ(τ)")
    return float(np.mean(1.0 / (1.0 + z * c * psi)))


def single_aggressor_laplace(
    table,
    eps: float,
    sir_db: float,
    flat_tol: float = 1e-3,
) -> Callable[[float], float]:
    """
    L_I для одного агрессора по таблице Ψ(τ, ε).

    При плоском по τ столбце используется постоянная форма с Ψ̄(ε), иначе усреднение по τ.
    """
    c = sir_to_ratio(sir_db)
    flatness = table.flatness(eps)
    if flatness < flat_tol:
        psi_bar = table.mean(eps)
        logger.debug(f"ε={eps:.4f}: Ψ плоский по τ (δ={flatness:.2e}), Ψ̄={psi_bar:.6e}")
        return lambda z: laplace_single_sir(z, sir_db, psi_bar)

    column = table.column(eps).copy()
    logger.warning(
        f"ε={eps:.4f}: Ψ(τ) не плоский (δ={flatness:.2e} >= {flat_tol:.0e}), используется усреднение по τ"
    )
    return lambda z: laplace_single_tau(z, column, c)


def psi_levels(cfo: CfoPmf, psi_bar_of_eps: PsiOfEps) -> np.ndarray:
    values = []
    for eps in cfo.eps_levels:
        if callable(psi_bar_of_eps):
            values.append(float(psi_bar_of_eps(eps)))
            continue
        match = [v for k, v in psi_bar_of_eps.items() if abs(k - eps) < 1e-9]
        if not match:
            raise ParameterError(f"Нет Ψ̄ для уровня CFO ε={eps}")
        values.append(float(match[0]))
    psi = np.array(values)
    if np.any(psi < 0) or not np.all(np.isfinite(psi)):
        raise ParameterError("Значения Ψ̄ должны быть конечными и неотрицательными")
    return psi


def _inner_expectation(s: float, net: NetworkModel, rel_tol: float) -> float:
    """
    E_r[s·r^{βn/10} / (1 + s·r^{βn/10})] для r с плотностью 2πλ·r·exp(-λπr²).

    После замены w = λπr² ~ Exp(1) интеграл берётся по [0, ln 1e16].
    """
    if s == 0:
        return 0.0
    power = net.beta * net.decay / 2
    if power == 0:
        return s / (1.0 + s)
    scale = 1.0 / (net.lam * math.pi)

    def integrand(w: float) -> float:
        x = s * (w * scale) ** power
        return math.exp(-w) * x / (1.0 + x)

    return adaptive_quad(integrand, 0.0, EXP_TAIL, rel_tol=rel_tol)


def laplace_multi(
    z: float,
    net: NetworkModel,
    cfo: CfoPmf,
    psi_bar_of_eps: PsiOfEps,
    rel_tol: float = Config.QUAD_REL_TOL,
) -> float:
    """
    L_I(z) для пуассоновского поля агрессоров вне круга радиуса d_min.

    exp(-2πλ ∫_{d_min}^∞ Σ_j p_j·E_r[x/(1 + x)]·v dv),
    x = z·D^{(n-βn)/10}·r^{βn/10}·v^{-n/10}·Ψ̄(ε_j).

    Внешний интеграл берётся по ln v до радиуса, за которым оценка хвоста
    A·V^{2-n/10}/(n/10 - 2) меньше 1e-10 от накопленной массы.

    Raises:
        ParameterError: λ <= 0, z < 0 или n/10 <= 2
    """
    _check_z(z)
    if net.lam <= 0:
        raise ParameterError(f"Плотность агрессоров должна быть положительной: {net.lam}")
    k = net.decay
    if k <= 2:
        raise ParameterError(f"Для сходимости нужен наклон потерь n/10 > 2, получено {k}")

    psi = psi_levels(cfo, psi_bar_of_eps)
    probs = np.asarray(cfo.probs)
    if z == 0 or not np.any(probs * psi > 0):
        return 1.0

    gain = z * net.D ** (k - net.beta * k)
    power = net.beta * k / 2
    mean_r_power = (net.lam * math.pi) ** (-power) * gamma_fn(1 + power)
    tail_amplitude = gain * float(np.max(psi)) * mean_r_power

    def radial(t: float) -> float:
        v = math.exp(t)
        s_base = gain * v ** (-k)
        inner = sum(p * _inner_expectation(s_base * ps, net, rel_tol) for p, ps in zip(probs, psi) if p > 0)
        return inner * v * v

    lower = math.log(net.d_min)
    upper = lower + math.log(10.0)
    mass = 0.0
    for _ in range(64):
        mass += adaptive_quad(radial, lower, upper, rel_tol=rel_tol)
        v_max = math.exp(upper)
        tail = tail_amplitude * v_max ** (2 - k) / (k - 2)
        if tail < RADIAL_TAIL * mass:
            break
        lower, upper = upper, upper + math.log(10.0)
    else:
        logger.warning(f"Радиальный интеграл не сошёлся до v={math.exp(upper):.3e} м")

    value = math.exp(-2 * math.pi * net.lam * mass)
    logger.debug(f"L_I({z:.4e}) = {value:.8f}, v_max={math.exp(upper):.3e}")
    return value


def multi_aggressor_laplace(
    net: NetworkModel,
    cfo: CfoPmf,
    psi_bar_of_eps: PsiOfEps,
    rel_tol: float = Config.QUAD_REL_TOL,
) -> Callable[[float], float]:
    """laplace_multi как функция z с кэшированием для повторных вызовов квадратуры BER."""
    psi = {eps: value for eps, value in zip(cfo.eps_levels, psi_levels(cfo, psi_bar_of_eps))}

    @lru_cache(maxsize=4096)
    def laplace(z: float) -> float:
        return laplace_multi(z, net, cfo, psi, rel_tol)

    return laplace
