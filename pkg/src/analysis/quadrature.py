"""
Адаптивные квадратуры для полубесконечных интегралов
"""
import logging
import math
import warnings
from typing import Callable

from scipy import integrate

from ..utils.config import Config
from ..utils.exceptions import QuadratureError

logger = logging.getLogger(__name__)

TWO_OVER_SQRT_PI = 2.0 / math.sqrt(math.pi)


def adaptive_quad(
    func: Callable[[float], float],
    lower: float,
    upper: float,
    rel_tol: float = Config.QUAD_REL_TOL,
    abs_tol: float = 1e-15,
) -> float:
    """
    scipy.integrate.quad с проверкой сходимости.

    Raises:
        QuadratureError: quad не достиг требуемой точности
    """
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        result = integrate.quad(
            func, lower, upper,
            epsrel=rel_tol, epsabs=abs_tol, limit=Config.QUAD_LIMIT, full_output=1,
        )
    value, abs_error = result[0], result[1]
    if len(result) > 3:
        # ier = 2 (ошибка округления) при достигнутой точности не считается отказом
        if not math.isfinite(value) or abs_error > 10 * max(abs_tol, rel_tol * abs(value)):
            raise QuadratureError(result[3], value, abs_error, (lower, upper))
        logger.debug(f"quad на [{lower:.4g}, {upper:.4g}]: {result[3]}")
    return float(value)


def erfc_expectation(
    laplace: Callable[[float], float],
    a: float,
    b: float,
    rel_tol: float = Config.QUAD_REL_TOL,
) -> float:
    """
    E[erfc(sqrt(x / (a·y + b)))] для x ~ Exp(1) и y с преобразованием Лапласа L_y.

    Равно 1 - (1/√π)∫_0^∞ exp(-z(1 + b))·z^{-1/2}·L_y(a·z) dz. После замены z = u²
    и вычитания √π = 2∫exp(-u²)du интеграл берётся в виде
    (2/√π)∫_0^∞ exp(-u²)·[(1 - L_y(a·u²)) + L_y(a·u²)·(1 - exp(-b·u²))] du,
    без вычитания близких чисел при малых значениях.
    """
    if a < 0 or b < 0:
        raise QuadratureError(f"Параметры должны быть неотрицательными: a={a}, b={b}")
    if math.isinf(b):
        return 1.0
    u_max = math.sqrt(math.log(1 / Config.QUAD_TAIL))

    def integrand(u: float) -> float:
        z = u * u
        lz = laplace(a * z) if a > 0 else 1.0
        bracket = (1.0 - lz) + lz * (-math.expm1(-b * z))
        return math.exp(-z) * bracket

    return TWO_OVER_SQRT_PI * adaptive_quad(integrand, 0.0, u_max, rel_tol=rel_tol)
