"""
Эквалайзеры: одноотводный ZF и MLSE (алгоритм Витерби) на поднесущей
"""
import logging
from typing import Optional

import numpy as np

from .modem import QamConstellation
from ..utils.config import Config
from ..utils.exceptions import ConfigurationError, ParameterError

logger = logging.getLogger(__name__)


def zf_equalize(
    symbol_estimates,
    per_subcarrier_gain,
    threshold: float = Config.ZF_REGULARIZATION,
) -> np.ndarray:
    """
    Деление оценок на комплексный коэффициент поднесущей.
    Коэффициенты с модулем ниже threshold поднимаются до threshold с сохранением фазы.
    """
    estimates = np.asarray(symbol_estimates, dtype=complex)
    gains = np.asarray(per_subcarrier_gain, dtype=complex)
    magnitude = np.abs(gains)
    phase = np.where(magnitude > 0, gains / np.where(magnitude > 0, magnitude, 1.0), 1.0)
    safe = np.where(magnitude < threshold, threshold * phase, gains)
    return estimates / safe


def mlse_state_count(M: int, n_taps: int = Config.MLSE_TAPS) -> int:
    return M ** (n_taps - 1)


def mlse_equalize(
    subcarrier_sequence,
    taps,
    constellation: QamConstellation,
    traceback: int = Config.MLSE_TRACEBACK,
    max_states: Optional[int] = None,
) -> np.ndarray:
    """
    Оценка последовательности максимального правдоподобия на решётке из M^6 состояний.

    Модель: received[t] = Σ_{k=0..6} taps[k]·s[t-k] + шум; состояние хранит
    6 последних символов (цифра 0 соответствует самому свежему). Начальные метрики равны,
    решение по символу t выдаётся после traceback шагов, хвост выдаётся полным обратным ходом.

    Returns:
        Индексы символов s[t] той же длины, что и received

    Raises:
        ParameterError: число отводов не равно 7
        ConfigurationError: число состояний больше предельного
    """
    received = np.asarray(subcarrier_sequence, dtype=complex)
    taps = np.asarray(taps, dtype=complex)
    if taps.size != Config.MLSE_TAPS:
        raise ParameterError(f"MLSE ожидает {Config.MLSE_TAPS} отводов, получено {taps.size}")
    M = constellation.M
    memory = taps.size - 1
    n_states = mlse_state_count(M, taps.size)
    limit = max_states or Config.MLSE_MAX_STATES
    if n_states > limit:
        raise ConfigurationError(f"MLSE для QAM-{M}: {n_states} состояний больше предела {limit}")
    if traceback < 1:
        raise ParameterError(f"Глубина обратного хода должна быть >= 1, получено {traceback}")

    points = constellation.points
    states = np.arange(n_states)
    # Вклад прошлых символов состояния s: Σ_{i=1..6} taps[i]·C[цифра_{i-1}(s)]
    past = np.zeros(n_states, dtype=complex)
    for i in range(1, memory + 1):
        past += taps[i] * points[(states // M ** (i - 1)) % M]

    newest = states % M
    top = M ** (memory - 1)
    predecessors = (states // M)[:, None] + np.arange(M)[None, :] * top
    expected = taps[0] * points[newest][:, None] + past[predecessors]

    length = received.size
    survivors = np.zeros((length, n_states), dtype=np.int16 if M <= 2 ** 15 else np.int32)
    metrics = np.zeros(n_states)
    decisions = np.empty(length, dtype=int)

    def trace(t_end: int, state: int, t_stop: int) -> int:
        for t in range(t_end, t_stop, -1):
            state = predecessors[state, survivors[t, state]]
        return state

    for t in range(length):
        branch = metrics[predecessors] + np.abs(received[t] - expected) ** 2
        choice = np.argmin(branch, axis=1)
        survivors[t] = choice
        metrics = branch[states, choice]
        metrics -= metrics.min()
        if t >= traceback:
            state = trace(t, int(np.argmin(metrics)), t - traceback)
            decisions[t - traceback] = state % M

    state = int(np.argmin(metrics))
    for t in range(length - 1, max(length - 1 - traceback, -1), -1):
        decisions[t] = state % M
        state = predecessors[state, survivors[t, state]]
    return decisions
