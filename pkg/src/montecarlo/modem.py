"""
Квадратная QAM с кодом Грея по каждой оси
"""
import logging
import math

import numpy as np

from ..utils.exceptions import ParameterError

logger = logging.getLogger(__name__)


def _gray_decode(codes: np.ndarray) -> np.ndarray:
    """Номер уровня по коду Грея."""
    levels = codes.copy()
    shift = codes >> 1
    while np.any(shift):
        levels ^= shift
        shift >>= 1
    return levels


class QamConstellation:
    """
    Квадратная M-QAM единичной средней энергии.

    Индекс символа: старшие log2(√M) бит задают синфазную ось, младшие задают квадратурную;
    на каждой оси соседние уровни отличаются одним битом.
    """

    def __init__(self, M: int):
        sqrt_m = math.isqrt(M)
        if M < 4 or sqrt_m * sqrt_m != M or sqrt_m & (sqrt_m - 1):
            raise ParameterError(f"Порядок QAM должен быть квадратом степени двойки, получено {M}")
        self.M = M
        self.sqrt_m = sqrt_m
        self.bits_per_axis = sqrt_m.bit_length() - 1
        self.bits_per_symbol = 2 * self.bits_per_axis
        self.scale = math.sqrt(2 * (M - 1) / 3)

        index = np.arange(M)
        mask = sqrt_m - 1
        i_level = _gray_decode(index >> self.bits_per_axis)
        q_level = _gray_decode(index & mask)
        self.points = ((2 * i_level - mask) + 1j * (2 * q_level - mask)) / self.scale

    def random_indices(self, rng: np.random.Generator, size) -> np.ndarray:
        return rng.integers(0, self.M, size=size)

    def modulate(self, indices: np.ndarray) -> np.ndarray:
        return self.points[np.asarray(indices)]

    def demodulate(self, symbols: np.ndarray) -> np.ndarray:
        """Жёсткое решение по ближайшему уровню на каждой оси."""
        symbols = np.asarray(symbols) * self.scale
        mask = self.sqrt_m - 1
        i_level = np.clip(np.rint((symbols.real + mask) / 2), 0, mask).astype(int)
        q_level = np.clip(np.rint((symbols.imag + mask) / 2), 0, mask).astype(int)
        return ((i_level ^ (i_level >> 1)) << self.bits_per_axis) | (q_level ^ (q_level >> 1))

    def indices_to_bits(self, indices: np.ndarray) -> np.ndarray:
        indices = np.asarray(indices)
        shifts = np.arange(self.bits_per_symbol - 1, -1, -1)
        return (indices[..., None] >> shifts) & 1

    def bits_to_indices(self, bits: np.ndarray) -> np.ndarray:
        bits = np.asarray(bits).reshape(-1, self.bits_per_symbol)
        weights = 1 << np.arange(self.bits_per_symbol - 1, -1, -1)
        return bits @ weights

    def bit_errors(self, sent: np.ndarray, decided: np.ndarray) -> int:
        """Число различающихся бит между двумя массивами индексов."""
        diff = np.bitwise_xor(np.asarray(sent), np.asarray(decided))
        return int(np.sum(self.indices_to_bits(diff)))
