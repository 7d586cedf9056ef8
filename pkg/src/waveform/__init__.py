"""
Модуль формирования сигнала: прототипные фильтры и системы Габора
"""

from .filters import FilterKind, FilterSpec, PrototypeFilter, make_filter
from .gabor import (
    ambiguity,
    analyze,
    cross_ambiguity,
    default_ambiguity_rate,
    full_band_energy,
    full_band_rate,
    modulated_shift,
    sample_rate_for,
    synthesize,
)
from .lattice import BasebandSignal, LatticeParams, SymbolGrid

__all__ = [
    'FilterKind', 'FilterSpec', 'PrototypeFilter', 'make_filter',
    'LatticeParams', 'SymbolGrid', 'BasebandSignal',
    'modulated_shift', 'synthesize', 'analyze', 'ambiguity', 'cross_ambiguity',
    'default_ambiguity_rate', 'full_band_energy', 'full_band_rate', 'sample_rate_for',
]
