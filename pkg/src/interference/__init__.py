"""
Модуль коэффициентов помех и кривых компромисса
"""

from .frames import frame_bounds_estimate, gaussian_atoms, plancherel_ratio
from .gains import (
    GainTable,
    gain_table,
    mean_other_gain,
    mean_self_gain,
    overlap_symbols,
    periodicity_gap,
    tau_grid,
    timing_averaged_gain,
)
from .tradeoff import TradeoffConfig, TradeoffCurve, tradeoff_sweep

__all__ = [
    'GainTable', 'gain_table', 'mean_other_gain', 'mean_self_gain', 'overlap_symbols',
    'periodicity_gap', 'tau_grid',
    'timing_averaged_gain', 'frame_bounds_estimate', 'gaussian_atoms', 'plancherel_ratio',
    'TradeoffConfig', 'TradeoffCurve', 'tradeoff_sweep',
]
