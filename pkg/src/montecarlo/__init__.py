"""
Модуль моделирования канального уровня методом Монте-Карло
"""

from .channel import ChannelRealization, PowerDelayProfile, sample_channel, sample_taps
from .deployment import (
    Deployment,
    default_r_max,
    interference_mgf_monte_carlo,
    sample_own_links,
    sample_ppp,
)
from .equalizers import mlse_equalize, mlse_state_count, zf_equalize
from .link import (
    AggressorBurst,
    LinkSimulator,
    ResponseKernels,
    Scheme,
    TrialConfig,
    TrialResult,
    ber_sweep,
    run_trial,
    simulate_burst,
    summarize,
)
from .modem import QamConstellation

__all__ = [
    'ChannelRealization', 'PowerDelayProfile', 'sample_channel', 'sample_taps',
    'Deployment', 'default_r_max', 'interference_mgf_monte_carlo', 'sample_own_links', 'sample_ppp',
    'mlse_equalize', 'mlse_state_count', 'zf_equalize',
    'AggressorBurst', 'LinkSimulator', 'ResponseKernels', 'Scheme', 'TrialConfig', 'TrialResult',
    'ber_sweep', 'run_trial', 'simulate_burst', 'summarize',
    'QamConstellation',
]
