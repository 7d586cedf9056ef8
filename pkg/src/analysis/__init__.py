"""
Модуль аналитической оценки BER: квадратуры, преобразования Лапласа помех, модель сети
"""

from .ber import (
    BerCurve,
    ExponentialGammaMixture,
    ModQam,
    agreement,
    avg_ber,
    ber_curve,
    db_to_linear,
    erfc_laplace_rhs,
    erfc_monte_carlo_lhs,
    gray_qam_coefficients,
    no_interference,
    qam_awgn_ber,
    rayleigh_ber,
)
from .laplace import (
    laplace_multi,
    laplace_single,
    laplace_single_sir,
    laplace_single_tau,
    multi_aggressor_laplace,
    psi_levels,
    single_aggressor_laplace,
    sir_to_ratio,
)
from .network import CfoPmf, NetworkModel, pathloss_constants, pathloss_db, power_ratio
from .quadrature import adaptive_quad, erfc_expectation

__all__ = [
    'BerCurve', 'ExponentialGammaMixture', 'ModQam', 'agreement', 'avg_ber', 'ber_curve', 'db_to_linear',
    'erfc_laplace_rhs', 'erfc_monte_carlo_lhs', 'gray_qam_coefficients', 'no_interference',
    'qam_awgn_ber', 'rayleigh_ber',
    'laplace_multi', 'laplace_single', 'laplace_single_sir', 'laplace_single_tau',
    'multi_aggressor_laplace', 'psi_levels', 'single_aggressor_laplace', 'sir_to_ratio',
    'CfoPmf', 'NetworkModel', 'pathloss_constants', 'pathloss_db', 'power_ratio',
    'adaptive_quad', 'erfc_expectation',
]
