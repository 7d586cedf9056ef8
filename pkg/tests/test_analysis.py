"""
Тесты аналитической BER, преобразований Лапласа помех и модели сети
"""
import logging
import math
from fractions import Fraction

import numpy as np
import pytest
from pydantic import ValidationError
from scipy.special import erfc

from src.analysis import (
    BerCurve,
    CfoPmf,
    ExponentialGammaMixture,
    ModQam,
    NetworkModel,
    agreement,
    avg_ber,
    ber_curve,
    db_to_linear,
    erfc_expectation,
    erfc_laplace_rhs,
    erfc_monte_carlo_lhs,
    gray_qam_coefficients,
    laplace_multi,
    laplace_single,
    laplace_single_sir,
    multi_aggressor_laplace,
    no_interference,
    pathloss_constants,
    pathloss_db,
    power_ratio,
    qam_awgn_ber,
    rayleigh_ber,
    single_aggressor_laplace,
)
from src.interference import GainTable, tau_grid
from src.utils.exceptions import ParameterError, QuadratureError


class TestQamCoefficients:
    def test_known_expansions(self):
        assert gray_qam_coefficients(4) == {0: Fraction(1, 2)}
        assert gray_qam_coefficients(16) == {0: Fraction(3, 8), 1: Fraction(1, 4), 2: Fraction(-1, 8)}
        assert gray_qam_coefficients(64) == {
            0: Fraction(7, 24), 1: Fraction(6, 24), 2: Fraction(-1, 24), 4: Fraction(1, 24), 6: Fraction(-1, 24),
        }

    @pytest.mark.parametrize("M", [4, 16, 64])
    def test_weights_sum_to_half(self, M):
        mod = ModQam.from_order(M)
        assert sum(mod.exact_weights) == Fraction(1, 2)
        assert mod.bits_per_symbol == int(math.log2(M))

    def test_unsupported_orders(self):
        with pytest.raises(ParameterError):
            gray_qam_coefficients(8)
        with pytest.raises(ParameterError):
            ModQam.from_order(256)

    def test_awgn_qpsk(self):
        mod = ModQam.from_order(4)
        for ebn0 in (0.5, 2.0, 8.0):
            expected = 0.5 * erfc(math.sqrt(ebn0))
            assert qam_awgn_ber(mod, mod.snr_from_ebn0(ebn0)) == pytest.approx(expected, rel=1e-12)


class TestAverageBer:
    def test_rayleigh_anchor(self):
        mod = ModQam.from_order(4)
        for ebn0 in db_to_linear(np.arange(0, 31, 5)):
            exact = float(rayleigh_ber(ebn0))
            assert avg_ber(float(ebn0), mod, no_interference) == pytest.approx(exact, rel=1e-6)

    def test_zero_snr_gives_half(self):
        for M in (4, 16, 64):
            assert avg_ber(0.0, ModQam.from_order(M), no_interference) == pytest.approx(0.5)

    def test_rejects_invalid_laplace_and_snr(self):
        mod = ModQam.from_order(4)
        with pytest.raises(ParameterError):
            avg_ber(10.0, mod, lambda z: 0.5)
        with pytest.raises(ParameterError):
            avg_ber(-1.0, mod, no_interference)

    def test_interference_raises_ber_and_floors(self):
        mod = ModQam.from_order(4)
        laplace = lambda z: laplace_single_sir(z, 0.0, 0.5)  # noqa: E731
        for ebn0 in (1.0, 10.0, 1e3):
            assert avg_ber(ebn0, mod, laplace) > avg_ber(ebn0, mod, no_interference)
        assert avg_ber(1e8, mod, laplace) > 100 * float(rayleigh_ber(1e8))

    @pytest.mark.parametrize("M", [16, 64])
    def test_curve_is_non_increasing(self, M):
        curve = ber_curve(np.arange(0, 31, 5), ModQam.from_order(M), no_interference)
        assert curve.is_non_increasing()
        assert np.all(curve.ber > 0)

    def test_parallel_curve_matches_serial(self):
        mod = ModQam.from_order(16)
        laplace = lambda z: laplace_single_sir(z, 3.0, 0.2)  # noqa: E731
        serial = ber_curve([0.0, 10.0, 20.0], mod, laplace)
        parallel = ber_curve([0.0, 10.0, 20.0], mod, laplace, n_jobs=2)
        np.testing.assert_array_equal(serial.ber, parallel.ber)

    def test_ber_curve_validation(self):
        with pytest.raises(ParameterError):
            BerCurve([0.0, 10.0], [0.1])
        with pytest.raises(ParameterError):
            BerCurve([0.0], [0.7])

    def test_monte_carlo_curve_may_exceed_half(self):
        curve = BerCurve([0.0], [0.6], bits=np.array([10]), errors=np.array([6]))
        assert curve.is_empirical
        assert curve.ber[0] == 0.6
        with pytest.raises(ParameterError):
            BerCurve([0.0], [1.2], bits=np.array([10]), errors=np.array([12]))
        assert not BerCurve([0.0], [0.4]).is_empirical

    def test_agreement_column(self):
        values = agreement([0.1, 0.01, 0.0], [0.1, 0.011, 0.0], [10 ** 4] * 3)
        assert values[0] == 0.0
        assert values[1] == pytest.approx(0.001 / math.sqrt(0.01 * 0.99 / 1e4))
        assert values[2] == 0.0
        assert np.isinf(agreement([0.0], [0.001], [10 ** 4])[0])


class TestErfcLaplaceIdentity:
    def test_constant_laplace_closed_form(self):
        for b in (0.01, 0.5, 3.0):
            assert erfc_expectation(lambda s: 1.0, 0.0, b) == pytest.approx(1 - 1 / math.sqrt(1 + b), rel=1e-8)
        assert erfc_expectation(lambda s: 1.0, 1.0, math.inf) == 1.0

    def test_negative_parameters(self):
        with pytest.raises(ParameterError):
            erfc_laplace_rhs(no_interference, -1.0, 0.1)
        with pytest.raises(QuadratureError):
            erfc_expectation(no_interference, 0.1, -1.0)

    def test_rhs_matches_monte_carlo(self, rng):
        mixture = ExponentialGammaMixture(p=0.4, mean_exp=1.3, shape=2.0, scale=0.7)
        assert mixture.laplace(0.0) == pytest.approx(1.0)
        rhs = erfc_laplace_rhs(mixture.laplace, 0.8, 0.2)
        lhs, stderr = erfc_monte_carlo_lhs(0.8, 0.2, mixture.sample, 2 * 10 ** 5, rng)
        assert abs(rhs - lhs) < 4 * stderr


class TestLaplace:
    def test_single_aggressor_forms(self):
        net = NetworkModel(D=10.0, d_min=25.0, n=40.0)
        c = power_ratio(10.0, 10.0, 25.0, net)
        assert c == pytest.approx((10 / 25) ** 4)
        assert laplace_single(2.0, net, 0.3) == pytest.approx(1 / (1 + 2.0 * c * 0.3))
        assert laplace_single_sir(2.0, 0.0, 0.3) == pytest.approx(1 / 1.6)
        assert laplace_single_sir(0.0, 10.0, 0.3) == 1.0
        with pytest.raises(ParameterError):
            laplace_single_sir(-1.0, 0.0, 0.3)

    def test_flat_column_uses_constant_form(self):
        taus = tau_grid_values()
        psi = np.column_stack([np.ones_like(taus), np.full_like(taus, 0.2)])
        table = GainTable(taus, [0.0, 0.5], psi, 0.0)
        laplace = single_aggressor_laplace(table, 0.5, sir_db=0.0)
        assert laplace(3.0) == pytest.approx(1 / (1 + 3.0 * 0.2))

    def test_non_flat_column_averages_over_tau(self, caplog):
        taus = tau_grid_values()
        column = 0.2 + 0.1 * np.sin(2 * np.pi * taus)
        table = GainTable(taus, [0.0, 0.5], np.column_stack([np.ones_like(taus), column]), 0.0)
        with caplog.at_level(logging.WARNING, logger="src.analysis.laplace"):
            laplace = single_aggressor_laplace(table, 0.5, sir_db=0.0)
        assert any("не плоский" in record.getMessage() for record in caplog.records)
        assert laplace(3.0) == pytest.approx(np.mean(1 / (1 + 3.0 * column)))
        assert laplace(3.0) > 1 / (1 + 3.0 * np.mean(column))

    def test_ppp_closed_form_without_power_control(self):
        net = NetworkModel(D=10.0, d_min=25.0, n=40.0, beta=0.0)
        cfo = CfoPmf.pot_best_case(1.2)
        psi = 0.1
        for z in (1.0, 390.0, 1e4):
            s = z * net.D ** 4 * psi
            root = math.sqrt(s)
            expected = math.exp(-math.pi * net.lam * root * (math.pi / 2 - math.atan(net.d_min ** 2 / root)))
            assert laplace_multi(z, net, cfo, {0.6: psi}) == pytest.approx(expected, rel=1e-6)

    def test_ppp_properties(self):
        cfo = CfoPmf(eps_levels=[0.0, 0.6], probs=[0.25, 0.75])
        psi = {0.0: 1.0, 0.6: 0.05}
        for beta in (0.0, 1.0):
            net = NetworkModel(D=20.0, beta=beta)
            laplace = multi_aggressor_laplace(net, cfo, psi)
            values = [laplace(z) for z in (0.0, 10.0, 1e3, 1e5)]
            assert values[0] == 1.0
            assert all(0 < v <= 1 for v in values)
            assert np.all(np.diff(values) < 0)

    def test_partial_overlap_helps(self):
        net = NetworkModel()
        aligned = laplace_multi(1e3, net, CfoPmf.aligned(), {0.0: 1.0})
        offset = laplace_multi(1e3, net, CfoPmf.pot_best_case(1.2), {0.6: 0.05})
        assert offset > aligned

    def test_ppp_rejects_slow_decay(self):
        net = NetworkModel(n=20.0)
        with pytest.raises(ParameterError):
            laplace_multi(1.0, net, CfoPmf.aligned(), {0.0: 1.0})

    def test_missing_psi_level(self):
        with pytest.raises(ParameterError):
            laplace_multi(1.0, NetworkModel(), CfoPmf.pot_best_case(1.2), {0.0: 1.0})


class TestNetwork:
    def test_pathloss_constants(self):
        K0, n = pathloss_constants(3500.0)
        assert 51.25 <= K0 <= 51.35
        assert n == 40.0
        assert pathloss_db(1.0) == pytest.approx(K0)
        assert pathloss_db(100.0) - pathloss_db(10.0) == pytest.approx(40.0)

    def test_network_model(self):
        net = NetworkModel(**{"lambda": 1e-4})
        assert net.lam == 1e-4
        assert net.decay == 4.0
        assert NetworkModel().lam == pytest.approx(1 / (math.pi * 50 ** 2))
        with pytest.raises(ValidationError):
            NetworkModel(D=30.0, d_min=25.0)
        with pytest.raises(ValidationError):
            NetworkModel(beta=1.5)

    def test_cfo_pmf(self, rng):
        pmf = CfoPmf.uniform_levels(1.2, 4)
        np.testing.assert_allclose(pmf.eps_levels, [0.0, 0.3, 0.6, 0.9])
        draws = pmf.sample(rng, 1000)
        assert set(np.round(draws, 12)) <= {0.0, 0.3, 0.6, 0.9}
        with pytest.raises(ValidationError):
            CfoPmf(eps_levels=[0.0, 0.6], probs=[0.5, 0.6])
        with pytest.raises(ValidationError):
            CfoPmf(eps_levels=[0.0], probs=[0.5, 0.5])


def tau_grid_values() -> np.ndarray:
    from src.waveform import LatticeParams
    return tau_grid(LatticeParams(), 64)
