"""
Тесты канального моделирования: QAM, каналы, поле агрессоров, эквалайзеры, BER
"""
import math

import numpy as np
import pytest
from pydantic import ValidationError
from scipy.special import erfc
from scipy.stats import kstest

from src.analysis import CfoPmf, ModQam, NetworkModel, agreement, ber_curve, laplace_multi, rayleigh_ber
from src.cli.scenario import ScenarioConfig
from src.montecarlo import (
    AggressorBurst,
    ChannelRealization,
    LinkSimulator,
    PowerDelayProfile,
    QamConstellation,
    Scheme,
    TrialConfig,
    ber_sweep,
    default_r_max,
    interference_mgf_monte_carlo,
    mlse_equalize,
    run_trial,
    sample_channel,
    sample_own_links,
    sample_ppp,
    sample_taps,
    simulate_burst,
    summarize,
    zf_equalize,
)
from src.utils.exceptions import ConfigurationError, ParameterError
from src.waveform import FilterKind, FilterSpec, LatticeParams, SymbolGrid, cross_ambiguity, make_filter


class TestQam:
    @pytest.mark.parametrize("M", [4, 16, 64])
    def test_unit_energy_and_hard_decisions(self, M):
        qam = QamConstellation(M)
        assert np.mean(np.abs(qam.points) ** 2) == pytest.approx(1.0)
        np.testing.assert_array_equal(qam.demodulate(qam.points), np.arange(M))

    @pytest.mark.parametrize("M", [16, 64])
    def test_gray_neighbours_differ_in_one_bit(self, M):
        qam = QamConstellation(M)
        step = 2 / qam.scale
        for index, point in enumerate(qam.points):
            distance = np.abs(qam.points - point)
            neighbours = np.flatnonzero(np.isclose(distance, step))
            assert neighbours.size >= 2
            for other in neighbours:
                assert bin(index ^ int(other)).count("1") == 1

    def test_bits_round_trip_and_errors(self, rng):
        qam = QamConstellation(16)
        indices = qam.random_indices(rng, 32)
        np.testing.assert_array_equal(qam.bits_to_indices(qam.indices_to_bits(indices)), indices)
        assert qam.bit_errors(np.array([0, 5]), np.array([1, 5])) == 1

    def test_rejects_non_square_order(self):
        with pytest.raises(ParameterError):
            QamConstellation(8)


class TestChannel:
    def test_exponential_profile(self):
        pdp = PowerDelayProfile.exponential(spacing=1 / 16)
        assert sum(pdp.powers) == pytest.approx(1.0)
        assert pdp.n_taps == 4
        np.testing.assert_array_equal(pdp.delay_indices(1.0, 64), [0, 4, 8, 12])

    def test_profile_validation(self):
        with pytest.raises(ValidationError):
            PowerDelayProfile(powers=[0.5, 0.6], delays=[0.0, 0.1])
        with pytest.raises(ValidationError):
            PowerDelayProfile(powers=[1.0], delays=[0.0, 0.1])

    def test_off_grid_delay_is_rounded(self, caplog):
        pdp = PowerDelayProfile(powers=[0.5, 0.5], delays=[0.0, 0.1])
        np.testing.assert_array_equal(pdp.delay_indices(1.0, 64), [0, 6])
        assert "округлены" in caplog.text

    def test_tap_variances_follow_profile(self, rng):
        pdp = PowerDelayProfile.exponential()
        taps = sample_taps(pdp, rng, 20000)
        assert taps.shape == (20000, 4)
        np.testing.assert_allclose(np.mean(np.abs(taps) ** 2, axis=0), pdp.powers, rtol=0.05)

    def test_frequency_response_of_sampled_channel(self, rng):
        pdp = PowerDelayProfile.exponential(spacing=1 / 16)
        channel = sample_channel(pdp, rng)
        np.testing.assert_allclose(channel.frequency_response(0.0), [channel.taps.sum()])
        response = channel.frequency_response([0.0, 8.0, 16.0])
        assert response.shape == (3,)
        np.testing.assert_allclose(response[1], np.sum(channel.taps * (-1.0) ** np.arange(4)))
        np.testing.assert_allclose(response[2], response[0])

    def test_channel_power_is_exponential(self, rng):
        pdp = PowerDelayProfile.exponential(spacing=1 / 16)
        taps = sample_taps(pdp, rng, 5000)
        power = np.abs(taps @ np.exp(-2j * np.pi * 0.3 * np.asarray(pdp.delays))) ** 2
        assert kstest(power, "expon").pvalue > 1e-3


class TestDeployment:
    def test_default_truncation_radius(self):
        net = NetworkModel()
        assert default_r_max(net) == pytest.approx(25 * 1000 ** 0.5)
        with pytest.raises(ParameterError):
            default_r_max(NetworkModel(n=20.0))
        with pytest.raises(ParameterError):
            default_r_max(net, fraction=1.5)

    def test_ppp_draw_respects_geometry(self, rng):
        net = NetworkModel()
        cfo = CfoPmf.uniform_levels(1.2, 2)
        r_max = 300.0
        deployment = sample_ppp(net, r_max, rng, cfo)
        expected = net.lam * math.pi * (r_max ** 2 - net.d_min ** 2)
        assert abs(len(deployment) - expected) < 6 * math.sqrt(expected)
        assert np.all((deployment.distances >= net.d_min) & (deployment.distances < r_max))
        deployment.check(net, cfo, 1.0)
        assert np.all(deployment.power_ratios(net) <= (net.D / net.d_min) ** 4 + 1e-15)
        with pytest.raises(ParameterError):
            sample_ppp(net, 20.0, rng)

    def test_ppp_mean_count(self, rng):
        net = NetworkModel()
        r_max = 300.0
        draws = 400
        expected = net.lam * math.pi * (r_max ** 2 - net.d_min ** 2)
        counts = [len(sample_ppp(net, r_max, rng)) for _ in range(draws)]
        assert np.mean(counts) == pytest.approx(expected, abs=4 * math.sqrt(expected / draws))

    def test_own_link_mean_distance(self, rng):
        net = NetworkModel()
        distances = sample_own_links(net, rng, 20000)
        assert np.mean(distances) == pytest.approx(1 / (2 * math.sqrt(net.lam)), rel=0.02)

    def test_mgf_matches_laplace_transform(self, rng):
        net = NetworkModel(D=10.0)
        cfo = CfoPmf.pot_best_case(1.2)
        psi = {0.6: 0.05}
        mean_interference = 2 * math.pi * net.lam * psi[0.6] * net.D ** 4 / (2 * net.d_min ** 2)
        z = 0.05 / mean_interference
        analytic = laplace_multi(z, net, cfo, psi)
        measured = interference_mgf_monte_carlo(z, net, cfo, psi, 20000, rng, tail_correction=True)
        assert measured == pytest.approx(analytic, abs=5e-3)


class TestEqualizers:
    def test_zero_forcing(self):
        out = zf_equalize([2 + 2j, 1j], [1 + 1j, 1j])
        np.testing.assert_allclose(out, [2.0, 1.0])
        assert np.all(np.isfinite(zf_equalize([1.0], [0.0])))

    def test_mlse_recovers_noise_free_sequence(self, rng):
        qam = QamConstellation(4)
        taps = np.array([1.0, 0.5, 0.3j, 0.2, -0.1, 0.05, 0.02])
        full = qam.random_indices(rng, 66)
        symbols = qam.points[full]
        received = np.array([
            sum(taps[k] * symbols[t + 6 - k] for k in range(7)) for t in range(60)
        ])
        decisions = mlse_equalize(received, taps, qam, traceback=20)
        np.testing.assert_array_equal(decisions, full[6:])

    def test_mlse_beats_single_tap_zero_forcing(self, rng):
        qam = QamConstellation(4)
        taps = np.array([1.0, 0.5, 0.3j, 0.2, -0.1, 0.05, 0.02])
        full = qam.random_indices(rng, 406)
        symbols = qam.points[full]
        received = np.array([
            sum(taps[k] * symbols[t + 6 - k] for k in range(7)) for t in range(400)
        ])
        received = received + 0.05 * (rng.standard_normal(400) + 1j * rng.standard_normal(400))
        mlse_errors = qam.bit_errors(full[6:], mlse_equalize(received, taps, qam, traceback=20))
        zf_errors = qam.bit_errors(full[6:], qam.demodulate(zf_equalize(received, np.full(400, taps[0]))))
        assert zf_errors > 0
        assert mlse_errors <= zf_errors

    def test_mlse_on_gaussian_lattice_taps(self, rng):
        g = make_filter(FilterKind.GAUSSIAN, rho=1.0)
        taps = cross_ambiguity(g, g, np.arange(-3, 4) * 1.0, [0.0])[:, 0]
        assert abs(taps[3]) == pytest.approx(1.0, abs=1e-9)
        qam = QamConstellation(4)
        full = qam.random_indices(rng, 106)
        symbols = qam.points[full]
        received = np.array([
            sum(taps[k] * symbols[t + 6 - k] for k in range(7)) for t in range(100)
        ])
        decisions = mlse_equalize(received, taps, qam, traceback=20)
        assert qam.bit_errors(full[6:], decisions) == 0

    def test_mlse_limits(self):
        qam = QamConstellation(4)
        with pytest.raises(ParameterError):
            mlse_equalize(np.zeros(10), np.ones(5), qam)
        with pytest.raises(ConfigurationError):
            mlse_equalize(np.zeros(10), np.ones(7), QamConstellation(16))


class TestTrialConfig:
    def test_validation(self):
        with pytest.raises(ValidationError):
            TrialConfig(M=8)
        with pytest.raises(ValidationError):
            TrialConfig(sir_db=0.0, network=NetworkModel())
        with pytest.raises(ValidationError):
            TrialConfig(bits_target=100)
        assert TrialConfig().scenario == "none"
        assert TrialConfig(sir_db=3.0).scenario == "single"
        assert TrialConfig(network=NetworkModel()).scenario == "ppp"

    @pytest.mark.parametrize("M", [16, 64])
    def test_mlse_infeasible_orders(self, M):
        with pytest.raises(ConfigurationError):
            LinkSimulator(TrialConfig(scheme=Scheme.NOFDM_MLSE, M=M))

    def test_noise_variance(self):
        assert LinkSimulator(TrialConfig(M=4)).noise_variance(10.0) == pytest.approx(0.05)
        assert LinkSimulator(TrialConfig(M=4, symbol_energy=2.0)).noise_variance(10.0) == pytest.approx(0.1)
        assert LinkSimulator(TrialConfig(noise=False)).noise_variance(10.0) == 0.0

    def test_counts_depend_on_ebn0_not_symbol_energy(self, fmt_lattice):
        common = dict(filter=FilterSpec(kind="rrc", alpha=0.2, span=16), lattice=fmt_lattice,
                      sir_db=3.0, eps=0.6)
        unit = LinkSimulator(TrialConfig(**common)).run_batch(0, 10.0)
        double = LinkSimulator(TrialConfig(symbol_energy=2.0, **common)).run_batch(0, 10.0)
        assert unit[0] > 0
        assert unit == double

    def test_summary_statistics(self):
        result = summarize(10, 1000)
        assert result.ber == 0.01
        assert result.ci_halfwidth == pytest.approx(1.96 * math.sqrt(0.01 * 0.99 / 1000))
        assert result.agreement(0.01) == 0.0
        empty = summarize(0, 1000)
        assert empty.status == "warning" and empty.ci_halfwidth == 0.0


@pytest.mark.parametrize("spec", [
    FilterSpec(kind="rrc", alpha=0.2, span=16),
    FilterSpec(kind="gaussian", rho=1.0),
])
def test_lattice_responses_match_literal_chain(spec, fmt_lattice, rng):
    lattice = fmt_lattice
    cfg = TrialConfig(filter=spec, lattice=lattice, sir_db=0.0, eps=0.6, delay_profile="exponential")
    sim = LinkSimulator(cfg)
    shape = (lattice.burst_symbols, lattice.N)
    delays = np.asarray(sim.pdp.delays)

    def grid_values():
        return sim.constellation.modulate(sim.constellation.random_indices(rng, shape))

    victim = SymbolGrid(grid_values(), lattice.K)
    channel = sample_channel(sim.pdp, rng)
    agg_values = grid_values()
    agg_channel = ChannelRealization(sample_taps(sim.pdp, rng)[0], delays)
    burst = AggressorBurst(agg_values, agg_channel.taps, tau_index=10, eps_index=0, amplitude=0.7)

    fast = sim.burst_statistic(victim, channel, [burst])
    literal = simulate_burst(
        sim.g, sim.g, lattice, victim, channel,
        [(SymbolGrid(agg_values, lattice.K), agg_channel, 0.7, 10 / 64, 0.6)],
    )
    assert abs(fast - literal) < 1e-5


def test_same_seed_same_counts():
    cfg = TrialConfig(sir_db=3.0, eps=0.6)
    first = LinkSimulator(cfg).run_batch(0, 10.0)
    second = LinkSimulator(cfg).run_batch(0, 10.0)
    assert first == second
    assert first[1] == 2000 * 2


def test_noise_free_fmt_link_is_error_free(fmt_lattice):
    cfg = TrialConfig(filter=FilterSpec(kind="rrc", alpha=0.2, span=16), lattice=fmt_lattice,
                      noise=False, fading=False)
    errors, bits = LinkSimulator(cfg).run_batch(0, 10.0)
    assert bits == 2000 * 2
    assert errors == 0


@pytest.mark.slow
def test_awgn_calibration():
    cfg = TrialConfig(fading=False, ebn0_db=4.0, bits_target=2 * 10 ** 5)
    result = run_trial(cfg)
    expected = 0.5 * erfc(math.sqrt(10 ** 0.4))
    assert result.agreement(expected) <= 4


@pytest.mark.slow
def test_rayleigh_calibration():
    result = run_trial(TrialConfig(ebn0_db=10.0, bits_target=10 ** 5))
    assert result.agreement(float(rayleigh_ber(10.0))) <= 4


@pytest.mark.slow
def test_single_aggressor_matches_analysis():
    scenario = ScenarioConfig(scenario="single", F=1.5, sir_db=0.0, aggressor_eps=0.5,
                              ebn0_db=[10.0, 20.0], bits_target=2 * 10 ** 5)
    analytic = ber_curve(scenario.ebn0_db, ModQam.from_order(4), scenario.laplace())
    measured = ber_sweep(scenario.trial_config(), scenario.ebn0_db)
    assert np.all(agreement(analytic.ber, measured.ber, measured.bits) <= 4)


@pytest.mark.slow
def test_ppp_field_matches_analysis():
    scenario = ScenarioConfig(scenario="ppp", K0=51.3, D=10.0, cfo_eps=[0.5], cfo_probs=[1.0],
                              ebn0_db=[10.0, 20.0], bits_target=2 * 10 ** 5)
    analytic = ber_curve(scenario.ebn0_db, ModQam.from_order(4), scenario.laplace())
    measured = ber_sweep(scenario.trial_config(), scenario.ebn0_db)
    assert np.all(agreement(analytic.ber, measured.ber, measured.bits) <= 4)


@pytest.mark.slow
def test_nofdm_stream_runs():
    cfg = TrialConfig(
        scheme=Scheme.NOFDM_MLSE,
        filter=FilterSpec(kind="gaussian", rho=1.0),
        lattice=LatticeParams(F=1.0, T=1.0, N=4),
        ebn0_db=20.0,
    )
    sim = LinkSimulator(cfg)
    result = sim.run()
    assert result.bits >= cfg.bits_target
    assert result.bits % sim._bits_per_unit() == 0
    assert 0 < result.ber < 0.1
