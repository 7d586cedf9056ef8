"""
Набор критериев приёмки: аналитика, коэффициенты помех, согласие с Монте-Карло
"""
import logging
import math
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from .scenario import ScenarioConfig
from ..analysis.ber import (
    ExponentialGammaMixture,
    ModQam,
    agreement,
    avg_ber,
    ber_curve,
    db_to_linear,
    erfc_laplace_rhs,
    erfc_monte_carlo_lhs,
    no_interference,
    rayleigh_ber,
)
from ..analysis.laplace import laplace_multi
from ..analysis.network import NetworkModel, pathloss_constants
from ..interference.frames import frame_bounds_estimate, gaussian_atoms, plancherel_ratio
from ..interference.gains import GainTable, gain_table, mean_self_gain, timing_averaged_gain
from ..interference.tradeoff import TradeoffConfig, tradeoff_sweep
from ..montecarlo.deployment import interference_mgf_monte_carlo
from ..montecarlo.link import ber_sweep
from ..utils.config import Config
from ..utils.exceptions import PotError
from ..utils.io import write_csv
from ..waveform.filters import FilterKind, make_filter
from ..waveform.lattice import LatticeParams

logger = logging.getLogger(__name__)

Check = Tuple[bool, str]


@dataclass(frozen=True)
class CriterionResult:
    """Итог одного критерия"""
    name: str
    passed: bool
    detail: str
    duration_s: float


def rayleigh_anchor() -> Check:
    """avg_ber без помех для QAM-4 против замкнутой формы Рэлея."""
    mod = ModQam.from_order(4)
    points = np.arange(0, 31, 5, dtype=float)
    worst = 0.0
    for ebn0 in db_to_linear(points):
        exact = float(rayleigh_ber(ebn0))
        value = avg_ber(float(ebn0), mod, no_interference)
        worst = max(worst, abs(value - exact) / exact)
    return worst < 1e-6, f"макс. отн. ошибка {worst:.2e}"


def pathloss_anchor() -> Check:
    K0, n = pathloss_constants(3500.0)
    return 51.25 <= K0 <= 51.35 and n == 40.0, f"K0={K0:.4f}, n={n}"


def erfc_laplace_oracle(seed: int = Config.RANDOM_STATE, n_samples: int = 10 ** 6) -> Check:
    """Квадратура через L_y против Монте-Карло на 5 случайных тройках (a, b, y)."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(5):
        a, b = rng.uniform(0.1, 2.0), rng.uniform(0.01, 1.0)
        mixture = ExponentialGammaMixture(
            p=rng.uniform(0.2, 0.8), mean_exp=rng.uniform(0.5, 2.0),
            shape=rng.uniform(0.5, 3.0), scale=rng.uniform(0.2, 2.0),
        )
        rhs = erfc_laplace_rhs(mixture.laplace, a, b)
        lhs, stderr = erfc_monte_carlo_lhs(a, b, mixture.sample, n_samples, rng)
        worst = max(worst, abs(rhs - lhs) / stderr)
    return worst <= 3.0, f"макс. отклонение {worst:.2f} ст. ошибки"


def gain_table_structure() -> Check:
    """FMT α=0.2, F=1.2: Ψ(τ, F/2) плоский и ниже полного перекрытия."""
    g = make_filter(FilterKind.RRC, alpha=0.2)
    lattice = LatticeParams(F=1.2)
    table = gain_table(g, g, lattice, [0.0, lattice.F / 2])
    flatness = table.flatness(lattice.F / 2)
    full, partial = table.mean(0.0), table.mean(lattice.F / 2)
    passed = flatness < 0.01 and partial < full
    return passed, f"δ={flatness:.2e}, Ψ̄(F/2)={partial:.4e}, Ψ̄(0)={full:.4e}"


def orthogonality() -> Check:
    """Ψ_self ≈ 0 для RRC FMT при F = 1 + α, Ψ(0, 0) = 1 для ортонормированной системы."""
    alpha = 0.2
    g = make_filter(FilterKind.RRC, alpha=alpha)
    lattice = LatticeParams(F=1 + alpha)
    psi_self = mean_self_gain(g, lattice)
    aligned = float(gain_table(g, g, lattice, [0.0]).psi[0, 0])
    passed = psi_self <= 1e-6 and abs(aligned - 1.0) <= 1e-6
    return passed, f"Ψ_self={psi_self:.2e}, Ψ(0,0)={aligned:.8f}"


def tradeoff_monotonicity() -> Check:
    curve = tradeoff_sweep(TradeoffConfig(axis="rho", values=[1.0, 0.5, 0.25, 0.1]))
    self_up = bool(np.all(np.diff(curve.psi_self) > 0))
    other_down = bool(np.all(np.diff(curve.psi_other_partial) < 0))
    return self_up and other_down, (
        f"Ψ_self={np.array2string(curve.psi_self, precision=3)}, "
        f"Ψ_other(F/2)={np.array2string(curve.psi_other_partial, precision=3)}"
    )


def _curve_agreement(scenario: ScenarioConfig, ebn0_db: Sequence[float]) -> float:
    analytic = ber_curve(ebn0_db, ModQam.from_order(scenario.M), scenario.laplace())
    measured = ber_sweep(scenario.trial_config(), ebn0_db)
    return float(np.max(agreement(analytic.ber, measured.ber, measured.bits)))


def single_aggressor_agreement(seed: int = Config.RANDOM_STATE) -> Check:
    """FMT α=0.2, SIR=0 дБ: Монте-Карло в пределах 3σ от аналитики при ε ∈ {0, F/2}."""
    ebn0_db = [0.0, 10.0, 20.0, 30.0]
    worst = 0.0
    for F in (1.2, 1.5, 2.0):
        for eps in (0.0, 0.5):
            scenario = ScenarioConfig(
                F=F, scenario="single", sir_db=0.0, aggressor_eps=eps,
                ebn0_db=ebn0_db, bits_target=2 * 10 ** 5, seed=seed,
            )
            value = _curve_agreement(scenario, ebn0_db)
            logger.info(f"F={F}, ε={eps}F: согласие {value:.2f}σ")
            worst = max(worst, value)
    return worst <= 3.0, f"макс. |Δ|/σ = {worst:.2f}"


def _mean_interference(net: NetworkModel, psi_bar: float) -> float:
    """E[I] поля вне d_min при β-компенсации собственного звена."""
    k = net.decay
    power = net.beta * k / 2
    own = (net.lam * math.pi) ** (-power) * math.gamma(1 + power)
    return 2 * math.pi * net.lam * psi_bar * net.D ** (k - net.beta * k) * own * net.d_min ** (2 - k) / (k - 2)


def ppp_agreement(seed: int = Config.RANDOM_STATE, n_draws: int = 10 ** 6) -> Check:
    """
    Пуассоновское поле POT-агрессоров: Монте-Карло BER в пределах 3σ,
    квадратура L_I против прямой оценки по реализациям поля.
    """
    ebn0_db = [0.0, 10.0, 20.0]
    worst_ber, worst_mgf = 0.0, 0.0
    for D in (10.0, 20.0):
        for beta in (0.0, 1.0):
            scenario = ScenarioConfig(
                scenario="ppp", D=D, beta=beta, K0=51.3, n=40.0, cfo_eps=[0.5], cfo_probs=[1.0],
                ebn0_db=ebn0_db, bits_target=2 * 10 ** 5, seed=seed,
            )
            worst_ber = max(worst_ber, _curve_agreement(scenario, ebn0_db))

            net, cfo = scenario.network(), scenario.cfo()
            g = scenario.filter_spec().build()
            eps = cfo.eps_levels[0]
            psi = {eps: timing_averaged_gain(g, g, scenario.lattice(), eps, scenario.n_tau, n_sum=scenario.n_sum)}
            z = 0.05 / _mean_interference(net, psi[eps])
            quad = laplace_multi(z, net, cfo, psi)
            direct = interference_mgf_monte_carlo(
                z, net, cfo, psi, n_draws, np.random.default_rng(seed), tail_correction=True,
            )
            worst_mgf = max(worst_mgf, abs(quad - direct))
            logger.info(f"D={D}, β={beta}: L_I({z:.3e}) = {quad:.6f}, по реализациям {direct:.6f}")
    passed = worst_ber <= 3.0 and worst_mgf < 1e-3
    return passed, f"макс. |Δ|/σ = {worst_ber:.2f}, макс. |ΔL_I| = {worst_mgf:.2e}"


def nofdm_reproduction(seed: int = Config.RANDOM_STATE) -> Check:
    """
    NOFDM с MLSE, TF = 1: гауссов ρ=0.1 лучше ρ=1 на 10-20 дБ при SIR=0 дБ, ε=F/2,
    и на всей сетке совпадает с собственной кривой без помех в пределах 3σ.
    """
    ebn0_db = [10.0, 20.0]
    common = dict(filter=FilterKind.GAUSSIAN, F=1.0, T=1.0, scheme="nofdm-mlse",
                  ebn0_db=ebn0_db, bits_target=10 ** 5, seed=seed)
    narrow = ber_sweep(ScenarioConfig(rho=0.1, scenario="single", sir_db=0.0, aggressor_eps=0.5,
                                      **common).trial_config(), ebn0_db)
    wide = ber_sweep(ScenarioConfig(rho=1.0, scenario="single", sir_db=0.0, aggressor_eps=0.5,
                                    **common).trial_config(), ebn0_db)
    clean = ber_sweep(ScenarioConfig(rho=0.1, scenario="none", **common).trial_config(), ebn0_db)

    better = bool(np.all(narrow.ber < wide.ber))
    spread = 3 * np.sqrt(narrow.sigma ** 2 + clean.sigma ** 2)
    gap = np.abs(narrow.ber - clean.ber)
    close = bool(np.all(gap <= spread))
    worst = int(np.argmax(gap - spread))
    return better and close, (
        f"ρ=0.1: {np.array2string(narrow.ber, precision=3)}, ρ=1: {np.array2string(wide.ber, precision=3)}, "
        f"без помех: {np.array2string(clean.ber, precision=3)} "
        f"(худшая точка {ebn0_db[worst]:.0f} дБ: |Δ|={gap[worst]:.2e}, 3σ={spread[worst]:.2e})"
    )


def frame_suite(seed: int = Config.RANDOM_STATE) -> Check:
    """Равенство Планшереля для прямоугольного базиса при TF=1, границы фрейма гауссова импульса."""
    lattice = LatticeParams(F=1.0, T=1.0)
    rect = make_filter(FilterKind.RECT)
    ratios = [plancherel_ratio(s, rect, lattice)
              for s in gaussian_atoms(rect, lattice, 10, np.random.default_rng(seed))]
    worst = max(abs(r - 1.0) for r in ratios)

    gauss = make_filter(FilterKind.GAUSSIAN, rho=1.0)
    a_est, b_est = frame_bounds_estimate(gauss, lattice, seed=seed)
    passed = worst <= 1e-6 and 0 < a_est < 1.0 < b_est < math.inf
    return passed, f"|Планшерель - 1| ≤ {worst:.1e}, A≈{a_est:.4f}, B≈{b_est:.4f}"


def gain_table_input(path: Union[str, Path]) -> Check:
    table = GainTable.read_csv(path)
    return True, f"{table.tau_grid.size} τ × {table.eps_grid.size} ε, Ψ_self={table.psi_self:.3e}"


CRITERIA: List[Tuple[str, Callable[[], Check], bool]] = [
    ("rayleigh-anchor", rayleigh_anchor, True),
    ("pathloss-constants", pathloss_anchor, True),
    ("erfc-laplace-oracle", erfc_laplace_oracle, True),
    ("gain-table-structure", gain_table_structure, True),
    ("orthogonality", orthogonality, True),
    ("tradeoff-monotonicity", tradeoff_monotonicity, True),
    ("single-aggressor-agreement", single_aggressor_agreement, False),
    ("ppp-agreement", ppp_agreement, False),
    ("nofdm-reproduction", nofdm_reproduction, False),
    ("frame-plancherel", frame_suite, True),
]


def _run(name: str, check: Callable[[], Check]) -> CriterionResult:
    start = time.perf_counter()
    try:
        passed, detail = check()
    except (PotError, ValueError) as e:
        passed, detail = False, f"{type(e).__name__}: {e}"
    duration = time.perf_counter() - start
    level = logging.INFO if passed else logging.ERROR
    logger.log(level, f"[{'PASS' if passed else 'FAIL'}] {name}: {detail} ({duration:.1f} с)")
    return CriterionResult(name, bool(passed), detail, duration)


def run_validation(quick: bool = False, gain_table_path: Optional[Union[str, Path]] = None) -> List[CriterionResult]:
    """
    Прогон критериев приёмки.

    Args:
        quick: Только быстрые критерии (без Монте-Карло BER)
        gain_table_path: Внешняя таблица Ψ(τ, ε) для проверки инвариантов

    Returns:
        Результаты в порядке запуска
    """
    results = []
    if gain_table_path is not None:
        results.append(_run("gain-table-input", lambda: gain_table_input(gain_table_path)))
    for name, check, fast in CRITERIA:
        if quick and not fast:
            continue
        results.append(_run(name, check))
    failed = [r.name for r in results if not r.passed]
    if failed:
        logger.error(f"Не пройдены: {', '.join(failed)}")
    else:
        logger.info(f"Все {len(results)} критериев пройдены")
    return results


def report_frame(results: Sequence[CriterionResult]) -> pd.DataFrame:
    return pd.DataFrame({
        "criterion": [r.name for r in results],
        "passed": [int(r.passed) for r in results],
        "duration_s": [r.duration_s for r in results],
        "detail": [r.detail for r in results],
    })


def write_report(results: Sequence[CriterionResult], path: Union[str, Path]) -> Path:
    passed = sum(r.passed for r in results)
    return write_csv(report_frame(results), path, "validation", {"passed": f"{passed}/{len(results)}"})
