"""
Файл сценария: ключи key = value и их проверка
"""
import logging
from pathlib import Path
from typing import Callable, Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator

from ..analysis.ber import no_interference
from ..analysis.laplace import multi_aggressor_laplace, single_aggressor_laplace
from ..analysis.network import CfoPmf, NetworkModel
from ..interference.gains import gain_table, timing_averaged_gain
from ..interference.tradeoff import TradeoffConfig
from ..montecarlo.link import Scheme, TrialConfig
from ..utils.config import Config
from ..utils.io import read_scenario
from ..waveform.filters import FilterKind, FilterSpec
from ..waveform.lattice import LatticeParams

logger = logging.getLogger(__name__)

LIST_FIELDS = ("eps", "values", "ebn0_db", "cfo_eps", "cfo_probs")

DEFAULT_AXIS_VALUES = {
    "F": [1.0, 1.1, 1.2, 1.3, 1.4, 1.5, 1.75, 2.0],
    "rho": [1.0, 0.5, 0.25, 0.1],
}


class ScenarioConfig(BaseModel):
    """
    Сценарий командной строки. CFO (eps, cfo_eps) задаются в долях F.
    Неизвестные ключи запрещены.
    """
    model_config = ConfigDict(extra="forbid", frozen=True, populate_by_name=True)

    # Фильтр и решётка
    filter: FilterKind = Field(FilterKind.RRC, description="rrc | gaussian | rect")
    alpha: float = Field(0.2, ge=0, le=1)
    rho: float = Field(1.0, gt=0)
    oversampling: int = Field(Config.OVERSAMPLING, ge=Config.MIN_OVERSAMPLING)
    span: Optional[float] = Field(None, ge=1)
    F: float = Field(1.2, gt=0)
    T: float = Field(1.0, gt=0)
    N: int = Field(Config.DEFAULT_SUBCARRIERS, ge=1)
    K: int = Field(Config.DEFAULT_TRUNCATION, ge=1)

    # Коэффициенты помех
    eps: List[float] = Field(default_factory=lambda: [0.0, 0.5], description="CFO в долях F")
    n_tau: int = Field(Config.TAU_POINTS, ge=16)
    n_sum: Optional[int] = Field(None, ge=0, description="Окно поднесущих; None: вся полоса")
    flat_tol: float = Field(1e-3, gt=0)

    # Компромисс
    axis: str = Field("F", description="F | rho")
    values: List[float] = Field(default_factory=list)

    # BER
    scheme: Scheme = Scheme.FMT_ZF
    M: int = 4
    ebn0_db: List[float] = Field(default_factory=lambda: [0.0, 10.0, 20.0, 30.0])
    bits_target: int = Field(2 * 10 ** 5, ge=Config.MIN_BITS_TARGET)
    seed: int = Field(Config.RANDOM_STATE, ge=0)
    fading: bool = True
    delay_profile: str = Field("flat", pattern="^(flat|exponential)$")
    aggressor_signaling: str = Field("gaussian", pattern="^(gaussian|qam)$")
    stream_symbols: int = Field(Config.STREAM_SYMBOLS, ge=32)

    # Помеха
    scenario: str = Field("none", pattern="^(none|single|ppp)$")
    sir_db: float = 0.0
    aggressor_eps: float = Field(0.5, ge=0, description="CFO одного агрессора, доля F")
    cfo_eps: List[float] = Field(default_factory=lambda: [0.5], description="Уровни CFO поля, доли F")
    cfo_probs: List[float] = Field(default_factory=lambda: [1.0])
    lam: Optional[float] = Field(None, gt=0, alias="lambda")
    d_min: float = Field(25.0, gt=0)
    D: float = Field(10.0, gt=0)
    K0: Optional[float] = None
    n: float = Field(40.0, gt=0)
    beta: float = Field(0.0, ge=0, le=1)
    r_max: Optional[float] = Field(None, gt=0)

    @field_validator(*LIST_FIELDS, mode="before")
    @classmethod
    def _split(cls, value):
        if isinstance(value, str):
            return [item.strip() for item in value.split(",") if item.strip()]
        return value

    @field_validator("span", "n_sum", "lam", "K0", "r_max", mode="before")
    @classmethod
    def _none(cls, value):
        if isinstance(value, str) and value.strip().lower() in ("", "none"):
            return None
        return value

    def filter_spec(self) -> FilterSpec:
        return FilterSpec(kind=self.filter, alpha=self.alpha, rho=self.rho,
                          oversampling=self.oversampling, span=self.span)

    def lattice(self) -> LatticeParams:
        return LatticeParams(F=self.F, T=self.T, N=self.N, K=self.K)

    def eps_values(self) -> List[float]:
        """Абсолютные CFO, F0."""
        return [e * self.F for e in self.eps]

    def tradeoff_config(self, axis: Optional[str] = None) -> TradeoffConfig:
        axis = axis or self.axis
        values = self.values or DEFAULT_AXIS_VALUES.get(axis, [])
        return TradeoffConfig(axis=axis, values=values, alpha=self.alpha, oversampling=self.oversampling,
                              N=self.N, K=self.K, n_tau=self.n_tau, n_sum=self.n_sum)

    def network(self) -> NetworkModel:
        params: Dict[str, float] = {"d_min": self.d_min, "D": self.D, "n": self.n, "beta": self.beta}
        if self.lam is not None:
            params["lam"] = self.lam
        if self.K0 is not None:
            params["K0"] = self.K0
        return NetworkModel(**params)

    def cfo(self) -> CfoPmf:
        return CfoPmf(eps_levels=[e * self.F for e in self.cfo_eps], probs=self.cfo_probs)

    def trial_config(self, ebn0_db: float = 10.0, seed: Optional[int] = None) -> TrialConfig:
        params = dict(
            scheme=self.scheme, filter=self.filter_spec(), lattice=self.lattice(), M=self.M,
            ebn0_db=ebn0_db, bits_target=self.bits_target, seed=self.seed if seed is None else seed,
            fading=self.fading, delay_profile=self.delay_profile, n_tau=self.n_tau,
            n_sum=self.N if self.n_sum is None else self.n_sum,
            stream_symbols=self.stream_symbols, aggressor_signaling=self.aggressor_signaling,
        )
        if self.scenario == "single":
            params.update(sir_db=self.sir_db, eps=self.aggressor_eps * self.F)
        elif self.scenario == "ppp":
            params.update(network=self.network(), cfo=self.cfo(), r_max=self.r_max)
        return TrialConfig(**params)

    def laplace(self) -> Callable[[float], float]:
        """
        L_I(z) аналитической модели для сценария.

        none: 1; single: по таблице Ψ(τ, ε) при ε ∈ {0, ε_агрессора};
        ppp: по усреднённым по τ Ψ̄ для каждого уровня CFO.
        """
        if self.scenario == "none":
            return no_interference

        g = self.filter_spec().build()
        lattice = self.lattice()
        if self.scenario == "single":
            eps = self.aggressor_eps * self.F
            table = gain_table(g, g, lattice, sorted({0.0, eps}), self.n_tau, self.n_sum)
            return single_aggressor_laplace(table, eps, self.sir_db, self.flat_tol)

        cfo = self.cfo()
        psi_bar = {
            eps: timing_averaged_gain(g, g, lattice, eps, self.n_tau, n_sum=self.n_sum)
            for eps in cfo.eps_levels
        }
        return multi_aggressor_laplace(self.network(), cfo, psi_bar)


def load_scenario(path: Optional[Union[str, Path]]) -> ScenarioConfig:
    """Сценарий из файла или значения по умолчанию, если путь не задан."""
    if path is None:
        return ScenarioConfig()
    values = read_scenario(path)
    config = ScenarioConfig(**values)
    logger.info(f"Сценарий загружен из {path}")
    return config
