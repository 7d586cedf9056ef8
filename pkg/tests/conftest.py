"""
Общие фикстуры: фильтры, решётки, генератор, запись сценариев
"""
import numpy as np
import pytest

from src.waveform import FilterKind, LatticeParams, make_filter


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def rrc():
    """FMT-фильтр: RRC с alpha = 0.2."""
    return make_filter(FilterKind.RRC, alpha=0.2)


@pytest.fixture(scope="session")
def short_rrc():
    return make_filter(FilterKind.RRC, alpha=0.2, span=16)


@pytest.fixture(scope="session")
def gaussian():
    return make_filter(FilterKind.GAUSSIAN, rho=1.0)


@pytest.fixture(scope="session")
def rect():
    return make_filter(FilterKind.RECT)


@pytest.fixture
def fmt_lattice():
    return LatticeParams(F=1.2, T=1.0, N=4, K=3)


@pytest.fixture
def write_scenario(tmp_path):
    """Запись файла сценария key = value."""
    def _write(name="scenario.txt", **values):
        path = tmp_path / name
        path.write_text("\n".join(f"{k} = {v}" for k, v in values.items()) + "\n", encoding="utf-8")
        return path
    return _write
