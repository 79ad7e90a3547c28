import numpy as np
import pytest

from models.experiment import ExperimentConfig
from models.link import ChannelRealization, LinkParams, RadioParams
from physics.channel import draw_realization
from physics.geometry import build_correlation
from harness.experiment import derive_grid
from utils.units import db_to_linear, dbm_to_watt

# -120 dBm noise puts the reference link budget in the regime where rates are a few bps/Hz.
TEST_NOISE_DBM = -120.0


@pytest.fixture
def radio():
    return RadioParams(power_w=dbm_to_watt(30.0), noise_w=dbm_to_watt(TEST_NOISE_DBM))


@pytest.fixture
def links():
    rho = db_to_linear(-20.0)
    return (
        LinkParams(rho=rho, alpha=2.6, distance_m=400.0),
        LinkParams(rho=rho, alpha=2.6, distance_m=75.0),
    )


@pytest.fixture
def grid3():
    return derive_grid(ExperimentConfig(my=3, mz=3, m_hat=3, bits=1))


@pytest.fixture
def grid10():
    return derive_grid(ExperimentConfig())


@pytest.fixture
def make_channel(links):
    """Channel factory: make_channel(grid, seed) draws a correlated realization."""
    cache = {}

    def _make(grid, seed):
        key = (grid.my, grid.mz, grid.spacing_m)
        if key not in cache:
            cache[key] = build_correlation(grid)
        return draw_realization(np.random.default_rng(seed), cache[key], *links)

    return _make


@pytest.fixture
def iid_channel():
    """Unit-variance uncorrelated channel factory: iid_channel(m, seed)."""

    def _make(m, seed):
        rng = np.random.default_rng(seed)
        h_br = (rng.standard_normal(m) + 1j * rng.standard_normal(m)) / np.sqrt(2)
        h_ru = (rng.standard_normal(m) + 1j * rng.standard_normal(m)) / np.sqrt(2)
        return ChannelRealization(h_br=h_br, h_ru=h_ru, h_ru_corr=h_ru.copy())

    return _make


@pytest.fixture
def unit_radio():
    return RadioParams(power_w=1.0, noise_w=1.0)


@pytest.fixture
def small_config(tmp_path):
    return ExperimentConfig(
        my=3, mz=3, m_hat=3, bits=1, trials=3, noise_dbm=TEST_NOISE_DBM,
        schemes="fris,ris,aligned,oracle", out_path=str(tmp_path / "results.csv"),
    )
