import pytest

from pyraman import DIAMOND, ExperimentConfig, PulseSpec


@pytest.fixture
def cfg():
    return ExperimentConfig()


@pytest.fixture
def model():
    return DIAMOND


@pytest.fixture
def scaled_cfg():
    """Monte Carlo config with rates scaled up so short runs carry real statistics.

    eta_h * eta_fc0 = 0.037 against P_n = 0.01 puts g2 near 4, the same regime
    as the experiment, with thousands of coincidences per million slots.
    """
    return ExperimentConfig(eta_fc0=0.1, eta_h=0.37, p_noise=0.01, p_herald=0.05, g2_source=11.0,
                            block_slots=2 ** 16)


@pytest.fixture
def read_800():
    return PulseSpec(800.0, 3.5)
