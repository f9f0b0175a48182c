import pytest

from pyraman import ConfigError
from pyraman.scenarios import (
    BandwidthParameters,
    DelayScanParameters,
    DipScanParameters,
    FreqSweepParameters,
    PointParameters,
    Scenario,
    ScenarioBuilder,
    ScenarioKind,
    serialize_parameters,
)


def test_default_parameter_lists():
    assert FreqSweepParameters().read_wavelengths == [784.0 + 2 * i for i in range(15)]
    delays = DelayScanParameters().delays
    assert len(delays) == 15 and delays[0] == 0.0 and delays[-1] == 10.0
    assert BandwidthParameters().read_fwhms == [2.1, 12.1]
    assert len(DipScanParameters().delays) == 81


def test_serialize_parameters_drops_unset_values():
    assert serialize_parameters(PointParameters()) == {'read_center': 800.0, 'delay': 0.0}
    assert serialize_parameters(PointParameters(read_fwhm=2.0))['read_fwhm'] == 2.0


def test_kind_accepts_strings():
    s = Scenario('g2-point', PointParameters())
    assert s.kind is ScenarioKind.G2_POINT


@pytest.mark.parametrize('kwargs, field', [
    ({'kind': ScenarioKind.FREQ_SWEEP, 'parameters': FreqSweepParameters([])}, 'read_wavelengths'),
    ({'kind': ScenarioKind.DELAY_SCAN, 'parameters': DelayScanParameters(), 'trials': 0}, 'trials'),
    ({'kind': ScenarioKind.HISTOGRAM, 'parameters': PointParameters(), 'workers': 0}, 'workers'),
    ({'kind': ScenarioKind.HISTOGRAM, 'parameters': PointParameters(), 'seed': 2 ** 64}, 'seed'),
    ({'kind': ScenarioKind.BANDWIDTH, 'parameters': PointParameters()}, 'parameters'),
])
def test_invalid_scenarios(kwargs, field):
    with pytest.raises(ConfigError) as info:
        Scenario(**kwargs)
    assert info.value.field == field


def test_builder_shares_defaults():
    scenarios = (ScenarioBuilder(seed=9, analytic_only=True)
                 .add(ScenarioKind.FREQ_SWEEP)
                 .add('dip-scan', seed=3)
                 .build())
    assert [s.kind for s in scenarios] == [ScenarioKind.FREQ_SWEEP, ScenarioKind.DIP_SCAN]
    assert [s.seed for s in scenarios] == [9, 3]
    assert all(s.analytic_only for s in scenarios)
    assert isinstance(scenarios[1].parameters, DipScanParameters)
