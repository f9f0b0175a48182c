from __future__ import annotations

from dataclasses import asdict, dataclass, field, fields
from enum import Enum
from typing import List, Optional

import numpy as np

from .exceptions import ConfigError
from .validation import ErrorChecker


class ScenarioKind(str, Enum):
    FREQ_SWEEP = 'freq-sweep'
    DELAY_SCAN = 'delay-scan'
    BANDWIDTH = 'bandwidth'
    HISTOGRAM = 'histogram'
    G2_POINT = 'g2-point'
    DIP_SCAN = 'dip-scan'


@dataclass
class ScenarioParameters:
    """Base class for the kind-specific parameter lists."""
    pass


@dataclass
class FreqSweepParameters(ScenarioParameters):
    read_wavelengths: List[float] = field(default_factory=lambda: [float(x) for x in range(784, 813, 2)])
    read_fwhm: Optional[float] = None


@dataclass
class DelayScanParameters(ScenarioParameters):
    delays: List[float] = field(default_factory=lambda: np.linspace(0.0, 10.0, 15).tolist())  # ps
    read_center: float = 792.0
    read_fwhm: Optional[float] = None


@dataclass
class BandwidthParameters(ScenarioParameters):
    read_fwhms: List[float] = field(default_factory=lambda: [2.1, 12.1])
    read_center: float = 801.0


@dataclass
class PointParameters(ScenarioParameters):
    read_center: float = 800.0
    delay: float = 0.0  # ps
    read_fwhm: Optional[float] = None


@dataclass
class DipScanParameters(ScenarioParameters):
    delays: List[float] = field(default_factory=lambda: np.linspace(-1000.0, 1000.0, 81).tolist())  # fs


PARAMETER_CLASSES = {
    ScenarioKind.FREQ_SWEEP: FreqSweepParameters,
    ScenarioKind.DELAY_SCAN: DelayScanParameters,
    ScenarioKind.BANDWIDTH: BandwidthParameters,
    ScenarioKind.HISTOGRAM: PointParameters,
    ScenarioKind.G2_POINT: PointParameters,
    ScenarioKind.DIP_SCAN: DipScanParameters,
}


def serialize_parameters(parameters: ScenarioParameters) -> dict:
    return {k: v for k, v in asdict(parameters).items() if v is not None}


@dataclass
class Scenario:
    kind: ScenarioKind
    parameters: ScenarioParameters
    trials: Optional[int] = None  # slots per point; None uses the config value
    seed: int = 0
    analytic_only: bool = False
    workers: int = 1
    plot: bool = False

    def __post_init__(self):
        self.kind = ScenarioKind(self.kind)
        expected = PARAMETER_CLASSES[self.kind]
        if not isinstance(self.parameters, expected):
            raise ConfigError(f'{self.kind.value} needs {expected.__name__}, got {type(self.parameters).__name__}', field='parameters')
        for f in fields(self.parameters):
            value = getattr(self.parameters, f.name)
            if isinstance(value, list) and len(value) == 0:
                raise ConfigError('parameter list must not be empty', field=f.name)
        if self.trials is not None:
            ErrorChecker.check_count(self.trials, 'trials', minimum=1, error=ConfigError)
        ErrorChecker.check_count(self.workers, 'workers', minimum=1, error=ConfigError)
        ErrorChecker.check_count(self.seed, 'seed', error=ConfigError)
        if self.seed >= 2 ** 64:
            raise ConfigError(f'{self.seed} does not fit in 64 bits', field='seed')


class ScenarioBuilder:
    """Queue several scenarios that share seed, trials and run flags."""

    def __init__(self, **defaults):
        self.scenarios = []
        self.defaults = defaults

    def add(self, kind: ScenarioKind, parameters: Optional[ScenarioParameters] = None, **overrides) -> ScenarioBuilder:
        kind = ScenarioKind(kind)
        if parameters is None:
            parameters = PARAMETER_CLASSES[kind]()
        options = {**self.defaults, **overrides}
        self.scenarios.append(Scenario(kind, parameters, **options))
        return self

    def build(self) -> List[Scenario]:
        return list(self.scenarios)
