"""Experiment configuration: measured defaults, JSON loading and validation.

The config file is a JSON object whose keys are ExperimentConfig field names
plus an optional ``sellmeier`` block::

    {
        "lifetime": 3.5,
        "write_pulse": {"center": 800.0, "fwhm": 5.0},
        "sellmeier": {"terms": [[0.3306, 175.0], [4.3356, 106.0]],
                      "valid_range": [400.0, 1100.0]}
    }

Missing keys take the defaults below; unknown keys are rejected.
"""
from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any, Tuple, Union

from .dispersion import DIAMOND, SellmeierModel
from .exceptions import ConfigError, DomainError
from .spectral_core import PulseSpec
from .validation import ErrorChecker

logger = logging.getLogger(__name__)

PULSE_FIELDS = ('input_pulse', 'write_pulse')
PROBABILITY_FIELDS = ('eta_fc0', 'eta_h', 'p_noise', 'p_herald', 'mono_efficiency', 'dip_depth', 'p_dark', 'leak_efficiency')
POSITIVE_FIELDS = ('herald_wavelength', 'phonon_freq', 'crystal_length', 'lifetime', 'rep_rate', 'write_duration', 'dip_fwhm', 'read_fwhm')
COUNT_FIELDS = ('trials', 'block_slots')


@dataclass(frozen=True)
class ExperimentConfig:
    input_pulse: PulseSpec = PulseSpec(723.5, 4.1)  # nm
    write_pulse: PulseSpec = PulseSpec(800.0, 5.0)  # nm
    herald_wavelength: float = 894.6  # nm
    phonon_freq: float = 40.0  # THz
    crystal_length: float = 2.3e-3  # m
    lifetime: float = 3.5  # ps
    eta_fc0: float = 0.011
    eta_h: float = 1.3e-3
    p_noise: float = 3.8e-6
    p_herald: float = 1.0e-3
    rep_rate: float = 80.0  # MHz
    mono_resolution: float = 1.1  # nm
    mono_efficiency: float = 0.10
    write_duration: float = 190.0  # fs
    dip_depth: float = 0.18
    g2_source: float = 164.0
    dip_fwhm: float = 346.0  # fs
    read_fwhm: float = 3.5  # nm
    p_dark: float = 0.0
    leak_efficiency: float = 0.0
    trials: int = 4_000_000_000
    block_slots: int = 2 ** 22

    def __post_init__(self):
        for name in PULSE_FIELDS:
            if not isinstance(getattr(self, name), PulseSpec):
                raise ConfigError('must be a PulseSpec', field=name)
        for name in PROBABILITY_FIELDS:
            ErrorChecker.check_probability(getattr(self, name), name, error=ConfigError)
        for name in POSITIVE_FIELDS:
            ErrorChecker.check_positive(getattr(self, name), name, error=ConfigError)
        ErrorChecker.check_non_negative(self.mono_resolution, 'mono_resolution', error=ConfigError)
        for name in COUNT_FIELDS:
            ErrorChecker.check_count(getattr(self, name), name, minimum=1, error=ConfigError)
        ErrorChecker.check_finite(self.g2_source, 'g2_source', error=ConfigError)
        if self.g2_source <= 1:
            raise ConfigError(f'{self.g2_source} must exceed 1 for a correlated pair source', field='g2_source')
        if self.p_dark > self.p_noise:
            raise ConfigError(f'{self.p_dark} cannot exceed p_noise ({self.p_noise})', field='p_dark')
        if self.dip_fwhm <= self.write_duration:
            raise ConfigError(f'{self.dip_fwhm} fs must exceed write_duration ({self.write_duration} fs)', field='dip_fwhm')
        if self.p_herald > mean_pair_number(self):
            logger.warning('p_herald %.3g exceeds the mean pair number %.3g implied by g2_source %.4g',
                           self.p_herald, mean_pair_number(self), self.g2_source)

    @property
    def slot_period_ns(self) -> float:
        """Time between adjacent oscillator pulses."""
        return 1e3 / self.rep_rate


def mean_pair_number(cfg: ExperimentConfig) -> float:
    """Mean pairs per slot of a thermal source with the given heralded g2."""
    return 1.0 / (cfg.g2_source - 1.0)


def _parse_pulse(name: str, raw: Any, default: PulseSpec) -> PulseSpec:
    if not isinstance(raw, dict):
        raise ConfigError('must be an object with "center" and "fwhm"', field=name)
    unknown = sorted(set(raw) - {'center', 'fwhm'})
    if unknown:
        raise ConfigError('unknown key', field=f'{name}.{unknown[0]}')
    center = raw.get('center', default.center)
    width = raw.get('fwhm', default.fwhm)
    ErrorChecker.check_positive(center, f'{name}.center', error=ConfigError)
    ErrorChecker.check_positive(width, f'{name}.fwhm', error=ConfigError)
    try:
        return PulseSpec(center, width)
    except DomainError as err:
        raise ConfigError(str(err), field=f'{name}.fwhm') from err


def _parse_sellmeier(raw: Any) -> SellmeierModel:
    if not isinstance(raw, dict):
        raise ConfigError('must be an object with "terms" and "valid_range"', field='sellmeier')
    unknown = sorted(set(raw) - {'terms', 'valid_range'})
    if unknown:
        raise ConfigError('unknown key', field=f'sellmeier.{unknown[0]}')
    terms = raw.get('terms', [list(t) for t in DIAMOND.terms])
    valid_range = raw.get('valid_range', list(DIAMOND.valid_range))
    if not isinstance(terms, list) or not terms:
        raise ConfigError('must be a non-empty list of [strength, pole_nm] pairs', field='sellmeier.terms')
    for i, term in enumerate(terms):
        if not isinstance(term, list) or len(term) != 2:
            raise ConfigError('must be a [strength, pole_nm] pair', field=f'sellmeier.terms[{i}]')
        for value in term:
            ErrorChecker.check_finite(value, f'sellmeier.terms[{i}]', error=ConfigError)
    if not isinstance(valid_range, list) or len(valid_range) != 2:
        raise ConfigError('must be a [lo_nm, hi_nm] pair', field='sellmeier.valid_range')
    for value in valid_range:
        ErrorChecker.check_finite(value, 'sellmeier.valid_range', error=ConfigError)
    try:
        return SellmeierModel(tuple((float(a), float(p)) for a, p in terms), (float(valid_range[0]), float(valid_range[1])))
    except DomainError as err:
        raise ConfigError(str(err), field='sellmeier') from err


def config_from_dict(raw: Any) -> Tuple[ExperimentConfig, SellmeierModel]:
    """Build a validated config and dispersion model from a parsed JSON object."""
    if not isinstance(raw, dict):
        raise ConfigError('config must be a JSON object', field='<root>')

    known = {f.name: f for f in fields(ExperimentConfig)}
    unknown = sorted(set(raw) - set(known) - {'sellmeier'})
    if unknown:
        raise ConfigError('unknown key', field=unknown[0])

    kwargs = {}
    for name, value in raw.items():
        if name == 'sellmeier':
            continue
        if name in PULSE_FIELDS:
            kwargs[name] = _parse_pulse(name, value, known[name].default)
        elif name in COUNT_FIELDS:
            ErrorChecker.check_count(value, name, minimum=1, error=ConfigError)
            kwargs[name] = value
        else:
            ErrorChecker.check_finite(value, name, error=ConfigError)
            kwargs[name] = float(value)

    cfg = ExperimentConfig(**kwargs)
    model = _parse_sellmeier(raw['sellmeier']) if 'sellmeier' in raw else DIAMOND
    return cfg, model


def load_config(path: Union[str, Path]) -> Tuple[ExperimentConfig, SellmeierModel]:
    """
    Load an experiment config file.

    :param path: JSON file; an empty object gives the defaults
    :return: (ExperimentConfig, SellmeierModel)
    :raises FileNotFoundError: the file does not exist
    :raises ConfigError: malformed JSON or invalid field (message names the field)
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f'Config file not found: {path}')
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as err:
        raise ConfigError(f'not valid JSON ({err})', field='<root>') from err
    cfg, model = config_from_dict(raw)
    logger.debug('Loaded config from %s', path)
    return cfg, model


def config_to_dict(cfg: ExperimentConfig, model: SellmeierModel = DIAMOND) -> dict:
    """Plain-JSON form of a config, the inverse of config_from_dict."""
    data = asdict(cfg)
    data['sellmeier'] = {
        'terms': [list(term) for term in model.terms],
        'valid_range': list(model.valid_range),
    }
    return data


def config_hash(cfg: ExperimentConfig, model: SellmeierModel = DIAMOND) -> str:
    """SHA-256 of the canonical JSON serialization of config and model."""
    canonical = json.dumps(config_to_dict(cfg, model), sort_keys=True, separators=(',', ':'))
    return hashlib.sha256(canonical.encode('utf-8')).hexdigest()
