import json
import logging
from pathlib import Path

import pytest

from pyraman import ConfigError, DIAMOND
from pyraman.config import (
    ExperimentConfig,
    config_from_dict,
    config_hash,
    config_to_dict,
    load_config,
    mean_pair_number,
)

CONFIG_DIR = Path(__file__).resolve().parents[1] / 'configs'


def test_empty_object_gives_defaults():
    cfg, model = config_from_dict({})
    assert cfg == ExperimentConfig()
    assert cfg.phonon_freq == 40.0
    assert cfg.crystal_length == 2.3e-3
    assert cfg.eta_fc0 == 0.011
    assert model == DIAMOND


def test_invalid_value_names_the_field():
    with pytest.raises(ConfigError) as info:
        config_from_dict({'p_noise': -1})
    assert info.value.field == 'p_noise'
    assert 'p_noise' in str(info.value)


@pytest.mark.parametrize('raw, field', [
    ({'lifetimes': 3.5}, 'lifetimes'),
    ({'write_pulse': {'center': 800.0, 'width': 5.0}}, 'write_pulse.width'),
    ({'sellmeier': {'terms': [[0.3306, 175.0]], 'poles': []}}, 'sellmeier.poles'),
    ({'write_pulse': 800.0}, 'write_pulse'),
    ({'sellmeier': {'terms': [[1.0, 500.0]]}}, 'sellmeier'),
    ({'trials': 1.5}, 'trials'),
    ({'lifetime': 'long'}, 'lifetime'),
    ({'p_dark': 1e-5}, 'p_dark'),
    ({'dip_fwhm': 150.0}, 'dip_fwhm'),
    ({'g2_source': 1.0}, 'g2_source'),
])
def test_rejected_configs(raw, field):
    with pytest.raises(ConfigError) as info:
        config_from_dict(raw)
    assert info.value.field == field


def test_partial_pulse_override_keeps_other_defaults():
    cfg, _ = config_from_dict({'write_pulse': {'center': 790.0}})
    assert cfg.write_pulse.center == 790.0
    assert cfg.write_pulse.fwhm == 5.0


def test_lifetime_pass_through():
    cfg, _ = config_from_dict({'lifetime': 7.0})
    assert cfg.lifetime == 7.0


def test_load_config_errors(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_config(tmp_path / 'missing.json')
    bad = tmp_path / 'bad.json'
    bad.write_text('{"lifetime": ')
    with pytest.raises(ConfigError) as info:
        load_config(bad)
    assert info.value.field == '<root>'
    not_object = tmp_path / 'list.json'
    not_object.write_text('[1, 2]')
    with pytest.raises(ConfigError):
        load_config(not_object)


def test_shipped_config_matches_defaults():
    cfg, model = load_config(CONFIG_DIR / 'diamond_defaults.json')
    assert cfg == ExperimentConfig()
    assert config_hash(cfg, model) == config_hash(ExperimentConfig(), DIAMOND)


def test_dict_round_trip(tmp_path):
    cfg, model = config_from_dict({'lifetime': 7.0, 'read_fwhm': 2.1})
    path = tmp_path / 'cfg.json'
    path.write_text(json.dumps(config_to_dict(cfg, model)))
    loaded, loaded_model = load_config(path)
    assert loaded == cfg
    assert loaded_model == model


def test_hash_tracks_content():
    base = config_hash(ExperimentConfig())
    assert base == config_hash(ExperimentConfig())
    assert base != config_hash(ExperimentConfig(lifetime=7.0))
    assert len(base) == 64


def test_mean_pair_number_and_warning(caplog):
    assert mean_pair_number(ExperimentConfig()) == pytest.approx(1 / 163)
    with caplog.at_level(logging.WARNING, logger='pyraman.config'):
        ExperimentConfig(p_herald=0.01)
    assert 'mean pair number' in caplog.text


def test_slot_period():
    assert ExperimentConfig().slot_period_ns == pytest.approx(12.5)
