import json

import pandas as pd
import pytest

from pyraman.cli import EXIT_CONFIG, EXIT_OK, EXIT_RUNTIME, build_parser, main, scenario_from_args
from pyraman.scenarios import ScenarioKind


def test_parser_defaults():
    args = build_parser().parse_args(['delay-scan'])
    s = scenario_from_args(args)
    assert s.kind is ScenarioKind.DELAY_SCAN
    assert s.parameters.read_center == 792.0
    assert len(s.parameters.delays) == 15
    assert s.trials is None
    assert s.seed == 0


def test_trials_accepts_exponent_notation():
    args = build_parser().parse_args(['g2-point', '--trials', '4e9'])
    assert args.trials == 4_000_000_000


def test_analytic_freq_sweep(tmp_path):
    assert main(['freq-sweep', '--analytic-only', '--out', str(tmp_path)]) == EXIT_OK
    table = pd.read_csv(tmp_path / 'freq_sweep.csv')
    assert table['read_nm'].tolist() == [784.0 + 2 * i for i in range(15)]
    assert (tmp_path / 'run_info.json').is_file()


def test_config_file_is_used(tmp_path):
    config = tmp_path / 'cfg.json'
    config.write_text(json.dumps({'lifetime': 7.0}))
    out = tmp_path / 'out'
    assert main(['delay-scan', '--analytic-only', '--config', str(config), '--out', str(out)]) == EXIT_OK
    fit = json.loads((out / 'delay_scan_fit.json').read_text())
    assert fit['lifetime_ps'] == pytest.approx(7.0, rel=1e-6)


def test_config_errors_exit_with_config_status(tmp_path):
    bad = tmp_path / 'bad.json'
    bad.write_text(json.dumps({'p_noise': -1}))
    assert main(['g2-point', '--config', str(bad), '--out', str(tmp_path / 'a')]) == EXIT_CONFIG
    assert main(['g2-point', '--config', str(tmp_path / 'missing.json'), '--out', str(tmp_path / 'b')]) == EXIT_CONFIG
    assert main(['g2-point', '--trials', '0', '--out', str(tmp_path / 'c')]) == EXIT_CONFIG


def test_malformed_options_exit_with_config_status(capsys):
    for argv in (['g2-point', '--seed', 'abc'], ['delay-scan', '--trials', '1.5'], ['no-such-kind']):
        with pytest.raises(SystemExit) as excinfo:
            main(argv)
        assert excinfo.value.code == EXIT_CONFIG
    assert 'error:' in capsys.readouterr().err


def test_runtime_errors_exit_with_runtime_status(tmp_path):
    out = tmp_path / 'out'
    assert main(['bandwidth', '--read-fwhms', '2.1', '0.01', '--out', str(out)]) == EXIT_RUNTIME
    assert list(out.iterdir()) == []


def test_seed_reproducibility(tmp_path):
    for name in ('a', 'b'):
        args = ['histogram', '--trials', '200000', '--seed', '3', '--out', str(tmp_path / name)]
        assert main(args) == EXIT_OK
    assert (tmp_path / 'a' / 'histogram.csv').read_bytes() == (tmp_path / 'b' / 'histogram.csv').read_bytes()
