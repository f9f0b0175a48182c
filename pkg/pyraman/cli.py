"""Command line front end: ``pyraman <kind> [options]``.

Exit status is 0 on success, 3 for configuration errors (bad config file,
malformed or out-of-range option values) and 4 for errors raised while
running.
"""
from __future__ import annotations

import argparse
import logging
import sys
from typing import List, Optional

import numpy as np

from ._version import __version__
from .config import ExperimentConfig, load_config
from .dispersion import DIAMOND
from .exceptions import ConfigError, PyramanError
from .runner import run_scenario
from .scenarios import (BandwidthParameters, DelayScanParameters, DipScanParameters, FreqSweepParameters,
                        PointParameters, Scenario, ScenarioKind)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 3
EXIT_RUNTIME = 4


def _count(text: str) -> int:
    """Integer option that also accepts exact float notation such as 4e9."""
    try:
        return int(text)
    except ValueError:
        value = float(text)
        if not value.is_integer():
            raise argparse.ArgumentTypeError(f'{text} is not an integer')
        return int(value)


class _Parser(argparse.ArgumentParser):
    """Reports usage errors with the configuration exit status instead of 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f'{self.prog}: error: {message}\n')


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', help='experiment config JSON (defaults if omitted)')
    common.add_argument('--out', default='results', help='output directory')
    common.add_argument('--seed', type=int, default=0, help='64-bit Monte Carlo seed')
    common.add_argument('--trials', type=_count, help='laser slots per scenario point (default: config trials)')
    common.add_argument('--analytic-only', action='store_true', help='skip the Monte Carlo')
    common.add_argument('--workers', type=int, default=1, help='threads for the Monte Carlo blocks')
    common.add_argument('--plot', action='store_true', help='also write PNG figures')

    parser = _Parser(prog='pyraman', description='Diamond Raman quantum memory simulator')
    parser.add_argument('-v', '--verbose', action='store_true', help='debug logging')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    sub = parser.add_subparsers(dest='kind', required=True)

    p = sub.add_parser(ScenarioKind.FREQ_SWEEP.value, parents=[common], help='g2 against read wavelength')
    p.add_argument('--read', type=float, nargs='+', default=[float(x) for x in range(784, 813, 2)],
                   help='read center wavelengths (nm)')
    p.add_argument('--read-fwhm', type=float, help='read bandwidth (nm, default: config read_fwhm)')

    p = sub.add_parser(ScenarioKind.DELAY_SCAN.value, parents=[common], help='retrieved counts against storage time')
    p.add_argument('--delays', type=float, nargs='+', default=np.linspace(0.0, 10.0, 15).tolist(),
                   help='read-write delays (ps)')
    p.add_argument('--read', type=float, default=792.0, help='read center wavelength (nm)')
    p.add_argument('--read-fwhm', type=float, help='read bandwidth (nm)')

    p = sub.add_parser(ScenarioKind.BANDWIDTH.value, parents=[common], help='output spectra for several read bandwidths')
    p.add_argument('--read', type=float, default=801.0, help='read center wavelength (nm)')
    p.add_argument('--read-fwhms', type=float, nargs='+', default=[2.1, 12.1], help='read bandwidths (nm)')

    for kind, text in ((ScenarioKind.HISTOGRAM, 'coincidence histogram around zero delay'),
                       (ScenarioKind.G2_POINT, 'g2 and classicality at one setting')):
        p = sub.add_parser(kind.value, parents=[common], help=text)
        p.add_argument('--read', type=float, default=800.0, help='read center wavelength (nm)')
        p.add_argument('--delay', type=float, default=0.0, help='read-write delay (ps)')
        p.add_argument('--read-fwhm', type=float, help='read bandwidth (nm)')

    p = sub.add_parser(ScenarioKind.DIP_SCAN.value, parents=[common], help='absorption dip against input-write delay')
    p.add_argument('--delays', type=float, nargs='+', default=np.linspace(-1000.0, 1000.0, 81).tolist(),
                   help='input-write delays (fs)')
    return parser


def scenario_from_args(args: argparse.Namespace) -> Scenario:
    kind = ScenarioKind(args.kind)
    if kind is ScenarioKind.FREQ_SWEEP:
        parameters = FreqSweepParameters(args.read, args.read_fwhm)
    elif kind is ScenarioKind.DELAY_SCAN:
        parameters = DelayScanParameters(args.delays, args.read, args.read_fwhm)
    elif kind is ScenarioKind.BANDWIDTH:
        parameters = BandwidthParameters(args.read_fwhms, args.read)
    elif kind is ScenarioKind.DIP_SCAN:
        parameters = DipScanParameters(args.delays)
    else:
        parameters = PointParameters(args.read, args.delay, args.read_fwhm)
    return Scenario(kind, parameters, trials=args.trials, seed=args.seed, analytic_only=args.analytic_only,
                    workers=args.workers, plot=args.plot)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format='%(asctime)s [%(levelname)s] %(name)s: %(message)s',
    )

    try:
        if args.config:
            cfg, model = load_config(args.config)
        else:
            cfg, model = ExperimentConfig(), DIAMOND
        scenario = scenario_from_args(args)
    except (ConfigError, FileNotFoundError) as err:
        logger.error('Configuration error: %s', err)
        return EXIT_CONFIG

    try:
        files = run_scenario(scenario, cfg, args.out, model)
    except ConfigError as err:
        logger.error('Configuration error: %s', err)
        return EXIT_CONFIG
    except (PyramanError, ValueError, OSError) as err:
        logger.error('Error occurred: %s', err)
        return EXIT_RUNTIME

    for path in files:
        logger.info('wrote %s', path)
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
