"""Scenario runners: one per kind, each mirroring one measurement of the experiment.

A runner turns a Scenario into data files through a ResultWriter. Monte Carlo
points use the scenario seed with one stream index per point, so every point
is independent and reproducible on its own.
"""
from __future__ import annotations

import logging
import math
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from . import plotting
from .analysis import (G2Estimate, cauchy_schwarz_check, g2_curve, g2_from_counts, g2_from_efficiency,
                       nonclassical_range, poisson_sigma)
from .config import ExperimentConfig
from .counting_sim import accidental_estimate, simulate, simulate_slots, slot_probabilities, subtract_accidentals
from .dispersion import DIAMOND, SellmeierModel, conversion_efficiency, sinc_zero_read_wavelengths
from .exceptions import DomainError, EstimatorError, UnboundedRangeError
from .fitting import fit_exponential, fit_gaussian
from .memory_model import absorption_dip, deconvolve_duration, input_duration, retrieved_spectrum, storage_decay
from .results import (DELAY_SCAN_HEADER, DIP_SCAN_HEADER, FREQ_SWEEP_HEADER, HISTOGRAM_HEADER, SPECTRUM_HEADER,
                      ResultWriter)
from .scenarios import Scenario, ScenarioKind, serialize_parameters
from .spectral_core import PulseSpec, convolve_response, fwhm, gaussian_spectrum

logger = logging.getLogger(__name__)

# samples of the analytic curve used for the non-classical range
DENSE_CURVE_POINTS = 4001


def _read_pulse(cfg: ExperimentConfig, center: float, width: Optional[float] = None) -> PulseSpec:
    return PulseSpec(center, cfg.read_fwhm if width is None else width)


def _trials(s: Scenario, cfg: ExperimentConfig) -> int:
    return cfg.trials if s.trials is None else s.trials


def _estimate_or_none(record, background=None) -> Optional[G2Estimate]:
    try:
        return g2_from_counts(record, background)
    except EstimatorError as err:
        logger.warning('No g2 estimate: %s', err)
        return None


class ScenarioRunner(ABC):
    @abstractmethod
    def run(self, s: Scenario, cfg: ExperimentConfig, model: SellmeierModel, writer: ResultWriter) -> None:
        """Compute the scenario and write its data files."""
        pass


class FreqSweepRunner(ScenarioRunner):
    """
    g2 against read wavelength at zero delay.

    The summary reports the non-classical (g2 > 2) range both as a span of
    read wavelengths and as a span of output wavelengths. The quoted 17 nm
    conversion range is an output span: with the default diamond model the
    output span is about 19.2 nm while the read span is about 23.5 nm, so
    only the output span falls inside 17 +- 3 nm. Compare against
    ``nonclassical_output_span_nm``.

    The range is taken from a dense analytic curve between the two sinc
    zeros around the write wavelength. When no zero lies within reach (a
    short crystal) the curve covers the scanned read span instead, and range
    fields are null if g2 stays above 2 at either end.
    """

    def run(self, s, cfg, model, writer):
        p = s.parameters
        n_slots = _trials(s, cfg)
        table = g2_curve(cfg, model, p.read_wavelengths).rename(
            columns={'output_nm': 'output_center_nm', 'g2': 'g2_analytic'})

        g2_mc, g2_mc_err = [], []
        for stream, read in enumerate(p.read_wavelengths):
            if s.analytic_only:
                g2_mc.append(math.nan)
                g2_mc_err.append(math.nan)
                continue
            record = simulate_slots(cfg, _read_pulse(cfg, read, p.read_fwhm), 0.0, n_slots, s.seed, model,
                                    stream=stream, workers=s.workers)
            estimate = _estimate_or_none(record)
            g2_mc.append(math.nan if estimate is None else estimate.value)
            g2_mc_err.append(math.nan if estimate is None else estimate.std_error)
            logger.info('read %.2f nm: g2 = %s', read, 'n/a' if estimate is None else f'{estimate.value:.3f}')
        table['g2_mc'] = g2_mc
        table['g2_mc_err'] = g2_mc_err

        try:
            lo, hi = sinc_zero_read_wavelengths(model, cfg)
        except DomainError as err:
            logger.warning('%s; sampling the scanned read span instead', err)
            lo, hi = min(p.read_wavelengths), max(p.read_wavelengths)
        dense = g2_curve(cfg, model, np.linspace(lo, hi, DENSE_CURVE_POINTS))
        try:
            span = nonclassical_range(dense)
        except UnboundedRangeError as err:
            logger.warning('Non-classical range not bounded on %.2f-%.2f nm: %s', lo, hi, err)
            span = None
        peak = dense.loc[dense['g2'].idxmax()]
        summary = {
            'peak_g2': peak['g2'],
            'peak_read_nm': peak['read_nm'],
            'peak_output_nm': peak['output_nm'],
            'nonclassical_read_nm': None if span is None else [span.read_lo, span.read_hi],
            'nonclassical_output_nm': None if span is None else [span.output_lo, span.output_hi],
            'nonclassical_read_span_nm': None if span is None else span.read_span,
            'nonclassical_output_span_nm': None if span is None else span.output_span,
            'tunability_input_bandwidths': None if span is None else span.output_span / cfg.input_pulse.fwhm,
            'trials': None if s.analytic_only else n_slots,
        }
        writer.save_to_csv(table, 'freq_sweep', FREQ_SWEEP_HEADER)
        writer.save_to_json(summary, 'freq_sweep_summary')
        if s.plot:
            plotting.plot_freq_sweep(table, dense, writer)


class DelayScanRunner(ScenarioRunner):
    """Accidental-subtracted coincidences against read delay, with an exponential fit."""

    def run(self, s, cfg, model, writer):
        p = s.parameters
        n_slots = _trials(s, cfg)
        read = _read_pulse(cfg, p.read_center, p.read_fwhm)

        rows = []
        for stream, delay in enumerate(p.delays):
            if s.analytic_only:
                probs = slot_probabilities(cfg, read, delay, model)
                noise = n_slots * probs.p_accidental
                counts = n_slots * probs.p_coincidence - noise
                error = poisson_sigma(counts + 1.25 * noise)
            else:
                histogram = simulate(cfg, read, delay, n_slots, s.seed, model, stream=stream,
                                     workers=s.workers).histogram
                noise = accidental_estimate(histogram)
                subtracted = subtract_accidentals(histogram)
                counts, error = subtracted.value, max(subtracted.error, 1.0)
            rows.append((delay, counts, noise, error))

        fit = fit_exponential([(d, c, e) for d, c, _, e in rows])
        table = pd.DataFrame(rows, columns=['delay_ps', 'counts', 'noise', 'error'])
        table['fit'] = fit.predict(table['delay_ps'].to_numpy())

        lifetime = fit.parameters['lifetime']
        summary = {
            'lifetime_ps': lifetime,
            'lifetime_err_ps': fit.std_errors['lifetime'],
            'amplitude': fit.parameters['amplitude'],
            'amplitude_err': fit.std_errors['amplitude'],
            'converged': fit.converged,
            'configured_lifetime_ps': cfg.lifetime,
            'lifetime_over_input_duration': lifetime * 1e3 / input_duration(cfg),
            'read_nm': read.center,
            'trials': None if s.analytic_only else n_slots,
        }
        logger.info('Fitted lifetime %.3f +- %.3f ps', lifetime, fit.std_errors['lifetime'])
        writer.save_to_csv(table, 'delay_scan', DELAY_SCAN_HEADER)
        writer.save_to_json(summary, 'delay_scan_fit')
        if s.plot:
            plotting.plot_delay_scan(table, writer)


class BandwidthRunner(ScenarioRunner):
    """Input, shifted read and output spectra for each read bandwidth, raw and as measured."""

    def run(self, s, cfg, model, writer):
        p = s.parameters
        source = gaussian_spectrum(cfg.input_pulse)
        source_measured = convolve_response(source, cfg.mono_resolution)

        entries = []
        for width in p.read_fwhms:
            photon = retrieved_spectrum(PulseSpec(p.read_center, width), 0.0, cfg, model)
            output_measured = convolve_response(photon.spectrum, cfg.mono_resolution)
            read_measured = convolve_response(photon.shifted_read, cfg.mono_resolution)
            table = pd.DataFrame({
                'wavelength_nm': photon.spectrum.wavelengths,
                'input': source.values,
                'read_shifted': photon.shifted_read.values,
                'output': photon.spectrum.values,
                'input_convolved': source_measured.values,
                'read_shifted_convolved': read_measured.values,
                'output_convolved': output_measured.values,
            })
            name = f'bandwidth_read_{width:g}nm'
            writer.save_to_csv(table, name, SPECTRUM_HEADER)
            if s.plot:
                plotting.plot_spectra(table, writer, name)

            entry = {
                'read_fwhm_nm': width,
                'read_shifted_fwhm_nm': fwhm(photon.shifted_read),
                'output_fwhm_nm': fwhm(photon.spectrum),
                'output_fwhm_convolved_nm': fwhm(output_measured),
                'input_fwhm_nm': fwhm(source),
                'input_fwhm_convolved_nm': fwhm(source_measured),
                'output_center_nm': photon.center,
                'output_peak_nm': photon.peak_wavelength,
                'mean_sinc2': photon.mean_sinc2,
                'efficiency': photon.efficiency,
            }
            entry['output_over_input'] = entry['output_fwhm_convolved_nm'] / entry['input_fwhm_convolved_nm']
            logger.info('read FWHM %g nm -> output FWHM %.3f nm (measured %.3f nm)', width,
                        entry['output_fwhm_nm'], entry['output_fwhm_convolved_nm'])
            entries.append(entry)

        writer.save_to_json({'read_nm': p.read_center, 'resolution_nm': cfg.mono_resolution, 'spectra': entries},
                            'bandwidth_summary')


class HistogramRunner(ScenarioRunner):
    """Coincidences per slot offset between signal and herald."""

    def run(self, s, cfg, model, writer):
        p = s.parameters
        n_slots = _trials(s, cfg)
        read = _read_pulse(cfg, p.read_center, p.read_fwhm)
        probs = slot_probabilities(cfg, read, p.delay, model)

        if s.analytic_only:
            offsets = (-2, -1, 0, 1, 2)
            counts = [n_slots * (probs.p_coincidence if d == 0 else probs.p_accidental) for d in offsets]
            table = pd.DataFrame({'bin_offset_ns': [d * cfg.slot_period_ns for d in offsets], 'counts': counts})
            center, sides = counts[2], float(np.mean(counts[:2] + counts[3:]))
            ratio_err = 0.0
        else:
            histogram = simulate(cfg, read, p.delay, n_slots, s.seed, model, workers=s.workers).histogram
            table = pd.DataFrame({'bin_offset_ns': histogram.offsets_ns, 'counts': list(histogram.counts)})
            center, sides = float(histogram.count(0)), accidental_estimate(histogram)
            ratio_err = None
        ratio = center / sides if sides > 0 else math.nan
        if ratio_err is None:
            # sides is the mean of four bins
            ratio_err = ratio * math.sqrt(1.0 / max(center, 1.0) + 1.0 / max(4.0 * sides, 1.0)) if sides > 0 else math.nan

        summary = {
            'center_counts': center,
            'accidental_estimate': sides,
            'center_over_accidental': ratio,
            'center_over_accidental_err': ratio_err,
            'g2_analytic': probs.p_coincidence / probs.p_accidental if probs.p_accidental > 0 else math.nan,
            'trials': None if s.analytic_only else n_slots,
        }
        writer.save_to_csv(table, 'histogram', HISTOGRAM_HEADER)
        writer.save_to_json(summary, 'histogram_summary')
        if s.plot:
            plotting.plot_histogram(table, writer)


class G2PointRunner(ScenarioRunner):
    """g2 at one setting with its classicality verdict, raw and background-subtracted."""

    def run(self, s, cfg, model, writer):
        p = s.parameters
        n_slots = _trials(s, cfg)
        read = _read_pulse(cfg, p.read_center, p.read_fwhm)
        eta_fc = float(conversion_efficiency(model, read.center, cfg))
        analytic = g2_from_efficiency(cfg, eta_fc * storage_decay(p.delay, cfg))
        summary = {
            'read_nm': read.center,
            'delay_ps': p.delay,
            'eta_fc': eta_fc,
            'g2_analytic': analytic,
            'trials': None if s.analytic_only else n_slots,
        }

        if s.analytic_only:
            summary.update(value=analytic, error=0.0, verdict=cauchy_schwarz_check(analytic).value)
        else:
            on = simulate_slots(cfg, read, p.delay, n_slots, s.seed, model, stream=0, workers=s.workers)
            off = simulate_slots(cfg, read, p.delay, n_slots, s.seed, model, stream=1, controls_on=False,
                                 workers=s.workers)
            estimate = g2_from_counts(on)
            summary.update(value=estimate.value, error=estimate.std_error,
                           verdict=cauchy_schwarz_check(estimate.value).value,
                           counts=_record_dict(on), background_counts=_record_dict(off))
            subtracted = _estimate_or_none(on, off)
            if subtracted is not None:
                summary['background_subtracted'] = {
                    'value': subtracted.value,
                    'error': subtracted.std_error,
                    'verdict': cauchy_schwarz_check(subtracted.value).value,
                }
            logger.info('g2 = %.3f +- %.3f (%s)', estimate.value, estimate.std_error, summary['verdict'])
        writer.save_to_json(summary, 'g2_point')


class DipScanRunner(ScenarioRunner):
    """Absorption dip against input-write delay and the input duration it implies."""

    def run(self, s, cfg, model, writer):
        delays = list(s.parameters.delays)
        rates = [absorption_dip(t, cfg) for t in delays]
        fit = fit_gaussian(list(zip(delays, rates)))
        table = pd.DataFrame({'delay_fs': delays, 'relative_rate': rates})
        table['fit'] = fit.predict(table['delay_fs'].to_numpy())

        dip_width = fit.parameters['fwhm']
        duration = deconvolve_duration(dip_width, cfg.write_duration)
        summary = {
            'dip_fwhm_fs': dip_width,
            'dip_depth': -fit.parameters['amplitude'],
            'write_duration_fs': cfg.write_duration,
            'input_duration_fs': duration,
            'lifetime_over_input_duration': cfg.lifetime * 1e3 / duration,
            'converged': fit.converged,
        }
        logger.info('Dip FWHM %.1f fs -> input duration %.1f fs', dip_width, duration)
        writer.save_to_csv(table, 'dip_scan', DIP_SCAN_HEADER)
        writer.save_to_json(summary, 'dip_scan_summary')
        if s.plot:
            plotting.plot_dip_scan(table, writer)


def _record_dict(record) -> dict:
    return {
        'n_slots': record.n_slots,
        'n_herald': record.n_herald,
        'n_signal': record.n_signal,
        'n_coincidence': record.n_coincidence,
    }


class RunnerFactory:
    runners = {
        ScenarioKind.FREQ_SWEEP: FreqSweepRunner(),
        ScenarioKind.DELAY_SCAN: DelayScanRunner(),
        ScenarioKind.BANDWIDTH: BandwidthRunner(),
        ScenarioKind.HISTOGRAM: HistogramRunner(),
        ScenarioKind.G2_POINT: G2PointRunner(),
        ScenarioKind.DIP_SCAN: DipScanRunner(),
    }

    @staticmethod
    def get_runner(kind: ScenarioKind) -> ScenarioRunner:
        return RunnerFactory.runners[ScenarioKind(kind)]


def run_scenario(s: Scenario, cfg: ExperimentConfig, out_dir: Union[str, Path],
                 model: SellmeierModel = DIAMOND) -> List[Path]:
    """
    Run one scenario and write its files plus ``run_info.json`` to out_dir.

    :return: paths of all written files, sidecar last
    :raises: whatever the computation raises; files written so far are removed
    """
    writer = ResultWriter(out_dir)
    runner = RunnerFactory.get_runner(s.kind)
    logger.info('Running %s (seed=%d) into %s', s.kind.value, s.seed, writer.out_dir)
    try:
        runner.run(s, cfg, model, writer)
        parameters = serialize_parameters(s.parameters)
        parameters.update(trials=None if s.analytic_only else _trials(s, cfg), analytic_only=s.analytic_only)
        writer.save_sidecar(s.kind.value, s.seed, cfg, model, parameters)
    except BaseException:
        logger.error('Error occurred in %s; removing partial outputs', s.kind.value)
        writer.discard()
        raise
    logger.info('Success: %s wrote %d files', s.kind.value, len(writer.files))
    return list(writer.files)


def run_scenarios(scenarios: Sequence[Scenario], cfg: ExperimentConfig, out_dir: Union[str, Path],
                  model: SellmeierModel = DIAMOND) -> Dict[str, List[Path]]:
    """Run scenarios one after another, each into its own numbered subdirectory."""
    written = {}
    for index, s in enumerate(scenarios):
        name = f'{index:02d}_{s.kind.value}'
        written[name] = run_scenario(s, cfg, Path(out_dir) / name, model)
    return written
