"""Transduction rules of the diamond Raman memory.

The retrieved photon copies the read spectrum, shifted up by the phonon
frequency, and is clipped by the phase-matching envelope. Storage decay is a
scalar efficiency, not a spectral reshaping.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import trapezoid

from .config import ExperimentConfig
from .dispersion import SellmeierModel, delta_k, output_wavelength, read_wavelength, sinc2
from .exceptions import DomainError, ResolutionError
from .spectral_core import DEFAULT_GRID, PulseSpec, SpectralDensity, SpectralGrid
from .validation import ErrorChecker

# relative level below which the shifted read spectrum counts as empty
SUPPORT_FLOOR = 1e-12


@dataclass(frozen=True, eq=False)
class RetrievedPhoton:
    """Output photon of one read setting.

    ``center`` is the carrier (read center + phonon frequency); the peak of
    ``spectrum`` can sit slightly off it where sinc^2 is steep.
    """
    spectrum: SpectralDensity
    center: float
    efficiency: float
    mean_sinc2: float
    shifted_read: SpectralDensity

    @property
    def peak_wavelength(self) -> float:
        return self.spectrum.peak_wavelength()


def storage_decay(delay: float, cfg: ExperimentConfig) -> float:
    """Fraction of the stored excitation left after ``delay`` ps."""
    ErrorChecker.check_non_negative(delay, 'delay')
    return math.exp(-delay / cfg.lifetime)


def shifted_read_spectrum(read: PulseSpec, cfg: ExperimentConfig, grid: SpectralGrid = DEFAULT_GRID) -> np.ndarray:
    """Read Gaussian mapped onto output wavelengths (unnormalized, per nm of output)."""
    lambda_o = grid.wavelengths
    lambda_r = read_wavelength(lambda_o, cfg)
    gaussian = np.exp(-4.0 * math.log(2.0) * (lambda_r - read.center) ** 2 / read.fwhm ** 2)
    # d(lambda_r)/d(lambda_o) keeps the density per nm
    return gaussian * (lambda_r / lambda_o) ** 2


def retrieved_spectrum(read: PulseSpec, delay: float, cfg: ExperimentConfig, model: SellmeierModel,
                       grid: SpectralGrid = DEFAULT_GRID) -> RetrievedPhoton:
    """
    Spectrum and efficiency of the photon retrieved by one read pulse.

    :param read: read pulse (nm)
    :param delay: read-write delay in ps
    :param cfg: experiment config
    :param model: dispersion model used for dk at every output frequency
    :param grid: output wavelength grid
    """
    ErrorChecker.check_non_negative(delay, 'delay')
    center = output_wavelength(read.center, cfg)
    out_fwhm = read.fwhm * (center / read.center) ** 2
    if center - 2 * out_fwhm < grid.lambda_min or center + 2 * out_fwhm > grid.lambda_max:
        raise ResolutionError(f'Output spectrum around {center:.3f} nm ({out_fwhm:.3f} nm FWHM) leaves the grid')
    if out_fwhm < 3 * grid.step:
        raise ResolutionError(f'Output FWHM {out_fwhm:.4g} nm is narrower than 3 grid steps')

    shifted = shifted_read_spectrum(read, cfg, grid)
    # dk only where the shifted read carries light; the model need not cover the whole grid
    support = shifted > SUPPORT_FLOOR * shifted.max()
    envelope = np.zeros_like(shifted)
    envelope[support] = sinc2(
        delta_k(model, read_wavelength(grid.wavelengths[support], cfg), cfg) * cfg.crystal_length / 2.0)
    weight = trapezoid(shifted, dx=grid.step)
    mean_sinc2 = float(trapezoid(shifted * envelope, dx=grid.step) / weight)

    return RetrievedPhoton(
        spectrum=SpectralDensity(grid, shifted * envelope).normalized(),
        center=center,
        efficiency=cfg.eta_fc0 * mean_sinc2 * storage_decay(delay, cfg),
        mean_sinc2=mean_sinc2,
        shifted_read=SpectralDensity(grid, shifted).normalized(),
    )


def deconvolve_duration(dip_fwhm: float, write_duration: float) -> float:
    """
    Input-photon duration from the absorption-dip width, assuming
    transform-limited Gaussian pulses.

    :param dip_fwhm: cross-correlation (dip) FWHM in fs
    :param write_duration: write pulse FWHM in fs
    :return: sqrt(dip^2 - write^2) in fs
    """
    ErrorChecker.check_positive(dip_fwhm, 'dip_fwhm')
    ErrorChecker.check_non_negative(write_duration, 'write_duration')
    if dip_fwhm <= write_duration:
        raise DomainError(f'Invalid dip_fwhm: {dip_fwhm} fs must exceed the write duration {write_duration} fs')
    return math.sqrt(dip_fwhm ** 2 - write_duration ** 2)


def input_duration(cfg: ExperimentConfig) -> float:
    return deconvolve_duration(cfg.dip_fwhm, cfg.write_duration)


def absorption_dip(input_write_delay: float, cfg: ExperimentConfig) -> float:
    """
    Relative input-herald coincidence rate as the write pulse is scanned
    across the input photon.

    :param input_write_delay: input to write delay in fs
    :return: 1 - dip_depth * exp(-4 ln2 t^2 / w^2), w the cross-correlation FWHM
    """
    ErrorChecker.check_finite(input_write_delay, 'input_write_delay')
    width = math.hypot(input_duration(cfg), cfg.write_duration)
    return 1.0 - cfg.dip_depth * math.exp(-4.0 * math.log(2.0) * input_write_delay ** 2 / width ** 2)
