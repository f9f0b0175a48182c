"""Wavelength/frequency arithmetic and sampled spectra.

Spectra are intensity densities per nm sampled on a uniform wavelength grid.
Intrinsic spectra are Gaussian in wavelength; every integral uses the
trapezoidal rule.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Union

import numpy as np
from scipy.constants import speed_of_light
from scipy.integrate import trapezoid
from scipy.ndimage import gaussian_filter1d

from .exceptions import DomainError, EdgeError, ResolutionError
from .validation import ErrorChecker

logger = logging.getLogger(__name__)

# speed of light in nm * THz
C_NM_THZ = speed_of_light * 1e-3

FWHM_TO_SIGMA = 1.0 / (2.0 * math.sqrt(2.0 * math.log(2.0)))

# kernel half-width in standard deviations
KERNEL_TRUNCATE = 4.0

ArrayLike = Union[float, np.ndarray]


def wavelength_to_frequency(wavelength: ArrayLike) -> ArrayLike:
    """
    Convert a vacuum wavelength to a frequency.

    :param wavelength: wavelength in nm (scalar or array), must be > 0
    :return: frequency in THz
    """
    arr = np.asarray(wavelength, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise DomainError(f'Invalid wavelength: {wavelength} (must be finite and > 0 nm)')
    result = C_NM_THZ / arr
    return float(result) if result.ndim == 0 else result


def frequency_to_wavelength(frequency: ArrayLike) -> ArrayLike:
    """
    Convert a frequency to a vacuum wavelength.

    :param frequency: frequency in THz (scalar or array), must be > 0
    :return: wavelength in nm
    """
    arr = np.asarray(frequency, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise DomainError(f'Invalid frequency: {frequency} (must be finite and > 0 THz)')
    result = C_NM_THZ / arr
    return float(result) if result.ndim == 0 else result


@dataclass(frozen=True)
class SpectralGrid:
    lambda_min: float
    lambda_max: float
    n_points: int

    def __post_init__(self):
        ErrorChecker.check_positive(self.lambda_min, 'lambda_min')
        ErrorChecker.check_positive(self.lambda_max, 'lambda_max')
        ErrorChecker.check_count(self.n_points, 'n_points', minimum=2)
        if self.lambda_min >= self.lambda_max:
            raise DomainError(f'Invalid grid: lambda_min {self.lambda_min} must be below lambda_max {self.lambda_max}')

    @property
    def step(self) -> float:
        return (self.lambda_max - self.lambda_min) / (self.n_points - 1)

    @property
    def span(self) -> float:
        return self.lambda_max - self.lambda_min

    @cached_property
    def wavelengths(self) -> np.ndarray:
        grid = np.linspace(self.lambda_min, self.lambda_max, self.n_points)
        grid.flags.writeable = False
        return grid

    def contains(self, wavelength: float) -> bool:
        return self.lambda_min <= wavelength <= self.lambda_max


# 0.02 nm step; covers every wavelength of the experiment
DEFAULT_GRID = SpectralGrid(690.0, 860.0, 8501)


@dataclass(frozen=True)
class PulseSpec:
    center: float
    fwhm: float

    def __post_init__(self):
        ErrorChecker.check_positive(self.center, 'center')
        ErrorChecker.check_positive(self.fwhm, 'fwhm')
        if self.fwhm >= self.center:
            raise DomainError(f'Invalid fwhm: {self.fwhm} nm must be below the center wavelength {self.center} nm')

    @property
    def frequency(self) -> float:
        return wavelength_to_frequency(self.center)


@dataclass(frozen=True, eq=False)
class SpectralDensity:
    grid: SpectralGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != (self.grid.n_points,):
            raise ResolutionError(f'Spectrum has {values.size} samples but the grid has {self.grid.n_points} points')
        if not np.all(np.isfinite(values)):
            raise DomainError('Spectrum contains non-finite values')
        if np.any(values < 0):
            raise DomainError('Spectrum contains negative intensities')
        values.flags.writeable = False
        object.__setattr__(self, 'values', values)

    @property
    def wavelengths(self) -> np.ndarray:
        return self.grid.wavelengths

    def integral(self) -> float:
        return float(trapezoid(self.values, dx=self.grid.step))

    def normalized(self) -> SpectralDensity:
        total = self.integral()
        if total <= 0:
            raise ResolutionError('Spectrum has no weight on the grid and cannot be normalized')
        return SpectralDensity(self.grid, self.values / total)

    def peak_wavelength(self) -> float:
        return float(self.wavelengths[int(np.argmax(self.values))])

    def mean_wavelength(self) -> float:
        total = self.integral()
        if total <= 0:
            raise ResolutionError('Spectrum has no weight on the grid')
        return float(trapezoid(self.values * self.wavelengths, dx=self.grid.step) / total)


def gaussian_spectrum(pulse: PulseSpec, grid: SpectralGrid = DEFAULT_GRID) -> SpectralDensity:
    """
    Sample a normalized Gaussian (in wavelength) on the grid.

    :param pulse: center and FWHM in nm
    :param grid: wavelength grid
    :return: density with unit trapezoidal integral
    """
    if not grid.contains(pulse.center):
        raise DomainError(f'Pulse center {pulse.center} nm lies outside the grid [{grid.lambda_min}, {grid.lambda_max}] nm')
    if pulse.fwhm < 3 * grid.step:
        raise ResolutionError(f'FWHM {pulse.fwhm} nm is narrower than 3 grid steps ({3 * grid.step:.4g} nm)')

    x = grid.wavelengths
    values = np.exp(-4.0 * math.log(2.0) * (x - pulse.center) ** 2 / pulse.fwhm ** 2)
    return SpectralDensity(grid, values).normalized()


def fwhm(s: SpectralDensity) -> float:
    """
    Full width at half maximum of a single-peaked spectrum.

    Each half-maximum crossing is found by linear interpolation between the
    bracketing grid points. If a side crosses more than once, the crossing
    nearest the peak wins.
    """
    v = s.values
    x = s.wavelengths
    i = int(np.argmax(v))
    if i == 0 or i == v.size - 1:
        raise EdgeError(f'Spectral peak at {x[i]} nm lies on the grid edge')
    half = v[i] / 2.0

    below_left = np.flatnonzero(v[:i] <= half)
    below_right = np.flatnonzero(v[i + 1:] <= half)
    if below_left.size == 0 or below_right.size == 0:
        raise EdgeError('Spectrum does not fall to half maximum inside the grid')

    j = int(below_left[-1])
    left = x[j] + (half - v[j]) * (x[j + 1] - x[j]) / (v[j + 1] - v[j])
    k = i + 1 + int(below_right[0])
    right = x[k - 1] + (half - v[k - 1]) * (x[k] - x[k - 1]) / (v[k] - v[k - 1])
    return float(right - left)


def convolve_response(s: SpectralDensity, resolution_fwhm: float) -> SpectralDensity:
    """
    Convolve a spectrum with a Gaussian instrument response.

    :param s: spectrum to blur
    :param resolution_fwhm: response FWHM in nm; 0 returns s unchanged
    :return: blurred spectrum renormalized to unit integral
    """
    ErrorChecker.check_non_negative(resolution_fwhm, 'resolution_fwhm')
    if resolution_fwhm == 0:
        return s

    grid = s.grid
    sigma_px = resolution_fwhm * FWHM_TO_SIGMA / grid.step
    radius = int(KERNEL_TRUNCATE * sigma_px + 0.5)
    if 2 * radius + 1 > grid.n_points:
        raise ResolutionError(f'Response kernel ({resolution_fwhm} nm FWHM) is wider than the grid span ({grid.span} nm)')

    margin = int(math.ceil(3 * resolution_fwhm / grid.step))
    peak = float(np.max(s.values))
    if peak > 0 and max(np.max(s.values[:margin]), np.max(s.values[-margin:])) > 1e-6 * peak:
        logger.warning('Spectrum has weight within 3 response widths of the grid edge; the convolution loses it')

    blurred = gaussian_filter1d(s.values, sigma_px, mode='constant', cval=0.0, truncate=KERNEL_TRUNCATE)
    return SpectralDensity(grid, np.clip(blurred, 0.0, None)).normalized()
