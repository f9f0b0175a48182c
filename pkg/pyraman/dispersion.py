"""Refractive index of diamond, wavevectors and Raman phase matching.

Fields are collinear, so every wavevector is a scalar magnitude. The phase
mismatch of the storage/retrieval process is

    dk = k_i - k_o + k_r - k_w

and the conversion efficiency follows eta_fc0 * sinc^2(dk * L / 2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Tuple, Union

import numpy as np
from scipy.optimize import brentq

from .exceptions import DomainError
from .spectral_core import frequency_to_wavelength, wavelength_to_frequency
from .validation import ErrorChecker

if TYPE_CHECKING:
    from .config import ExperimentConfig

ArrayLike = Union[float, np.ndarray]

# below this |x| the sinc series is used instead of sin(x)/x
SINC_SERIES_LIMIT = 1e-4


@dataclass(frozen=True)
class SellmeierModel:
    """n^2 = 1 + sum(A * lambda^2 / (lambda^2 - pole^2)); wavelengths in nm."""
    terms: Tuple[Tuple[float, float], ...]
    valid_range: Tuple[float, float]

    def __post_init__(self):
        if len(self.terms) == 0:
            raise DomainError('Sellmeier model needs at least one term')
        lo, hi = self.valid_range
        ErrorChecker.check_positive(lo, 'valid_range[0]')
        ErrorChecker.check_positive(hi, 'valid_range[1]')
        if lo >= hi:
            raise DomainError(f'Invalid valid_range: {self.valid_range} is empty')
        for strength, pole in self.terms:
            ErrorChecker.check_non_negative(strength, 'term strength')
            ErrorChecker.check_positive(pole, 'pole wavelength')
            if lo <= pole <= hi:
                raise DomainError(f'Invalid pole wavelength: {pole} nm lies inside the valid range {self.valid_range}')
        n_squared = _n_squared(self, np.linspace(lo, hi, 64))
        if not np.all(np.isfinite(n_squared)) or np.any(n_squared < 1):
            raise DomainError('Sellmeier model gives n < 1 or a non-real index on its valid range')


def _n_squared(model: SellmeierModel, wavelength: np.ndarray) -> np.ndarray:
    l2 = wavelength ** 2
    total = np.ones_like(l2)
    for strength, pole in model.terms:
        total = total + strength * l2 / (l2 - pole ** 2)
    return total


# two-pole diamond model, poles at 175 nm and 106 nm
DIAMOND = SellmeierModel(((0.3306, 175.0), (4.3356, 106.0)), (400.0, 1100.0))


def refractive_index(model: SellmeierModel, wavelength: ArrayLike) -> ArrayLike:
    """Refractive index at a vacuum wavelength in nm (no extrapolation)."""
    arr = np.asarray(wavelength, dtype=float)
    lo, hi = model.valid_range
    if not np.all(np.isfinite(arr)) or np.any(arr < lo) or np.any(arr > hi):
        raise DomainError(f'Wavelength {wavelength} nm outside the Sellmeier valid range [{lo}, {hi}] nm')
    n = np.sqrt(_n_squared(model, arr))
    return float(n) if n.ndim == 0 else n


def wavevector(model: SellmeierModel, wavelength: ArrayLike) -> ArrayLike:
    """Wavevector magnitude k = 2 pi n / lambda in rad/m."""
    n = refractive_index(model, wavelength)
    k = 2.0 * np.pi * np.asarray(n) / (np.asarray(wavelength, dtype=float) * 1e-9)
    return float(k) if k.ndim == 0 else k


def sinc(x: ArrayLike) -> ArrayLike:
    """Unnormalized sinc, sin(x)/x with sinc(0) = 1."""
    arr = np.asarray(x, dtype=float)
    small = np.abs(arr) < SINC_SERIES_LIMIT
    safe = np.where(small, 1.0, arr)
    result = np.where(small, 1.0 - arr ** 2 / 6.0, np.sin(safe) / safe)
    return float(result) if result.ndim == 0 else result


def sinc2(x: ArrayLike) -> ArrayLike:
    s = sinc(x)
    return s * s


def raman_resonant_input(cfg: ExperimentConfig) -> float:
    """Input wavelength in Raman resonance with the write pulse, omega_w + Omega."""
    return frequency_to_wavelength(cfg.write_pulse.frequency + cfg.phonon_freq)


def output_wavelength(read_center: ArrayLike, cfg: ExperimentConfig) -> ArrayLike:
    """Retrieved-photon wavelength: read blue-shifted by the phonon frequency."""
    return frequency_to_wavelength(wavelength_to_frequency(read_center) + cfg.phonon_freq)


def read_wavelength(output: ArrayLike, cfg: ExperimentConfig) -> ArrayLike:
    """Read wavelength that retrieves at the given output wavelength."""
    return frequency_to_wavelength(wavelength_to_frequency(output) - cfg.phonon_freq)


@dataclass(frozen=True)
class PhaseMatchResult:
    k_i: float
    k_o: float
    k_r: float
    k_w: float
    delta_k: float
    sinc2: float
    input_wavelength: float
    output_wavelength: float
    read_wavelength: float
    write_wavelength: float


def delta_k(model: SellmeierModel, read_center: ArrayLike, cfg: ExperimentConfig) -> ArrayLike:
    """Phase mismatch in rad/m for one or many read wavelengths."""
    k_i = wavevector(model, raman_resonant_input(cfg))
    k_w = wavevector(model, cfg.write_pulse.center)
    k_o = wavevector(model, output_wavelength(read_center, cfg))
    k_r = wavevector(model, read_center)
    return k_i - k_o + k_r - k_w


def phase_mismatch(model: SellmeierModel, read_center: float, cfg: ExperimentConfig) -> PhaseMatchResult:
    """
    Wavevectors, phase mismatch and sinc^2 envelope for one read setting.

    :param model: dispersion model of the crystal
    :param read_center: read pulse center in nm
    :param cfg: experiment config (write pulse, phonon frequency, crystal length)
    """
    input_wl = raman_resonant_input(cfg)
    output_wl = output_wavelength(read_center, cfg)
    k_i = wavevector(model, input_wl)
    k_o = wavevector(model, output_wl)
    k_r = wavevector(model, read_center)
    k_w = wavevector(model, cfg.write_pulse.center)
    dk = k_i - k_o + k_r - k_w
    return PhaseMatchResult(
        k_i=k_i,
        k_o=k_o,
        k_r=k_r,
        k_w=k_w,
        delta_k=dk,
        sinc2=sinc2(dk * cfg.crystal_length / 2.0),
        input_wavelength=input_wl,
        output_wavelength=output_wl,
        read_wavelength=read_center,
        write_wavelength=cfg.write_pulse.center,
    )


def conversion_efficiency(model: SellmeierModel, read_center: ArrayLike, cfg: ExperimentConfig) -> ArrayLike:
    """eta_fc0 * sinc^2(dk L / 2) for one or many read wavelengths."""
    return cfg.eta_fc0 * sinc2(delta_k(model, read_center, cfg) * cfg.crystal_length / 2.0)


def sinc_zero_read_wavelengths(model: SellmeierModel, cfg: ExperimentConfig, search_nm: float = 60.0) -> Tuple[float, float]:
    """Read wavelengths either side of the write wavelength where |dk| L / 2 = pi."""
    write = cfg.write_pulse.center
    lo_bound, hi_bound = model.valid_range

    def phase(read):
        return delta_k(model, read, cfg) * cfg.crystal_length / 2.0

    zeros = []
    for edge in (max(write - search_nm, lo_bound), min(write + search_nm, hi_bound)):
        target = math.copysign(math.pi, phase(edge))
        try:
            zeros.append(brentq(lambda r: phase(r) - target, min(edge, write), max(edge, write), xtol=1e-9))
        except ValueError as err:
            raise DomainError(f'No sinc zero between {write} nm and {edge} nm') from err
    return zeros[0], zeros[1]
