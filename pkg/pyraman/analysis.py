"""Cross-correlation g2: analytic model, estimators and classicality.

With P_h the herald probability, eta_h the heralding efficiency of the signal
arm, eta_fc the conversion efficiency and P_n the noise-click probability,

    g2 = (eta_h eta_fc + P_n) / (P_h eta_h eta_fc + P_n)
       ~ 1 + eta_h eta_fc / P_n        when P_h eta_h eta_fc << P_n.
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from .config import ExperimentConfig
from .counting_sim import CountRecord
from .dispersion import DIAMOND, SellmeierModel, conversion_efficiency, output_wavelength
from .exceptions import DegenerateConfigError, DomainError, EstimatorError, UnboundedRangeError
from .spectral_core import frequency_to_wavelength, wavelength_to_frequency
from .validation import ErrorChecker

logger = logging.getLogger(__name__)

# Cauchy-Schwarz bound for two thermal marginals
CLASSICAL_BOUND = 2.0


class Classicality(str, enum.Enum):
    CLASSICAL_COMPATIBLE = 'classical-compatible'
    NON_CLASSICAL = 'non-classical'


@dataclass(frozen=True)
class G2Estimate:
    value: float
    std_error: float
    inputs: CountRecord
    background: Optional[CountRecord] = None

    def __post_init__(self):
        ErrorChecker.check_non_negative(self.value, 'g2 value')
        ErrorChecker.check_non_negative(self.std_error, 'g2 std_error')


def poisson_sigma(counts: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """Poisson error sqrt(N) with a floor of 1 for empty bins."""
    sigma = np.sqrt(np.maximum(np.asarray(counts, dtype=float), 1.0))
    return float(sigma) if sigma.ndim == 0 else sigma


def g2_from_efficiency(cfg: ExperimentConfig, eta_fc: float) -> float:
    """Full-form g2 for a given conversion efficiency."""
    signal = cfg.eta_h * eta_fc
    denominator = cfg.p_herald * signal + cfg.p_noise
    if denominator == 0:
        raise DegenerateConfigError('g2 undefined: no noise (p_noise = 0) and no converted photons')
    return (signal + cfg.p_noise) / denominator


def g2_approximate(cfg: ExperimentConfig, eta_fc: float) -> float:
    """Signal-to-noise form 1 + eta_h eta_fc / P_n."""
    if cfg.p_noise == 0:
        raise DegenerateConfigError('approximate g2 needs p_noise > 0')
    return 1.0 + cfg.eta_h * eta_fc / cfg.p_noise


def read_for_detuning(cfg: ExperimentConfig, delta_omega: float) -> float:
    """Read wavelength whose output sits delta_omega (THz) above the input."""
    return frequency_to_wavelength(cfg.write_pulse.frequency + delta_omega)


def g2_analytic_full(cfg: ExperimentConfig, delta_omega: float, model: SellmeierModel = DIAMOND) -> float:
    """
    Full-form g2 at an input-output detuning.

    :param delta_omega: output minus input frequency in THz
    """
    ErrorChecker.check_finite(delta_omega, 'delta_omega')
    eta_fc = conversion_efficiency(model, read_for_detuning(cfg, delta_omega), cfg)
    return g2_from_efficiency(cfg, eta_fc)


def g2_curve(cfg: ExperimentConfig, model: SellmeierModel, read_wavelengths: Iterable[float]) -> pd.DataFrame:
    """
    Analytic g2 against read wavelength.

    :return: DataFrame with read_nm, output_nm, delta_omega_thz, eta_fc, g2
    """
    reads = np.asarray(list(read_wavelengths), dtype=float)
    if reads.size == 0:
        raise DomainError('g2_curve needs at least one read wavelength')
    eta_fc = np.atleast_1d(conversion_efficiency(model, reads, cfg))
    return pd.DataFrame({
        'read_nm': reads,
        'output_nm': np.atleast_1d(output_wavelength(reads, cfg)),
        'delta_omega_thz': np.atleast_1d(wavelength_to_frequency(reads)) - cfg.write_pulse.frequency,
        'eta_fc': eta_fc,
        'g2': [g2_from_efficiency(cfg, float(eta)) for eta in eta_fc],
    })


@dataclass(frozen=True)
class NonclassicalRange:
    read_lo: float
    read_hi: float
    output_lo: float
    output_hi: float

    @property
    def read_span(self) -> float:
        return self.read_hi - self.read_lo

    @property
    def output_span(self) -> float:
        return abs(self.output_hi - self.output_lo)


def _crossing(x: np.ndarray, y: np.ndarray, j: int, level: float) -> float:
    return float(x[j] + (level - y[j]) * (x[j + 1] - x[j]) / (y[j + 1] - y[j]))


def nonclassical_range(curve: Union[pd.DataFrame, Sequence[Tuple[float, float]]],
                       threshold: float = CLASSICAL_BOUND) -> NonclassicalRange:
    """
    Span of read (and output) wavelengths over which g2 exceeds the threshold.

    Crossings are interpolated linearly, taking the one nearest the peak on
    each side. A curve that never exceeds the threshold gives an empty range.

    :param curve: g2_curve output, or (read_nm, g2) pairs
    :raises UnboundedRangeError: no crossing on one side of the peak
    """
    if not isinstance(curve, pd.DataFrame):
        curve = pd.DataFrame(list(curve), columns=['read_nm', 'g2'])
    curve = curve.sort_values('read_nm')
    x = curve['read_nm'].to_numpy(dtype=float)
    y = curve['g2'].to_numpy(dtype=float)
    out = curve['output_nm'].to_numpy(dtype=float) if 'output_nm' in curve else np.full_like(x, np.nan)

    i = int(np.argmax(y))
    if y[i] <= threshold:
        return NonclassicalRange(x[i], x[i], out[i], out[i])

    left = np.flatnonzero(y[:i] <= threshold)
    right = np.flatnonzero(y[i + 1:] <= threshold)
    if left.size == 0 or right.size == 0:
        raise UnboundedRangeError(f'g2 does not fall to {threshold} on both sides of the peak at {x[i]} nm')
    j = int(left[-1])
    k = i + int(right[0])
    return NonclassicalRange(
        read_lo=_crossing(x, y, j, threshold),
        read_hi=_crossing(x, y, k, threshold),
        output_lo=_crossing(out, y, j, threshold) if np.all(np.isfinite(out)) else math.nan,
        output_hi=_crossing(out, y, k, threshold) if np.all(np.isfinite(out)) else math.nan,
    )


def g2_from_counts(r: CountRecord, background: Optional[CountRecord] = None) -> G2Estimate:
    """
    Estimate g2 = P_sh / (P_s P_h) from counts.

    The error is first-order Poisson propagation over independent counts. A
    background record (control fields off, same number of slots) is
    subtracted from the signal singles and coincidences first.
    """
    n_coinc = float(r.n_coincidence)
    n_signal = float(r.n_signal)
    var_coinc = max(n_coinc, 1.0)
    var_signal = n_signal
    if background is not None:
        if background.n_slots != r.n_slots:
            raise DomainError(f'Background covers {background.n_slots} slots, measurement {r.n_slots}')
        n_coinc -= background.n_coincidence
        n_signal -= background.n_signal
        var_coinc = max(r.n_coincidence + background.n_coincidence, 1.0)
        var_signal = float(r.n_signal + background.n_signal)

    if r.n_herald <= 0 or n_signal <= 0:
        raise EstimatorError(f'g2 undefined without herald and signal singles (n_herald={r.n_herald}, n_signal={n_signal:g})')

    scale = r.n_slots / (n_signal * r.n_herald)
    value = n_coinc * scale
    if value < 0:
        logger.warning('Background-subtracted coincidences are negative (%g); reporting g2 = 0', n_coinc)
        value = 0.0
    std_error = math.sqrt(scale ** 2 * var_coinc + value ** 2 * (var_signal / n_signal ** 2 + 1.0 / r.n_herald))
    return G2Estimate(value, std_error, r, background)


def cauchy_schwarz_check(g2_sh: float, g2_ss: float = 2.0, g2_hh: float = 2.0) -> Classicality:
    """Non-classical iff g2_sh > sqrt(g2_ss * g2_hh)."""
    for value, name in ((g2_sh, 'g2_sh'), (g2_ss, 'g2_ss'), (g2_hh, 'g2_hh')):
        ErrorChecker.check_non_negative(value, name)
    if g2_sh > math.sqrt(g2_ss * g2_hh):
        return Classicality.NON_CLASSICAL
    return Classicality.CLASSICAL_COMPATIBLE
