import math

import numpy as np
import pytest

from pyraman import FitError
from pyraman.dispersion import DIAMOND
from pyraman.fitting import exponential_model, fit_exponential, fit_gaussian, gaussian_model
from pyraman.memory_model import absorption_dip, retrieved_spectrum
from pyraman.spectral_core import PulseSpec, convolve_response

DELAYS = np.linspace(0.0, 10.0, 15)


def test_exponential_exact_recovery():
    points = [(t, 100.0 * math.exp(-t / 3.5)) for t in DELAYS]
    fit = fit_exponential(points)
    assert fit.converged
    assert fit.parameters['amplitude'] == pytest.approx(100.0, rel=1e-6)
    assert fit.parameters['lifetime'] == pytest.approx(3.5, rel=1e-6)
    assert fit.predict(DELAYS) == pytest.approx([y for _, y in points], rel=1e-6)


def test_exponential_two_points_interpolate():
    fit = fit_exponential([(0.0, 100.0), (3.5, 100.0 / math.e)])
    assert fit.parameters['lifetime'] == pytest.approx(3.5, rel=1e-6)
    assert fit.residual_norm == pytest.approx(0.0, abs=1e-6)


def test_exponential_with_poisson_noise():
    rng = np.random.default_rng(7)
    counts = rng.poisson(500.0 * np.exp(-DELAYS / 3.5))
    fit = fit_exponential(list(zip(DELAYS, counts)))
    assert abs(fit.parameters['lifetime'] - 3.5) < 4 * fit.std_errors['lifetime']
    assert fit.std_errors['lifetime'] > 0


def test_fit_is_invariant_under_rescaling():
    rng = np.random.default_rng(3)
    counts = rng.poisson(300.0 * np.exp(-DELAYS / 3.5)).astype(float)
    sigma = np.sqrt(np.maximum(counts, 1.0))
    base = fit_exponential(list(zip(DELAYS, counts, sigma)))
    scaled = fit_exponential(list(zip(DELAYS, 10 * counts, 10 * sigma)))
    assert scaled.parameters['lifetime'] == pytest.approx(base.parameters['lifetime'], rel=1e-6)
    assert scaled.parameters['amplitude'] == pytest.approx(10 * base.parameters['amplitude'], rel=1e-6)


@pytest.mark.parametrize('points', [
    [(1.0, 5.0)],
    [(1.0, 5.0), (1.0, 4.0), (1.0, 3.0)],
    [(1.0, 5.0, -1.0), (2.0, 4.0, 1.0)],
    [(1.0,), (2.0,)],
    [(1.0, math.nan), (2.0, 4.0)],
])
def test_exponential_degenerate_input(points):
    with pytest.raises(FitError):
        fit_exponential(points)


def test_gaussian_exact_recovery():
    x = np.linspace(706.0, 726.0, 81)
    y = gaussian_model(x, 716.3, 3.3, 100.0, 5.0)
    fit = fit_gaussian(list(zip(x, y)))
    assert fit.converged
    for name, expected in (('center', 716.3), ('fwhm', 3.3), ('amplitude', 100.0), ('offset', 5.0)):
        assert fit.parameters[name] == pytest.approx(expected, rel=1e-6)


def test_gaussian_fits_a_dip(cfg):
    delays = np.linspace(-1000.0, 1000.0, 81)
    rates = [absorption_dip(t, cfg) for t in delays]
    fit = fit_gaussian(list(zip(delays, rates)))
    assert fit.parameters['fwhm'] == pytest.approx(cfg.dip_fwhm, rel=1e-6)
    assert fit.parameters['amplitude'] == pytest.approx(-cfg.dip_depth, rel=1e-6)
    assert fit.parameters['center'] == pytest.approx(0.0, abs=1e-6)


def test_gaussian_on_measured_output_spectrum(cfg):
    photon = retrieved_spectrum(PulseSpec(792.0, 3.5), 0.0, cfg, DIAMOND)
    measured = convolve_response(photon.spectrum, cfg.mono_resolution)
    x = np.arange(706.0, 727.0, 0.5)
    y = 1e4 * np.interp(x, measured.wavelengths, measured.values)
    fit = fit_gaussian(list(zip(x, y)))
    assert fit.parameters['center'] == pytest.approx(716.3, abs=0.5)


def test_gaussian_flat_data_is_flagged():
    fit = fit_gaussian([(float(x), 7.0) for x in range(10)])
    assert not fit.converged
    assert fit.parameters['amplitude'] == 0.0


def test_gaussian_needs_five_points():
    with pytest.raises(FitError):
        fit_gaussian([(1.0, 1.0), (2.0, 3.0), (3.0, 1.0), (4.0, 0.5)])


def test_models():
    assert exponential_model(np.array([0.0, 3.5]), 10.0, 3.5) == pytest.approx([10.0, 10.0 / math.e])
    assert gaussian_model(np.array([0.0, 1.0]), 0.0, 2.0, 1.0, 0.0) == pytest.approx([1.0, 0.5])
