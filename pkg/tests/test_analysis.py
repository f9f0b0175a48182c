import logging
import math
from dataclasses import replace

import numpy as np
import pandas as pd
import pytest
from scipy.optimize import brentq

from pyraman import DegenerateConfigError, DomainError, EstimatorError, UnboundedRangeError
from pyraman.analysis import (
    Classicality,
    cauchy_schwarz_check,
    g2_analytic_full,
    g2_approximate,
    g2_curve,
    g2_from_counts,
    g2_from_efficiency,
    nonclassical_range,
    poisson_sigma,
)
from pyraman.counting_sim import CountRecord
from pyraman.dispersion import DIAMOND, delta_k, sinc_zero_read_wavelengths


def _dense_curve(cfg, points=4001):
    lo, hi = sinc_zero_read_wavelengths(DIAMOND, cfg)
    return g2_curve(cfg, DIAMOND, np.linspace(lo, hi, points))


def test_peak_g2(cfg):
    full = g2_analytic_full(cfg, 0.0)
    assert full == pytest.approx(4.76, abs=0.05)
    assert full == pytest.approx(g2_approximate(cfg, cfg.eta_fc0), rel=0.01)


def test_approximation_error_is_the_small_parameter(cfg):
    full = g2_from_efficiency(cfg, cfg.eta_fc0)
    small = cfg.p_herald * cfg.eta_h * cfg.eta_fc0 / cfg.p_noise
    assert g2_approximate(cfg, cfg.eta_fc0) / full - 1 == pytest.approx(small, rel=1e-9)


def test_limits(cfg):
    assert g2_from_efficiency(cfg, 0.0) == 1.0
    noisy = replace(cfg, p_noise=0.5)
    assert 1.0 < g2_from_efficiency(noisy, noisy.eta_fc0) < 1.001


def test_degenerate_config(cfg):
    silent = replace(cfg, eta_fc0=0.0, p_noise=0.0)
    with pytest.raises(DegenerateConfigError):
        g2_analytic_full(silent, 0.0)
    with pytest.raises(DegenerateConfigError):
        g2_approximate(silent, 0.0)


def test_g2_curve_shape(cfg):
    curve = g2_curve(cfg, DIAMOND, [800.0])
    assert list(curve.columns) == ['read_nm', 'output_nm', 'delta_omega_thz', 'eta_fc', 'g2']
    assert curve['g2'].iloc[0] == pytest.approx(4.76, abs=0.05)
    assert curve['delta_omega_thz'].iloc[0] == pytest.approx(0.0, abs=1e-9)

    lo, hi = sinc_zero_read_wavelengths(DIAMOND, cfg)
    at_zero = g2_curve(cfg, DIAMOND, [lo, hi])
    assert at_zero['g2'].to_numpy() == pytest.approx([1.0, 1.0], abs=1e-6)

    upper = g2_curve(cfg, DIAMOND, np.linspace(800.0, hi, 200))['g2'].to_numpy()
    assert np.all(np.diff(upper) <= 1e-12)
    with pytest.raises(DomainError):
        g2_curve(cfg, DIAMOND, [])


def test_g2_curve_is_symmetric_in_delta_k(cfg):
    target = delta_k(DIAMOND, 796.0, cfg)
    mirror = brentq(lambda read: delta_k(DIAMOND, read, cfg) + target, 800.0, 830.0, xtol=1e-12)
    curve = g2_curve(cfg, DIAMOND, [796.0, mirror])
    assert mirror > 800.0
    assert curve['g2'].iloc[1] == pytest.approx(curve['g2'].iloc[0], rel=1e-9)
    assert curve['g2'].iloc[0] < g2_analytic_full(cfg, 0.0)


def test_g2_curve_matches_full_form(cfg):
    curve = g2_curve(cfg, DIAMOND, [796.0])
    assert curve['g2'].iloc[0] == pytest.approx(g2_analytic_full(cfg, curve['delta_omega_thz'].iloc[0]), rel=1e-9)


def test_nonclassical_range(cfg):
    span = nonclassical_range(_dense_curve(cfg))
    assert 14.0 <= span.output_span <= 20.0
    assert 20.0 <= span.read_span <= 27.0
    assert span.read_lo < 800.0 < span.read_hi


def test_nonclassical_range_is_grid_independent(cfg):
    coarse = nonclassical_range(_dense_curve(cfg, 2001))
    fine = nonclassical_range(_dense_curve(cfg, 8001))
    assert abs(coarse.read_span - fine.read_span) < 0.1


def test_nonclassical_range_degenerate_curves(cfg):
    with pytest.raises(UnboundedRangeError):
        nonclassical_range([(790.0, 4.76), (800.0, 4.76), (810.0, 4.76)])
    weak = replace(cfg, eta_h=1e-4)
    span = nonclassical_range(_dense_curve(weak))
    assert span.read_span == 0.0


def test_nonclassical_range_from_pairs():
    pairs = [(790.0, 1.0), (795.0, 3.0), (800.0, 5.0), (805.0, 3.0), (810.0, 1.0)]
    span = nonclassical_range(pairs)
    assert span.read_lo == pytest.approx(792.5)
    assert span.read_hi == pytest.approx(807.5)
    assert math.isnan(span.output_lo)


def test_g2_from_counts_accidental_level():
    estimate = g2_from_counts(CountRecord(10 ** 6, 1000, 1000, 1))
    assert estimate.value == pytest.approx(1.0)
    assert estimate.std_error == pytest.approx(1.0, abs=0.01)


def test_g2_from_counts_scale_invariance():
    small = g2_from_counts(CountRecord(10 ** 6, 10 ** 4, 10 ** 4, 400))
    large = g2_from_counts(CountRecord(2 * 10 ** 6, 2 * 10 ** 4, 2 * 10 ** 4, 800))
    assert small.value == pytest.approx(4.0)
    assert large.value == pytest.approx(small.value)
    assert small.std_error / large.std_error == pytest.approx(math.sqrt(2), rel=1e-9)


def test_g2_from_counts_undefined():
    with pytest.raises(EstimatorError):
        g2_from_counts(CountRecord(1000, 0, 10, 0))
    with pytest.raises(EstimatorError):
        g2_from_counts(CountRecord(1000, 10, 0, 0))


def test_g2_from_counts_with_background(caplog):
    on = CountRecord(10 ** 6, 10 ** 4, 2 * 10 ** 4, 500)
    off = CountRecord(10 ** 6, 10 ** 4, 10 ** 4, 100)
    raw = g2_from_counts(on)
    subtracted = g2_from_counts(on, background=off)
    assert subtracted.value == pytest.approx(400 * 10 ** 6 / (10 ** 4 * 10 ** 4))
    assert subtracted.value > raw.value
    assert subtracted.background is off

    with pytest.raises(DomainError):
        g2_from_counts(on, background=CountRecord(10, 1, 1, 0))

    with caplog.at_level(logging.WARNING, logger='pyraman.analysis'):
        clipped = g2_from_counts(CountRecord(10 ** 6, 100, 200, 5), background=CountRecord(10 ** 6, 100, 100, 9))
    assert clipped.value == 0.0
    assert 'negative' in caplog.text


@pytest.mark.parametrize('g2, verdict', [
    (2.7, Classicality.NON_CLASSICAL),
    (2.0, Classicality.CLASSICAL_COMPATIBLE),
    (3.4, Classicality.NON_CLASSICAL),
    (1.0, Classicality.CLASSICAL_COMPATIBLE),
])
def test_cauchy_schwarz(g2, verdict):
    assert cauchy_schwarz_check(g2) is verdict


def test_cauchy_schwarz_custom_autocorrelations():
    assert cauchy_schwarz_check(2.7, 4.0, 2.0) is Classicality.CLASSICAL_COMPATIBLE
    with pytest.raises(DomainError):
        cauchy_schwarz_check(-1.0)


def test_poisson_sigma():
    assert poisson_sigma(0) == 1.0
    assert poisson_sigma(100) == 10.0
    assert poisson_sigma(np.array([0, 4, 9])) == pytest.approx([1.0, 2.0, 3.0])
    assert isinstance(poisson_sigma(pd.Series([1.0, 4.0]).to_numpy()), np.ndarray)
