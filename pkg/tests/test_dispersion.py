import math

import numpy as np
import pytest

from pyraman import DomainError
from pyraman.dispersion import (
    DIAMOND,
    SellmeierModel,
    conversion_efficiency,
    delta_k,
    output_wavelength,
    phase_mismatch,
    raman_resonant_input,
    read_wavelength,
    refractive_index,
    sinc,
    sinc2,
    sinc_zero_read_wavelengths,
    wavevector,
)
from pyraman.spectral_core import wavelength_to_frequency


def test_diamond_index_near_800nm():
    assert refractive_index(DIAMOND, 800.0) == pytest.approx(2.400, abs=0.01)


def test_normal_dispersion():
    n = refractive_index(DIAMOND, np.array([500.0, 700.0, 900.0]))
    assert np.all(np.diff(n) < 0)


def test_index_outside_valid_range():
    with pytest.raises(DomainError):
        refractive_index(DIAMOND, 300.0)
    with pytest.raises(DomainError):
        wavevector(DIAMOND, 1200.0)


def test_wavevector_units():
    n = refractive_index(DIAMOND, 800.0)
    assert wavevector(DIAMOND, 800.0) == pytest.approx(2 * math.pi * n / 800e-9, rel=1e-12)


def test_sinc_values():
    assert sinc(0.0) == 1.0
    assert sinc(math.pi) == pytest.approx(0.0, abs=1e-12)
    assert sinc(1e-5) == pytest.approx(1.0 - 1e-10 / 6.0, rel=1e-15)
    assert sinc2(np.array([0.0, math.pi / 2])) == pytest.approx([1.0, 4.0 / math.pi ** 2])


def test_resonant_input_and_output_wavelengths(cfg):
    assert raman_resonant_input(cfg) == pytest.approx(722.84, abs=0.01)
    assert output_wavelength(792.0, cfg) == pytest.approx(716.31, abs=0.05)
    assert output_wavelength(808.0, cfg) == pytest.approx(729.37, abs=0.05)
    assert read_wavelength(output_wavelength(792.0, cfg), cfg) == pytest.approx(792.0, rel=1e-12)


def test_output_is_blue_shifted_by_phonon_frequency(cfg):
    for read in (784.0, 800.0, 812.0):
        shift = wavelength_to_frequency(output_wavelength(read, cfg)) - wavelength_to_frequency(read)
        assert shift == pytest.approx(cfg.phonon_freq, rel=1e-12)


def test_phase_matched_at_write_wavelength(cfg):
    assert delta_k(DIAMOND, 800.0, cfg) == pytest.approx(0.0, abs=1e-6)
    assert conversion_efficiency(DIAMOND, 800.0, cfg) == pytest.approx(cfg.eta_fc0, rel=1e-12)


def test_phase_mismatch_result_is_consistent(cfg):
    result = phase_mismatch(DIAMOND, 792.0, cfg)
    assert result.delta_k == pytest.approx(result.k_i - result.k_o + result.k_r - result.k_w)
    assert result.delta_k == pytest.approx(delta_k(DIAMOND, 792.0, cfg))
    assert 0.0 < result.sinc2 < 1.0
    assert result.write_wavelength == cfg.write_pulse.center


def test_efficiency_falls_away_from_phase_matching(cfg):
    eta = conversion_efficiency(DIAMOND, np.array([800.0, 804.0, 808.0]), cfg)
    assert np.all(np.diff(eta) < 0)


def test_sinc_zeros_bracket_the_write_wavelength(cfg):
    lo, hi = sinc_zero_read_wavelengths(DIAMOND, cfg)
    assert lo < cfg.write_pulse.center < hi
    for read in (lo, hi):
        assert abs(delta_k(DIAMOND, read, cfg)) * cfg.crystal_length / 2 == pytest.approx(math.pi, rel=1e-6)
        assert conversion_efficiency(DIAMOND, read, cfg) == pytest.approx(0.0, abs=1e-9)


def test_sellmeier_validation():
    with pytest.raises(DomainError):
        SellmeierModel(((1.0, 500.0),), (400.0, 1100.0))
    with pytest.raises(DomainError):
        SellmeierModel((), (400.0, 1100.0))
    with pytest.raises(DomainError):
        SellmeierModel(((-1.0, 100.0),), (400.0, 1100.0))
    with pytest.raises(DomainError):
        SellmeierModel(((1.0, 100.0),), (1100.0, 400.0))


def test_vacuum_model_has_unit_index():
    vacuum = SellmeierModel(((0.0, 100.0),), (400.0, 1100.0))
    assert refractive_index(vacuum, 800.0) == pytest.approx(1.0)


def test_delta_k_changes_sign_across_write_wavelength(cfg):
    assert delta_k(DIAMOND, 796.0, cfg) * delta_k(DIAMOND, 804.0, cfg) < 0


def test_sinc2_is_even():
    x = np.linspace(-12.0, 12.0, 241)
    np.testing.assert_allclose(sinc2(x), sinc2(-x), rtol=1e-14, atol=0.0)


def test_wavevector_decreases_over_valid_range():
    lo, hi = DIAMOND.valid_range
    k = wavevector(DIAMOND, np.linspace(lo, hi, 701))
    assert np.all(np.diff(k) < 0)
