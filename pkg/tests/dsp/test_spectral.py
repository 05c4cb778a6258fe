"""Tests for Welch PSD, band power and zero-crossing rate."""

import numpy as np
import pytest

from src.dsp import Spectrum, band_power, resolve_segment_length, welch_psd, zero_crossing_rate
from src.exceptions import ParameterError


FS = 250.0


def _tone(freq_hz, seconds, fs=FS):
    t = np.arange(int(seconds * fs)) / fs
    return np.sin(2 * np.pi * freq_hz * t)


def _ar1(rng, n, coef):
    noise = rng.standard_normal(n)
    x = np.empty(n)
    x[0] = noise[0]
    for i in range(1, n):
        x[i] = coef * x[i - 1] + noise[i]
    return x


class TestWelch:
    def test_grid_spans_dc_to_nyquist(self):
        s = welch_psd(np.random.default_rng(0).standard_normal(1000), FS, 256)
        assert s.freqs_hz[0] == 0.0
        assert s.freqs_hz[-1] == pytest.approx(FS / 2)
        assert np.all(np.diff(s.freqs_hz) > 0)
        assert np.all(s.psd >= 0)

    def test_odd_segment_still_reaches_nyquist(self):
        s = welch_psd(np.random.default_rng(1).standard_normal(500), 100.0, 101)
        assert s.freqs_hz[-1] == pytest.approx(50.0)

    def test_tone_concentrates_near_its_frequency(self):
        s = welch_psd(_tone(10.0, 56), FS, 500)
        assert band_power(s, 9.0, 11.0) / s.total_power() >= 0.9

    def test_tone_lands_in_alpha_with_default_segment(self):
        s = welch_psd(_tone(10.0, 56), FS, 256)
        assert band_power(s, 8.0, 13.0) / s.total_power() >= 0.9

    def test_constant_signal_only_in_dc_bin(self):
        s = welch_psd(np.full(1024, 3.0), FS, 256, window="boxcar")
        assert s.psd[0] > 0
        assert np.allclose(s.psd[1:], 0.0, atol=1e-12 * s.psd[0])

    @pytest.mark.parametrize("seed", range(20))
    def test_parseval(self, seed):
        rng = np.random.default_rng(seed)
        x = _ar1(rng, 20000, rng.uniform(-0.5, 0.5))
        x -= x.mean()
        s = welch_psd(x, 100.0, 256)
        assert s.total_power() == pytest.approx(np.var(x), rel=0.1)

    def test_white_noise_is_flat(self):
        x = np.random.default_rng(2).standard_normal(256 * 500)
        s = welch_psd(x, FS, 256)
        mid = (s.freqs_hz >= 0.1 * FS) & (s.freqs_hz <= 0.4 * FS)
        assert s.psd[mid].max() / s.psd[mid].min() <= 3.0

    def test_offset_only_touches_lowest_bins(self):
        x = np.random.default_rng(4).standard_normal(5000)
        a = welch_psd(x, FS, 256)
        b = welch_psd(x + 5.0, FS, 256)
        assert np.allclose(a.psd[2:], b.psd[2:], rtol=1e-6, atol=1e-12)

    def test_deterministic(self):
        x = np.random.default_rng(6).standard_normal(3000)
        assert np.array_equal(welch_psd(x, FS, 256).psd, welch_psd(x, FS, 256).psd)

    def test_segment_longer_than_signal(self):
        with pytest.raises(ParameterError):
            welch_psd(np.zeros(100), FS, 256)

    def test_segment_below_minimum(self):
        with pytest.raises(ParameterError):
            welch_psd(np.zeros(100), FS, 4)

    def test_resolve_segment_length(self):
        assert resolve_segment_length(1000, 128) == 128
        assert resolve_segment_length(101, 128) == 100


class TestBandPower:
    def test_zero_spectrum(self):
        s = Spectrum(np.linspace(0, 125, 129), np.zeros(129), FS)
        assert band_power(s, 8.0, 13.0) == 0.0

    def test_additive_over_adjacent_bands(self):
        s = welch_psd(np.random.default_rng(7).standard_normal(5000), FS, 256)
        whole = band_power(s, 3.0, 13.0)
        assert band_power(s, 3.0, 7.0) + band_power(s, 7.0, 13.0) == pytest.approx(
            whole, rel=1e-9
        )

    def test_scales_with_amplitude_squared(self):
        x = np.random.default_rng(8).standard_normal(5000)
        base = band_power(welch_psd(x, FS, 256), 14.0, 29.0)
        scaled = band_power(welch_psd(3.0 * x, FS, 256), 14.0, 29.0)
        assert scaled == pytest.approx(9.0 * base, rel=1e-6)

    def test_full_band_equals_total_power(self):
        s = welch_psd(np.random.default_rng(9).standard_normal(5000), FS, 256)
        assert band_power(s, 0.0, FS / 2) == pytest.approx(s.total_power(), rel=1e-12)

    @pytest.mark.parametrize("lo, hi", [(-1.0, 5.0), (10.0, 200.0), (13.0, 8.0), (5.0, 5.0)])
    def test_rejects_band_outside_spectrum(self, lo, hi):
        s = welch_psd(np.random.default_rng(10).standard_normal(1000), FS, 256)
        with pytest.raises(ParameterError):
            band_power(s, lo, hi)


class TestZeroCrossingRate:
    def test_constant(self):
        assert zero_crossing_rate(np.full(100, 4.2), 10.0) == 0.0

    def test_one_hz_sine(self):
        x = _tone(1.0, 10, fs=100.0)
        assert zero_crossing_rate(x, 100.0) == pytest.approx(2.0, abs=0.1)

    def test_alternating_samples(self):
        fs = 100.0
        x = np.tile([1.0, -1.0], 50)
        rate = zero_crossing_rate(x, fs)
        assert rate * (x.size - 1) / fs == pytest.approx(x.size - 1)

    def test_touching_the_mean_is_not_a_crossing(self):
        x = np.array([1.0, 0.0, 1.0, 0.0, -1.0, -1.0])
        assert zero_crossing_rate(x, 1.0) == pytest.approx(1 / 5)

    def test_needs_two_samples(self):
        with pytest.raises(ParameterError):
            zero_crossing_rate(np.array([1.0]), 1.0)
