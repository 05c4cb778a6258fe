"""Tests for IIR filter design and application."""

import numpy as np
import pytest

from src.dsp import (
    BiquadCascade,
    design_bandpass,
    design_lowpass,
    design_notch,
    filter_apply,
    frequency_response,
    gain_db,
)
from src.exceptions import FilterDesignError, ParameterError
from src.utils.constants import EEG_BANDS


class TestNotch:
    def test_attenuates_mains_and_keeps_passband(self):
        notch = design_notch(50.0, 30.0, 250.0)
        assert gain_db(notch, np.array([50.0]))[0] <= -30.0
        assert gain_db(notch, np.array([10.0]))[0] >= -0.5

    def test_unity_gain_at_dc_and_nyquist(self):
        notch = design_notch(50.0, 30.0, 250.0)
        h = np.abs(frequency_response(notch, np.array([0.0, 125.0])))
        assert h[0] == pytest.approx(1.0, abs=1e-12)
        assert abs(20 * np.log10(h[1])) <= 0.5

    @pytest.mark.parametrize("f0", [0.0, 125.0, 200.0])
    def test_rejects_frequency_outside_nyquist(self, f0):
        with pytest.raises(ParameterError):
            design_notch(f0, 30.0, 250.0)

    def test_rejects_nonpositive_q(self):
        with pytest.raises(ParameterError):
            design_notch(50.0, 0.0, 250.0)


class TestBandpass:
    def test_alpha_band_shape(self):
        bp = design_bandpass(8.0, 13.0, 5, 250.0)
        assert gain_db(bp, np.array([10.2]))[0] >= -1.0
        stop = gain_db(bp, np.array([2.0, 40.0]))
        assert np.all(stop <= -20.0)

    @pytest.mark.parametrize("band", sorted(EEG_BANDS))
    def test_band_edges_at_minus_3_db(self, band):
        lo, hi = EEG_BANDS[band]
        bp = design_bandpass(lo, hi, 5, 250.0)
        edges = gain_db(bp, np.array([lo, hi]))
        assert np.all(np.abs(edges + 3.0103) <= 0.5)

    def test_stopbands_monotone(self):
        bp = design_bandpass(8.0, 13.0, 5, 250.0)
        below = gain_db(bp, np.linspace(0.5, 7.5, 50))
        above = gain_db(bp, np.linspace(13.5, 120.0, 200))
        assert np.all(np.diff(below) > 0)
        assert np.all(np.diff(above) < 0)

    def test_removes_dc_after_transient(self):
        bp = design_bandpass(8.0, 13.0, 5, 250.0)
        y = filter_apply(bp, np.ones(2500))
        assert np.max(np.abs(y[-500:])) < 1e-3

    @pytest.mark.parametrize(
        "lo, hi", [(13.0, 8.0), (8.0, 8.0), (0.0, 13.0), (8.0, 125.0)]
    )
    def test_rejects_invalid_band(self, lo, hi):
        with pytest.raises(ParameterError):
            design_bandpass(lo, hi, 5, 250.0)

    def test_rejects_zero_order(self):
        with pytest.raises(ParameterError):
            design_bandpass(8.0, 13.0, 0, 250.0)


class TestStability:
    def test_designed_filters_have_poles_inside_unit_circle(self):
        cascades = [
            design_notch(50.0, 30.0, 250.0),
            design_lowpass(0.08, 2, 4.0),
            *(design_bandpass(lo, hi, 5, 250.0) for lo, hi in EEG_BANDS.values()),
        ]
        for cascade in cascades:
            assert np.max(np.abs(cascade.poles)) < 1.0

    def test_unstable_sections_rejected(self):
        with pytest.raises(FilterDesignError):
            BiquadCascade(sos=np.array([[1.0, 0.0, 0.0, 1.0, -2.0, 1.0]]), sample_rate_hz=1.0)

    def test_sections_are_normalized_tuples(self):
        notch = design_notch(50.0, 30.0, 250.0)
        assert len(notch.sections) == 1
        assert len(notch.sections[0]) == 5
        assert np.allclose(notch.sos[:, 3], 1.0)


class TestFilterApply:
    def test_zero_in_zero_out(self):
        notch = design_notch(50.0, 30.0, 250.0)
        y = filter_apply(notch, np.zeros(1000))
        assert y.shape == (1000,)
        assert np.all(y == 0.0)

    def test_linearity(self):
        rng = np.random.default_rng(3)
        x, z = rng.standard_normal((2, 2000))
        bp = design_bandpass(8.0, 13.0, 5, 250.0)
        lhs = filter_apply(bp, 2.5 * x - 0.7 * z)
        rhs = 2.5 * filter_apply(bp, x) - 0.7 * filter_apply(bp, z)
        assert np.allclose(lhs, rhs, rtol=1e-9, atol=1e-9 * np.max(np.abs(rhs)))

    def test_impulse_response_matches_design(self):
        notch = design_notch(50.0, 30.0, 250.0)
        impulse = np.zeros(8192)
        impulse[0] = 1.0
        h_measured = np.fft.rfft(filter_apply(notch, impulse))
        freqs = np.fft.rfftfreq(impulse.size, d=1 / 250.0)
        h_designed = frequency_response(notch, freqs)
        assert np.max(np.abs(h_measured - h_designed)) < 1e-6

    def test_steady_state_passes_constant_through_lowpass(self):
        lp = design_lowpass(0.2, 2, 4.0)
        y = filter_apply(lp, np.full(400, 7.0), steady_state=True)
        assert np.allclose(y, 7.0, atol=1e-9)

    def test_filters_each_row_of_a_matrix(self):
        rng = np.random.default_rng(5)
        x = rng.standard_normal((3, 600))
        notch = design_notch(50.0, 30.0, 250.0)
        y = filter_apply(notch, x, steady_state=True)
        for row in range(3):
            assert np.allclose(y[row], filter_apply(notch, x[row], steady_state=True))

    def test_deterministic(self):
        rng = np.random.default_rng(11)
        x = rng.standard_normal(1000)
        bp = design_bandpass(14.0, 29.0, 5, 250.0)
        assert np.array_equal(filter_apply(bp, x), filter_apply(bp, x))
