"""Tests for EDA, BVP and temperature features."""

import numpy as np
import pytest

from src.dataset import SignalTrace
from src.dsp import band_power, welch_psd
from src.exceptions import FeatureExtractionError
from src.features import (
    IBISeries,
    bvp_features,
    detect_pulses,
    eda_band_edges,
    eda_features,
    ibi_features,
    temp_features,
)


def _eda(x, fs=4.0):
    return SignalTrace(np.asarray(x, dtype=float), fs, ("eda",))


def _pulse_train(seconds=30.0, fs=64.0, skip=()):
    t = np.arange(int(seconds * fs)) / fs
    x = np.zeros_like(t)
    for k in range(int(seconds)):
        if k not in skip:
            x += np.exp(-0.5 * ((t - 0.5 - k) / 0.1) ** 2)
    return SignalTrace(x, fs, ("bvp",))


class TestEda:
    def test_layout_sizes(self):
        x = np.random.default_rng(0).standard_normal(120)
        assert len(eda_features(_eda(x))) == 22
        assert len(eda_features(_eda(x), n_bands=13)) == 21

    def test_constant_trace(self):
        values = eda_features(_eda(np.full(80, 2.5))).as_dict()
        assert values["eda_mean"] == pytest.approx(2.5)
        for name in (
            "eda_deriv_mean",
            "eda_deriv_neg_mean",
            "eda_deriv_neg_frac",
            "eda_local_minima",
            "eda_rise_time",
            "eda_zcr_slow",
            "eda_zcr_very_slow",
        ):
            assert values[name] == 0.0, name

    def test_triangle_wave_minima_and_rise_time(self):
        t = np.arange(80) / 4.0
        values = eda_features(_eda(np.abs((t % 4.0) - 2.0))).as_dict()
        assert values["eda_local_minima"] == 5
        assert values["eda_rise_time"] == pytest.approx(2.0)
        assert values["eda_deriv_neg_frac"] == pytest.approx(40 / 79)

    def test_bands_partition_the_spectrum(self):
        fs = 8.0
        x = np.random.default_rng(1).standard_normal(240)
        vector = eda_features(_eda(x, fs))
        bands = [v for name, v in vector.as_dict().items() if name.startswith("eda_band")]
        total = band_power(welch_psd(x, fs, 128), 0.0, 2.4)
        assert sum(bands) == pytest.approx(total, rel=1e-9)

    def test_bands_above_nyquist_are_zero(self):
        x = np.random.default_rng(2).standard_normal(120)
        values = eda_features(_eda(x)).as_dict()
        above = [i for i, (lo, _) in enumerate(eda_band_edges()) if lo >= 2.0]
        assert above
        assert all(values[f"eda_band{i:02d}"] == 0.0 for i in above)

    def test_band_edges(self):
        edges = eda_band_edges()
        assert len(edges) == 14
        assert edges[0][0] == 0.0
        assert edges[-1][1] == pytest.approx(2.4)
        assert all(a[1] == b[0] for a, b in zip(edges, edges[1:]))

    def test_too_short(self):
        with pytest.raises(FeatureExtractionError):
            eda_features(_eda(np.zeros(28)))


class TestPulses:
    def test_one_hertz_train(self):
        series = detect_pulses(_pulse_train())
        assert series.valid
        assert np.allclose(series.ibis_s, 1.0, atol=0.01)

    def test_missing_beat_gives_double_interval(self):
        series = detect_pulses(_pulse_train(skip=(10,)))
        assert np.sum(np.isclose(series.ibis_s, 2.0, atol=0.02)) == 1
        assert np.sum(np.isclose(series.ibis_s, 1.0, atol=0.01)) == series.ibis_s.size - 1

    def test_flat_signal_is_invalid(self):
        series = detect_pulses(SignalTrace(np.zeros(64 * 30), 64.0, ("bvp",)))
        assert not series.valid

    def test_short_signal_is_invalid(self):
        assert not detect_pulses(_pulse_train(seconds=8.0)).valid

    def test_invalid_series_yields_tagged_zeros(self):
        vector = bvp_features(SignalTrace(np.zeros(64 * 30), 64.0, ("bvp",)))
        assert len(vector) == 13
        assert np.all(vector.values == 0.0)
        assert all("quality=invalid" in slot.tag for slot in vector.layout)

    def test_heart_rate_from_train(self):
        values = bvp_features(_pulse_train(seconds=40.0)).as_dict()
        assert values["bvp_hr_mean"] == pytest.approx(60.0, abs=0.5)
        assert values["bvp_ibi_mean"] == pytest.approx(1.0, abs=0.01)
        assert values["bvp_hr_std"] < 1.0

    def test_slow_oscillation_lands_in_mid_band(self):
        times = [0.0]
        while times[-1] < 300.0:
            times.append(times[-1] + 1.0 + 0.05 * np.sin(2 * np.pi * 0.1 * times[-1]))
        values = ibi_features(IBISeries.from_peak_times(np.array(times))).as_dict()
        assert values["bvp_psd_mf"] > values["bvp_psd_lf"]
        assert values["bvp_psd_mf"] > values["bvp_psd_hf"]

    def test_ratio_is_zero_without_high_band_power(self):
        times = 0.75 * np.arange(160)
        values = ibi_features(IBISeries.from_peak_times(times)).as_dict()
        assert values["bvp_lf_hf_ratio"] == 0.0
        assert values["bvp_hr_mean"] == pytest.approx(80.0)
        assert values["bvp_hrv_std"] == pytest.approx(0.0, abs=1e-12)


class TestTemperature:
    def test_ramp(self):
        fs = 4.0
        t = np.arange(240) / fs
        values = temp_features(SignalTrace(30.0 + 0.01 * t, fs, ("temp",))).as_dict()
        assert values["temp_mean"] == pytest.approx(30.0 + 0.01 * t.mean())
        assert values["temp_deriv_mean"] == pytest.approx(0.01)
        assert len(values) == 4

    def test_constant(self):
        values = temp_features(SignalTrace(np.full(120, 33.0), 4.0, ("temp",))).as_dict()
        assert values["temp_deriv_mean"] == 0.0
        assert values["temp_psd_0.1-0.2"] == pytest.approx(0.0, abs=1e-20)

    def test_shorter_than_twenty_seconds(self):
        trace = SignalTrace(np.full(76, 33.0), 4.0, ("temp",))
        with pytest.raises(FeatureExtractionError, match="20"):
            temp_features(trace)
