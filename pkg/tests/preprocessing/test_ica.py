"""Tests for FastICA and ocular component handling."""

import numpy as np
import pytest

from src.dataset import SignalTrace
from src.exceptions import IcaRankError, ParameterError
from src.preprocessing import (
    ICADecomposition,
    choose_components,
    eog_component_scores,
    fast_ica,
    remove_components,
)
from src.utils.constants import EEG_MONTAGE


FS = 250.0


def _best_abs_corr(estimated, truth):
    """For each true source, the best |corr| over estimated sources and its index."""
    k = truth.shape[0]
    corr = np.abs(np.corrcoef(np.vstack([truth, estimated]))[:k, k:])
    return corr.max(axis=1), corr.argmax(axis=1)


def _blink_case(seed, seconds=20.0):
    rng = np.random.default_rng(seed)
    n = int(seconds * FS)
    t = np.arange(n) / FS
    background = rng.laplace(size=(7, n))
    blink = np.zeros(n)
    for onset in np.arange(1.0, seconds, 1 / 0.3):
        blink += 10.0 * np.exp(-0.5 * ((t - onset - rng.uniform(0, 0.3)) / 0.1) ** 2)

    mixing = rng.standard_normal((8, 8))
    mixing[:2, :7] *= 0.3
    mixing[:, 7] = 0.1
    mixing[:2, 7] = 1.0
    samples = mixing @ np.vstack([background, blink])
    return SignalTrace(samples, FS, EEG_MONTAGE), blink


class TestFastIca:
    @pytest.mark.parametrize("seed", range(20))
    def test_recovers_two_by_two_mixture(self, seed):
        rng = np.random.default_rng(seed)
        t = np.arange(2500) / FS
        truth = np.vstack([np.sin(2 * np.pi * 2.0 * t), rng.uniform(-1, 1, t.size)])
        mixing = np.array([[1.0, 0.6], [0.5, 1.0]])
        trace = SignalTrace(mixing @ truth, FS, ("a", "b"))

        d = fast_ica(trace, seed=seed)
        best, which = _best_abs_corr(d.sources, truth)
        assert np.all(best >= 0.95)
        assert which[0] != which[1]

    def test_identity_mixing(self):
        rng = np.random.default_rng(7)
        truth = rng.laplace(size=(3, 4000))
        truth = (truth - truth.mean(axis=1, keepdims=True)) / truth.std(axis=1, keepdims=True)
        d = fast_ica(SignalTrace(truth, FS, ("a", "b", "c")), seed=1)
        best, which = _best_abs_corr(d.sources, truth)
        assert np.all(best >= 0.95)
        assert sorted(which) == [0, 1, 2]

    def test_sources_are_white(self):
        trace, _ = _blink_case(3)
        d = fast_ica(trace, seed=0)
        cov = d.sources @ d.sources.T / d.sources.shape[1]
        assert np.allclose(cov, np.eye(8), atol=1e-3)

    def test_unmixing_inverts_mixing(self):
        trace, _ = _blink_case(4)
        d = fast_ica(trace, seed=0)
        assert np.allclose(d.unmixing @ d.mixing, np.eye(8), atol=1e-6)

    def test_same_seed_same_result(self):
        trace, _ = _blink_case(5)
        a = fast_ica(trace, seed=11)
        b = fast_ica(trace, seed=11)
        assert np.array_equal(a.unmixing, b.unmixing)
        assert np.array_equal(a.sources, b.sources)
        assert a.iterations == b.iterations

    def test_convergence_flag(self):
        trace, _ = _blink_case(6)
        assert fast_ica(trace, seed=0).converged
        assert not fast_ica(trace, seed=0, max_iter=1, tol=1e-12).converged

    def test_rank_deficient_input(self):
        row = np.random.default_rng(0).standard_normal(1000)
        trace = SignalTrace(np.vstack([row, 2 * row, np.cos(row)]), FS, ("a", "b", "c"))
        with pytest.raises(IcaRankError, match="n_components"):
            fast_ica(trace)
        assert fast_ica(trace, n_components=2).n_components == 2

    def test_too_many_components(self):
        trace, _ = _blink_case(0)
        with pytest.raises(ParameterError):
            fast_ica(trace, n_components=9)


class TestEogScores:
    def test_blink_component_ranked_first(self):
        hits = 0
        for seed in range(20):
            trace, blink = _blink_case(seed)
            d = fast_ica(trace, seed=seed)
            scores = eog_component_scores(d, trace)
            top_index, top_score = scores[0]
            corr = abs(np.corrcoef(d.sources[top_index], blink)[0, 1])
            if corr > 0.9 and top_score >= 0.8:
                hits += 1
        assert hits >= 18

    def test_scores_sorted_and_bounded(self):
        trace, _ = _blink_case(1)
        scores = eog_component_scores(fast_ica(trace, seed=1), trace)
        values = [s for _, s in scores]
        assert values == sorted(values, reverse=True)
        assert all(0.0 <= s <= 1.0 for s in values)
        assert sorted(i for i, _ in scores) == list(range(8))

    def test_fast_component_unrelated_to_frontal_ranks_last(self):
        rng = np.random.default_rng(2)
        n = 5000
        t = np.arange(n) / FS
        samples = rng.standard_normal((8, n))
        slow = np.sin(2 * np.pi * 0.5 * t)
        samples[:2] += 5.0 * slow
        fast = np.sin(2 * np.pi * 20.0 * t)
        d = ICADecomposition(
            unmixing=np.eye(2, 8),
            mixing=np.eye(8, 2),
            sources=np.vstack([fast, slow]),
            converged=True,
            iterations=1,
            channel_means=np.zeros(8),
            sample_rate_hz=FS,
            channel_names=EEG_MONTAGE,
        )
        scores = eog_component_scores(d, SignalTrace(samples, FS, EEG_MONTAGE))
        assert scores == [(1, 1.0), (0, 0.5)]

    def test_identical_components_tie(self):
        rng = np.random.default_rng(3)
        row = rng.standard_normal(3000)
        d = ICADecomposition(
            unmixing=np.eye(3, 8),
            mixing=np.eye(8, 3),
            sources=np.tile(row, (3, 1)),
            converged=True,
            iterations=1,
            channel_means=np.zeros(8),
            sample_rate_hz=FS,
            channel_names=EEG_MONTAGE,
        )
        trace = SignalTrace(rng.standard_normal((8, 3000)), FS, EEG_MONTAGE)
        scores = eog_component_scores(d, trace)
        assert len({round(s, 12) for _, s in scores}) == 1
        assert [i for i, _ in scores] == [0, 1, 2]


class TestRemoveComponents:
    def test_remove_nothing_reconstructs_input(self):
        trace, _ = _blink_case(8)
        out = remove_components(fast_ica(trace, seed=0), [])
        assert np.allclose(out.samples, trace.samples, atol=1e-6)
        assert out.channel_names == trace.channel_names

    def test_remove_all_from_centred_input(self):
        trace, _ = _blink_case(9)
        centred = trace.with_samples(trace.samples - trace.samples.mean(axis=1, keepdims=True))
        out = remove_components(fast_ica(centred, seed=0), range(8))
        assert np.allclose(out.samples, 0.0, atol=1e-9)

    def test_remove_all_from_offset_input(self):
        trace, _ = _blink_case(9)
        shifted = trace.with_samples(trace.samples + np.arange(8.0)[:, np.newaxis] * 25.0)
        out = remove_components(fast_ica(shifted, seed=0), range(8))
        assert np.allclose(out.samples, 0.0, atol=1e-9)

    def test_kept_components_keep_their_offset(self):
        trace, _ = _blink_case(9)
        shifted = trace.with_samples(trace.samples + 40.0)
        out = remove_components(fast_ica(shifted, seed=0), [])
        assert np.allclose(out.samples.mean(axis=1), shifted.samples.mean(axis=1), atol=1e-6)

    def test_removing_blink_decorrelates_frontal_channels(self):
        trace, blink = _blink_case(10)
        d = fast_ica(trace, seed=10)
        top = eog_component_scores(d, trace)[0][0]
        cleaned = remove_components(d, [top])
        frontal = cleaned.samples[:2].mean(axis=0)
        assert abs(np.corrcoef(frontal, blink)[0, 1]) < 0.2

    def test_out_of_range_index(self):
        trace, _ = _blink_case(0)
        with pytest.raises(ParameterError):
            remove_components(fast_ica(trace, seed=0), [8])


class TestChooseComponents:
    def test_policies(self):
        scores = [(3, 0.9), (1, 0.2)]
        assert choose_components(scores, "none") == []
        assert choose_components(scores, "auto") == [3]
        assert choose_components([(3, 0.5)], "auto") == []
        assert choose_components(scores, "manual", [2, 0, 2]) == [0, 2]

    def test_unknown_mode(self):
        with pytest.raises(ParameterError):
            choose_components([], "sometimes")
