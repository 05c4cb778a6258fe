"""Tests for the repeated-measures ANOVA and post-hoc comparisons."""

import numpy as np
import pytest

from scipy import special, stats

from src.evaluation import CVReport, FoldReport
from src.exceptions import StatisticsError
from src.stats import (
    AnovaResult,
    bonferroni_posthoc,
    fold_matrix,
    format_summary,
    gg_epsilon,
    rm_anova_gg,
)


TOY = np.array([[1.0, 2.0, 4.0], [2.0, 3.0, 3.0], [3.0, 5.0, 6.0], [4.0, 4.0, 8.0]])
# hand-computed: SS_cond = 15.5, SS_err = 31/6, epsilon from the double-centred covariance
TOY_F = 9.0
TOY_EPSILON = 961.0 / 1514.0
TOY_P_UNCORRECTED = 1.0 / 64.0


def _f_sf(f, d1, d2):
    return special.betainc(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f))


class TestAnova:
    def test_toy_reference(self):
        result = rm_anova_gg(TOY)
        assert result.f_value == pytest.approx(TOY_F, abs=1e-9)
        assert (result.df_factor, result.df_error) == (2.0, 6.0)
        assert result.epsilon_gg == pytest.approx(TOY_EPSILON, abs=1e-9)
        assert result.p_uncorrected == pytest.approx(TOY_P_UNCORRECTED, abs=1e-9)
        expected = _f_sf(TOY_F, 2 * TOY_EPSILON, 6 * TOY_EPSILON)
        assert result.p_value == pytest.approx(expected, abs=1e-6)

    def test_corrected_dfs(self):
        result = rm_anova_gg(TOY)
        assert result.df_factor_gg == pytest.approx(result.epsilon_gg * 2)
        assert result.df_error_gg == pytest.approx(result.epsilon_gg * 6)

    def test_two_conditions_have_unit_epsilon(self):
        x = np.random.default_rng(0).standard_normal((9, 2))
        assert gg_epsilon(x) == 1.0
        assert rm_anova_gg(x).epsilon_gg == 1.0

    def test_fold_shape_dfs(self):
        x = np.random.default_rng(1).uniform(0.4, 0.9, (9, 3))
        result = rm_anova_gg(x, ["EEG", "E4", "Fusion"])
        assert (result.df_factor, result.df_error) == (2.0, 16.0)
        assert result.df_error_gg == pytest.approx(16 * result.epsilon_gg)

    @pytest.mark.parametrize("seed", range(5))
    def test_epsilon_bounds(self, seed):
        x = np.random.default_rng(seed).standard_normal((6, 4))
        assert 1.0 / 3.0 <= gg_epsilon(x) <= 1.0

    def test_constant_shift_invariance(self):
        x = np.random.default_rng(2).standard_normal((8, 3))
        a, b = rm_anova_gg(x), rm_anova_gg(x + 17.0)
        assert b.f_value == pytest.approx(a.f_value, abs=1e-9)
        assert b.epsilon_gg == pytest.approx(a.epsilon_gg, abs=1e-9)
        assert b.p_value == pytest.approx(a.p_value, abs=1e-9)

    def test_row_permutation_invariance(self):
        x = np.random.default_rng(3).standard_normal((7, 3))
        a = rm_anova_gg(x)
        b = rm_anova_gg(x[::-1])
        assert b.f_value == pytest.approx(a.f_value, rel=1e-12)
        assert b.epsilon_gg == pytest.approx(a.epsilon_gg, rel=1e-12)

    def test_condition_summaries(self):
        result = rm_anova_gg(TOY, ["a", "b", "c"])
        assert [c.mean for c in result.condition_means] == [2.5, 3.5, 5.25]
        assert result.condition_means[0].sd == pytest.approx(np.std([1, 2, 3, 4], ddof=1))

    @pytest.mark.parametrize(
        "scores",
        [
            np.ones((2, 3)),
            np.ones((5, 1)),
            np.array([[1.0, np.nan], [2.0, 3.0], [3.0, 4.0]]),
            np.ones(5),
        ],
    )
    def test_invalid_matrices(self, scores):
        with pytest.raises(StatisticsError):
            rm_anova_gg(scores)

    def test_name_count_checked(self):
        with pytest.raises(StatisticsError):
            rm_anova_gg(TOY, ["a", "b"])


class TestPosthoc:
    def test_identical_conditions(self):
        x = np.tile(np.arange(5.0)[:, None], (1, 3))
        for pair in bonferroni_posthoc(x):
            assert pair.t_value == 0.0
            assert pair.p_adjusted == 1.0

    def test_constant_difference_is_flagged(self):
        x = np.column_stack([np.arange(5.0), np.arange(5.0) + 1.0])
        (pair,) = bonferroni_posthoc(x)
        assert pair.zero_variance
        assert pair.p_raw == 0.0 and pair.t_value == -np.inf

    def test_bonferroni_factor_and_cap(self):
        x = np.random.default_rng(4).standard_normal((10, 3))
        x[:, 2] += 1.0
        for pair in bonferroni_posthoc(x, ["a", "b", "c"]):
            i, j = "abc".index(pair.a), "abc".index(pair.b)
            raw = stats.ttest_rel(x[:, i], x[:, j]).pvalue
            assert pair.p_raw == pytest.approx(raw)
            assert pair.p_adjusted == pytest.approx(min(1.0, 3 * raw))
            assert pair.p_adjusted <= 1.0


def test_summary_line():
    result = AnovaResult(
        conditions=["EEG", "E4", "Fusion"],
        n_subjects=9,
        f_value=15.791,
        df_factor=2.0,
        df_error=16.0,
        epsilon_gg=0.997,
        df_factor_gg=1.994,
        df_error_gg=15.953,
        p_value=0.0002,
        p_uncorrected=0.0002,
        condition_means=[],
    )
    assert format_summary(result).startswith("F(1.994, 15.953)=15.791, p<0.05")
    weak = result.model_copy(update={"p_value": 0.2})
    assert "p=0.200" in format_summary(weak)


def _report(accuracies, clips):
    folds = [
        FoldReport(
            held_out_clip=clip,
            hyperparameters={},
            test_accuracy=acc,
            test_f1=acc,
            n_train=10,
            n_test=2,
            scaler={"min": [0.0], "max": [1.0]},
            test_keys=[],
            y_true=[],
            y_pred=[],
        )
        for clip, acc in zip(clips, accuracies)
    ]
    return CVReport(
        target="valence",
        modality="eeg",
        label_provenance="threshold",
        n_features=1,
        class_counts={"low": 1, "high": 1},
        class_ratio="1.00:1",
        grid_size=1,
        seed=0,
        folds=folds,
        mean_accuracy=float(np.mean(accuracies)),
        mean_f1=float(np.mean(accuracies)),
    )


class TestFoldMatrix:
    def test_aligned_on_clips(self):
        a = _report([0.5, 0.6, 0.7], ["01", "02", "03"])
        b = _report([0.9, 0.8, 0.7], ["03", "02", "01"])
        matrix, clips = fold_matrix([a, b])
        assert clips == ["01", "02", "03"]
        assert matrix.tolist() == [[0.5, 0.7], [0.6, 0.8], [0.7, 0.9]]

    def test_mismatched_folds(self):
        a = _report([0.5, 0.6, 0.7], ["01", "02", "03"])
        b = _report([0.5, 0.6, 0.7], ["01", "02", "04"])
        with pytest.raises(StatisticsError):
            fold_matrix([a, b])

    def test_unknown_metric(self):
        a = _report([0.5, 0.6, 0.7], ["01", "02", "03"])
        with pytest.raises(StatisticsError):
            fold_matrix([a, a], metric="auc")
