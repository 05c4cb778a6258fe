"""One-way repeated-measures ANOVA with Greenhouse-Geisser correction."""

from itertools import combinations
from typing import List, Optional, Sequence

import numpy as np
import structlog

from pydantic import BaseModel
from scipy import stats

from src.exceptions import StatisticsError


logger = structlog.get_logger()


class ConditionSummary(BaseModel):
    name: str
    mean: float
    sd: float


class PairComparison(BaseModel):
    """Paired t-test between two conditions, Bonferroni adjusted."""

    a: str
    b: str
    mean_diff: float
    t_value: float
    p_raw: float
    p_adjusted: float
    zero_variance: bool = False


class AnovaResult(BaseModel):
    conditions: List[str]
    n_subjects: int
    f_value: float
    df_factor: float
    df_error: float
    epsilon_gg: float
    df_factor_gg: float
    df_error_gg: float
    p_value: float
    p_uncorrected: float
    condition_means: List[ConditionSummary]
    posthoc: List[PairComparison] = []
    subjects: str = "outer cross-validation folds"


def _check_matrix(scores: np.ndarray) -> np.ndarray:
    x = np.asarray(scores, dtype=float)
    if x.ndim != 2:
        raise StatisticsError("Scores must be a subjects x conditions matrix")
    n, k = x.shape
    if k < 2:
        raise StatisticsError(f"Need at least 2 conditions, got {k}")
    if n < 3:
        raise StatisticsError(f"Need at least 3 subjects, got {n}")
    if not np.all(np.isfinite(x)):
        raise StatisticsError("Score matrix is incomplete (missing or non-finite cells)")
    return x


def _names(k: int, names: Optional[Sequence[str]]) -> List[str]:
    if names is None:
        return [f"C{i + 1}" for i in range(k)]
    if len(names) != k:
        raise StatisticsError(f"{len(names)} condition names for {k} conditions")
    return [str(n) for n in names]


def gg_epsilon(scores: np.ndarray) -> float:
    """Greenhouse-Geisser epsilon from the double-centred condition covariance.

    Lies in ``[1/(k-1), 1]`` and is exactly 1 for two conditions.
    """
    x = _check_matrix(scores)
    k = x.shape[1]
    if k == 2:
        return 1.0
    centre = np.eye(k) - np.full((k, k), 1.0 / k)
    s = centre @ np.cov(x, rowvar=False, ddof=1) @ centre
    eig = np.linalg.eigvalsh(s)
    denom = (k - 1) * np.sum(eig**2)
    if denom <= 0:
        return 1.0
    epsilon = float(np.sum(eig) ** 2 / denom)
    return float(np.clip(epsilon, 1.0 / (k - 1), 1.0))


def bonferroni_posthoc(
    scores: np.ndarray, names: Optional[Sequence[str]] = None
) -> List[PairComparison]:
    """Paired t-test for every condition pair, p multiplied by the pair count.

    A difference vector with zero variance gives an infinite t and p = 0
    (flagged), or t = 0 and p = 1 when the mean difference is also zero.
    """
    x = _check_matrix(scores)
    labels = _names(x.shape[1], names)
    pairs = list(combinations(range(x.shape[1]), 2))

    out = []
    for i, j in pairs:
        d = x[:, i] - x[:, j]
        mean_diff = float(d.mean())
        flagged = False
        if np.ptp(d) == 0:
            if mean_diff == 0:
                t_value, p_raw = 0.0, 1.0
            else:
                t_value, p_raw, flagged = float(np.copysign(np.inf, mean_diff)), 0.0, True
        else:
            res = stats.ttest_rel(x[:, i], x[:, j])
            t_value, p_raw = float(res.statistic), float(res.pvalue)
        out.append(
            PairComparison(
                a=labels[i],
                b=labels[j],
                mean_diff=mean_diff,
                t_value=t_value,
                p_raw=p_raw,
                p_adjusted=min(1.0, p_raw * len(pairs)),
                zero_variance=flagged,
            )
        )
    return out


def rm_anova_gg(scores: np.ndarray, names: Optional[Sequence[str]] = None) -> AnovaResult:
    """Within-subject F test over the columns of ``scores``.

    Args:
        scores: Subjects (rows) x conditions (columns), complete
        names: Condition labels

    Raises:
        StatisticsError: On fewer than 3 subjects or 2 conditions, or missing cells
    """
    x = _check_matrix(scores)
    n, k = x.shape
    labels = _names(k, names)

    grand = x.mean()
    ss_cond = n * np.sum((x.mean(axis=0) - grand) ** 2)
    ss_subj = k * np.sum((x.mean(axis=1) - grand) ** 2)
    ss_err = max(np.sum((x - grand) ** 2) - ss_cond - ss_subj, 0.0)
    df1, df2 = k - 1, (k - 1) * (n - 1)

    # error sum of squares is zero up to rounding
    if ss_err <= 1e-12 * max(np.sum((x - grand) ** 2), 1e-300):
        f_value = np.inf if ss_cond > 0 else 0.0
    else:
        f_value = (ss_cond / df1) / (ss_err / df2)

    epsilon = gg_epsilon(x)
    p_uncorrected = float(stats.f.sf(f_value, df1, df2))
    p_value = float(stats.f.sf(f_value, epsilon * df1, epsilon * df2))

    result = AnovaResult(
        conditions=labels,
        n_subjects=n,
        f_value=float(f_value),
        df_factor=float(df1),
        df_error=float(df2),
        epsilon_gg=epsilon,
        df_factor_gg=epsilon * df1,
        df_error_gg=epsilon * df2,
        p_value=p_value,
        p_uncorrected=p_uncorrected,
        condition_means=[
            ConditionSummary(name=name, mean=float(col.mean()), sd=float(col.std(ddof=1)))
            for name, col in zip(labels, x.T)
        ],
        posthoc=bonferroni_posthoc(x, labels),
    )
    logger.info(
        "Repeated-measures ANOVA",
        f_value=round(result.f_value, 4),
        epsilon=round(epsilon, 4),
        p_value=p_value,
    )
    return result


def format_summary(result: AnovaResult, alpha: float = 0.05, percent: bool = False) -> str:
    """One line such as ``F(1.994, 15.953)=15.791, p<0.05`` plus condition means."""
    p = f"p<{alpha:g}" if result.p_value < alpha else f"p={result.p_value:.3f}"
    head = (
        f"F({result.df_factor_gg:.3f}, {result.df_error_gg:.3f})="
        f"{result.f_value:.3f}, {p}"
    )
    scale = 100.0 if percent else 1.0
    means = "; ".join(
        f"{c.name}: {c.mean * scale:.2f} ± {c.sd * scale:.2f}" for c in result.condition_means
    )
    return f"{head} ({means})"
