"""Kolmogorov-Smirnov normality and Levene equal-variance tests.

The test statistics are computed here so that degenerate inputs raise typed
errors; the tail probabilities come from :mod:`scipy.special`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import special

from ragaemotion.descriptive_stats import InsufficientDataError, ZeroVarianceError


class Method(str, enum.Enum):
    KS_NORMALITY = "KS_NORMALITY"
    LEVENE = "LEVENE"


class Center(str, enum.Enum):
    MEAN = "MEAN"
    MEDIAN = "MEDIAN"


class DegenerateTestError(ValueError):
    pass


@dataclass(frozen=True)
class TestResult:
    method: Method
    statistic: float
    p_value: float
    alpha: float = 0.05
    reject: bool = field(init=False)
    group_sizes: tuple[int, ...] = ()
    critical_value: Optional[float] = None

    __test__ = False  # keep pytest from collecting this class

    def __post_init__(self) -> None:
        if not 0.0 <= self.p_value <= 1.0:
            raise ValueError(f"p-value out of range: {self.p_value}")
        object.__setattr__(self, "reject", bool(self.p_value < self.alpha))

    def to_row(self) -> dict:
        return {
            "method": self.method.value,
            "statistic": self.statistic,
            "p_value": self.p_value,
            "alpha": self.alpha,
            "reject": self.reject,
            "group_sizes": list(self.group_sizes),
        }


# --------------------------------------------------------------------------
# distribution functions
# --------------------------------------------------------------------------

_TINY = 1e-300


def f_upper_tail(x: float, d1: float, d2: float) -> float:
    """P(F > x) for F ~ F(d1, d2)."""
    if d1 < 1 or d2 < 1:
        raise ValueError(f"invalid degrees of freedom ({d1}, {d2})")
    if math.isnan(x):
        raise ValueError("x is NaN")
    if x <= 0.0:
        return 1.0
    return float(special.fdtrc(d1, d2, x))


def kolmogorov_upper_tail(t: float) -> float:
    """P(K > t) for the Kolmogorov limiting distribution."""
    if t < 0:
        raise ValueError("t must be non-negative")
    return float(special.kolmogorov(t))


def kolmogorov_critical_value(n: int, alpha: float = 0.05) -> float:
    """Asymptotic critical D for sample size n: c / sqrt(n) with P(K > c) = alpha."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    return float(special.kolmogi(alpha)) / math.sqrt(n)


def normal_cdf(z: np.ndarray | float) -> np.ndarray | float:
    return special.ndtr(z)


# --------------------------------------------------------------------------
# tests
# --------------------------------------------------------------------------


def ks_statistic(xs: Sequence[float]) -> float:
    """sup |ECDF - Phi((x - mean) / s)| with mean and s estimated from xs."""
    arr = np.sort(np.asarray(xs, dtype=float))
    n = arr.size
    s = float(arr.std(ddof=1))
    if s <= 0.0:
        raise ZeroVarianceError("KS normality needs a non-constant sample")
    cdf = normal_cdf((arr - arr.mean()) / s)
    # at a tied value only the last copy carries the full ECDF jump
    upper = np.searchsorted(arr, arr, side="right") / n
    lower = np.searchsorted(arr, arr, side="left") / n
    return float(max(np.max(upper - cdf), np.max(cdf - lower)))


def ks_normality(xs: Sequence[float], alpha: float = 0.05) -> TestResult:
    """KS test of normality; p-value from the asymptotic Kolmogorov law.

    The mean and SD are estimated from the same sample, so this p-value is
    larger than the Lilliefors-corrected one (the test rejects less often
    than its nominal level).
    """
    arr = np.asarray(xs, dtype=float)
    if arr.size < 8:
        raise InsufficientDataError(f"KS normality needs at least 8 values, got {arr.size}")
    d = ks_statistic(arr)
    p = kolmogorov_upper_tail(math.sqrt(arr.size) * d)
    return TestResult(
        method=Method.KS_NORMALITY,
        statistic=d,
        p_value=p,
        alpha=alpha,
        group_sizes=(int(arr.size),),
        critical_value=kolmogorov_critical_value(arr.size, alpha),
    )


def levene_statistic(groups: Sequence[Sequence[float]], center: Center | str = Center.MEDIAN) -> float:
    center = Center(center)
    arrays = [np.asarray(g, dtype=float) for g in groups]
    k = len(arrays)
    if k < 2:
        raise InsufficientDataError("Levene's test needs at least two groups")
    for i, g in enumerate(arrays):
        if g.size < 2:
            raise InsufficientDataError(f"group {i} has {g.size} value(s); at least 2 required")
    centre_fn = np.median if center is Center.MEDIAN else np.mean
    devs = [np.abs(g - centre_fn(g)) for g in arrays]
    sizes = np.array([d.size for d in devs], dtype=float)
    n_total = float(sizes.sum())
    group_means = np.array([d.mean() for d in devs])
    grand_mean = float(np.concatenate(devs).mean())
    between = float(np.sum(sizes * (group_means - grand_mean) ** 2))
    within = float(sum(np.sum((d - m) ** 2) for d, m in zip(devs, group_means)))
    if all(not np.any(d) for d in devs):
        raise DegenerateTestError("all absolute deviations are zero in every group")
    scale = max(float(np.abs(np.concatenate(devs)).max()), _TINY)
    if between <= (1e-13 * scale) ** 2 * n_total:
        return 0.0
    if within <= (1e-13 * scale) ** 2 * n_total:
        return math.inf
    return float((n_total - k) / (k - 1) * between / within)


def levene(
    groups: Sequence[Sequence[float]],
    center: Center | str = Center.MEDIAN,
    alpha: float = 0.05,
) -> TestResult:
    """Levene's test on absolute deviations from each group's centre.

    ``center=MEDIAN`` (the default) is the Brown-Forsythe variant.
    """
    w = levene_statistic(groups, center)
    sizes = tuple(len(g) for g in groups)
    k = len(sizes)
    n_total = sum(sizes)
    p = f_upper_tail(w, k - 1, n_total - k)
    return TestResult(method=Method.LEVENE, statistic=w, p_value=p, alpha=alpha, group_sizes=sizes)
