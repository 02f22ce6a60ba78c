"""Descriptors of a pitch-value sequence.

All measures except the mean are location invariant, which is what makes
them usable across clips sung at different tonics.  Skewness, kurtosis and
quartiles follow the conventions of common statistics packages (adjusted
Fisher-Pearson moments, ``(n+1)p`` quartile positions).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

import numpy as np


class InsufficientDataError(ValueError):
    """Raised when a sequence is too short for the requested statistic."""


class ZeroVarianceError(ValueError):
    """Raised for shape statistics of a constant sequence."""


@dataclass(frozen=True)
class DescriptorSet:
    n: Optional[int]
    mean: Optional[float]
    variance: Optional[float]
    sd: Optional[float]
    skewness: Optional[float]
    kurtosis_excess: Optional[float]
    mssd: Optional[float]
    iqr: Optional[float]

    def to_dict(self) -> dict:
        return asdict(self)


def _as_array(xs: Sequence[float]) -> np.ndarray:
    arr = np.asarray(xs, dtype=float)
    if arr.ndim != 1:
        raise ValueError("expected a one-dimensional sequence")
    if not np.all(np.isfinite(arr)):
        raise ValueError("values must be finite")
    return arr


def _require(arr: np.ndarray, n_min: int, what: str) -> None:
    if arr.size < n_min:
        raise InsufficientDataError(f"{what} needs at least {n_min} values, got {arr.size}")


def variance(xs: Sequence[float]) -> float:
    """Sample variance (n - 1 denominator)."""
    arr = _as_array(xs)
    _require(arr, 2, "variance")
    dev = arr - arr.mean()
    return float(np.dot(dev, dev) / (arr.size - 1))


def sd(xs: Sequence[float]) -> float:
    return math.sqrt(variance(xs))


def mssd(xs: Sequence[float], halve: bool = True) -> float:
    """Mean of squared successive differences.

    With ``halve`` the result is additionally divided by two, which makes it
    an estimator of the variance for uncorrelated data (the convention of
    Minitab's MSSD).
    """
    arr = _as_array(xs)
    _require(arr, 2, "mssd")
    d = np.diff(arr)
    value = float(np.dot(d, d) / (arr.size - 1))
    return value / 2.0 if halve else value


def _central_moments(arr: np.ndarray) -> tuple[float, float, float]:
    dev = arr - arr.mean()
    dev2 = dev * dev
    m2 = float(dev2.mean())
    m3 = float((dev2 * dev).mean())
    m4 = float((dev2 * dev2).mean())
    return m2, m3, m4


def _check_spread(arr: np.ndarray, m2: float) -> None:
    # relative cutoff so that a constant sequence with rounding noise still counts as constant
    scale = max(1.0, float(np.abs(arr).max()))
    if m2 <= (1e-14 * scale) ** 2:
        raise ZeroVarianceError("shape statistics are undefined for a constant sequence")


def skewness(xs: Sequence[float], adjusted: bool = True) -> float:
    arr = _as_array(xs)
    _require(arr, 3, "skewness")
    m2, m3, _ = _central_moments(arr)
    _check_spread(arr, m2)
    g1 = m3 / m2**1.5
    if not adjusted:
        return g1
    n = arr.size
    return g1 * math.sqrt(n * (n - 1)) / (n - 2)


def kurtosis_excess(xs: Sequence[float], adjusted: bool = True) -> float:
    arr = _as_array(xs)
    _require(arr, 4, "kurtosis")
    m2, _, m4 = _central_moments(arr)
    _check_spread(arr, m2)
    g2 = m4 / (m2 * m2) - 3.0
    if not adjusted:
        return g2
    n = arr.size
    return ((n + 1) * g2 + 6.0) * (n - 1) / ((n - 2) * (n - 3))


def quantile(xs: Sequence[float], p: float) -> float:
    """Quantile at position ``(n+1)p`` of the sorted data, linearly interpolated.

    Positions below 1 or above n clamp to the extreme order statistics.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    arr = np.sort(_as_array(xs))
    n = arr.size
    if n == 0:
        raise InsufficientDataError("quantile of an empty sequence")
    pos = (n + 1) * p
    lo = math.floor(pos)
    if lo < 1:
        return float(arr[0])
    if lo >= n:
        return float(arr[-1])
    frac = pos - lo
    return float(arr[lo - 1] + frac * (arr[lo] - arr[lo - 1]))


def iqr(xs: Sequence[float]) -> float:
    arr = _as_array(xs)
    _require(arr, 2, "iqr")
    return quantile(arr, 0.75) - quantile(arr, 0.25)


def five_number_summary(xs: Sequence[float]) -> dict:
    """Box-plot numbers: min, Q1, median, Q3, max."""
    arr = _as_array(xs)
    _require(arr, 1, "summary")
    return {
        "min": float(arr.min()),
        "q1": quantile(arr, 0.25),
        "median": quantile(arr, 0.5),
        "q3": quantile(arr, 0.75),
        "max": float(arr.max()),
    }


def describe(xs: Sequence[float], mssd_halve: bool = True, adjusted: bool = True) -> DescriptorSet:
    """Full descriptor set; every field must be computable."""
    arr = _as_array(xs)
    _require(arr, 4, "describe")
    var = variance(arr)
    return DescriptorSet(
        n=int(arr.size),
        mean=float(arr.mean()),
        variance=var,
        sd=math.sqrt(var),
        skewness=skewness(arr, adjusted),
        kurtosis_excess=kurtosis_excess(arr, adjusted),
        mssd=mssd(arr, mssd_halve),
        iqr=iqr(arr),
    )


def describe_partial(xs: Sequence[float], mssd_halve: bool = True) -> DescriptorSet:
    """Like :func:`describe` but leaves uncomputable fields as ``None``."""
    arr = _as_array(xs)
    _require(arr, 1, "describe")

    def attempt(fn, *args):
        try:
            return fn(arr, *args)
        except (InsufficientDataError, ZeroVarianceError):
            return None

    var = attempt(variance)
    return DescriptorSet(
        n=int(arr.size),
        mean=float(arr.mean()),
        variance=var,
        sd=None if var is None else math.sqrt(var),
        skewness=attempt(skewness),
        kurtosis_excess=attempt(kurtosis_excess),
        mssd=attempt(mssd, mssd_halve),
        iqr=attempt(iqr),
    )
