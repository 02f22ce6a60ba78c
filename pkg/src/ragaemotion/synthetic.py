"""Synthetic signals with known ground truth, for tests and demo fixtures."""

from __future__ import annotations

import numpy as np


def tone(freq_hz: float, duration_s: float, sample_rate: int = 16000, amplitude: float = 0.5,
         phase: float = 0.0) -> np.ndarray:
    t = np.arange(int(round(duration_s * sample_rate))) / sample_rate
    return amplitude * np.sin(2 * np.pi * freq_hz * t + phase)


def tone_steps(freqs_hz, step_s: float, sample_rate: int = 16000, amplitude: float = 0.5) -> np.ndarray:
    """Piecewise-constant pitch, phase-continuous across steps."""
    out = []
    phase = 0.0
    n = int(round(step_s * sample_rate))
    k = np.arange(n)
    for f in freqs_hz:
        out.append(amplitude * np.sin(phase + 2 * np.pi * f * k / sample_rate))
        phase += 2 * np.pi * f * n / sample_rate
    return np.concatenate(out)


def _ar1(innovations: np.ndarray, rho: float) -> np.ndarray:
    x = np.empty_like(innovations)
    x[0] = innovations[0] / np.sqrt(1 - rho * rho)
    for i in range(1, x.size):
        x[i] = rho * x[i - 1] + innovations[i]
    return x


def _ratio(x: np.ndarray) -> float:
    d = np.diff(x)
    return float(np.dot(d, d) / (x.size - 1) / 2.0 / np.var(x, ddof=1))


def ar1_sequence(variance: float, mssd_halved: float, n: int, mean: float = 400.0,
                 seed: int = 0) -> np.ndarray:
    """AR(1) pitch-like series whose sample variance and halved MSSD hit the targets exactly.

    For a stationary AR(1) the halved MSSD is about ``variance * (1 - rho)``,
    so ``rho`` is tuned by bisection on a fixed innovation draw until the
    realized ratio matches, then the series is rescaled.
    """
    target = mssd_halved / variance
    if not 0 < target < 2:
        raise ValueError("mssd/variance ratio must lie in (0, 2)")
    eps = np.random.default_rng(seed).standard_normal(n)
    lo, hi = -0.999, 0.9999
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        # the ratio falls as rho grows
        if _ratio(_ar1(eps, mid)) > target:
            lo = mid
        else:
            hi = mid
    x = _ar1(eps, 0.5 * (lo + hi))
    x = (x - x.mean()) / np.std(x, ddof=1) * np.sqrt(variance)
    return mean + x
