"""Frame-wise fundamental frequency by normalized autocorrelation.

Each analysis frame is DC-removed, then correlated with itself over the lag
window ``[sr/f_max, sr/f_min]``.  Every lag is normalized by the energy of
the two overlapping segments, so the score is amplitude independent and
lies in [-1, 1].  The best peak gives the voicing strength and, after
parabolic refinement, the period.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterator, Optional

import numpy as np

if TYPE_CHECKING:
    from ragaemotion.audio_ingest import AudioClip


class PitchSequenceError(ValueError):
    pass


class ClipTooShortError(ValueError):
    pass


@dataclass(frozen=True)
class PitchConfig:
    f_min: float = 60.0
    f_max: float = 500.0
    frame_ms: float = 40.0
    hop_ms: float = 10.0
    voicing_threshold: float = 0.45
    # score penalty per octave of lag, favours the shortest period among
    # near-equal autocorrelation peaks
    octave_cost: float = 0.01

    def __post_init__(self) -> None:
        if not 0 < self.f_min < self.f_max:
            raise ValueError(f"need 0 < f_min < f_max, got f_min={self.f_min}, f_max={self.f_max}")
        if self.hop_ms <= 0 or self.frame_ms <= 0:
            raise ValueError("frame_ms and hop_ms must be positive")
        if self.hop_ms > self.frame_ms:
            raise ValueError("hop_ms must not exceed frame_ms")
        if not 0 < self.voicing_threshold < 1:
            raise ValueError("voicing_threshold must lie in (0, 1)")
        if self.octave_cost < 0:
            raise ValueError("octave_cost must be non-negative")

    @classmethod
    def from_dict(cls, data: dict) -> "PitchConfig":
        return cls(**data)


@dataclass(frozen=True)
class PitchSequence:
    """A pitch contour: one (time_ms, f0_hz, voiced) triple per hop."""

    clip_id: str
    time_ms: np.ndarray
    f0_hz: np.ndarray
    voiced: np.ndarray
    hop_ms: float = 10.0

    def __post_init__(self) -> None:
        t = np.asarray(self.time_ms, dtype=float)
        f = np.asarray(self.f0_hz, dtype=float)
        v = np.asarray(self.voiced, dtype=bool)
        if not (t.shape == f.shape == v.shape) or t.ndim != 1:
            raise PitchSequenceError("time_ms, f0_hz and voiced must be 1-D arrays of equal length")
        if t.size > 1:
            steps = np.diff(t)
            if np.any(steps <= 0):
                raise PitchSequenceError("non-monotonic timestamps")
            if np.any(np.abs(steps - self.hop_ms) > 1e-6 * max(1.0, self.hop_ms)):
                raise PitchSequenceError(f"timestamps are not on a constant {self.hop_ms} ms grid")
        if np.any(~np.isfinite(f)):
            raise PitchSequenceError("f0 values must be finite")
        if np.any((f > 0) != v):
            raise PitchSequenceError("f0_hz must be positive exactly on voiced frames")
        for name, arr in (("time_ms", t), ("f0_hz", f), ("voiced", v)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def __len__(self) -> int:
        return int(self.time_ms.size)

    def frames(self) -> Iterator[tuple[float, float, bool]]:
        for t, f, v in zip(self.time_ms, self.f0_hz, self.voiced):
            yield float(t), float(f), bool(v)

    @property
    def voiced_fraction(self) -> float:
        return float(self.voiced.mean()) if len(self) else 0.0

    @property
    def voiced_duration_s(self) -> float:
        return float(self.voiced.sum()) * self.hop_ms / 1000.0

    @classmethod
    def from_frames(cls, clip_id: str, frames, hop_ms: float = 10.0) -> "PitchSequence":
        rows = list(frames)
        if not rows:
            return cls(clip_id, np.zeros(0), np.zeros(0), np.zeros(0, dtype=bool), hop_ms)
        t, f, v = zip(*rows)
        return cls(clip_id, np.array(t, float), np.array(f, float), np.array(v, bool), hop_ms)

    @classmethod
    def from_values(cls, clip_id: str, values, hop_ms: float = 10.0) -> "PitchSequence":
        """Fully voiced contour on a regular grid, e.g. for a stacked sequence."""
        f = np.asarray(values, dtype=float)
        if np.any(f <= 0):
            raise PitchSequenceError("pitch values must be positive")
        return cls(clip_id, np.arange(f.size) * hop_ms, f, np.ones(f.size, dtype=bool), hop_ms)


def voiced_values(seq: PitchSequence) -> np.ndarray:
    """f0 of the voiced frames, in time order."""
    return np.array(seq.f0_hz[seq.voiced], dtype=float)


def frame_count(n_samples: int, sample_rate: int, cfg: PitchConfig) -> int:
    duration_ms = n_samples * 1000.0 / sample_rate
    if duration_ms + 1e-9 < cfg.frame_ms:
        return 0
    return int(math.floor((duration_ms - cfg.frame_ms) / cfg.hop_ms + 1e-9)) + 1


def _nccf(frame: np.ndarray, lag_min: int, lag_max: int) -> np.ndarray:
    """Normalized cross-correlation of a frame with its own lagged copy."""
    n = frame.size
    size = 1 << int(math.ceil(math.log2(2 * n)))
    spectrum = np.fft.rfft(frame, size)
    acf = np.fft.irfft(spectrum * np.conj(spectrum), size)[: lag_max + 1]
    sq = np.concatenate(([0.0], np.cumsum(frame * frame)))
    lags = np.arange(lag_min, lag_max + 1)
    e_head = sq[n - lags]  # energy of frame[:n - lag]
    e_tail = sq[n] - sq[lags]  # energy of frame[lag:]
    denom = np.sqrt(e_head * e_tail)
    out = np.zeros(lags.size)
    ok = denom > 1e-12 * max(sq[n], 1e-300)
    out[ok] = acf[lags[ok]] / denom[ok]
    return out


def _frame_pitch(frame: np.ndarray, sample_rate: int, cfg: PitchConfig, lag_min: int, lag_max: int):
    frame = frame - frame.mean()
    if not np.any(frame):
        return 0.0, 0.0
    r = _nccf(frame, lag_min, lag_max)
    if r.size < 3:
        return 0.0, 0.0
    # interior local maxima only, so parabolic refinement always has neighbours
    inner = r[1:-1]
    peaks = np.flatnonzero((inner >= r[:-2]) & (inner > r[2:]) & (inner > 0)) + 1
    if peaks.size == 0:
        return 0.0, 0.0
    lags = lag_min + peaks
    scores = r[peaks] - cfg.octave_cost * np.log2(lags / lag_min)
    best = peaks[int(np.argmax(scores))]
    strength = float(r[best])
    if strength < cfg.voicing_threshold:
        return 0.0, strength
    y0, y1, y2 = r[best - 1], r[best], r[best + 1]
    curv = y0 - 2.0 * y1 + y2
    shift = 0.5 * (y0 - y2) / curv if curv < 0 else 0.0
    lag = lag_min + best + float(np.clip(shift, -0.5, 0.5))
    f0 = float(np.clip(sample_rate / lag, cfg.f_min, cfg.f_max))
    return f0, strength


def extract_f0(clip: "AudioClip", cfg: Optional[PitchConfig] = None) -> PitchSequence:
    """Pitch contour of ``clip`` with one frame per ``cfg.hop_ms``."""
    cfg = cfg or PitchConfig()
    sr = clip.sample_rate
    x = np.asarray(clip.samples, dtype=float)
    n_frames = frame_count(x.size, sr, cfg)
    if n_frames == 0:
        raise ClipTooShortError(
            f"clip {clip.clip_id!r} lasts {x.size * 1000.0 / sr:.1f} ms, shorter than one {cfg.frame_ms} ms frame"
        )
    frame_len = int(round(cfg.frame_ms * sr / 1000.0))
    lag_min = max(1, int(math.floor(sr / cfg.f_max)))
    lag_max = min(frame_len - 2, int(math.ceil(sr / cfg.f_min)))
    if lag_max - lag_min < 2:
        raise ValueError("frame too short for the configured f_min at this sample rate")

    f0 = np.zeros(n_frames)
    for i in range(n_frames):
        start = int(round(i * cfg.hop_ms * sr / 1000.0))
        frame = x[start : start + frame_len]
        if frame.size < frame_len:
            frame = np.pad(frame, (0, frame_len - frame.size))
        f0[i], _ = _frame_pitch(frame, sr, cfg, lag_min, lag_max)
    times = np.arange(n_frames) * cfg.hop_ms
    return PitchSequence(clip.clip_id, times, f0, f0 > 0, cfg.hop_ms)
