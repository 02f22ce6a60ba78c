"""Steady states of a pitch contour and the tempo estimate built from them.

A steady state is a run of consecutive voiced frames that all stay inside a
proportional band around the run's mean.  Tempo is the number of steady
states per second of voiced audio.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ragaemotion.pitch_tracker import PitchSequence


@dataclass(frozen=True)
class SteadyConfig:
    band_fraction: float = 0.025
    min_len_frames: int = 6

    def __post_init__(self) -> None:
        if not 0 < self.band_fraction < 0.5:
            raise ValueError("band_fraction must lie in (0, 0.5)")
        if int(self.min_len_frames) != self.min_len_frames or self.min_len_frames < 2:
            raise ValueError("min_len_frames must be an integer >= 2")

    @classmethod
    def from_dict(cls, data: dict) -> "SteadyConfig":
        return cls(**data)


@dataclass(frozen=True)
class SteadySegment:
    start_ms: float
    end_ms: float
    mean_f0: float
    length_frames: int


def _close(run_start: int, run_len: int, total: float, seq: PitchSequence, cfg: SteadyConfig, out: list) -> None:
    if run_len >= cfg.min_len_frames:
        last = run_start + run_len - 1
        out.append(
            SteadySegment(
                start_ms=float(seq.time_ms[run_start]),
                end_ms=float(seq.time_ms[last]) + seq.hop_ms,
                mean_f0=total / run_len,
                length_frames=run_len,
            )
        )


def detect_steady_states(seq: PitchSequence, cfg: SteadyConfig | None = None) -> list[SteadySegment]:
    """Greedy left-to-right segmentation into maximal steady runs.

    A frame joins the current run if it lies within ``band_fraction`` of the
    run mean and, once the mean is updated, the run's extreme values are
    still inside the band.  Unvoiced frames end a run; runs shorter than
    ``min_len_frames`` are dropped.
    """
    cfg = cfg or SteadyConfig()
    band = cfg.band_fraction
    f0 = seq.f0_hz
    voiced = seq.voiced
    segments: list[SteadySegment] = []

    start = -1
    length = 0
    total = 0.0
    lo = hi = 0.0
    for i in range(len(seq)):
        if not voiced[i]:
            if length:
                _close(start, length, total, seq, cfg, segments)
            length = 0
            continue
        f = float(f0[i])
        if length:
            mean = total / length
            new_mean = (total + f) / (length + 1)
            new_lo, new_hi = min(lo, f), max(hi, f)
            if (
                abs(f - mean) <= band * mean
                and new_hi - new_mean <= band * new_mean
                and new_mean - new_lo <= band * new_mean
            ):
                total += f
                length += 1
                lo, hi = new_lo, new_hi
                continue
            _close(start, length, total, seq, cfg, segments)
        start, length, total, lo, hi = i, 1, f, f, f
    if length:
        _close(start, length, total, seq, cfg, segments)
    return segments


def tempo(seqs: Iterable[PitchSequence], cfg: SteadyConfig | None = None) -> float:
    """Steady states per second of voiced audio, pooled over ``seqs``."""
    cfg = cfg or SteadyConfig()
    count = 0
    seconds = 0.0
    for seq in seqs:
        count += len(detect_steady_states(seq, cfg))
        seconds += seq.voiced_duration_s
    if seconds <= 0:
        raise ValueError("total voiced duration is zero")
    return count / seconds


def segments_csv(segments: Sequence[SteadySegment]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("start_ms", "end_ms", "mean_f0", "length_frames"))
    for s in segments:
        writer.writerow((f"{s.start_ms:.6f}", f"{s.end_ms:.6f}", f"{s.mean_f0:.6f}", s.length_frames))
    return buf.getvalue()


def segment_frame_mask(seq: PitchSequence, segments: Sequence[SteadySegment]) -> np.ndarray:
    """Boolean mask of frames that belong to some steady segment."""
    mask = np.zeros(len(seq), dtype=bool)
    for s in segments:
        mask |= (seq.time_ms >= s.start_ms) & (seq.time_ms < s.end_ms)
    return mask
