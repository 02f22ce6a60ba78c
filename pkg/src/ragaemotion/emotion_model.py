"""Emotion-level analysis.

Stacked pitch sequences per emotion become signatures (spread descriptors
plus tempo); signatures rank the emotions and classify new clips.  Ancient
(previous) and listener (present) labels of the same ragas become paired
rank columns whose statistics describe how perception has shifted.
"""

from __future__ import annotations

import enum
import json
import math
import os
import warnings
from collections import Counter
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from ragaemotion.descriptive_stats import (
    DescriptorSet,
    InsufficientDataError,
    ZeroVarianceError,
    describe,
    describe_partial,
    iqr,
    mssd,
)
from ragaemotion.hypothesis_tests import Center, levene
from ragaemotion.labels import CANONICAL_ORDER, EmotionLabel, parse_emotion
from ragaemotion.pitch_tracker import PitchSequence, voiced_values

__all__ = [
    "EmotionLabel",
    "EmotionSignature",
    "RankKey",
    "RankRow",
    "RankPairTable",
    "EmotionEvolution",
    "EvolutionReport",
    "Direction",
    "TrackingVerdict",
    "Candidate",
    "RankTieError",
    "NoPreviousOccurrenceError",
    "RankColumnWarning",
    "stack_sequences",
    "build_signature",
    "comparison_vector",
    "rank_emotions",
    "classify_clip",
    "build_rank_columns",
    "evolution_report",
    "rank_differences",
    "track_direction",
    "ordering_concordance",
    "load_signature_store",
    "save_signature_store",
]


class RankTieError(ValueError):
    pass


class NoPreviousOccurrenceError(ValueError):
    pass


class RankColumnWarning(UserWarning):
    pass


class RankKey(str, enum.Enum):
    TEMPO = "TEMPO"
    VARIANCE = "VARIANCE"
    MSSD = "MSSD"


# --------------------------------------------------------------------------
# signatures
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class EmotionSignature:
    emotion: EmotionLabel
    descriptors: DescriptorSet
    tempo: Optional[float]
    rank: int
    n_clips: Optional[int] = None
    stacked: Optional[np.ndarray] = field(default=None, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.rank != self.emotion.rank:
            raise ValueError(f"{self.emotion} must carry rank {self.emotion.rank}, got {self.rank}")

    @property
    def variance(self) -> Optional[float]:
        return self.descriptors.variance

    @property
    def sd(self) -> Optional[float]:
        return self.descriptors.sd

    @property
    def mssd(self) -> Optional[float]:
        return self.descriptors.mssd


def stack_sequences(
    seqs: Sequence[PitchSequence],
    labels: Sequence[EmotionLabel],
    target: EmotionLabel,
) -> np.ndarray:
    """Concatenate the voiced pitch values of every sequence labelled ``target``."""
    if len(seqs) != len(labels):
        raise ValueError("labels must align with sequences")
    target = parse_emotion(target)
    parts = [voiced_values(s) for s, lab in zip(seqs, labels) if parse_emotion(lab) is target]
    if not parts:
        raise ValueError(f"no sequence carries the label {target}")
    return np.concatenate(parts)


def build_signature(
    stacked: Sequence[float],
    tempo: Optional[float],
    emotion: EmotionLabel,
    n_clips: Optional[int] = None,
    mssd_halve: bool = True,
) -> EmotionSignature:
    emotion = parse_emotion(emotion)
    arr = np.asarray(stacked, dtype=float)
    return EmotionSignature(
        emotion=emotion,
        descriptors=describe(arr, mssd_halve=mssd_halve),
        tempo=tempo,
        rank=emotion.rank,
        n_clips=n_clips,
        stacked=arr,
    )


def comparison_vector(sig: EmotionSignature) -> dict:
    """The fields signatures are compared on.

    The mean is deliberately absent: it moves with the singer's tonic.
    """
    d = sig.descriptors
    return {
        "tempo": sig.tempo,
        "variance": d.variance,
        "sd": d.sd,
        "mssd": d.mssd,
        "skewness": d.skewness,
        "kurtosis": d.kurtosis_excess,
    }


def _key_value(sig: EmotionSignature, key: RankKey) -> float:
    value = {RankKey.TEMPO: sig.tempo, RankKey.VARIANCE: sig.variance, RankKey.MSSD: sig.mssd}[key]
    if value is None:
        raise ValueError(f"signature for {sig.emotion} has no {key.value.lower()} value")
    return float(value)


def rank_emotions(signatures: Sequence[EmotionSignature], key: RankKey | str) -> list[EmotionLabel]:
    """Emotions sorted by descending ``key``; a tie is an error."""
    key = RankKey(key.upper() if isinstance(key, str) else key)
    if len(signatures) < 2:
        raise ValueError("ranking needs at least two signatures")
    pairs = sorted(((_key_value(s, key), s.emotion) for s in signatures), key=lambda p: -p[0])
    for (a, ea), (b, eb) in zip(pairs, pairs[1:]):
        if abs(a - b) <= 1e-9 * max(abs(a), abs(b)):
            raise RankTieError(f"{ea} and {eb} tie on {key.value.lower()} ({a})")
    return [e for _, e in pairs]


def ordering_concordance(values: Mapping[EmotionLabel, float]) -> float:
    """Kendall tau between descending ``values`` and the canonical emotion order.

    +1 means the values fall in exactly the canonical order, -1 reversed.
    """
    items = [(parse_emotion(e).rank, float(v)) for e, v in values.items()]
    if len(items) < 2:
        raise ValueError("need at least two emotions")
    concordant = discordant = 0
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            (ri, vi), (rj, vj) = items[i], items[j]
            s = (rj - ri) * (vi - vj)
            if s > 0:
                concordant += 1
            elif s < 0:
                discordant += 1
    pairs = len(items) * (len(items) - 1) // 2
    return (concordant - discordant) / pairs


# --------------------------------------------------------------------------
# classification
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Candidate:
    emotion: EmotionLabel
    levene_p: float
    levene_w: float
    mssd_rel_diff: float
    matched: bool


def classify_clip(
    clip_values: Sequence[float],
    signatures: Sequence[EmotionSignature],
    alpha: float = 0.05,
    mssd_rel_tol: float = 0.25,
    mssd_halve: bool = True,
) -> list[Candidate]:
    """Compare a clip's pitch values with every signature.

    A signature matches when Levene's test (median centre) does not reject
    equal variances and the clip's MSSD is within ``mssd_rel_tol`` of the
    signature's.  All candidates are returned, best Levene p-value first;
    filter on ``matched`` for the match set, which may be empty.
    """
    clip = np.asarray(clip_values, dtype=float)
    if clip.size < 8:
        raise InsufficientDataError(f"insufficient data: clip has {clip.size} values, at least 8 needed")
    if np.ptp(clip) == 0:
        raise ZeroVarianceError("degenerate clip: zero variance")
    clip_mssd = mssd(clip, mssd_halve)
    out = []
    for sig in signatures:
        if sig.stacked is None:
            raise ValueError(f"signature for {sig.emotion} carries no stacked sequence")
        res = levene([clip, sig.stacked], Center.MEDIAN, alpha)
        ref = sig.mssd if sig.mssd is not None else mssd(sig.stacked, mssd_halve)
        rel = abs(clip_mssd - ref) / ref if ref > 0 else math.inf
        out.append(Candidate(sig.emotion, res.p_value, res.statistic, rel,
                             (not res.reject) and rel <= mssd_rel_tol))
    out.sort(key=lambda c: (-c.levene_p, c.mssd_rel_diff, c.emotion.rank))
    return out


# --------------------------------------------------------------------------
# previous / present rank columns
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class RankRow:
    raga: str
    prev_rank: int
    present_rank: int

    def __post_init__(self) -> None:
        for r in (self.prev_rank, self.present_rank):
            if not 1 <= r <= 7:
                raise ValueError(f"rank out of range: {r}")


@dataclass(frozen=True)
class RankPairTable:
    rows: tuple[RankRow, ...]

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def previous(self) -> np.ndarray:
        return np.array([r.prev_rank for r in self.rows], dtype=float)

    @property
    def present(self) -> np.ndarray:
        return np.array([r.present_rank for r in self.rows], dtype=float)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, int, int]]) -> "RankPairTable":
        return cls(tuple(RankRow(raga, int(p), int(q)) for raga, p, q in pairs))


def build_rank_columns(records) -> RankPairTable:
    """Pair every previous emotion of a raga with every present-labelled segment.

    Segments without a present label are skipped.  A raga with previous
    labels but no labelled segment is skipped with a :class:`RankColumnWarning`.
    """
    previous: dict[str, list[EmotionLabel]] = {}
    present: dict[str, list[EmotionLabel]] = {}
    for rec in records:
        if not rec.previous_emotions:
            raise ValueError(f"clip {rec.clip_id!r} has no previous emotions")
        prev = previous.setdefault(rec.raga, [])
        prev.extend(e for e in rec.previous_emotions if e not in prev)
        segs = present.setdefault(rec.raga, [])
        if rec.present_emotion is not None:
            segs.append(rec.present_emotion)

    rows = []
    for raga, prev in previous.items():
        segs = present[raga]
        if not segs:
            warnings.warn(f"raga {raga!r} has no present-labelled segment; skipped", RankColumnWarning, stacklevel=2)
            continue
        rows.extend(RankRow(raga, p.rank, s.rank) for p in prev for s in segs)
    return RankPairTable(tuple(rows))


# --------------------------------------------------------------------------
# evolution statistics
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class EmotionEvolution:
    emotion: EmotionLabel
    n: int
    mean_now: float
    sd_now: Optional[float]
    iqr_now: Optional[float]
    mean_diff: float
    sd_diff: Optional[float]


@dataclass(frozen=True)
class EvolutionReport:
    overall_prev: DescriptorSet
    overall_present: DescriptorSet
    per_emotion: dict
    histogram_prev: dict
    histogram_present: dict

    def to_dict(self) -> dict:
        return {
            "overall": {
                "previous": self.overall_prev.to_dict(),
                "present": self.overall_present.to_dict(),
            },
            "per_emotion": {
                e.display: {
                    "n": ev.n,
                    "mean_now": ev.mean_now,
                    "sd_now": ev.sd_now,
                    "iqr_now": ev.iqr_now,
                    "mean_diff": ev.mean_diff,
                    "sd_diff": ev.sd_diff,
                }
                for e, ev in self.per_emotion.items()
            },
            "histogram": [
                {"rank": r, "count_prev": self.histogram_prev[r], "count_present": self.histogram_present[r]}
                for r in range(1, 8)
            ],
        }


def _sd_or_none(xs: np.ndarray) -> Optional[float]:
    return float(np.std(xs, ddof=1)) if xs.size >= 2 else None


def evolution_report(table: RankPairTable) -> EvolutionReport:
    if len(table) == 0:
        raise ValueError("rank table is empty")
    prev = table.previous
    now = table.present
    per = {}
    for emotion in CANONICAL_ORDER:
        mask = prev == emotion.rank
        if not mask.any():
            continue
        group = now[mask]
        diffs = group - prev[mask]
        per[emotion] = EmotionEvolution(
            emotion=emotion,
            n=int(group.size),
            mean_now=float(group.mean()),
            sd_now=_sd_or_none(group),
            iqr_now=iqr(group) if group.size >= 2 else None,
            mean_diff=float(diffs.mean()),
            sd_diff=_sd_or_none(diffs),
        )
    hist_prev = Counter(int(r) for r in prev)
    hist_now = Counter(int(r) for r in now)
    return EvolutionReport(
        overall_prev=describe_partial(prev),
        overall_present=describe_partial(now),
        per_emotion=per,
        histogram_prev={r: hist_prev.get(r, 0) for r in range(1, 8)},
        histogram_present={r: hist_now.get(r, 0) for r in range(1, 8)},
    )


def rank_differences(table: RankPairTable, emotion: EmotionLabel) -> list[int]:
    """present - previous rank for the rows whose previous label is ``emotion``."""
    emotion = parse_emotion(emotion)
    diffs = [r.present_rank - r.prev_rank for r in table.rows if r.prev_rank == emotion.rank]
    if not diffs:
        raise NoPreviousOccurrenceError(f"no previous occurrences of {emotion}")
    return diffs


# --------------------------------------------------------------------------
# direction tracking
# --------------------------------------------------------------------------


class Direction(str, enum.Enum):
    INCREASE = "INCREASE"
    DECREASE = "DECREASE"
    FLAT = "FLAT"


# below this |mean rank shift| the expectation is too weak for an overall verdict
DECISIVE_SHIFT = 0.5


@dataclass(frozen=True)
class TrackingVerdict:
    emotion: EmotionLabel
    sd_direction: Direction
    mssd_direction: Direction
    expected_direction: Direction
    consistent_sd: bool
    consistent_mssd: bool
    mean_rank_shift: float

    @property
    def decisive(self) -> bool:
        return abs(self.mean_rank_shift) >= DECISIVE_SHIFT

    @property
    def consistent(self) -> Optional[bool]:
        """Overall verdict; ``None`` when the rank shift is too small to judge."""
        if not self.decisive:
            return None
        return self.consistent_sd and self.consistent_mssd


def _direction(before: float, after: float, rel_tol: float = 1e-6) -> Direction:
    change = after - before
    scale = max(abs(before), abs(after))
    if scale == 0 or abs(change) < rel_tol * scale:
        return Direction.FLAT
    return Direction.INCREASE if change > 0 else Direction.DECREASE


def expected_direction(mean_rank_shift: float) -> Direction:
    """Expected change of SD/MSSD from the previous to the present sequence.

    Clips that used to carry an emotion and are now heard as higher-ranked
    (calmer, lower SD/MSSD) emotions are what the previous sequence was
    built from, so a positive shift means the present sequence should be
    the more variable one.
    """
    if abs(mean_rank_shift) < 1e-9:
        return Direction.FLAT
    return Direction.INCREASE if mean_rank_shift > 0 else Direction.DECREASE


def track_direction(prev_sig, now_sig, mean_rank_shift: float, emotion: Optional[EmotionLabel] = None) -> TrackingVerdict:
    """Compare the SD and MSSD movement of an emotion with the movement its rank shift predicts.

    ``prev_sig`` and ``now_sig`` need ``sd`` and ``mssd`` attributes.
    """
    if emotion is None:
        emotion = getattr(prev_sig, "emotion", None) or getattr(now_sig, "emotion", None)
    if emotion is None:
        raise ValueError("emotion not given and not carried by the statistics")
    sd_dir = _direction(prev_sig.sd, now_sig.sd)
    mssd_dir = _direction(prev_sig.mssd, now_sig.mssd)
    expected = expected_direction(mean_rank_shift)
    return TrackingVerdict(
        emotion=parse_emotion(emotion),
        sd_direction=sd_dir,
        mssd_direction=mssd_dir,
        expected_direction=expected,
        consistent_sd=sd_dir is expected,
        consistent_mssd=mssd_dir is expected,
        mean_rank_shift=float(mean_rank_shift),
    )


# --------------------------------------------------------------------------
# signature store
# --------------------------------------------------------------------------

STORE_FIELDS = ("emotion", "rank", "variance", "sd", "mssd", "skewness", "kurtosis", "tempo", "n_clips")


def stacked_csv_name(emotion: EmotionLabel) -> str:
    return f"stacked_{emotion.display}.csv"


def signature_to_json(sig: EmotionSignature) -> dict:
    d = sig.descriptors
    return {
        "emotion": sig.emotion.display,
        "rank": sig.rank,
        "variance": d.variance,
        "sd": d.sd,
        "mssd": d.mssd,
        "skewness": d.skewness,
        "kurtosis": d.kurtosis_excess,
        "tempo": sig.tempo,
        "n_clips": sig.n_clips,
    }


def _opt_float(obj: dict, key: str, where: str) -> Optional[float]:
    value = obj.get(key)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValueError(f"{where}.{key}: expected a number or null")
    return float(value)


def signature_from_json(obj: dict, where: str = "signature") -> EmotionSignature:
    emotion = parse_emotion(obj["emotion"])
    variance = _opt_float(obj, "variance", where)
    sd = _opt_float(obj, "sd", where)
    if sd is None and variance is not None:
        sd = math.sqrt(variance)
    if variance is None and sd is not None:
        variance = sd * sd
    desc = DescriptorSet(
        n=obj.get("n"),
        mean=None,
        variance=variance,
        sd=sd,
        skewness=_opt_float(obj, "skewness", where),
        kurtosis_excess=_opt_float(obj, "kurtosis", where),
        mssd=_opt_float(obj, "mssd", where),
        iqr=None,
    )
    rank = int(obj.get("rank", emotion.rank))
    n_clips = obj.get("n_clips")
    return EmotionSignature(emotion, desc, _opt_float(obj, "tempo", where), rank,
                            None if n_clips is None else int(n_clips))


def load_signature_store(path: str | os.PathLike, with_stacked: bool = True) -> list[EmotionSignature]:
    """Read a signature store and, when present, its stacked-sequence companions."""
    from ragaemotion.audio_ingest import load_pitch_csv

    path = Path(path)
    doc = json.loads(path.read_text(encoding="utf-8"))
    if not isinstance(doc, list):
        raise ValueError(f"{path}: expected a JSON array of signatures")
    sigs = []
    seen = set()
    for i, obj in enumerate(doc):
        sig = signature_from_json(obj, f"{path.name}[{i}]")
        if sig.emotion in seen:
            raise ValueError(f"{path}: duplicate emotion {sig.emotion}")
        seen.add(sig.emotion)
        if with_stacked:
            companion = path.parent / obj.get("stacked_csv", stacked_csv_name(sig.emotion))
            if companion.exists():
                sig = replace(sig, stacked=voiced_values(load_pitch_csv(companion)))
        sigs.append(sig)
    return sigs


def signature_store_json(signatures: Sequence[EmotionSignature]) -> str:
    rows = [signature_to_json(s) for s in sorted(signatures, key=lambda s: s.rank)]
    return json.dumps(rows, indent=2) + "\n"


def save_signature_store(signatures: Sequence[EmotionSignature], path: str | os.PathLike) -> None:
    """Write the store and a stacked-sequence pitch CSV per signature that carries one."""
    from ragaemotion.audio_ingest import atomic_write_text, save_pitch_csv

    path = Path(path)
    atomic_write_text(path, signature_store_json(signatures))
    for sig in signatures:
        if sig.stacked is not None:
            save_pitch_csv(PitchSequence.from_values(sig.emotion.display, sig.stacked),
                           path.parent / stacked_csv_name(sig.emotion))
