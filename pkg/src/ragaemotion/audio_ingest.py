"""Reading and writing clips, manifests and pitch contours."""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np
from scipy.io import wavfile

from ragaemotion.labels import EmotionLabel, UnknownEmotionError, parse_emotion
from ragaemotion.pitch_tracker import PitchSequence, PitchSequenceError

PITCH_CSV_HEADER = ("time_ms", "f0_hz", "voiced")


class WavDecodeError(ValueError):
    pass


class ManifestError(ValueError):
    pass


@dataclass(frozen=True)
class AudioClip:
    clip_id: str
    sample_rate: int
    samples: np.ndarray
    channel_count_collapsed: bool = True

    def __post_init__(self) -> None:
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be positive")
        arr = np.asarray(self.samples, dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("samples must be a non-empty 1-D sequence")
        if np.any(np.abs(arr) > 1.0):
            raise ValueError("samples must lie within [-1, 1]")
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)

    @property
    def duration_s(self) -> float:
        return self.samples.size / self.sample_rate


@dataclass(frozen=True)
class ClipRecord:
    clip_id: str
    raga: str
    # unique labels in manifest order; order only affects row order in rank tables
    previous_emotions: tuple = ()
    present_emotion: Optional[EmotionLabel] = None
    source_path: Optional[str] = None


@dataclass
class DatasetManifest:
    records: list = field(default_factory=list)
    signature_source: Optional[str] = None

    def __post_init__(self) -> None:
        seen = set()
        for rec in self.records:
            if rec.clip_id in seen:
                raise ManifestError(f"duplicate clip_id {rec.clip_id!r}")
            seen.add(rec.clip_id)

    def __len__(self) -> int:
        return len(self.records)


# --------------------------------------------------------------------------
# WAV
# --------------------------------------------------------------------------


def _normalize(data: np.ndarray) -> np.ndarray:
    kind = data.dtype
    if kind == np.uint8:
        return (data.astype(float) - 128.0) / 128.0
    if kind == np.int16:
        return data.astype(float) / 32768.0
    if kind == np.int32:
        # scipy left-justifies 24-bit samples into int32, so one divisor serves both
        return data.astype(float) / 2147483648.0
    if kind == np.float32 or kind == np.float64:
        return np.clip(data.astype(float), -1.0, 1.0)
    raise WavDecodeError(f"unsupported sample type {kind}")


def decode_wav(path: str | os.PathLike) -> AudioClip:
    """Decode a PCM WAV file into a mono clip with samples in [-1, 1]."""
    path = Path(path)
    try:
        with warnings.catch_warnings():
            # unknown chunks (LIST, etc.) are harmless
            warnings.simplefilter("ignore", wavfile.WavFileWarning)
            sr, data = wavfile.read(path)
    except FileNotFoundError:
        raise WavDecodeError(f"cannot read {path}: file not found") from None
    except (ValueError, OSError, EOFError) as exc:
        raise WavDecodeError(f"cannot decode {path}: {exc}") from exc
    if data.size == 0:
        raise WavDecodeError(f"{path} contains no audio")
    samples = _normalize(data)
    if samples.ndim == 2:
        samples = samples.mean(axis=1)
    return AudioClip(clip_id=path.stem, sample_rate=int(sr), samples=samples)


def write_wav(path: str | os.PathLike, samples, sample_rate: int) -> None:
    """Write mono float samples as 16-bit PCM."""
    arr = np.clip(np.asarray(samples, dtype=float), -1.0, 1.0)
    # same full-scale convention as decoding, so a round trip is off by at most half a step
    pcm = np.clip(np.round(arr * 32768.0), -32768, 32767).astype(np.int16)
    wavfile.write(Path(path), int(sample_rate), pcm)


# --------------------------------------------------------------------------
# manifest
# --------------------------------------------------------------------------


def _record_from_json(obj, index: int) -> ClipRecord:
    where = f"records[{index}]"
    if not isinstance(obj, dict):
        raise ManifestError(f"{where}: expected an object")
    for key in ("clip_id", "raga"):
        if not isinstance(obj.get(key), str) or not obj[key]:
            raise ManifestError(f"{where}.{key}: required non-empty string")
    prev_raw = obj.get("previous_emotions", [])
    if not isinstance(prev_raw, list):
        raise ManifestError(f"{where}.previous_emotions: expected an array of strings")
    try:
        previous = tuple(dict.fromkeys(parse_emotion(p) for p in prev_raw))
    except UnknownEmotionError as exc:
        raise ManifestError(f"{where}.previous_emotions: {exc}") from None
    present_raw = obj.get("present_emotion")
    try:
        present = None if present_raw is None else parse_emotion(present_raw)
    except UnknownEmotionError as exc:
        raise ManifestError(f"{where}.present_emotion: {exc}") from None
    source = obj.get("source_path")
    if source is not None and not isinstance(source, str):
        raise ManifestError(f"{where}.source_path: expected a string or null")
    return ClipRecord(obj["clip_id"], obj["raga"], previous, present, source)


def parse_manifest(text: str, base_dir: Optional[Path] = None) -> DatasetManifest:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ManifestError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict) or not isinstance(doc.get("records"), list):
        raise ManifestError("top level must be an object with a 'records' array")
    records = [_record_from_json(obj, i) for i, obj in enumerate(doc["records"])]
    if base_dir is not None:
        records = [
            r if r.source_path is None or Path(r.source_path).is_absolute()
            else ClipRecord(r.clip_id, r.raga, r.previous_emotions, r.present_emotion,
                            str(base_dir / r.source_path))
            for r in records
        ]
    sig = doc.get("signature_source")
    if sig is not None and base_dir is not None and not Path(sig).is_absolute():
        sig = str(base_dir / sig)
    return DatasetManifest(records, sig)


def load_manifest(path: str | os.PathLike) -> DatasetManifest:
    """Load a JSON manifest; relative paths resolve against its directory."""
    path = Path(path)
    return parse_manifest(path.read_text(encoding="utf-8"), base_dir=path.parent)


def manifest_to_json(manifest: DatasetManifest) -> str:
    doc = {
        "records": [
            {
                "clip_id": r.clip_id,
                "raga": r.raga,
                "previous_emotions": [e.display for e in r.previous_emotions],
                "present_emotion": None if r.present_emotion is None else r.present_emotion.display,
                "source_path": r.source_path,
            }
            for r in manifest.records
        ]
    }
    if manifest.signature_source is not None:
        doc["signature_source"] = manifest.signature_source
    return json.dumps(doc, indent=2) + "\n"


# --------------------------------------------------------------------------
# pitch CSV
# --------------------------------------------------------------------------


def atomic_write_text(path: str | os.PathLike, text: str) -> None:
    """Write through a temporary sibling file, then rename over the target."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def pitch_csv_text(seq: PitchSequence) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(PITCH_CSV_HEADER)
    for t, f, v in seq.frames():
        writer.writerow((f"{t:.6f}", f"{f:.6f}" if v else "0.0", int(v)))
    return buf.getvalue()


def save_pitch_csv(seq: PitchSequence, path: str | os.PathLike) -> None:
    atomic_write_text(path, pitch_csv_text(seq))


def load_pitch_csv(path: str | os.PathLike, clip_id: Optional[str] = None) -> PitchSequence:
    path = Path(path)
    with open(path, encoding="utf-8", newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    reader = csv.reader(lines)
    try:
        header = next(reader)
    except StopIteration:
        raise PitchSequenceError(f"{path}: empty file") from None
    if tuple(h.strip() for h in header) != PITCH_CSV_HEADER:
        raise PitchSequenceError(f"{path}: expected header {','.join(PITCH_CSV_HEADER)}")
    times, f0s, voiced = [], [], []
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 3:
            raise PitchSequenceError(f"{path}:{lineno}: malformed row {row!r}")
        try:
            t, f, v = float(row[0]), float(row[1]), int(row[2])
        except ValueError:
            raise PitchSequenceError(f"{path}:{lineno}: malformed row {row!r}") from None
        if v not in (0, 1):
            raise PitchSequenceError(f"{path}:{lineno}: voiced must be 0 or 1")
        if times and t <= times[-1]:
            raise PitchSequenceError(f"{path}:{lineno}: non-monotonic timestamps")
        times.append(t)
        f0s.append(f if v else 0.0)
        voiced.append(bool(v))
    hop = times[1] - times[0] if len(times) > 1 else 10.0
    return PitchSequence(
        clip_id or path.stem,
        np.array(times),
        np.array(f0s),
        np.array(voiced, dtype=bool),
        round(hop, 6),
    )
