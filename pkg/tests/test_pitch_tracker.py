import numpy as np
import pytest

from ragaemotion.audio_ingest import AudioClip
from ragaemotion.pitch_tracker import (
    ClipTooShortError,
    PitchConfig,
    PitchSequence,
    PitchSequenceError,
    extract_f0,
    frame_count,
    voiced_values,
)
from ragaemotion.synthetic import tone, tone_steps


def clip_of(x, sr=16000, name="t"):
    return AudioClip(name, sr, np.asarray(x))


class TestConfig:
    @pytest.mark.parametrize("kwargs", [
        {"f_min": 0},
        {"f_min": 300, "f_max": 200},
        {"hop_ms": 50, "frame_ms": 40},
        {"voicing_threshold": 1.0},
        {"hop_ms": 0},
        {"octave_cost": -1},
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            PitchConfig(**kwargs)

    def test_from_dict(self):
        assert PitchConfig.from_dict({"f_min": 80}).f_min == 80


class TestSequence:
    def test_voiced_values(self):
        seq = PitchSequence.from_frames("x", [(0, 200, True), (10, 0, False), (20, 210, True)])
        assert voiced_values(seq).tolist() == [200, 210]
        assert voiced_values(PitchSequence.from_frames("x", [(0, 0, False)])).size == 0

    def test_fully_voiced(self):
        seq = PitchSequence.from_values("x", [100.0] * 7)
        assert len(voiced_values(seq)) == 7
        assert seq.voiced_fraction == 1.0
        assert seq.voiced_duration_s == pytest.approx(0.07)

    def test_invariants(self):
        with pytest.raises(PitchSequenceError, match="non-monotonic"):
            PitchSequence.from_frames("x", [(10, 1, True), (0, 1, True)])
        with pytest.raises(PitchSequenceError, match="grid"):
            PitchSequence.from_frames("x", [(0, 1, True), (10, 1, True), (25, 1, True)])
        with pytest.raises(PitchSequenceError):
            PitchSequence.from_frames("x", [(0, 0, True)])
        with pytest.raises(PitchSequenceError):
            PitchSequence.from_frames("x", [(0, 150, False)])

    def test_read_only(self):
        seq = PitchSequence.from_values("x", [100.0, 101.0])
        with pytest.raises(ValueError):
            seq.f0_hz[0] = 5.0


class TestFrameCount:
    @pytest.mark.parametrize("n,sr,expected", [(16000, 16000, 97), (640, 16000, 1), (639, 16000, 0), (8800, 8000, 107)])
    def test_formula(self, n, sr, expected):
        assert frame_count(n, sr, PitchConfig()) == expected

    @pytest.mark.parametrize("seconds", [0.04, 0.1234, 1.0, 2.5])
    def test_extract_matches_formula(self, seconds):
        x = tone(200, seconds)
        seq = extract_f0(clip_of(x))
        dur_ms = x.size / 16.0
        assert len(seq) == int(np.floor((dur_ms - 40) / 10 + 1e-9)) + 1
        assert seq.time_ms[0] == 0 and np.all(np.diff(seq.time_ms) == 10)

    def test_too_short(self):
        with pytest.raises(ClipTooShortError):
            extract_f0(clip_of(tone(200, 0.03)))


class TestExtraction:
    @pytest.mark.parametrize("sr", [8000, 16000, 22050, 44100, 48000])
    def test_pure_tone(self, sr):
        seq = extract_f0(clip_of(tone(220, 2.0, sr), sr))
        assert seq.voiced.all()
        assert np.median(seq.f0_hz) == pytest.approx(220, rel=0.01)

    def test_silence(self):
        seq = extract_f0(clip_of(np.zeros(16000)))
        assert not seq.voiced.any() and np.all(seq.f0_hz == 0)

    def test_white_noise_is_mostly_unvoiced(self, rng):
        seq = extract_f0(clip_of(rng.uniform(-0.5, 0.5, 16000)))
        assert seq.voiced_fraction < 0.1

    def test_step_plateaus(self):
        seq = extract_f0(clip_of(tone_steps([150, 300], 1.0)))
        t, f = seq.time_ms, seq.f0_hz
        assert np.median(f[t < 900]) == pytest.approx(150, rel=0.01)
        assert np.median(f[t > 1000]) == pytest.approx(300, rel=0.01)

    def test_voiced_estimates_stay_in_range(self, rng):
        cfg = PitchConfig(f_min=100, f_max=400)
        x = 0.4 * np.sin(2 * np.pi * 180 * np.arange(16000) / 16000) + rng.normal(0, 0.05, 16000)
        seq = extract_f0(clip_of(np.clip(x, -1, 1)), cfg)
        f = voiced_values(seq)
        assert f.size > 0 and f.min() >= 100 and f.max() <= 400

    def test_dc_offset(self):
        base = extract_f0(clip_of(tone(220, 1.0, amplitude=0.5)))
        shifted = extract_f0(clip_of(tone(220, 1.0, amplitude=0.5) + 0.1))
        assert np.array_equal(base.voiced, shifted.voiced)
        assert np.all(np.abs(shifted.f0_hz / base.f0_hz - 1) < 0.005)

    def test_amplitude(self):
        a = extract_f0(clip_of(tone_steps([130, 260, 195], 0.5, amplitude=0.8)))
        b = extract_f0(clip_of(tone_steps([130, 260, 195], 0.5, amplitude=0.4)))
        assert np.array_equal(a.voiced, b.voiced)
        assert np.allclose(a.f0_hz, b.f0_hz, rtol=1e-9)

    def test_harmonic_rich_tone_keeps_fundamental(self):
        t = np.arange(16000) / 16000
        x = sum(0.5 / k * np.sin(2 * np.pi * 165 * k * t) for k in range(1, 6)) * 0.5
        seq = extract_f0(clip_of(x))
        assert np.median(voiced_values(seq)) == pytest.approx(165, rel=0.01)

    def test_deterministic(self, rng):
        x = clip_of(np.clip(tone(240, 0.5) + rng.normal(0, 0.1, 8000), -1, 1))
        a, b = extract_f0(x), extract_f0(x)
        assert np.array_equal(a.f0_hz, b.f0_hz)
