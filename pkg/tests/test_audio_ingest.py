import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ragaemotion.audio_ingest import (
    AudioClip,
    ClipRecord,
    DatasetManifest,
    ManifestError,
    WavDecodeError,
    decode_wav,
    load_manifest,
    load_pitch_csv,
    manifest_to_json,
    parse_manifest,
    pitch_csv_text,
    save_pitch_csv,
    write_wav,
)
from ragaemotion.labels import EmotionLabel
from ragaemotion.pitch_tracker import PitchSequence, PitchSequenceError

PCM, FLOAT = 1, 3


class TestDecodeWav:
    def test_silence(self, wav_factory):
        clip = decode_wav(wav_factory("z.wav", PCM, 1, 8000, 16, np.zeros(80, "<i2").tobytes()))
        assert clip.sample_rate == 8000
        assert np.all(clip.samples == 0.0) and clip.samples.size == 80

    def test_16_bit_full_scale(self, wav_factory):
        clip = decode_wav(wav_factory("a.wav", PCM, 1, 8000, 16, np.array([16384, -32768], "<i2").tobytes()))
        assert clip.samples.tolist() == [0.5, -1.0]

    def test_8_bit_is_offset_binary(self, wav_factory):
        clip = decode_wav(wav_factory("b.wav", PCM, 1, 8000, 8, bytes([128, 192, 0])))
        assert clip.samples.tolist() == [0.0, 0.5, -1.0]

    def test_24_bit(self, wav_factory):
        values = [0x400000, -0x800000, 0]
        raw = b"".join(v.to_bytes(3, "little", signed=True) for v in values)
        clip = decode_wav(wav_factory("c.wav", PCM, 1, 44100, 24, raw))
        assert clip.samples.tolist() == [0.5, -1.0, 0.0]

    def test_32_bit_float(self, wav_factory):
        clip = decode_wav(wav_factory("d.wav", FLOAT, 1, 22050, 32, np.array([0.25, -0.75], "<f4").tobytes()))
        assert clip.samples.tolist() == [0.25, -0.75]

    def test_stereo_is_averaged(self, wav_factory):
        frames = np.array([[0.2, 0.6], [-0.5, 0.5]], "<f4")
        clip = decode_wav(wav_factory("s.wav", FLOAT, 2, 16000, 32, frames.tobytes()))
        assert clip.samples == pytest.approx([0.4, 0.0], abs=1e-7)

    def test_clip_id_is_file_stem(self, wav_factory):
        clip = decode_wav(wav_factory("Yaman-3.wav", PCM, 1, 8000, 16, np.ones(4, "<i2").tobytes()))
        assert clip.clip_id == "Yaman-3"

    def test_compressed_rejected(self, wav_factory):
        with pytest.raises(WavDecodeError):
            decode_wav(wav_factory("adpcm.wav", 2, 1, 8000, 4, bytes(64)))

    def test_zero_length_rejected(self, wav_factory):
        with pytest.raises(WavDecodeError, match="no audio"):
            decode_wav(wav_factory("empty.wav", PCM, 1, 8000, 16, b""))

    def test_missing_and_garbage(self, tmp_path):
        with pytest.raises(WavDecodeError, match="not found"):
            decode_wav(tmp_path / "nope.wav")
        junk = tmp_path / "junk.wav"
        junk.write_bytes(b"this is not audio at all")
        with pytest.raises(WavDecodeError):
            decode_wav(junk)

    def test_deterministic_and_round_trip(self, tmp_path, rng):
        x = rng.uniform(-0.9, 0.9, 1000)
        path = tmp_path / "r.wav"
        write_wav(path, x, 16000)
        a, b = decode_wav(path), decode_wav(path)
        assert np.array_equal(a.samples, b.samples)
        assert a.samples == pytest.approx(x, abs=0.5 / 32768 + 1e-12)


class TestAudioClip:
    def test_invariants(self):
        with pytest.raises(ValueError):
            AudioClip("x", 0, [0.0])
        with pytest.raises(ValueError):
            AudioClip("x", 8000, [])
        with pytest.raises(ValueError):
            AudioClip("x", 8000, [1.5])

    def test_duration(self):
        assert AudioClip("x", 8000, np.zeros(4000)).duration_s == 0.5


def manifest_doc(*records, **extra):
    return json.dumps({"records": list(records), **extra})


class TestManifest:
    def test_single_record(self):
        m = parse_manifest(manifest_doc({"clip_id": "a1", "raga": "Adana", "previous_emotions": ["Heroic"]}))
        (rec,) = m.records
        assert rec.previous_emotions == (EmotionLabel.HEROIC,)
        assert rec.present_emotion is None

    def test_empty_is_valid(self):
        assert len(parse_manifest(manifest_doc())) == 0

    def test_present_label(self):
        m = parse_manifest(manifest_doc(
            {"clip_id": "b1", "raga": "Bhairav", "previous_emotions": ["Devotion"], "present_emotion": "anxiety"}))
        assert m.records[0].present_emotion is EmotionLabel.ANXIETY

    def test_unknown_label_located(self):
        doc = manifest_doc({"clip_id": "a", "raga": "R", "previous_emotions": ["Joy"]})
        with pytest.raises(ManifestError, match=r"records\[0\]\.previous_emotions"):
            parse_manifest(doc)
        doc = manifest_doc({"clip_id": "a", "raga": "R", "present_emotion": "Bliss"})
        with pytest.raises(ManifestError, match=r"records\[0\]\.present_emotion"):
            parse_manifest(doc)

    def test_syntax_error_located(self):
        with pytest.raises(ManifestError, match="line 2"):
            parse_manifest('{"records": [\n  {"clip_id": }\n]}')

    def test_duplicates_rejected(self):
        rec = {"clip_id": "a", "raga": "R"}
        with pytest.raises(ManifestError, match="duplicate"):
            parse_manifest(manifest_doc(rec, rec))

    def test_field_types(self):
        with pytest.raises(ManifestError, match="raga"):
            parse_manifest(manifest_doc({"clip_id": "a"}))
        with pytest.raises(ManifestError, match="previous_emotions"):
            parse_manifest(manifest_doc({"clip_id": "a", "raga": "R", "previous_emotions": "Anger"}))
        with pytest.raises(ManifestError, match="source_path"):
            parse_manifest(manifest_doc({"clip_id": "a", "raga": "R", "source_path": 3}))
        with pytest.raises(ManifestError, match="records"):
            parse_manifest("[]")

    def test_relative_paths_resolve(self, tmp_path):
        path = tmp_path / "m.json"
        path.write_text(manifest_doc({"clip_id": "a", "raga": "R", "source_path": "clips/a.wav"}))
        assert load_manifest(path).records[0].source_path == str(tmp_path / "clips" / "a.wav")

    def test_json_round_trip(self):
        m = DatasetManifest([
            ClipRecord("a", "Yaman", (EmotionLabel.ROMANTIC, EmotionLabel.DEVOTION), EmotionLabel.SERENITY),
            ClipRecord("b", "Yaman", (EmotionLabel.ROMANTIC,), None, "x.wav"),
        ])
        back = parse_manifest(manifest_to_json(m))
        assert back.records == m.records


def contour(n, seed=0, hop=10.0):
    r = np.random.default_rng(seed)
    voiced = r.random(n) > 0.3
    f0 = np.where(voiced, r.uniform(60, 500, n), 0.0)
    return PitchSequence("c", np.arange(n) * hop, f0, voiced, hop)


class TestPitchCsv:
    def test_rows_and_header(self):
        text = pitch_csv_text(contour(3))
        lines = text.splitlines()
        assert lines[0] == "time_ms,f0_hz,voiced"
        assert len(lines) == 4
        assert "\r" not in text

    def test_thousand_frame_round_trip(self, tmp_path):
        seq = contour(1000, seed=3)
        path = tmp_path / "c.csv"
        save_pitch_csv(seq, path)
        back = load_pitch_csv(path, clip_id="c")
        assert np.allclose(back.time_ms, seq.time_ms, atol=1e-6)
        assert np.allclose(back.f0_hz, seq.f0_hz, atol=1e-6)
        assert np.array_equal(back.voiced, seq.voiced)
        assert back.hop_ms == seq.hop_ms and back.clip_id == "c"

    @given(st.integers(0, 300), st.integers(0, 2**31), st.sampled_from([5.0, 10.0, 12.5]))
    def test_round_trip_property(self, n, seed, hop):
        import tempfile
        from pathlib import Path

        seq = contour(n, seed, hop)
        with tempfile.TemporaryDirectory() as d:
            path = Path(d) / "p.csv"
            save_pitch_csv(seq, path)
            back = load_pitch_csv(path)
        assert len(back) == n
        assert np.allclose(back.f0_hz, seq.f0_hz, atol=1e-6)
        assert np.array_equal(back.voiced, seq.voiced)
        if n > 1:
            assert back.hop_ms == pytest.approx(hop, abs=1e-6)

    def test_backwards_timestamp(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("time_ms,f0_hz,voiced\n0,200,1\n20,210,1\n10,220,1\n")
        with pytest.raises(PitchSequenceError, match="non-monotonic timestamps"):
            load_pitch_csv(path)

    @pytest.mark.parametrize("body", [
        "time_ms,f0_hz,voiced\n0,200\n",
        "time_ms,f0_hz,voiced\n0,abc,1\n",
        "time_ms,f0_hz,voiced\n0,200,2\n",
        "t,f,v\n0,200,1\n",
        "",
    ])
    def test_malformed(self, tmp_path, body):
        path = tmp_path / "bad.csv"
        path.write_text(body)
        with pytest.raises(PitchSequenceError):
            load_pitch_csv(path)

    def test_comment_lines_skipped(self, tmp_path):
        path = tmp_path / "c.csv"
        path.write_text("# generated: now\ntime_ms,f0_hz,voiced\n0,200,1\n10,0.0,0\n")
        seq = load_pitch_csv(path)
        assert seq.voiced.tolist() == [True, False]

    def test_save_leaves_no_temp_files(self, tmp_path):
        save_pitch_csv(contour(5), tmp_path / "out" / "c.csv")
        assert [p.name for p in (tmp_path / "out").iterdir()] == ["c.csv"]
