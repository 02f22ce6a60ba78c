"""Regenerate the bundled fixture files under src/ragaemotion/fixtures/.

Run from the repository root:  python tools/make_fixtures.py
"""

import json
import math
from pathlib import Path

from ragaemotion.audio_ingest import save_pitch_csv
from ragaemotion.pitch_tracker import PitchSequence
from ragaemotion.synthetic import ar1_sequence

OUT = Path(__file__).resolve().parents[1] / "src" / "ragaemotion" / "fixtures"

EMOTIONS = ["Anger", "Serenity", "Romantic", "Anxiety", "Devotion", "Heroic", "Sorrow"]

TEMPO = {
    "Anger": 2.0909, "Serenity": 1.824625, "Romantic": 1.48032, "Anxiety": 1.22847,
    "Devotion": 1.209, "Heroic": 1.119, "Sorrow": 0.596,
}

# variance, skewness, kurtosis, mssd
DESCRIPTORS = {
    "Anger": (7934.28, -1.11, 1.06, 610.91),
    "Serenity": (7197.74, -0.48, -0.64, 418.79),
    "Romantic": (4670.74, 0.58, 0.26, 116.10),
    "Anxiety": (3793.09, -0.09, 0.48, 86.18),
    "Devotion": (3680.85, -0.26, 0.64, 65.29),
    "Heroic": (2561.77, -0.07, 0.53, 53.81),
    "Sorrow": (495.69, -3.62, 16.74, 16.22),
}

N_CLIPS = {"Romantic": 5, "Devotion": 6}

PREVIOUS = {
    "Adana": ["Heroic"],
    "Bhairav": ["Anger", "Serenity", "Devotion", "Sorrow"],
    "Chayanat": ["Romantic"],
    "Darbari Kannada": ["Serenity"],
    "Hindol": ["Heroic", "Anger"],
    "Jaijayanti": ["Romantic"],
    "Jogiya": ["Sorrow", "Romantic", "Devotion"],
    "Kedar": ["Serenity"],
    "Mia-ki-Malhar": ["Sorrow"],
    "Mia-ki-Todi": ["Devotion", "Romantic", "Sorrow"],
    "Shree": ["Serenity"],
}

# four segments per raga; None marks a segment without listener consensus
PRESENT = {
    "Adana": ["Anger", "Devotion", "Devotion", "Romantic"],
    "Mia-ki-Malhar": ["Sorrow", "Sorrow", "Anxiety", "Heroic"],
    "Mia-ki-Todi": ["Heroic", "Devotion", "Devotion", "Devotion"],
    "Chayanat": ["Devotion", "Devotion", None, None],
    "Bhairav": ["Anxiety", "Anxiety", "Anxiety", "Anxiety"],
    "Hindol": ["Anger", "Devotion", None, None],
    "Jaijayanti": ["Heroic", "Romantic", "Romantic", "Romantic"],
    "Jogiya": ["Heroic", "Heroic", "Anxiety", None],
    "Kedar": ["Serenity", "Serenity", "Serenity", "Romantic"],
    "Darbari Kannada": ["Anxiety", "Heroic", "Anxiety", None],
    "Shree": ["Devotion", "Heroic", "Anxiety", "Heroic"],
}

LEVENE_PAIRS = [
    {"pair": ["Romantic", "Devotion"], "p_value": 0.543},
    {"pair": ["Romantic", "Anxiety"], "p_value": 0.102},
    {"pair": ["Devotion", "Anxiety"], "p_value": 0.272},
]

SITAR = [
    {"raga": "Hindol", "emotion": "Anger", "sd": 107.92, "mssd": 708.99},
    {"raga": "Jaijayanti", "emotion": "Romantic", "sd": 112.90, "mssd": 585.80},
    {"raga": "Chayanat", "emotion": "Devotion", "sd": 110.93, "mssd": 567.77},
    {"raga": "Bhairav", "emotion": "Anxiety", "sd": 111.43, "mssd": 382.39},
    {"raga": "Mia-ki-Malhar", "emotion": "Sorrow", "sd": 102.56, "mssd": 399.93},
]

OVERALL = {
    "previous": {"variance": 4.619, "iqr": 4.000, "skewness": 0.11, "kurtosis": -1.52},
    "present": {"variance": 1.800, "iqr": 1.000, "skewness": -0.49, "kurtosis": 0.11},
}

# mean, sd, iqr of present ranks per previous emotion
PER_EMOTION = {
    "Anger": {"mean_now": 3.429, "sd_now": 1.397, "iqr_now": 2.0},
    "Serenity": {"mean_now": 4.000, "sd_now": 1.363, "iqr_now": 2.0},
    "Romantic": {"mean_now": 4.769, "sd_now": 1.166, "iqr_now": 2.5},
    "Devotion": {"mean_now": 4.818, "sd_now": 0.874, "iqr_now": 2.0},
    "Heroic": {"mean_now": 3.571, "sd_now": 1.618, "iqr_now": 3.0},
    "Sorrow": {"mean_now": 5.133, "sd_now": 1.125, "iqr_now": 2.0},
}

ANGER_RANKS = {"emotion": "Anger", "previous": [1] * 7, "present": [4, 4, 4, 4, 5, 1, 2]}

DIFFERENCES = {
    "Anger": {"mean_diff": 2.429, "sd_diff": 1.397},
    "Serenity": {"mean_diff": 2.000, "sd_diff": 1.363},
    "Romantic": {"mean_diff": 1.769, "sd_diff": 1.166},
    "Devotion": {"mean_diff": -0.182, "sd_diff": 0.874},
    "Heroic": {"mean_diff": -2.429, "sd_diff": 1.618},
    "Sorrow": {"mean_diff": -1.867, "sd_diff": 1.125},
}

TRACKING_PREVIOUS = {
    "Anger": (68.20, 382.55), "Serenity": (71.27, 128.01), "Romantic": (54.26, 88.48),
    "Devotion": (56.55, 73.04), "Heroic": (72.87, 443.20), "Sorrow": (52.36, 59.04),
}
TRACKING_NOW = {
    "Anger": (89.07, 610.91), "Serenity": (84.84, 421.86), "Romantic": (68.34, 115.27),
    "Devotion": (60.77, 65.27), "Heroic": (50.68, 55.06),
}

STACK_FRAMES = 1500


def dump(name, obj):
    (OUT / name).write_text(json.dumps(obj, indent=2) + "\n", encoding="utf-8")


def spread_store(table):
    return [
        {"emotion": e, "rank": EMOTIONS.index(e) + 1, "variance": None, "sd": sd, "mssd": m,
         "skewness": None, "kurtosis": None, "tempo": None, "n_clips": None}
        for e, (sd, m) in table.items()
    ]


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    dump("published_tempo.json", TEMPO)
    dump("published_descriptors.json", {
        e: {"variance": v, "skewness": s, "kurtosis": k, "mssd": m} for e, (v, s, k, m) in DESCRIPTORS.items()
    })
    dump("published_levene_pairs.json", LEVENE_PAIRS)
    dump("published_sitar.json", SITAR)
    dump("published_overall.json", OVERALL)
    dump("published_per_emotion.json", PER_EMOTION)
    dump("published_anger_ranks.json", ANGER_RANKS)
    dump("published_differences.json", DIFFERENCES)
    dump("published_tracking_previous.json", spread_store(TRACKING_PREVIOUS))
    dump("published_tracking_now.json", spread_store(TRACKING_NOW))

    records = []
    for raga in PREVIOUS:
        for i, label in enumerate(PRESENT[raga], start=1):
            records.append({
                "clip_id": f"{raga}-{i}",
                "raga": raga,
                "previous_emotions": PREVIOUS[raga],
                "present_emotion": label,
                "source_path": None,
            })
    dump("manifest_raga_labels.json", {"records": records})

    sig_dir = OUT / "published_signatures"
    sig_dir.mkdir(exist_ok=True)
    store = []
    for i, e in enumerate(EMOTIONS):
        v, s, k, m = DESCRIPTORS[e]
        store.append({
            "emotion": e, "rank": i + 1, "variance": v, "sd": math.sqrt(v), "mssd": m,
            "skewness": s, "kurtosis": k, "tempo": TEMPO[e], "n_clips": N_CLIPS.get(e),
        })
        values = ar1_sequence(v, m, STACK_FRAMES, mean=400.0, seed=i + 1)
        save_pitch_csv(PitchSequence.from_values(e, values), sig_dir / f"stacked_{e}.csv")
    (sig_dir / "signatures.json").write_text(json.dumps(store, indent=2) + "\n", encoding="utf-8")
    dump("manifest_published_signatures.json", {"records": [], "signature_source": "published_signatures/signatures.json"})


if __name__ == "__main__":
    main()
